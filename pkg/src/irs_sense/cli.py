"""``irs-sense`` command line: figure tables, closed forms, validation suites."""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .analytic import analytic_pfa, pmd_upper_bound, threshold_for_pfa
from .channel import link_gains
from .errors import InvalidInputError
from .figures import BUILDERS, DEFAULTS, FIGURES
from .io import write_csv, write_manifest
from .mc import ScenarioConfig
from .validate import SUITES

OUT_ENV = "IRS_SENSE_OUT"

# flag / config-file key -> ScenarioConfig field
SCALAR_KEYS = {
    "L": "n_elements", "M": "n_blocks", "nbar": "nbar", "alpha": "alpha",
    "pt_dbm": "pt_dbm", "noise_dbm": "noise_dbm", "trials": "channel_realizations",
    "frames": "frames_per_realization", "seed": "master_seed", "azimuth": "pu_azimuth",
    "distance": "pu_distance", "sensing_range": "sensing_range", "irs_height": "irs_height",
    "ref_loss_db": "ref_loss_db", "exp_is": "exp_is", "exp_ps": "exp_ps", "exp_pi": "exp_pi",
    "sampler": "energy_sampler",
}
INT_FIELDS = {"n_elements", "n_blocks", "nbar", "channel_realizations", "frames_per_realization",
              "master_seed"}
LIST_KEYS = ("L", "M", "nbar", "alpha", "lam", "pfa", "bins", "calibration")


def _parse_value(text):
    text = str(text).strip()
    if "," in text:
        return [_parse_value(t) for t in text.split(",") if t.strip()]
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def load_config_file(path) -> dict:
    """Flat ``key = value`` pairs from every section of an INI file."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if not parser.read(path):
        raise InvalidInputError(f"cannot read config file {path}")
    out = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            out[key.replace("-", "_")] = _parse_value(value)
    return out


def _as_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def resolve_figure(fig: str, overrides: dict):
    """Apply overrides to the figure defaults; returns (config, list parameters)."""
    if fig not in FIGURES:
        raise InvalidInputError(f"unknown figure {fig!r}; choose from {', '.join(FIGURES)}")
    cfg_kw = dict(DEFAULTS[fig]["cfg"])
    lists = {k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in DEFAULTS[fig]["lists"].items()}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in lists:
            lists[key] = _as_list(value) if isinstance(lists[key], list) else value
            continue
        if key not in SCALAR_KEYS:
            if key in LIST_KEYS:
                raise InvalidInputError(f"--{key} does not apply to figure {fig}")
            raise InvalidInputError(f"unknown parameter {key!r}")
        vals = _as_list(value)
        if len(vals) != 1:
            raise InvalidInputError(f"figure {fig} takes a single value for {key}")
        field = SCALAR_KEYS[key]
        v = vals[0]
        if field == "pu_azimuth" and str(v).lower() == "random":
            v = None
        elif field in INT_FIELDS:
            v = int(v)
        elif field != "energy_sampler" and v is not None:
            v = float(v)
        cfg_kw[field] = v
    cfg = ScenarioConfig(**cfg_kw)
    return cfg, lists


def _config_ini(cfg: ScenarioConfig, lists: dict) -> str:
    inv = {v: k for k, v in SCALAR_KEYS.items()}
    lines = ["[scenario]"]
    for field, value in cfg.to_dict().items():
        if field in inv:
            if value is None:
                value = "random" if field == "pu_azimuth" else None
            if value is not None:
                lines.append(f"{inv[field]} = {value!r}" if isinstance(value, float) else f"{inv[field]} = {value}")
    lines.append("")
    lines.append("[figure]")
    for key, value in lists.items():
        lines.append(f"{key} = {','.join(str(v) for v in _as_list(value))}")
    return "\n".join(lines) + "\n"


def cmd_figure(args) -> int:
    overrides = load_config_file(args.config) if args.config else {}
    for key in ("L", "M", "nbar", "alpha", "pt_dbm", "noise_dbm", "trials", "frames", "seed",
                "azimuth", "sampler", "bins", "calibration"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = _parse_value(value)
    cfg, lists = resolve_figure(args.id, overrides)
    out_dir = Path(args.out or os.environ.get(OUT_ENV, "irs-sense-out")) / f"fig{args.id}"
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"figure {args.id}: resolved configuration", file=sys.stderr)
    for key, value in {**cfg.to_dict(), **lists}.items():
        print(f"  {key} = {value}", file=sys.stderr)

    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    tables = BUILDERS[args.id](cfg, workers=args.workers, **lists)
    elapsed = time.perf_counter() - t0

    meta_common = {
        "tool": f"irs-sense {__version__}",
        "figure": args.id,
        "config": json.dumps(cfg.to_dict(), sort_keys=True),
        "parameters": json.dumps(lists, sort_keys=True),
    }
    outputs = []
    for stem, cols in tables.items():
        outputs.append(write_csv(out_dir / f"{stem}.csv", cols, {**meta_common, "series": stem}))
    ini = out_dir / "config.ini"
    ini.write_text(_config_ini(cfg, lists))
    outputs.append(ini)
    manifest = {
        "tool": "irs-sense",
        "version": __version__,
        "figure": args.id,
        "argv": sys.argv[1:],
        "overrides": {k: v for k, v in overrides.items()},
        "config": cfg.to_dict(),
        "parameters": lists,
        "master_seed": cfg.master_seed,
        "workers": args.workers,
        "backend": kernels.BACKEND,
        "started_utc": started.isoformat(),
        "elapsed_s": round(elapsed, 3),
    }
    write_manifest(out_dir, manifest, outputs)
    for p in outputs:
        print(p)
    return 0


def _analytic_params(args):
    cfg = ScenarioConfig(n_elements=args.L, n_blocks=args.M, nbar=args.nbar, alpha=args.alpha,
                         pt_dbm=args.pt_dbm, noise_dbm=args.noise_dbm, pu_azimuth=0.0)
    beta_ps, beta_pi, beta_is = link_gains(cfg.geometry(0.0), cfg.pathloss)
    h2 = beta_ps if args.h_ps_abs2 is None else args.h_ps_abs2
    return cfg.analytic_params(
        h2,
        beta_pi if args.beta_pi is None else args.beta_pi,
        beta_is if args.beta_is is None else args.beta_is,
    )


def cmd_analytic(args) -> int:
    params = _analytic_params(args)
    if args.expr == "threshold":
        if args.pfa is None:
            raise InvalidInputError("threshold needs --pfa")
        for p in _as_list(_parse_value(args.pfa)):
            print(f"{threshold_for_pfa(float(p), params):.12g}")
        return 0
    if args.lam is None:
        raise InvalidInputError(f"{args.expr} needs --lambda")
    lam = np.array(_as_list(_parse_value(args.lam)), dtype=float)
    fn = analytic_pfa if args.expr == "pfa" else pmd_upper_bound
    values = np.atleast_1d(fn(lam, params))
    if lam.size == 1:
        print(f"{values[0]:.12g}")
    else:
        for l, v in zip(lam, values):
            print(f"{l:.12g},{v:.12g}")
    return 0


def cmd_validate(args) -> int:
    fn = SUITES[args.suite]
    kw = {"seed": args.seed}
    if args.suite == "lemma1":
        kw["n_elements"] = args.L
        if args.budget:
            kw["draws"] = args.budget
    else:
        if args.budget:
            kw["realizations"] = args.budget
        kw["frames"] = args.frames
        if args.suite in ("pmd-bound", "means"):
            kw["n_elements"] = args.L
    report = fn(**kw)
    print(report.render())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irs-sense", description=__doc__)
    p.add_argument("--version", action="version", version=f"irs-sense {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("figure", help="write the CSV tables behind one figure")
    f.add_argument("id", choices=FIGURES)
    f.add_argument("--L", help="IRS elements (comma list for figure 2a)")
    f.add_argument("--M", help="blocks per frame (comma list for figure 4a)")
    f.add_argument("--nbar", help="samples per block (comma list for figure 4b)")
    f.add_argument("--alpha", help="scaling factor (comma list for figure 4b)")
    f.add_argument("--pt-dbm", dest="pt_dbm")
    f.add_argument("--noise-dbm", dest="noise_dbm")
    f.add_argument("--trials", help="channel realizations")
    f.add_argument("--frames", help="frames per channel realization")
    f.add_argument("--seed")
    f.add_argument("--azimuth", help="fixed PU azimuth in radians, or 'random'")
    f.add_argument("--sampler", choices=("chi2", "samples"))
    f.add_argument("--bins", help="histogram bins (figure 2b)")
    f.add_argument("--calibration", choices=("analytic", "empirical"), help="threshold rule (figure 4)")
    f.add_argument("--config", help="INI file of key = value settings")
    f.add_argument("--workers", type=int, default=1)
    f.add_argument("--out", help=f"output root (default ${OUT_ENV} or ./irs-sense-out)")
    f.set_defaults(func=cmd_figure)

    a = sub.add_parser("analytic", help="evaluate a closed form")
    a.add_argument("expr", choices=("pfa", "threshold", "pmd-bound"))
    a.add_argument("--lambda", dest="lam", help="threshold(s), comma separated")
    a.add_argument("--pfa", help="target false-alarm probability(ies)")
    a.add_argument("--M", type=int, default=100)
    a.add_argument("--nbar", type=int, default=100)
    a.add_argument("--alpha", type=float, default=0.0)
    a.add_argument("--pt-dbm", dest="pt_dbm", type=float, default=6.0)
    a.add_argument("--noise-dbm", dest="noise_dbm", type=float, default=-70.0)
    a.add_argument("--L", type=int, default=1024)
    a.add_argument("--beta-pi", dest="beta_pi", type=float)
    a.add_argument("--beta-is", dest="beta_is", type=float)
    a.add_argument("--h-ps-abs2", dest="h_ps_abs2", type=float,
                   help="|h_PS|^2 in linear units (default: mean PU-SU gain at R)")
    a.set_defaults(func=cmd_analytic)

    v = sub.add_parser("validate", help="Monte Carlo check of a closed form")
    v.add_argument("suite", choices=tuple(SUITES))
    v.add_argument("--budget", type=int, help="channel realizations (gain-law draws for the lemma1 suite)")
    v.add_argument("--frames", type=int, default=100)
    v.add_argument("--L", type=int, default=1024)
    v.add_argument("--seed", type=int, default=2022)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, ValueError) as exc:
        print(f"irs-sense: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
