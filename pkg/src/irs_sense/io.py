"""CSV tables with ``#`` metadata lines, and run manifests."""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_csv(path, columns: dict, meta: dict | None = None) -> Path:
    """Write equal-length columns under one header row, preceded by ``# key: value`` lines."""
    path = Path(path)
    names = list(columns)
    cols = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    n_rows = {c.shape[0] for c in cols}
    if len(n_rows) != 1:
        raise ValueError(f"columns have different lengths: {sorted(n_rows)}")
    with path.open("w", newline="") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*cols):
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> dict:
    """Inverse of :func:`write_csv`; returns ``{"meta": {...}, column: ndarray, ...}``."""
    meta, lines = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line:
            lines.append(line)
    rows = list(csv.reader(lines))
    header, body = rows[0], rows[1:]
    out = {"meta": meta}
    for i, name in enumerate(header):
        out[name] = np.array([float(r[i]) for r in body])
    return out


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, manifest: dict, outputs) -> Path:
    manifest = dict(manifest)
    manifest["outputs"] = {Path(p).name: sha256(p) for p in outputs}
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return path
