"""Hot inner loops of the Monte Carlo engine.

Every kernel has a pure-numpy implementation (``*_np``) and a numba one
(``*_nb``). The public name dispatches on :data:`irs_sense._backend.USE_NUMBA`.
The two paths agree to floating-point round-off, not bit-for-bit.
"""
import numpy as np

from ._backend import USE_NUMBA, njit

__all__ = [
    "block_energies",
    "effective_channels",
    "exceed_counts",
    "wed_statistics",
    "BACKEND",
]


# ---------------------------------------------------------------------------
# Reduction of raw samples to noise-normalised block powers.


def block_energies_np(y, n_blocks, nbar, noise_power):
    y = np.asarray(y)
    lead = y.shape[:-1]
    blocks = y.reshape(lead + (n_blocks, nbar))
    power = blocks.real * blocks.real + blocks.imag * blocks.imag
    return power.sum(axis=-1) / (nbar * noise_power)


@njit(cache=True)
def _block_energies_nb(y2d, n_blocks, nbar, noise_power):
    n_rows = y2d.shape[0]
    out = np.empty((n_rows, n_blocks))
    scale = 1.0 / (nbar * noise_power)
    for r in range(n_rows):
        for m in range(n_blocks):
            acc = 0.0
            base = m * nbar
            for i in range(nbar):
                v = y2d[r, base + i]
                acc += v.real * v.real + v.imag * v.imag
            out[r, m] = acc * scale
    return out


def block_energies_nb(y, n_blocks, nbar, noise_power):
    y = np.asarray(y, dtype=np.complex128)
    lead = y.shape[:-1]
    flat = np.ascontiguousarray(y.reshape(-1, y.shape[-1]))
    out = _block_energies_nb(flat, n_blocks, nbar, float(noise_power))
    return out.reshape(lead + (n_blocks,))


# ---------------------------------------------------------------------------
# Weighted energy detection statistic, one value per frame (row).


def wed_statistics_np(T, alpha):
    T = np.asarray(T, dtype=float)
    excess = np.maximum(T - alpha, 0.0)
    den = excess.sum(axis=-1)
    num = (excess * T).sum(axis=-1)
    safe = np.where(den > 0.0, den, 1.0)
    return np.where(den > 0.0, num / safe, 0.0)


@njit(cache=True)
def _wed_statistics_nb(T2d, alpha):
    n_rows, n_blocks = T2d.shape
    out = np.empty(n_rows)
    for r in range(n_rows):
        num = 0.0
        den = 0.0
        for m in range(n_blocks):
            t = T2d[r, m]
            e = t - alpha
            if e > 0.0:
                num += e * t
                den += e
        out[r] = num / den if den > 0.0 else 0.0
    return out


def wed_statistics_nb(T, alpha):
    T = np.asarray(T, dtype=float)
    lead = T.shape[:-1]
    flat = np.ascontiguousarray(T.reshape(-1, T.shape[-1]))
    return _wed_statistics_nb(flat, float(alpha)).reshape(lead)


# ---------------------------------------------------------------------------
# g_m = h_PS + sum_l c_l exp(j theta_lm), with c_l = conj(h_IS,l) h_PI,l.


def effective_channels_np(h_ps, coupling, phases):
    coupling = np.asarray(coupling, dtype=np.complex128)
    phases = np.asarray(phases, dtype=float)
    if coupling.size == 0:
        return np.full(phases.shape[1], complex(h_ps), dtype=np.complex128)
    return complex(h_ps) + coupling @ np.exp(1j * phases)


@njit(cache=True)
def _effective_channels_nb(h_ps, coupling, phases):
    n_elem, n_blocks = phases.shape
    re = np.full(n_blocks, h_ps.real)
    im = np.full(n_blocks, h_ps.imag)
    for l in range(n_elem):
        cr = coupling[l].real
        ci = coupling[l].imag
        for m in range(n_blocks):
            c = np.cos(phases[l, m])
            s = np.sin(phases[l, m])
            re[m] += cr * c - ci * s
            im[m] += cr * s + ci * c
    return re + 1j * im


def effective_channels_nb(h_ps, coupling, phases):
    coupling = np.ascontiguousarray(coupling, dtype=np.complex128)
    phases = np.ascontiguousarray(phases, dtype=float)
    return _effective_channels_nb(complex(h_ps), coupling, phases)


# ---------------------------------------------------------------------------
# Number of statistics strictly above each threshold.


def exceed_counts_np(stats, thresholds):
    s = np.sort(np.asarray(stats, dtype=float).ravel())
    thr = np.asarray(thresholds, dtype=float)
    return s.size - np.searchsorted(s, thr, side="right")


@njit(cache=True)
def _exceed_counts_nb(stats, thresholds):
    out = np.zeros(thresholds.size, dtype=np.int64)
    for i in range(stats.size):
        v = stats[i]
        for k in range(thresholds.size):
            if v > thresholds[k]:
                out[k] += 1
    return out


def exceed_counts_nb(stats, thresholds):
    s = np.ascontiguousarray(np.asarray(stats, dtype=float).ravel())
    thr = np.ascontiguousarray(np.asarray(thresholds, dtype=float).ravel())
    return _exceed_counts_nb(s, thr).reshape(np.shape(thresholds))


if USE_NUMBA:
    BACKEND = "numba"
    block_energies = block_energies_nb
    wed_statistics = wed_statistics_nb
    effective_channels = effective_channels_nb
    # numpy's vectorised sort + searchsorted beats the compiled loop (see benchmarks/)
    exceed_counts = exceed_counts_np
else:
    BACKEND = "numpy"
    block_energies = block_energies_np
    wed_statistics = wed_statistics_np
    effective_channels = effective_channels_np
    exceed_counts = exceed_counts_np
