"""Numpy fallback for the compiled step-CDF kernels (same signatures)."""

import numpy as np


def step_wcrps(locs, cum, z, q):
    locs = np.asarray(locs, dtype=float)
    cum = np.asarray(cum, dtype=float)
    z = np.asarray(z, dtype=float)
    m = locs.size
    gaps = np.diff(locs)
    pf = np.concatenate([[0.0], np.cumsum(cum[:-1] ** 2 * gaps)])
    tail = (1.0 - cum[:-1]) ** 2 * gaps
    ps = np.concatenate([np.cumsum(tail[::-1])[::-1], [0.0, 0.0]])

    def below(t):
        # int_{-inf}^t F^2
        j = np.searchsorted(locs, t, side="right")
        jm = np.maximum(j - 1, 0)
        inner = pf[jm] + cum[jm] ** 2 * (t - locs[jm])
        return np.where(j == 0, 0.0, inner)

    j = np.searchsorted(locs, z, side="right")
    jm = np.maximum(j - 1, 0)
    jn = np.minimum(j, m - 1)
    pz = below(z)
    uz = np.where(
        j == 0,
        (locs[0] - z) + ps[0],
        np.where(j == m, 0.0, (1.0 - cum[jm]) ** 2 * (locs[jn] - z) + ps[np.minimum(j, m)]),
    )
    pq = float(below(np.array([q]))[0]) if np.isfinite(q) else 0.0
    return (pz - pq) + uz


def step_pair_integrals(la, ca, lb, cb, lt, ct, q):
    grid = np.unique(np.concatenate([la, lb, lt]))
    if grid.size < 2:
        return 0.0, 0.0, 0.0

    def values(locs, cum):
        j = np.searchsorted(locs, grid[:-1], side="right")
        return np.where(j == 0, 0.0, np.asarray(cum)[np.maximum(j - 1, 0)])

    av, bv, tv = values(la, ca), values(lb, cb), values(lt, ct)
    left = np.maximum(grid[:-1], q)
    w = np.maximum(grid[1:] - left, 0.0)
    i1 = float(np.sum((av - tv) ** 2 * w))
    i2 = float(np.sum((bv - tv) ** 2 * w))
    i3 = float(np.sum(tv * (1.0 - tv) * w))
    return i1, i2, i3
