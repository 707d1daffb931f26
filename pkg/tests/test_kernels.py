import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailscore import backend
from tailscore.quadrature import integrate_scalar


def step_table(locs, masses):
    order = np.argsort(locs)
    locs = np.asarray(locs, float)[order]
    cum = np.cumsum(np.asarray(masses, float)[order])
    cum /= cum[-1]
    cum[-1] = 1.0
    return np.ascontiguousarray(locs), np.ascontiguousarray(cum)


def step_cdf(locs, cum):
    def F(x):
        j = np.searchsorted(locs, x, side="right")
        return np.where(j == 0, 0.0, cum[np.maximum(j - 1, 0)])
    return F


tables = st.lists(st.tuples(st.floats(-50, 50), st.floats(0.01, 1)), min_size=1, max_size=12,
                  unique_by=lambda t: t[0]).map(lambda pairs: step_table(*zip(*pairs)))


def brute_wcrps(locs, cum, y, q):
    F = step_cdf(locs, cum)
    lo = min(locs[0], y, q if math.isfinite(q) else locs[0]) - 1.0
    hi = max(locs[-1], y) + 1.0
    start = max(lo, q)
    pts = np.concatenate([locs, [y]])
    f = lambda x: (F(x) - (y <= x)) ** 2  # noqa: E731
    return integrate_scalar(f, start, hi, pts, atol=1e-12)[0]


def test_backend_selection():
    assert backend.NAME in ("cython", "python")
    assert backend.kernels is (backend.compiled_kernels or backend.python_kernels)


def test_point_mass_crps(kernels):
    locs, cum = step_table([0.0], [1.0])
    out = kernels.step_wcrps(locs, cum, np.array([-1.0, 0.0, 2.0]), -math.inf)
    np.testing.assert_allclose(out, [1.0, 0.0, 2.0], atol=0)


@settings(max_examples=60, deadline=None)
@given(tables, st.lists(st.floats(-60, 60), min_size=1, max_size=8),
       st.sampled_from([-math.inf, -10.0, 0.0, 7.5]))
def test_step_wcrps_matches_quadrature(kernels, table, ys, q):
    locs, cum = table
    z = np.sort(np.maximum(np.array(ys), q))
    got = kernels.step_wcrps(locs, cum, z, q)
    for zi, gi in zip(z, got):
        assert gi == pytest.approx(brute_wcrps(locs, cum, zi, q), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(tables, tables, tables, st.sampled_from([-math.inf, -3.0, 0.5]))
def test_pair_integrals_match_quadrature(kernels, A, B, T, q):
    Fa, Fb, Ft = step_cdf(*A), step_cdf(*B), step_cdf(*T)
    got = kernels.step_pair_integrals(*A, *B, *T, q)
    pts = np.concatenate([A[0], B[0], T[0]])
    lo = max(pts.min() - 1, q)
    hi = max(pts.max() + 1, lo)
    ref = [
        integrate_scalar(lambda x: (Fa(x) - Ft(x)) ** 2, lo, hi, pts, atol=1e-12)[0],
        integrate_scalar(lambda x: (Fb(x) - Ft(x)) ** 2, lo, hi, pts, atol=1e-12)[0],
        integrate_scalar(lambda x: Ft(x) * (1 - Ft(x)), lo, hi, pts, atol=1e-12)[0],
    ]
    np.testing.assert_allclose(got, ref, atol=1e-9)


@pytest.mark.skipif(backend.compiled_kernels is None, reason="compiled extension not built")
@settings(max_examples=60, deadline=None)
@given(tables, tables, st.lists(st.floats(-60, 60), min_size=1, max_size=20),
       st.sampled_from([-math.inf, -2.0, 4.0]))
def test_backends_agree(A, T, ys, q):
    z = np.sort(np.maximum(np.array(ys), q))
    c = backend.compiled_kernels.step_wcrps(*A, z, q)
    p = backend.python_kernels.step_wcrps(*A, z, q)
    np.testing.assert_allclose(c, p, rtol=1e-13, atol=1e-13)
    c2 = backend.compiled_kernels.step_pair_integrals(*A, *T, *T, q)
    p2 = backend.python_kernels.step_pair_integrals(*A, *T, *T, q)
    np.testing.assert_allclose(c2, p2, rtol=1e-13, atol=1e-13)


def test_pure_python_switch(monkeypatch):
    import importlib
    monkeypatch.setenv("TAILSCORE_PURE_PYTHON", "1")
    reloaded = importlib.reload(backend)
    try:
        assert reloaded.NAME == "python"
        assert reloaded.kernels is reloaded.python_kernels
    finally:
        monkeypatch.delenv("TAILSCORE_PURE_PYTHON")
        importlib.reload(backend)
