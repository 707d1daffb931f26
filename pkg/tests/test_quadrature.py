import math

import numpy as np
import pytest

from tailscore.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate, integrate_scalar


def test_rule_constants():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    g_nodes, _ = np.polynomial.legendre.leggauss(10)
    np.testing.assert_allclose(np.sort(NODES[GAUSS_WEIGHTS > 0]), g_nodes, atol=1e-15)
    # Kronrod extension integrates polynomials through degree 31 exactly
    for k in range(0, 31, 2):
        assert KRONROD_WEIGHTS @ NODES**k == pytest.approx(2 / (k + 1), abs=1e-14)


@pytest.mark.parametrize("f,lo,hi,kw,exact", [
    (lambda x: np.exp(-x * x), -math.inf, math.inf, {}, math.sqrt(math.pi)),
    (lambda x: x**-2.0, 1.0, math.inf, {}, 1.0),
    (lambda x: x**-1.25, 1.0, math.inf, {"tail_power": 8.0}, 4.0),
    (lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, {"breaks": [0.0]}, 4 / 3),
    (lambda x: np.where(x < 0.3, 1.0, 0.0), 0.0, 1.0, {"breaks": [0.3]}, 0.3),
    (lambda x: np.exp(x), -math.inf, 0.0, {}, 1.0),
])
def test_known_integrals(f, lo, hi, kw, exact):
    breaks = kw.pop("breaks", ())
    value, err = integrate_scalar(f, lo, hi, breaks, atol=1e-11, **kw)
    assert value == pytest.approx(exact, abs=1e-10)
    assert err <= 1e-11


def test_vector_integrand_and_per_panel():
    res = integrate(lambda x: np.stack([x, x * x], axis=1), 0.0, 2.0, [0.5, 1.0], ncomp=2,
                    per_panel=True)
    assert res.value.shape == (3, 2)
    np.testing.assert_allclose(res.value.sum(axis=0), [2.0, 8 / 3], atol=1e-14)
    np.testing.assert_allclose(res.value[:, 0], [0.125, 0.375, 1.5], atol=1e-14)


def test_empty_interval():
    res = integrate(np.sin, 1.0, 1.0)
    assert res.value[0] == 0.0 and res.converged


def test_reversed_limits_rejected():
    with pytest.raises(ValueError):
        integrate(np.sin, 1.0, 0.0)
