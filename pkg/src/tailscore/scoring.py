"""Scoring rules for distributional forecasts and scoring functions for point
forecasts, with exact, quadrature and Monte-Carlo expected-score engines.

Expected CRPS-type scores reduce to a single integral by Fubini::

    E_G wCRPS(F, Y) = int w(x) [(F(x) - G(x))^2 + G(x)(1 - G(x))] dx

which is what :func:`expected_score_rule` integrates. Step CDFs (point
masses, empirical distributions and mixtures of them) are integrated exactly
by the merge kernels in :mod:`tailscore.backend`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .distributions import Distribution, Mixture, sample
from .errors import DivergentIntegralError, InvalidParameterError
from .quadrature import integrate

DEFAULT_ATOL = 1e-9
_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CRPS:
    @property
    def threshold(self) -> float:
        return -math.inf


@dataclass(frozen=True)
class WCRPS:
    """Threshold-weighted CRPS with weight ``1{x >= q}``."""

    q: float

    def __post_init__(self):
        if not isinstance(self.q, (int, float)) or not math.isfinite(self.q):
            raise InvalidParameterError(f"wCRPS threshold must be finite, got {self.q!r}")

    @property
    def threshold(self) -> float:
        return float(self.q)


@dataclass(frozen=True)
class SquaredError:
    """``(x - y**k)**2``; ``k = 1`` is the plain squared error."""

    k: int = 1

    def __post_init__(self):
        if self.k not in (1, 2, 3):
            raise InvalidParameterError(f"squared-error power must be 1, 2 or 3, got {self.k!r}")


@dataclass(frozen=True)
class Pinball:
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError(f"pinball level must lie in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class ExpectedScore:
    value: float
    abs_error: float
    method: str  # closed_form | quadrature | monte_carlo
    n_samples: int | None = None
    stderr: float | None = None

    def __post_init__(self):
        if (self.stderr is not None) != (self.method == "monte_carlo"):
            raise ValueError("stderr is reported exactly for Monte-Carlo estimates")


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _require_moment(F: Distribution, order: float, role: str):
    if not F.moment_exists(order):
        raise DivergentIntegralError(
            f"{role} {F!r} has no finite moment of order {order}; the expected score diverges"
        )


def _tail_power(decay: float) -> float:
    """Tail-map exponent for an integrand decaying like ``x**-decay``."""
    if not math.isfinite(decay):
        return 1.0
    excess = decay - 1.0
    if excess <= 0:
        raise DivergentIntegralError("integrand decays too slowly to be integrable")
    return float(min(20.0, max(1.0, math.ceil(2.0 / excess))))


def _power_decay(F: Distribution) -> float:
    """``-rho`` of a regularly varying survival function, else ``inf``."""
    tail = F.tail
    if tail is not None and tail.kind == "power":
        return -tail.exponent
    return math.inf


def _step_table(F):
    locs, cum = F.step_table()
    return np.ascontiguousarray(locs, dtype=float), np.ascontiguousarray(cum, dtype=float)


def _cdf_gap(A, x, cT, sT):
    """``A(x) - T(x)``, taken from survival functions in the upper half."""
    return np.where(cT > 0.5, sT - A._sf(x), A._cdf(x) - cT)


def _support_window(q, *dists):
    lo = max(q, min(d.lower for d in dists))
    hi = max(d.upper for d in dists)
    return lo, hi


def _breaks(*dists, extra=()):
    return np.unique(np.concatenate([d.breakpoints for d in dists] + [np.asarray(extra, float)]))


# ---------------------------------------------------------------------------
# Scoring rules
# ---------------------------------------------------------------------------


def _running_integral(f, lo, hi, nodes, breaks, atol, power):
    """``int_lo^node f`` at each node in ``[lo, hi]`` plus the total error."""
    pts = np.concatenate([nodes, breaks])
    pts = pts[np.isfinite(pts) & (pts > lo) & (pts < hi)]
    pts = np.unique(np.concatenate([pts, [v for v in (lo, hi) if math.isfinite(v)]]))
    res = integrate(f, lo, hi, pts, atol=atol, per_panel=True, tail_power=power)
    vals = res.value[:, 0]
    first = 0 if math.isfinite(lo) else 1
    start = 0.0 if first == 0 else vals[0]
    cum = np.concatenate([[start], start + np.cumsum(vals[first:first + pts.size - 1])])
    total = cum[-1] + (0.0 if math.isfinite(hi) else vals[-1])
    # nodes strictly inside (lo, hi) are members of pts
    idx = np.clip(np.searchsorted(pts, nodes), 0, cum.size - 1)
    return cum[idx], total, float(res.error.sum())


def score_rule_batch(S, F: Distribution, ys, atol: float | None = None):
    """Score of forecast ``F`` at every observation in ``ys``.

    Returns ``(scores, abs_error)`` where ``abs_error`` bounds the quadrature
    error of each individual score.
    """
    _require_moment(F, 1, "forecast")
    atol = DEFAULT_ATOL if atol is None else atol
    ys = np.asarray(ys, dtype=float)
    if not np.all(np.isfinite(ys)):
        raise InvalidParameterError("observations must be finite")
    q = S.threshold
    z = np.maximum(ys, q) if math.isfinite(q) else ys
    zu, inverse = np.unique(z, return_inverse=True)

    if F.is_step:
        locs, cum = _step_table(F)
        scores = np.asarray(backend.kernels.step_wcrps(locs, cum, np.ascontiguousarray(zu), q))
        err = 16 * _EPS * (np.abs(scores) + 1.0)
        return scores[inverse].reshape(ys.shape), float(err.max())

    breaks = F.breakpoints
    # int_q^z F^2: zero below the forecast's lower endpoint
    start = max(q, F.lower)
    lower_part = np.zeros_like(zu)
    err_lower = 0.0
    if zu[-1] > start:
        power = _tail_power(math.inf)
        lower_part, _, err_lower = _running_integral(
            lambda x: F._cdf(x) ** 2, start, zu[-1], zu, breaks, atol / 2, power)
        lower_part = np.where(zu > start, lower_part, 0.0)
    # int_z^inf sf^2
    end = F.upper
    upper_part = np.zeros_like(zu)
    err_upper = 0.0
    if zu[0] < end:
        power = _tail_power(2 * _power_decay(F))
        run, total, err_upper = _running_integral(
            lambda x: F._sf(x) ** 2, zu[0], end, zu, breaks, atol / 2, power)
        upper_part = np.where(zu < end, total - run, 0.0)
    scores = lower_part + upper_part
    return scores[inverse].reshape(ys.shape), err_lower + err_upper


def score_rule(S, F: Distribution, y, atol: float | None = None):
    """wCRPS / CRPS of forecast ``F`` at observation(s) ``y``."""
    arr = np.asarray(y, dtype=float)
    scores, _ = score_rule_batch(S, F, arr.reshape(-1), atol)
    return float(scores[0]) if arr.ndim == 0 else scores.reshape(arr.shape)


def _step_integrals(A, B, T, q):
    la, ca = _step_table(A)
    lb, cb = _step_table(B)
    lt, ct = _step_table(T)
    return backend.kernels.step_pair_integrals(la, ca, lb, cb, lt, ct, q)


def expected_score_rule(S, F: Distribution, G: Distribution, atol: float | None = None,
                        rtol: float = 0.0) -> ExpectedScore:
    """``S(F, G) = E_G S(F, Y)``: forecast ``F`` scored against truth ``G``."""
    _require_moment(F, 1, "forecast")
    _require_moment(G, 1, "truth")
    atol = DEFAULT_ATOL if atol is None else atol
    q = S.threshold
    if F.is_step and G.is_step:
        i1, _, i3 = _step_integrals(F, G, G, q)
        value = i1 + i3
        return ExpectedScore(value, float(32 * _EPS * (abs(i1) + abs(i3))), "closed_form")

    def integrand(x):
        cG, sG = G._cdf(x), G._sf(x)
        d = _cdf_gap(F, x, cG, sG)
        return d * d + cG * sG

    lo, hi = _support_window(q, F, G)
    power = _tail_power(min(_power_decay(G), 2 * _power_decay(F)))
    res = integrate(integrand, lo, hi, _breaks(F, G), atol=atol, rtol=rtol, tail_power=power)
    return ExpectedScore(float(res.value[0]), float(res.error[0]), "quadrature")


def expected_score_difference(S, A: Distribution, B: Distribution, T: Distribution,
                              atol: float | None = None, rtol: float = 0.0) -> ExpectedScore:
    """``S(A, T) - S(B, T)`` evaluated as one integral of the integrand difference."""
    for d, role in ((A, "forecast"), (B, "forecast"), (T, "truth")):
        _require_moment(d, 1, role)
    atol = DEFAULT_ATOL if atol is None else atol
    q = S.threshold
    if A.is_step and B.is_step and T.is_step:
        i1, i2, _ = _step_integrals(A, B, T, q)
        return ExpectedScore(float(i1 - i2), float(32 * _EPS * (abs(i1) + abs(i2))), "closed_form")

    def integrand(x):
        cT, sT = T._cdf(x), T._sf(x)
        da = _cdf_gap(A, x, cT, sT)
        db = _cdf_gap(B, x, cT, sT)
        return da * da - db * db

    lo, hi = _support_window(q, A, B, T)
    decay = 2 * min(_power_decay(A), _power_decay(B), _power_decay(T))
    res = integrate(integrand, lo, hi, _breaks(A, B, T), atol=atol, rtol=rtol,
                    tail_power=_tail_power(decay))
    return ExpectedScore(float(res.value[0]), float(res.error[0]), "quadrature")


def mc_expected_score(S, F: Distribution, G: Distribution, n: int, seed=0,
                      atol: float | None = None) -> ExpectedScore:
    """Average score of ``F`` over ``n`` draws from ``G``."""
    if int(n) != n or n < 2:
        raise InvalidParameterError(f"Monte-Carlo size must be an integer >= 2, got {n!r}")
    ys = sample(G, int(n), seed)
    scores, err = score_rule_batch(S, F, ys, atol)
    value = float(np.mean(scores))
    stderr = float(np.std(scores, ddof=1) / math.sqrt(n))
    return ExpectedScore(value, err, "monte_carlo", n_samples=int(n), stderr=stderr)


# ---------------------------------------------------------------------------
# Scoring functions
# ---------------------------------------------------------------------------


def score_fn(s, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(s, SquaredError):
        out = (x - y**s.k) ** 2
    elif isinstance(s, Pinball):
        out = ((y <= x).astype(float) - s.alpha) * (x - y)
    else:
        raise InvalidParameterError(f"unknown scoring function {s!r}")
    return float(out) if out.ndim == 0 else out


def _score_fn_derivative(s, x, y):
    # d/dy of score_fn(s, x, y), almost everywhere
    if isinstance(s, SquaredError):
        return -2.0 * s.k * y ** (s.k - 1) * (x - y**s.k)
    return -((y <= x).astype(float) - s.alpha)


def expectation(F: Distribution, phi, dphi, extra_breaks=(), atol: float | None = None,
                growth: float = 0.0) -> ExpectedScore:
    """``E phi(Y)`` under ``F``.

    Atoms are summed exactly. Continuous parts use integration by parts
    around the median ``c``::

        E phi(Y) = phi(c) + int_c^inf phi'(y) sf(y) dy - int_-inf^c phi'(y) F(y) dy

    ``growth`` is the polynomial degree of ``phi'`` (used to shape the tail map).
    """
    atol = DEFAULT_ATOL if atol is None else atol
    if isinstance(F, Mixture):
        parts = [expectation(d, phi, dphi, extra_breaks, atol, growth) for _, d in F.components]
        value = math.fsum(w * p.value for w, p in zip(F.weights, parts))
        err = sum(w * p.abs_error for w, p in zip(F.weights, parts))
        method = "closed_form" if all(p.method == "closed_form" for p in parts) else "quadrature"
        return ExpectedScore(value, err, method)
    if F.is_step:
        locs = np.array([a for a, _ in F.atoms])
        masses = np.array([m for _, m in F.atoms])
        terms = masses * np.asarray(phi(locs), dtype=float)
        value = math.fsum(terms)
        return ExpectedScore(value, 16 * _EPS * float(np.sum(np.abs(terms))), "closed_form")
    c = float(F.ppf(0.5))
    breaks = _breaks(F, extra=extra_breaks)
    decay = _power_decay(F) - growth
    right = integrate(lambda y: dphi(y) * F._sf(y), c, F.upper, breaks, atol=atol / 2,
                      tail_power=_tail_power(decay))
    left = integrate(lambda y: dphi(y) * F._cdf(y), F.lower, c, breaks, atol=atol / 2)
    value = float(phi(np.array(c))) + float(right.value[0]) - float(left.value[0])
    return ExpectedScore(value, float(right.error[0] + left.error[0]), "quadrature")


def expected_score_fn(s, x: float, F: Distribution, atol: float | None = None) -> ExpectedScore:
    """``S(x, F) = E_F s(x, Y)``."""
    if isinstance(s, SquaredError):
        _require_moment(F, 2 * s.k, "distribution")
        growth = 2 * s.k - 1
    elif isinstance(s, Pinball):
        _require_moment(F, 1, "distribution")
        growth = 0.0
    else:
        raise InvalidParameterError(f"unknown scoring function {s!r}")
    x = float(x)
    return expectation(
        F,
        lambda y: score_fn(s, x, y),
        lambda y: _score_fn_derivative(s, x, y),
        extra_breaks=[x],
        atol=atol,
        growth=growth,
    )
