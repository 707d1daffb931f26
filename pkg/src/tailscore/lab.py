"""Counterexample constructions around max-functionals and proper scores.

* :func:`crossing_lambda` finds the mixture weight at which two point
  forecasts have equal expected score (affinity of ``lam -> S(x, F_lam)``).
* :func:`level_set_convexity_check` and :func:`mixture_continuity_probe`
  trace a functional along the mixture segment ``F_lam = lam F1 + (1-lam) F0``.
* :func:`diagonal_bound_check` and :func:`score_gap_curve` measure how little
  a proper score moves when a small amount of another law is mixed into the
  truth, and :func:`epsilon_mixture` inverts that bound.
* :func:`mc_power_study` shows how many observations a realised average score
  needs to detect such a contamination.

Numerical slack is ``slack_factor`` (default 10) times the summed
``abs_error`` of the expectations a quantity was built from.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import functionals
from .distributions import Distribution, mix, sample
from .errors import ConstructionError, InvalidParameterError, NumericalError, SignPatternError
from .scoring import expected_score_difference, expected_score_fn, score_rule_batch
from .tail_analysis import TailComparison, tail_compare

SLACK_FACTOR = 10.0
DIFFERENCE_RTOL = 1e-10
BISECTION_TOL = 1e-10
CERTIFICATE_LAMBDAS = (0.1, 0.3, 0.5, 0.7, 0.9)
DEFAULT_PATH_GRID = (0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9, 1.0)
_EPS = np.finfo(float).eps


def _check_grid(grid, closed_right: bool):
    lams = [float(v) for v in grid]
    if not lams:
        raise InvalidParameterError("lambda grid must not be empty")
    for v in lams:
        ok = 0.0 <= v <= 1.0 if closed_right else 0.0 <= v < 1.0
        if not ok:
            interval = "[0, 1]" if closed_right else "[0, 1)"
            raise InvalidParameterError(f"lambda {v!r} outside {interval}")
    return lams


# ---------------------------------------------------------------------------
# Crossing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossingResult:
    lambda_star: float
    a: float
    b: float
    residual: float
    abs_error: float
    slack: float
    bisection_lambda: float
    certificate: tuple  # ((lam, D(lam), lam * a + (1 - lam) * b), ...)

    def __post_init__(self):
        if not (self.a > 0 and self.b < 0):
            raise ValueError("crossing needs a > 0 > b")
        if self.lambda_star != -self.b / (self.a - self.b):
            raise ValueError("lambda_star must equal -b / (a - b)")

    @property
    def certificate_error(self) -> float:
        return max(abs(d - lin) for _, d, lin in self.certificate)


def _score_difference(s, x0, x1, F, atol):
    e0 = expected_score_fn(s, x0, F, atol)
    e1 = expected_score_fn(s, x1, F, atol)
    return e0.value - e1.value, e0.abs_error + e1.abs_error


def crossing_lambda(s, x0: float, x1: float, F0: Distribution, F1: Distribution,
                    atol: float | None = None, slack_factor: float = SLACK_FACTOR) -> CrossingResult:
    """Weight ``lam*`` with ``S(x0, F_lam*) = S(x1, F_lam*)``.

    Requires ``a = S(x0, F1) - S(x1, F1) > 0`` and ``b = S(x0, F0) - S(x1, F0) < 0``;
    affinity of the expected score in the distribution then gives
    ``lam* = -b / (a - b)``. The result is re-checked on a freshly built
    mixture, by bisection, and at :data:`CERTIFICATE_LAMBDAS`.
    """
    x0, x1 = float(x0), float(x1)
    a, err_a = _score_difference(s, x0, x1, F1, atol)
    b, err_b = _score_difference(s, x0, x1, F0, atol)
    if not a > 0:
        raise SignPatternError(
            f"S(x0, F1) - S(x1, F1) = {a!r} is not positive: x0 does not beat x1 under F1")
    if not b < 0:
        raise SignPatternError(
            f"S(x0, F0) - S(x1, F0) = {b!r} is not negative: x1 does not beat x0 under F0")
    lam = -b / (a - b)

    def D(t):
        return _score_difference(s, x0, x1, mix(F0, F1, t), atol)

    d_star, err_star = D(lam)
    residual = abs(d_star)
    abs_error = err_a + err_b + err_star
    # rounding of the differences themselves
    rounding = 16 * _EPS * (abs(a) + abs(b))
    slack = slack_factor * abs_error + rounding
    if residual > slack:
        raise NumericalError(f"crossing residual {residual!r} exceeds slack {slack!r}")

    lo, hi = 0.0, 1.0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if D(mid)[0] < 0:
            lo = mid
        else:
            hi = mid
    bisect = 0.5 * (lo + hi)
    if abs(bisect - lam) > BISECTION_TOL + slack / (a - b):
        raise NumericalError(f"bisection root {bisect!r} disagrees with closed form {lam!r}")

    cert = tuple((t, D(t)[0], t * a + (1 - t) * b) for t in CERTIFICATE_LAMBDAS)
    return CrossingResult(lam, a, b, residual, abs_error, slack, bisect, cert)


# ---------------------------------------------------------------------------
# Functionals along mixture paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelSetReport:
    functional: str
    t0: float | None
    t1: float | None
    rows: tuple  # ((lam, T(F_lam), agrees), ...)
    status: str  # level_set_holds | violation | distinct_values | inconclusive

    @property
    def violations(self) -> tuple:
        return tuple(r for r in self.rows if r[2] is False)


def level_set_convexity_check(T: str, F0: Distribution, F1: Distribution, grid) -> LevelSetReport:
    """If ``T(F0) = T(F1) = t``, check ``T(F_lam) = t`` along the grid."""
    functionals.check_tag(T)
    lams = _check_grid(grid, closed_right=True)
    t0, t1 = functionals.evaluate(T, F0), functionals.evaluate(T, F1)
    values = [functionals.evaluate(T, mix(F0, F1, lam)) for lam in lams]
    if t0 is None or t1 is None or any(v is None for v in values):
        rows = tuple((lam, v, None) for lam, v in zip(lams, values))
        return LevelSetReport(T, t0, t1, rows, "inconclusive")
    if not functionals.same_value(T, t0, t1):
        rows = tuple((lam, v, None) for lam, v in zip(lams, values))
        return LevelSetReport(T, t0, t1, rows, "distinct_values")
    rows = tuple((lam, v, functionals.same_value(T, v, t0)) for lam, v in zip(lams, values))
    status = "level_set_holds" if all(r[2] for r in rows) else "violation"
    return LevelSetReport(T, t0, t1, rows, status)


@dataclass(frozen=True)
class ContinuityReport:
    functional: str
    rows: tuple  # ((lam, T(F_lam)), ...) sorted by lam
    classification: str  # continuous | jump_at_zero | inconclusive
    jump: float | None
    max_signature: bool  # constant at max(T(F0), T(F1)) for every lam > 0


def mixture_continuity_probe(T: str, F0: Distribution, F1: Distribution,
                             grid=DEFAULT_PATH_GRID) -> ContinuityReport:
    """Trace ``lam -> T(F_lam)`` and classify its behaviour at ``lam = 0``.

    The path counts as jumping at zero when ``|T(lam_min) - T(0)|`` exceeds
    twice the largest difference quotient seen on the positive part of the
    grid times ``lam_min`` (plus the functional's tolerance).
    """
    functionals.check_tag(T)
    lams = sorted(set(_check_grid(grid, closed_right=True)) | {0.0})
    rows = tuple((lam, functionals.evaluate(T, mix(F0, F1, lam))) for lam in lams)
    if any(v is None for _, v in rows) or len(rows) < 2:
        return ContinuityReport(T, rows, "inconclusive", None, False)
    t_zero = rows[0][1]
    positive = rows[1:]
    top = max(functionals.evaluate(T, F0), functionals.evaluate(T, F1))
    signature = all(functionals.same_value(T, v, top) for _, v in positive)
    lam_min, t_min = positive[0]
    if functionals.same_value(T, t_min, t_zero):
        return ContinuityReport(T, rows, "continuous", 0.0, signature)
    jump = abs(t_min - t_zero)
    slope = 0.0
    for (la, va), (lb, vb) in zip(positive, positive[1:]):
        if not functionals.same_value(T, va, vb):
            slope = max(slope, abs(vb - va) / (lb - la))
    atol = functionals.TOLERANCES.get(T, 0.0) * max(1.0, abs(t_zero) if math.isfinite(t_zero) else 1.0)
    if jump > max(atol, 2.0 * lam_min * slope):
        return ContinuityReport(T, rows, "jump_at_zero", jump, signature)
    return ContinuityReport(T, rows, "continuous", jump, signature)


# ---------------------------------------------------------------------------
# Diagonal continuity bound and gap curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundRow:
    lam: float
    gap: float
    bound: float
    abs_error: float
    satisfied: bool


@dataclass(frozen=True)
class BoundReport:
    rows: tuple
    D: float
    D_abs_error: float
    slack_factor: float

    @property
    def all_satisfied(self) -> bool:
        return all(r.satisfied for r in self.rows)


def divergence(S, F: Distribution, G: Distribution, atol=None):
    """``D = S(G, F) - S(F, F)``; returns the :class:`ExpectedScore` of the difference."""
    D = expected_score_difference(S, G, F, F, atol, rtol=DIFFERENCE_RTOL)
    if D.value < -2 * D.abs_error:
        raise NumericalError(f"negative divergence {D.value!r}: the score is not proper here")
    return D


def _gap(S, F, G, lam, atol):
    """``|S(F_lam, G) - S(G, G)|`` with ``F_lam = lam F + (1 - lam) G``."""
    if lam == 0.0:
        return 0.0, 0.0
    res = expected_score_difference(S, mix(G, F, lam), G, G, atol, rtol=DIFFERENCE_RTOL)
    return abs(res.value), res.abs_error


def _bound_rows(S, F, G, lams, atol, slack_factor):
    D = divergence(S, F, G, atol)
    rows = []
    for lam in lams:
        gap, err = _gap(S, F, G, lam, atol)
        bound = lam / (1.0 - lam) * D.value if lam else 0.0
        total_err = err + (lam / (1.0 - lam) * D.abs_error if lam else 0.0)
        rows.append(BoundRow(lam, gap, bound, total_err, gap <= bound + slack_factor * total_err))
    return BoundReport(tuple(rows), D.value, D.abs_error, slack_factor)


def diagonal_bound_check(S, F: Distribution, G: Distribution, grid, atol=None,
                         slack_factor: float = SLACK_FACTOR) -> BoundReport:
    """Check ``|S(F_lam, G) - S(G, G)| <= lam / (1 - lam) * D`` on the grid.

    ``D = S(G, F) - S(F, F)`` is the divergence of ``F`` from ``G``; each row is
    satisfied when the gap is within the bound plus numerical slack.
    """
    return _bound_rows(S, F, G, _check_grid(grid, closed_right=False), atol, slack_factor)


def score_gap_curve(S, F: Distribution, G: Distribution, grid, atol=None,
                    slack_factor: float = SLACK_FACTOR) -> tuple:
    """Rows ``(lam, gap, bound)`` for plotting; same computation as the bound check."""
    report = diagonal_bound_check(S, F, G, grid, atol, slack_factor)
    return tuple((r.lam, r.gap, r.bound) for r in report.rows)


# ---------------------------------------------------------------------------
# epsilon-close mixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonConstruction:
    epsilon: float
    D: float
    lambda_eps: float
    measured_gap: float
    gap_abs_error: float
    slack: float
    functional: str
    t_truth: float | None
    t_alt: float | None
    t_construct: float | None
    tail_verdict: TailComparison
    construction: Distribution
    warning: str | None = None


def epsilon_mixture(S, F: Distribution, G: Distribution, epsilon: float, T: str,
                    atol=None, slack_factor: float = SLACK_FACTOR) -> EpsilonConstruction:
    """Mix ``F`` into the truth ``G`` so that the expected score moves by at most ``epsilon``.

    With ``D = S(G, F) - S(F, F)`` the weight ``lam = epsilon / (epsilon + D)``
    makes ``lam / (1 - lam) * D = epsilon``. The construction
    ``F_lam = lam F + (1 - lam) G`` carries ``F``'s tail, so a max-functional
    takes the value ``max(T(F), T(G))`` on it.
    """
    functionals.check_tag(T)
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise InvalidParameterError(f"epsilon must be positive, got {epsilon!r}")
    D = divergence(S, F, G, atol)
    note = None
    if D.value <= 0.0:
        lam = 1.0
        note = "zero divergence: the alternative already scores like the truth; using lambda = 1"
        warnings.warn(note, RuntimeWarning, stacklevel=2)
    elif math.isinf(epsilon):
        lam = 1.0
    else:
        lam = epsilon / (epsilon + D.value)
    F_lam = mix(G, F, lam)
    res = expected_score_difference(S, F_lam, G, G, atol, rtol=DIFFERENCE_RTOL)
    gap, gap_err = abs(res.value), res.abs_error
    slack = slack_factor * (gap_err + D.abs_error)
    if gap > epsilon + slack:
        raise ConstructionError(f"measured gap {gap!r} exceeds epsilon {epsilon!r} + slack {slack!r}")
    return EpsilonConstruction(
        epsilon=epsilon,
        D=D.value,
        lambda_eps=lam,
        measured_gap=gap,
        gap_abs_error=gap_err,
        slack=slack,
        functional=T,
        t_truth=functionals.evaluate(T, G),
        t_alt=functionals.evaluate(T, F),
        t_construct=functionals.evaluate(T, F_lam),
        tail_verdict=tail_compare(F_lam, G),
        construction=F_lam,
        warning=note,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo power
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerRow:
    n: int
    mean_diff: float
    stderr: float
    detect_frac: float


def mc_power_study(S, G: Distribution, F_alt: Distribution, n_grid, reps: int, seed=0,
                   atol=None) -> tuple:
    """Detection rate of ``F_alt`` against the truth ``G`` from realised average scores.

    For each ``n`` and replication, ``n`` draws from ``G`` give score
    differences ``S(F_alt, y) - S(G, y)``; the replication detects the
    alternative when the mean difference exceeds twice its standard error.
    Rows hold the mean of the replication means, the root-mean-square
    replication standard error and the detection fraction. Replication ``r`` at
    grid position ``i`` draws from ``SeedSequence(seed, spawn_key=(i, r))``.
    """
    if int(reps) != reps or reps < 2:
        raise InvalidParameterError(f"reps must be an integer >= 2, got {reps!r}")
    reps = int(reps)
    rows = []
    for i, n in enumerate(n_grid):
        if int(n) != n or n < 2:
            raise InvalidParameterError(f"sample sizes must be integers >= 2, got {n!r}")
        n = int(n)
        ys = np.concatenate([
            sample(G, n, np.random.SeedSequence(seed, spawn_key=(i, r))) for r in range(reps)
        ])
        diffs = score_rule_batch(S, F_alt, ys, atol)[0] - score_rule_batch(S, G, ys, atol)[0]
        diffs = diffs.reshape(reps, n)
        means = diffs.mean(axis=1)
        stderrs = diffs.std(axis=1, ddof=1) / math.sqrt(n)
        detect = means > 2.0 * stderrs
        rows.append(PowerRow(n, float(means.mean()), float(np.sqrt(np.mean(stderrs**2))),
                             float(detect.mean())))
    return tuple(rows)
