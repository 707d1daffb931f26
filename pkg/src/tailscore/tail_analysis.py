"""Tail order ``F <_t G`` and tail equivalence.

Pairs are ordered first by upper endpoint, then by the limit of the survival
ratio ``sf_F / sf_G`` at the common endpoint. Shipped families carry an
analytic :class:`~tailscore.distributions.TailDescriptor`, so the ratio limit
is usually known in closed form; otherwise the ratio is probed numerically
along ``x_k = isf(candidate, 10**-k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import functionals
from .distributions import (
    PROBE_DECADES,
    Distribution,
    Exponential,
    GEV,
    GPD,
    Normal,
    Pareto,
    PointMass,
    Uniform,
    compare_descriptors,
    mix,
    mixture,
)

LIGHTER_BELOW = 1e-6
HEAVIER_ABOVE = 1e6
EQUIVALENCE_RTOL = 1e-3
DEFAULT_LAMBDAS = (0.01, 0.1, 0.5, 0.9, 0.99)


class Verdict(str, Enum):
    FIRST_HEAVIER = "FirstHeavier"
    SECOND_HEAVIER = "SecondHeavier"
    TAIL_EQUIVALENT = "TailEquivalent"
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value

    def flipped(self) -> Verdict:
        return {Verdict.FIRST_HEAVIER: Verdict.SECOND_HEAVIER,
                Verdict.SECOND_HEAVIER: Verdict.FIRST_HEAVIER}.get(self, self)


@dataclass(frozen=True)
class TailComparison:
    verdict: Verdict
    ratio: float | None = None
    evidence: tuple = ()  # ((x_k, sf_F(x_k) / sf_G(x_k)), ...)
    method: str = "analytic"  # analytic | endpoint | numeric

    def __post_init__(self):
        if self.verdict is Verdict.TAIL_EQUIVALENT:
            if self.ratio is None or not 0.0 < self.ratio < math.inf:
                raise ValueError("tail equivalence needs a ratio in (0, inf)")
        elif self.ratio is not None:
            raise ValueError("only tail-equivalent comparisons carry a ratio")

    @property
    def equivalent(self) -> bool:
        return self.verdict is Verdict.TAIL_EQUIVALENT


def survival_ratio_probe(F: Distribution, G: Distribution):
    """``(x_k, sf_F(x_k) / sf_G(x_k))`` at quantiles of the heavier-looking law."""
    q = 10.0 ** -np.arange(1, PROBE_DECADES + 1)
    xf, xg = F._isf(q), G._isf(q)
    x = xf if xf[-1] >= xg[-1] else xg
    sf_f, sf_g = F._sf(x), G._sf(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sf_g > 0, sf_f / np.where(sf_g > 0, sf_g, 1.0),
                         np.where(sf_f > 0, math.inf, math.nan))
    keep = ~np.isnan(ratio)
    return tuple((float(a), float(b)) for a, b in zip(x[keep], ratio[keep]))


def _classify(evidence) -> tuple[Verdict, float | None]:
    if not evidence:
        return Verdict.UNDETERMINED, None
    r = np.array([b for _, b in evidence])
    last = r[-1]
    if last < LIGHTER_BELOW:
        return Verdict.SECOND_HEAVIER, None
    if last > HEAVIER_ABOVE:
        return Verdict.FIRST_HEAVIER, None
    if r.size >= 3:
        change = np.max(np.abs(np.diff(r[-3:]))) / abs(last)
        if change < EQUIVALENCE_RTOL:
            return Verdict.TAIL_EQUIVALENT, float(last)
    return Verdict.UNDETERMINED, None


def numeric_tail_compare(F: Distribution, G: Distribution) -> TailComparison:
    """Tail comparison from the survival-ratio probe alone."""
    endpoint = _endpoint_verdict(F, G)
    if endpoint is not None:
        return endpoint
    evidence = survival_ratio_probe(F, G)
    verdict, ratio = _classify(evidence)
    return TailComparison(verdict, ratio, evidence, "numeric")


def _endpoint_verdict(F, G):
    if F.upper == G.upper:
        return None
    verdict = Verdict.FIRST_HEAVIER if F.upper > G.upper else Verdict.SECOND_HEAVIER
    return TailComparison(verdict, method="endpoint")


def tail_compare(F: Distribution, G: Distribution) -> TailComparison:
    """Decide ``F <_t G``, ``G <_t F`` or ``F ~_t G``.

    Unequal endpoints decide first. Equal endpoints use the analytic tail
    descriptors when both exist and fall back to the numeric probe otherwise.
    The probe table is attached as evidence either way.
    """
    endpoint = _endpoint_verdict(F, G)
    if endpoint is not None:
        return endpoint
    evidence = survival_ratio_probe(F, G)
    a, b = F.tail, G.tail
    if a is None or b is None:
        verdict, ratio = _classify(evidence)
        return TailComparison(verdict, ratio, evidence, "numeric")
    sign, ratio = compare_descriptors(a, b)
    if sign > 0:
        return TailComparison(Verdict.FIRST_HEAVIER, None, evidence)
    if sign < 0:
        return TailComparison(Verdict.SECOND_HEAVIER, None, evidence)
    return TailComparison(Verdict.TAIL_EQUIVALENT, float(ratio), evidence)


def tail_equivalent(F: Distribution, G: Distribution) -> float | None:
    """``lim sf_F / sf_G`` when ``F`` and ``G`` are tail equivalent, else ``None``."""
    res = tail_compare(F, G)
    return res.ratio if res.equivalent else None


# ---------------------------------------------------------------------------
# Tail-order respect (max-functional witness)
# ---------------------------------------------------------------------------


ANALYTIC_PAIRS = (
    (Uniform(0, 1), Uniform(0, 2)),
    (Uniform(0, 1), Uniform(0.5, 1)),
    (PointMass(1.0), PointMass(5.0)),
    (Uniform(0, 1), PointMass(1.0)),
    (GPD(-0.5, 1.0), Uniform(0, 2)),
    (Pareto(2, 1), Pareto(3, 1)),
    (Pareto(2, 1), Pareto(2, 2)),
    (Pareto(3, 1), GPD(0.5, 1.0)),
    (GEV(0.25), Pareto(4, 1)),
    (Exponential(1), Pareto(2, 1)),
    (Exponential(1), Exponential(2)),
    (Normal(0, 1), Exponential(1)),
    (Normal(0, 1), Normal(0, 2)),
    (Uniform(0, 1), Exponential(1)),
    (mix(Pareto(3, 1), Pareto(2, 1), 0.5), Pareto(2, 1)),
    (mixture(((0.3, Exponential(1)), (0.7, Normal(0, 1)))), Pareto(3, 1)),
)


@dataclass(frozen=True)
class RespectRow:
    first: Distribution
    second: Distribution
    comparison: TailComparison
    t_first: float | None
    t_second: float | None
    sign_ok: bool | None
    max_rule: tuple = ()  # ((lambda, T(mix), ok), ...)
    status: str = "pass"  # pass | fail | inconclusive


@dataclass(frozen=True)
class RespectReport:
    functional: str
    rows: tuple = field(default_factory=tuple)

    @property
    def violations(self) -> tuple:
        return tuple(r for r in self.rows if r.status == "fail")

    @property
    def n_inconclusive(self) -> int:
        return sum(r.status == "inconclusive" for r in self.rows)

    @property
    def passed(self) -> bool:
        return not self.violations


def _sign_ok(tag, verdict, tf, tg):
    if verdict is Verdict.SECOND_HEAVIER:
        return tf <= tg or functionals.same_value(tag, tf, tg)
    if verdict is Verdict.FIRST_HEAVIER:
        return tf >= tg or functionals.same_value(tag, tf, tg)
    return functionals.same_value(tag, tf, tg)


def tail_order_respect_check(T: str, pairs=None, lambdas=DEFAULT_LAMBDAS) -> RespectReport:
    """Check that ``T`` respects ``<_t`` on each pair and obeys the max rule.

    For every pair the sign of ``T(F) - T(G)`` must follow the tail order
    (zero for tail-equivalent pairs), and
    ``T(mix(F, G, lam)) == max(T(F), T(G))`` must hold on the ``lambdas``
    grid. Undefined functional values make a row inconclusive, as do pairs
    with a negative EVI when ``T == "evi"``; a row whose only gap is an
    undefined mixture value is inconclusive too.
    """
    functionals.check_tag(T)
    rows = []
    for F, G in (ANALYTIC_PAIRS if pairs is None else pairs):
        cmp = tail_compare(F, G)
        tf, tg = functionals.evaluate(T, F), functionals.evaluate(T, G)
        undefined = tf is None or tg is None or cmp.verdict is Verdict.UNDETERMINED
        # the EVI orders tails only on the class gamma >= 0
        if T == "evi" and not undefined and min(tf, tg) < 0:
            undefined = True
        if undefined:
            rows.append(RespectRow(F, G, cmp, tf, tg, None, status="inconclusive"))
            continue
        sign_ok = _sign_ok(T, cmp.verdict, tf, tg)
        target = max(tf, tg)
        checks = []
        for lam in lambdas:
            tm = functionals.evaluate(T, mix(F, G, lam))
            checks.append((float(lam), tm, tm is not None and functionals.same_value(T, tm, target)))
        if any(c[1] is None for c in checks):
            # an unconverged probe on a mixture is no evidence either way
            status = "fail" if not sign_ok or not all(c[2] for c in checks if c[1] is not None) \
                else "inconclusive"
        else:
            status = "pass" if sign_ok and all(c[2] for c in checks) else "fail"
        rows.append(RespectRow(F, G, cmp, tf, tg, sign_ok, tuple(checks), status))
    return RespectReport(T, tuple(rows))
