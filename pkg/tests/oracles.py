"""Independent reference values.

The oracle re-derives expected scores by brute-force double quadrature
with scipy.stats distributions and ``scipy.integrate.quad``; it shares no
code with the package. ``python tests/oracles.py`` recomputes the frozen
constants below.
"""

import math

import numpy as np
from scipy import integrate, stats

# (label, rule threshold q or None for CRPS, forecast, truth) using scipy.stats
# frozen distributions; mixtures are lists of (weight, frozen)
CONFIGS = {
    "crps_unif_unif": (None, stats.uniform(0, 1), stats.uniform(0, 1)),
    "crps_norm_exp": (None, stats.norm(0, 1), stats.expon()),
    "wcrps1_pareto2_exp": (1.0, stats.pareto(2), stats.expon()),
    "crps_gpd_norm": (None, stats.genpareto(0.25), stats.norm(1, 2)),
    "wcrps05_mix_gev": (0.5, [(0.3, stats.uniform(0, 2)), (0.7, stats.expon())], stats.genextreme(-0.1)),
    "crps_exp_pareto3": (None, stats.expon(), stats.pareto(3)),
}

# frozen output of oracle_expected_score for each config
FROZEN = {
    "crps_unif_unif": 0.16666666666666669,
    "crps_norm_exp": 0.7568515609853563,
    "wcrps1_pareto2_exp": 0.4042217609531218,
    "crps_gpd_norm": 1.2353073723193937,
    "wcrps05_mix_gev": 0.4964220180589588,
    "crps_exp_pareto3": 0.5163749479473682,
}

# int (F - G)^2 for F = Pareto(2, 1), G = Exponential(1): S(F, G) - S(G, G)
# from two oracle expected scores (0.7721012021246383 - 0.5000000000000008)
CRPS_DIVERGENCE_EXP_PARETO2 = 0.2721012021246375


def _cdf(F, x):
    if isinstance(F, list):
        return sum(w * d.cdf(x) for w, d in F)
    return F.cdf(x)


def _support(F):
    if isinstance(F, list):
        lo = min(d.support()[0] for _, d in F)
        hi = max(d.support()[1] for _, d in F)
        return lo, hi
    return F.support()


def _kinks(F):
    parts = F if isinstance(F, list) else [(1.0, F)]
    return sorted({float(v) for _, d in parts for v in d.support() if math.isfinite(v)})


def _quad(f, a, b, points=()):
    """quad over [a, b], split at the given points (handles infinite ends)."""
    if a >= b:
        return 0.0
    edges = [a] + [p for p in points if a < p < b] + [b]
    return sum(integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=500)[0]
               for lo, hi in zip(edges, edges[1:]))


def oracle_score(q, F, y):
    """``int_q^inf (F(x) - 1{y <= x})^2 dx`` by direct quadrature."""
    lo, hi = _support(F)
    kinks = _kinks(F)
    q = -math.inf if q is None else q
    z = max(y, q)
    below = _quad(lambda x: _cdf(F, x) ** 2, max(q, lo), z, kinks)
    # (1 - F)^2 = 1 left of the support
    above = max(lo - z, 0.0) + _quad(lambda x: (1.0 - _cdf(F, x)) ** 2, max(z, lo), hi, kinks)
    return below + above


def oracle_expected_score(q, F, G):
    """``E_G score(F, Y)`` with the outer integral over the probability scale."""
    return integrate.quad(lambda u: oracle_score(q, F, G.ppf(u)), 0.0, 1.0,
                          epsabs=1e-11, epsrel=1e-11, limit=500)[0]


if __name__ == "__main__":
    for name, (q, F, G) in CONFIGS.items():
        print(f"    {name!r}: {oracle_expected_score(q, F, G)!r},")
