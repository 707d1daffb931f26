"""Proper scoring rules, tail max-functionals and the counterexamples
showing that expected scores cannot separate tail behaviour."""

from .distributions import (
    GEV,
    GPD,
    Empirical,
    Exponential,
    Mixture,
    Normal,
    Pareto,
    PointMass,
    TailProfile,
    Uniform,
    cdf,
    evi,
    m_index,
    mix,
    mixture,
    profile,
    quantile,
    rv_index,
    sample,
    survival,
    upper_endpoint,
)
from .lab import (
    crossing_lambda,
    diagonal_bound_check,
    epsilon_mixture,
    level_set_convexity_check,
    mc_power_study,
    mixture_continuity_probe,
    score_gap_curve,
)
from .scoring import (
    CRPS,
    WCRPS,
    ExpectedScore,
    Pinball,
    SquaredError,
    expected_score_fn,
    expected_score_rule,
    mc_expected_score,
    score_fn,
    score_rule,
)
from .specs import format_distribution, parse_distribution, parse_function, parse_rule
from .tail_analysis import Verdict, tail_compare, tail_equivalent, tail_order_respect_check

__version__ = "0.1.0"
