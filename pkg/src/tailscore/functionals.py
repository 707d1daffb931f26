"""Named statistical functionals used by the lab and tail-order checks."""

from __future__ import annotations

import math

from .distributions import Distribution, m_index
from .errors import InvalidParameterError

FUNCTIONAL_TAGS = ("upper_endpoint", "evi", "rv_index", "m_index", "mean")

# numeric probes are only accurate to the probe's convergence tolerance
TOLERANCES = {"m_index": 1e-3, "mean": 1e-12}


def check_tag(tag: str) -> str:
    if tag not in FUNCTIONAL_TAGS:
        raise InvalidParameterError(
            f"unknown functional {tag!r}; expected one of {', '.join(FUNCTIONAL_TAGS)}")
    return tag


def evaluate(tag: str, F: Distribution):
    """Value of the functional, or ``None`` where it is undefined."""
    check_tag(tag)
    if tag == "upper_endpoint":
        return F.upper
    if tag == "evi":
        return F.evi
    if tag == "rv_index":
        return F.rv_index
    if tag == "m_index":
        return m_index(F)
    return F.mean if F.moment_exists(1) else None


def same_value(tag: str, a, b) -> bool:
    """Equality up to the functional's tolerance (exact for analytic tags)."""
    if a == b:
        return True
    if a is None or b is None or math.isinf(a) or math.isinf(b):
        return False
    tol = TOLERANCES.get(tag, 0.0)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
