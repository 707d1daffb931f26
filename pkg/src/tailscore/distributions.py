"""Value-semantic univariate distributions.

Every family is a frozen dataclass with vectorised ``cdf``/``sf``/``ppf``/``isf``
methods. Survival functions are evaluated directly (never as ``1 - cdf``) so
that tail probes stay accurate far below 1e-12. The module also carries the
analytic tail characteristics used throughout the package: upper endpoint,
extreme value index, index of regular variation and a numeric M-index probe.

A small closed set of families is supported::

    Pareto, GPD, GEV, Exponential, Uniform, Normal, PointMass,
    Mixture, Empirical

Mixtures flatten on construction, so a mixture never contains a mixture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from .errors import InvalidParameterError

INF = math.inf

# Quantile levels used as quadrature landmarks; mirrored by isf on the upper side.
_LANDMARK_LEVELS = (1e-12, 1e-9, 1e-6, 1e-3, 1e-2, 0.1, 0.25, 0.5)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(res, scalar):
    if scalar:
        return float(res)
    return res


def _check_finite(name, value):
    if not isinstance(value, (int, float, np.integer, np.floating)) or isinstance(value, bool):
        raise InvalidParameterError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


def _check_positive(name, value):
    _check_finite(name, value)
    if value <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {value!r}")


# ---------------------------------------------------------------------------
# Tail descriptors
# ---------------------------------------------------------------------------

_TIER = {"gaussian": 0, "exponential": 1, "power": 2}


@dataclass(frozen=True)
class TailDescriptor:
    """Leading-order shape of the survival function at the upper endpoint.

    kind
        ``"endpoint"``: finite endpoint, ``sf(x) ~ const * (endpoint - x)**exponent``
        (``exponent == 0`` is an atom at the endpoint).
        ``"power"``: ``sf(x) ~ const * x**exponent`` (regular variation).
        ``"exponential"``: ``sf(x) ~ const * exp(-exponent * x)``.
        ``"gaussian"``: normal-type decay with scale ``exponent`` and location ``shift``.
    """

    endpoint: float
    kind: str
    exponent: float
    const: float = 1.0
    shift: float = 0.0


def compare_descriptors(a: TailDescriptor, b: TailDescriptor):
    """Order two tails.

    Returns ``(sign, ratio)`` where ``sign`` is +1 if ``a`` is heavier, -1 if
    ``b`` is heavier and 0 for tail equivalence, in which case ``ratio`` is
    ``lim sf_a / sf_b``.
    """
    if a.endpoint != b.endpoint:
        return (1 if a.endpoint > b.endpoint else -1), None
    if a.kind == "endpoint":
        if a.exponent != b.exponent:
            return (1 if a.exponent < b.exponent else -1), None
        return 0, a.const / b.const
    ta, tb = _TIER[a.kind], _TIER[b.kind]
    if ta != tb:
        return (1 if ta > tb else -1), None
    if a.kind == "power":
        if a.exponent != b.exponent:
            return (1 if a.exponent > b.exponent else -1), None
    elif a.kind == "exponential":
        if a.exponent != b.exponent:
            return (1 if a.exponent < b.exponent else -1), None
    else:
        if a.exponent != b.exponent:
            return (1 if a.exponent > b.exponent else -1), None
        if a.shift != b.shift:
            return (1 if a.shift > b.shift else -1), None
    return 0, a.const / b.const


# ---------------------------------------------------------------------------
# Base class
# ---------------------------------------------------------------------------


class Distribution:
    """Common interface; subclasses implement the underscored array methods."""

    # -- array kernels, overridden per family ---------------------------------
    def _cdf(self, x):
        raise NotImplementedError

    def _sf(self, x):
        raise NotImplementedError

    def _ppf(self, p):
        raise NotImplementedError

    def _isf(self, q):
        raise NotImplementedError

    # -- public vectorised API ------------------------------------------------
    def cdf(self, x):
        arr, scalar = _as_array(x)
        return _out(self._cdf(arr), scalar)

    def sf(self, x):
        arr, scalar = _as_array(x)
        return _out(self._sf(arr), scalar)

    def ppf(self, p):
        """Left-continuous generalised inverse ``inf{x : cdf(x) >= p}``."""
        arr, scalar = _as_array(p)
        if np.any(~((arr > 0) & (arr < 1))):
            raise InvalidParameterError("quantile level must lie in the open interval (0, 1)")
        return _out(self._ppf(arr), scalar)

    def isf(self, q):
        """``inf{x : sf(x) <= q}``; accurate for tiny ``q``."""
        arr, scalar = _as_array(q)
        if np.any(~((arr > 0) & (arr < 1))):
            raise InvalidParameterError("tail probability must lie in the open interval (0, 1)")
        return _out(self._isf(arr), scalar)

    # -- structural properties -----------------------------------------------
    @property
    def lower(self) -> float:
        raise NotImplementedError

    @property
    def upper(self) -> float:
        raise NotImplementedError

    @property
    def atoms(self) -> tuple:
        """Point masses as ``((location, mass), ...)``."""
        return ()

    @property
    def is_step(self) -> bool:
        """True when the CDF is a pure step function."""
        return False

    def moment_exists(self, order: float) -> bool:
        return True

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def evi(self):
        return None

    @property
    def rv_index(self):
        return None

    @property
    def tail(self):
        return None

    @cached_property
    def breakpoints(self) -> np.ndarray:
        """Finite kinks and quantile landmarks, sorted and unique."""
        levels = np.array(_LANDMARK_LEVELS)
        pts = [self._ppf(levels), self._isf(levels)]
        pts.append(np.array([v for v in (self.lower, self.upper) if math.isfinite(v)]))
        pts.append(np.array([a for a, _ in self.atoms]))
        return np.unique(np.concatenate(pts))

    def step_table(self):
        """``(locations, cumulative_probabilities)`` of a step CDF."""
        if not self.is_step:
            raise InvalidParameterError(f"{self!r} is not a step distribution")
        locs = np.array([a for a, _ in self.atoms])
        masses = np.array([m for _, m in self.atoms])
        cum = np.cumsum(masses)
        cum[-1] = 1.0
        return locs, cum


# ---------------------------------------------------------------------------
# Parametric families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pareto(Distribution):
    """Survival ``(scale / x) ** alpha`` for ``x >= scale``."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("scale", self.scale)

    def _sf(self, x):
        with np.errstate(divide="ignore"):
            ratio = self.scale / np.maximum(x, self.scale)
        return np.where(x > self.scale, ratio**self.alpha, 1.0)

    def _cdf(self, x):
        sf = self._sf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            near = -np.expm1(self.alpha * np.log(self.scale / np.maximum(x, self.scale)))
        return np.where(sf > 0.5, near, 1.0 - sf)

    def _ppf(self, p):
        return self.scale * np.exp(-np.log1p(-p) / self.alpha)

    def _isf(self, q):
        return self.scale * q ** (-1.0 / self.alpha)

    @property
    def lower(self):
        return float(self.scale)

    @property
    def upper(self):
        return INF

    def moment_exists(self, order):
        return self.alpha > order

    @property
    def mean(self):
        if self.alpha <= 1:
            return INF
        return self.alpha * self.scale / (self.alpha - 1)

    @property
    def evi(self):
        return 1.0 / self.alpha

    @property
    def rv_index(self):
        return -float(self.alpha)

    @property
    def tail(self):
        return TailDescriptor(INF, "power", -float(self.alpha), self.scale**self.alpha)


def _gpd_sf_body(gamma, z):
    # (1 + gamma z)^(-1/gamma), z >= 0 inside the support
    if gamma == 0:
        return np.exp(-z)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(-np.log1p(gamma * z) / gamma)


@dataclass(frozen=True)
class GPD(Distribution):
    """Generalised Pareto with shape ``gamma``, scale ``sigma``, location ``mu``."""

    gamma: float
    sigma: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        _check_finite("gamma", self.gamma)
        _check_positive("sigma", self.sigma)
        _check_finite("mu", self.mu)

    def _z(self, x):
        z = (x - self.mu) / self.sigma
        if self.gamma < 0:
            z = np.minimum(z, -1.0 / self.gamma)
        return np.maximum(z, 0.0)

    def _sf(self, x):
        return _gpd_sf_body(self.gamma, self._z(x))

    def _cdf(self, x):
        z = self._z(x)
        if self.gamma == 0:
            return -np.expm1(-z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -np.expm1(-np.log1p(self.gamma * z) / self.gamma)

    def _from_log_tail(self, log_tail):
        # x with log(sf(x)) = log_tail
        if self.gamma == 0:
            return self.mu - self.sigma * log_tail
        return self.mu + self.sigma * np.expm1(-self.gamma * log_tail) / self.gamma

    def _ppf(self, p):
        return self._from_log_tail(np.log1p(-p))

    def _isf(self, q):
        return self._from_log_tail(np.log(q))

    @property
    def lower(self):
        return float(self.mu)

    @property
    def upper(self):
        if self.gamma < 0:
            return self.mu - self.sigma / self.gamma
        return INF

    def moment_exists(self, order):
        return self.gamma * order < 1

    @property
    def mean(self):
        if self.gamma >= 1:
            return INF
        return self.mu + self.sigma / (1 - self.gamma)

    @property
    def evi(self):
        return float(self.gamma)

    @property
    def rv_index(self):
        if self.gamma > 0:
            return -1.0 / self.gamma
        if self.gamma == 0:
            return -INF
        return None

    @property
    def tail(self):
        g, s = self.gamma, self.sigma
        if g > 0:
            return TailDescriptor(INF, "power", -1.0 / g, (g / s) ** (-1.0 / g))
        if g == 0:
            return TailDescriptor(INF, "exponential", 1.0 / s, math.exp(self.mu / s))
        beta = -1.0 / g
        return TailDescriptor(self.upper, "endpoint", beta, (-g / s) ** beta)


@dataclass(frozen=True)
class GEV(Distribution):
    """Generalised extreme value, ``cdf = exp(-(1 + gamma z) ** (-1/gamma))``."""

    gamma: float
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _check_finite("gamma", self.gamma)
        _check_finite("mu", self.mu)
        _check_positive("sigma", self.sigma)

    def _t(self, x):
        z = (x - self.mu) / self.sigma
        g = self.gamma
        if g == 0:
            return np.exp(-z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            base = 1.0 + g * z
            t = np.exp(-np.log(np.maximum(base, 0.0)) / g)
        return t

    def _cdf(self, x):
        with np.errstate(over="ignore"):
            return np.exp(-self._t(x))

    def _sf(self, x):
        with np.errstate(over="ignore"):
            return -np.expm1(-self._t(x))

    def _from_t(self, t):
        if self.gamma == 0:
            return self.mu - self.sigma * np.log(t)
        return self.mu + self.sigma * np.expm1(-self.gamma * np.log(t)) / self.gamma

    def _ppf(self, p):
        return self._from_t(-np.log(p))

    def _isf(self, q):
        return self._from_t(-np.log1p(-q))

    @property
    def lower(self):
        if self.gamma > 0:
            return self.mu - self.sigma / self.gamma
        return -INF

    @property
    def upper(self):
        if self.gamma < 0:
            return self.mu - self.sigma / self.gamma
        return INF

    def moment_exists(self, order):
        return self.gamma * order < 1

    @property
    def mean(self):
        g = self.gamma
        if g >= 1:
            return INF
        if g == 0:
            return self.mu + self.sigma * np.euler_gamma
        return self.mu + self.sigma * (special.gamma(1 - g) - 1) / g

    @property
    def evi(self):
        return float(self.gamma)

    @property
    def rv_index(self):
        if self.gamma > 0:
            return -1.0 / self.gamma
        if self.gamma == 0:
            return -INF
        return None

    @property
    def tail(self):
        g, s = self.gamma, self.sigma
        if g > 0:
            return TailDescriptor(INF, "power", -1.0 / g, (g / s) ** (-1.0 / g))
        if g == 0:
            return TailDescriptor(INF, "exponential", 1.0 / s, math.exp(self.mu / s))
        beta = -1.0 / g
        return TailDescriptor(self.upper, "endpoint", beta, (-g / s) ** beta)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float = 1.0

    def __post_init__(self):
        _check_positive("rate", self.rate)

    def _cdf(self, x):
        return -np.expm1(-self.rate * np.maximum(x, 0.0))

    def _sf(self, x):
        return np.exp(-self.rate * np.maximum(x, 0.0))

    def _ppf(self, p):
        return -np.log1p(-p) / self.rate

    def _isf(self, q):
        return -np.log(q) / self.rate

    @property
    def lower(self):
        return 0.0

    @property
    def upper(self):
        return INF

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def evi(self):
        return 0.0

    @property
    def rv_index(self):
        return -INF

    @property
    def tail(self):
        return TailDescriptor(INF, "exponential", float(self.rate), 1.0)


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        _check_finite("a", self.a)
        _check_finite("b", self.b)
        if not self.a < self.b:
            raise InvalidParameterError(f"uniform needs a < b, got a={self.a}, b={self.b}")

    def _cdf(self, x):
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def _sf(self, x):
        return np.clip((self.b - x) / (self.b - self.a), 0.0, 1.0)

    def _ppf(self, p):
        return self.a + p * (self.b - self.a)

    def _isf(self, q):
        return self.b - q * (self.b - self.a)

    @property
    def lower(self):
        return float(self.a)

    @property
    def upper(self):
        return float(self.b)

    @property
    def mean(self):
        return 0.5 * (self.a + self.b)

    @property
    def evi(self):
        return -1.0

    @property
    def tail(self):
        return TailDescriptor(float(self.b), "endpoint", 1.0, 1.0 / (self.b - self.a))


@dataclass(frozen=True)
class Normal(Distribution):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _check_finite("mu", self.mu)
        _check_positive("sigma", self.sigma)

    def _cdf(self, x):
        return special.ndtr((x - self.mu) / self.sigma)

    def _sf(self, x):
        return special.ndtr((self.mu - x) / self.sigma)

    def _ppf(self, p):
        return self.mu + self.sigma * special.ndtri(p)

    def _isf(self, q):
        return self.mu - self.sigma * special.ndtri(q)

    @property
    def lower(self):
        return -INF

    @property
    def upper(self):
        return INF

    @property
    def mean(self):
        return float(self.mu)

    @property
    def evi(self):
        return 0.0

    @property
    def rv_index(self):
        return -INF

    @property
    def tail(self):
        return TailDescriptor(INF, "gaussian", float(self.sigma), 1.0, float(self.mu))


@dataclass(frozen=True)
class PointMass(Distribution):
    c: float = 0.0

    def __post_init__(self):
        _check_finite("c", self.c)

    def _cdf(self, x):
        return np.where(x >= self.c, 1.0, 0.0)

    def _sf(self, x):
        return np.where(x >= self.c, 0.0, 1.0)

    def _ppf(self, p):
        return np.full_like(p, float(self.c))

    def _isf(self, q):
        return np.full_like(q, float(self.c))

    @property
    def lower(self):
        return float(self.c)

    @property
    def upper(self):
        return float(self.c)

    @property
    def atoms(self):
        return ((float(self.c), 1.0),)

    @property
    def is_step(self):
        return True

    @property
    def mean(self):
        return float(self.c)

    @property
    def tail(self):
        return TailDescriptor(float(self.c), "endpoint", 0.0, 1.0)

    @cached_property
    def breakpoints(self):
        return np.array([float(self.c)])


@dataclass(frozen=True)
class Empirical(Distribution):
    """Step CDF with mass ``1/n`` at each sample point."""

    sample: tuple
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        values = tuple(sorted(float(v) for v in np.asarray(self.sample, dtype=float).ravel()))
        if not values:
            raise InvalidParameterError("empirical sample must be nonempty")
        if not all(math.isfinite(v) for v in values):
            raise InvalidParameterError("empirical sample must contain finite values only")
        object.__setattr__(self, "sample", values)

    @cached_property
    def _arr(self):
        return np.array(self.sample)

    @property
    def n(self):
        return len(self.sample)

    def _cdf(self, x):
        return np.searchsorted(self._arr, x, side="right") / self.n

    def _sf(self, x):
        return (self.n - np.searchsorted(self._arr, x, side="right")) / self.n

    def _ppf(self, p):
        cum = np.arange(1, self.n + 1) / self.n
        idx = np.minimum(np.searchsorted(cum, p, side="left"), self.n - 1)
        return self._arr[idx]

    def _isf(self, q):
        tail = np.arange(self.n) / self.n  # increasing: sf just after the (n-1-i)-th point
        count = np.searchsorted(tail, q, side="right")
        return self._arr[self.n - count]

    @property
    def lower(self):
        return self.sample[0]

    @property
    def upper(self):
        return self.sample[-1]

    @cached_property
    def atoms(self):
        locs, counts = np.unique(self._arr, return_counts=True)
        return tuple((float(a), float(c) / self.n) for a, c in zip(locs, counts))

    @property
    def is_step(self):
        return True

    @property
    def mean(self):
        return float(np.mean(self._arr))

    @property
    def tail(self):
        return TailDescriptor(self.upper, "endpoint", 0.0, self.atoms[-1][1])

    @cached_property
    def breakpoints(self):
        return np.unique(self._arr)


# ---------------------------------------------------------------------------
# Mixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mixture(Distribution):
    """Finite mixture ``sum_i w_i F_i`` with positive weights summing to one."""

    components: tuple

    def __post_init__(self):
        flat = []
        for item in self.components:
            try:
                w, dist = item
            except (TypeError, ValueError):
                raise InvalidParameterError(
                    f"mixture components must be (weight, distribution) pairs, got {item!r}"
                ) from None
            _check_positive("mixture weight", w)
            if not isinstance(dist, Distribution):
                raise InvalidParameterError(f"{dist!r} is not a distribution")
            if isinstance(dist, Mixture):
                flat.extend((float(w) * wi, di) for wi, di in dist.components)
            else:
                flat.append((float(w), dist))
        if not flat:
            raise InvalidParameterError("mixture needs at least one component")
        total = math.fsum(w for w, _ in flat)
        # weights already summing to one within 1e-12 are kept verbatim
        if abs(total - 1.0) > 1e-12:
            flat = [(w / total, d) for w, d in flat]
        object.__setattr__(self, "components", tuple(flat))

    @property
    def weights(self):
        return tuple(w for w, _ in self.components)

    def _cdf(self, x):
        out = np.zeros_like(x)
        for w, d in self.components:
            out = out + w * d._cdf(x)
        return np.minimum(out, 1.0)

    def _sf(self, x):
        out = np.zeros_like(x)
        for w, d in self.components:
            out = out + w * d._sf(x)
        return np.minimum(out, 1.0)

    def _bisect(self, lo, hi, ok):
        # smallest float x in [lo, hi] with ok(x); ok(hi) assumed
        done = ok(lo)
        hi = np.where(done, lo, hi)
        for _ in range(2200):
            mid = lo + 0.5 * (hi - lo)
            active = (mid > lo) & (mid < hi)
            if not active.any():
                break
            good = ok(mid)
            hi = np.where(active & good, mid, hi)
            lo = np.where(active & ~good, mid, lo)
        return hi

    def _ppf(self, p):
        p = np.asarray(p, dtype=float)
        cands = np.array([d._ppf(p) for _, d in self.components])
        lo, hi = cands.min(axis=0), cands.max(axis=0)
        q = 1.0 - p
        upper_half = p > 0.5

        def ok(x):
            return np.where(upper_half, self._sf(x) <= q, self._cdf(x) >= p)

        return self._bisect(lo, hi, ok)

    def _isf(self, q):
        q = np.asarray(q, dtype=float)
        cands = np.array([d._isf(q) for _, d in self.components])
        lo, hi = cands.min(axis=0), cands.max(axis=0)
        p = 1.0 - q
        small = q < 0.5

        def ok(x):
            return np.where(small, self._sf(x) <= q, self._cdf(x) >= p)

        return self._bisect(lo, hi, ok)

    @property
    def lower(self):
        return min(d.lower for _, d in self.components)

    @property
    def upper(self):
        return max(d.upper for _, d in self.components)

    @cached_property
    def atoms(self):
        acc = {}
        for w, d in self.components:
            for loc, m in d.atoms:
                acc[loc] = acc.get(loc, 0.0) + w * m
        return tuple(sorted(acc.items()))

    @property
    def is_step(self):
        return all(d.is_step for _, d in self.components)

    def moment_exists(self, order):
        return all(d.moment_exists(order) for _, d in self.components)

    @property
    def mean(self):
        means = [d.mean for _, d in self.components]
        if any(math.isinf(m) for m in means):
            return INF
        return math.fsum(w * m for (w, _), m in zip(self.components, means))

    @cached_property
    def breakpoints(self):
        return np.unique(np.concatenate([d.breakpoints for _, d in self.components]))

    @cached_property
    def _heaviest(self):
        """Indices of the tail-dominant components and the combined descriptor."""
        best, total, top = None, 0.0, []
        for i, (w, d) in enumerate(self.components):
            desc = d.tail
            if desc is None:
                return None
            if best is None:
                best, total, top = desc, w * desc.const, [i]
                continue
            sign, _ = compare_descriptors(desc, best)
            if sign > 0:
                best, total, top = desc, w * desc.const, [i]
            elif sign == 0:
                total += w * desc.const
                top.append(i)
        return tuple(top), replace(best, const=total)

    @property
    def tail(self):
        heavy = self._heaviest
        return None if heavy is None else heavy[1]

    @property
    def evi(self):
        dists = [d for _, d in self.components]
        gammas = [d.evi for d in dists]
        if all(g is not None for g in gammas):
            if all(g > 0 for g in gammas):
                return max(gammas)
            if all(g < 0 for g in gammas) and len({d.upper for d in dists}) == 1:
                return min(gammas)
        heavy = self._heaviest
        if heavy is None:
            return None
        top = {gammas[i] for i in heavy[0]}
        if len(top) != 1 or None in top:
            return None
        return top.pop()

    @property
    def rv_index(self):
        if not math.isinf(self.upper):
            return None
        # components with a finite endpoint have eventually vanishing survival
        rhos = [d.rv_index for _, d in self.components if math.isinf(d.upper)]
        if any(r is None for r in rhos):
            return None
        return max(rhos)


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def cdf(F: Distribution, x):
    return F.cdf(x)


def survival(F: Distribution, x):
    return F.sf(x)


def quantile(F: Distribution, p):
    return F.ppf(p)


def upper_endpoint(F: Distribution) -> float:
    return F.upper


def lower_endpoint(F: Distribution) -> float:
    return F.lower


def evi(F: Distribution):
    return F.evi


def rv_index(F: Distribution):
    return F.rv_index


def mean(F: Distribution) -> float:
    return F.mean


def uniform_draws(n: int, seed) -> np.ndarray:
    """``n`` uniforms in the open interval (0, 1), deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return (rng.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53


def sample(F: Distribution, n: int, seed=0) -> np.ndarray:
    """Inverse-transform sample of size ``n``; upper half drawn through ``isf``."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"sample size must be a positive integer, got {n!r}")
    u = uniform_draws(int(n), seed)
    out = np.empty_like(u)
    low = u <= 0.5
    if low.any():
        out[low] = F._ppf(u[low])
    if (~low).any():
        out[~low] = F._isf(1.0 - u[~low])
    return out


def mix(F0: Distribution, F1: Distribution, lam: float) -> Distribution:
    """``lam * F1 + (1 - lam) * F0``."""
    _check_finite("lambda", lam)
    if not 0.0 <= lam <= 1.0:
        raise InvalidParameterError(f"mixing weight must lie in [0, 1], got {lam!r}")
    if lam == 0.0:
        return F0
    if lam == 1.0:
        return F1
    return Mixture(((1.0 - lam, F0), (lam, F1)))


def mixture(components: Iterable[tuple[float, Distribution]]) -> Mixture:
    return Mixture(tuple(components))


# ---------------------------------------------------------------------------
# M-index probe and tail profile
# ---------------------------------------------------------------------------

PROBE_DECADES = 12


@dataclass(frozen=True)
class MIndexProbe:
    """Outcome of the log-log slope probe.

    status is one of ``converged``, ``diverged`` (value ``-inf``),
    ``undetermined`` or ``undefined`` (bounded support).
    """

    value: float | None
    status: str
    x: tuple = ()
    slopes: tuple = ()


def probe_m_index(F: Distribution, rtol: float = 1e-3, diverge_below: float = -20.0) -> MIndexProbe:
    if not math.isinf(F.upper):
        return MIndexProbe(None, "undefined")
    q = 10.0 ** -np.arange(1, PROBE_DECADES + 1)
    x_raw = F._isf(q)
    # slopes are shift invariant in the limit; the shift keeps log(x) defined
    x = x_raw if x_raw[0] > 0 else x_raw + (1.0 - x_raw[0])
    with np.errstate(divide="ignore"):
        logsf = np.log(F._sf(x_raw))
    dx = np.diff(np.log(x))
    keep = dx > 0
    slopes = np.diff(logsf)[keep] / dx[keep]
    evidence = dict(x=tuple(float(v) for v in x), slopes=tuple(float(s) for s in slopes))
    if slopes.size < 4 or not np.all(np.isfinite(slopes)):
        return MIndexProbe(None, "undetermined", **evidence)
    last, prev = slopes[-1], slopes[-2]
    if abs(last - prev) < rtol * abs(last):
        return MIndexProbe(float(last), "converged", **evidence)
    if last < diverge_below and np.all(np.diff(slopes[-4:]) < 0):
        return MIndexProbe(-INF, "diverged", **evidence)
    # slopes of tails like GEV(0 < gamma < 1/2) approach the limit geometrically
    acc = _aitken(slopes[-4:])
    if acc is not None and abs(acc[-1] - acc[-2]) < rtol * abs(acc[-1]):
        return MIndexProbe(float(acc[-1]), "converged", **evidence)
    return MIndexProbe(None, "undetermined", **evidence)


def _aitken(s):
    d1 = np.diff(s)
    d2 = np.diff(d1)
    if np.any(d2 == 0):
        return None
    return s[2:] - d1[1:] ** 2 / d2


def m_index(F: Distribution):
    return probe_m_index(F).value


@dataclass(frozen=True)
class TailProfile:
    upper_endpoint: float
    evi: float | None
    rv_index: float | None
    m_index: float | None


def profile(F: Distribution) -> TailProfile:
    return TailProfile(F.upper, F.evi, F.rv_index, m_index(F))


FAMILIES: Sequence[type] = (
    Pareto,
    GPD,
    GEV,
    Exponential,
    Uniform,
    Normal,
    PointMass,
    Mixture,
    Empirical,
)
