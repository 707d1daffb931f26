"""Text grammar for distributions, scoring rules and scoring functions.

Distributions::

    pareto(alpha=A,scale=S)   gpd(gamma=G,sigma=S,mu=M)   gev(gamma=G,mu=M,sigma=S)
    exp(rate=R)               unif(a=A,b=B)               norm(mu=M,sigma=S)
    point(c=C)                mix(W1:SPEC1, W2:SPEC2, ...)
    emp(file=PATH)            PATH holds one decimal number per line

Arguments may also be given positionally in the order shown; parameters
with defaults (``scale``, ``sigma``, ``mu``) may be omitted. Scoring rules
are ``crps`` and ``wcrps(q=Q)``; scoring functions are ``se(k=K)`` and
``pinball(alpha=A)``.

:func:`format_distribution` prints the shortest round-trip representation
of every parameter, so ``parse_distribution(format_distribution(F)) == F``.
"""

from __future__ import annotations

import dataclasses
import math
import re
from pathlib import Path

from .distributions import (
    GEV,
    GPD,
    Distribution,
    Empirical,
    Exponential,
    Mixture,
    Normal,
    Pareto,
    PointMass,
    Uniform,
)
from .errors import InvalidParameterError, SpecParseError
from .scoring import CRPS, WCRPS, Pinball, SquaredError

FAMILIES = {
    "pareto": (Pareto, ("alpha", "scale")),
    "gpd": (GPD, ("gamma", "sigma", "mu")),
    "gev": (GEV, ("gamma", "mu", "sigma")),
    "exp": (Exponential, ("rate",)),
    "unif": (Uniform, ("a", "b")),
    "norm": (Normal, ("mu", "sigma")),
    "point": (PointMass, ("c",)),
}
_NAMES = {cls: (name, params) for name, (cls, params) in FAMILIES.items()}

RULES = {"crps": (CRPS, ()), "wcrps": (WCRPS, ("q",))}
FUNCTIONS = {"se": (SquaredError, ("k",)), "pinball": (Pinball, ("alpha",))}

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUMBER = re.compile(r"[-+]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|inf(?:inity)?|nan)", re.I)
_TOKEN = re.compile(r"[^\s(),=:]+")


class _Parser:
    def __init__(self, text: str, base_dir=None):
        self.text = text
        self.pos = 0
        self.base_dir = Path(base_dir) if base_dir is not None else None

    # -- lexical helpers ------------------------------------------------------
    def fail(self, message, pos=None):
        raise SpecParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def token(self) -> str:
        """The token at the cursor, for error messages."""
        self.skip()
        if self.pos >= len(self.text):
            return "end of input"
        m = _TOKEN.match(self.text, self.pos)
        return repr(m.group(0) if m else self.text[self.pos])

    def expect(self, ch):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}, found {self.token()}")
        self.pos += 1

    def accept(self, ch) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def name(self) -> str:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail(f"expected a name, found {self.token()}")
        self.pos = m.end()
        return m.group(0)

    def number(self) -> float:
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        follows = self.text[m.end()] if m and m.end() < len(self.text) else ""
        if not m or (follows and (follows.isalnum() or follows in "_.")):
            self.fail(f"expected a number, found {self.token()}")
        self.pos = m.end()
        return float(m.group(0))

    def end(self):
        if self.peek():
            self.fail(f"unexpected trailing input {self.token()}")

    # -- grammar --------------------------------------------------------------
    def arguments(self, family: str, params, start: int) -> dict:
        """``(k=v, ...)`` or positional values; the opening parenthesis is optional."""
        values = {}
        if not self.accept("("):
            return values
        if self.accept(")"):
            return values
        position = 0
        while True:
            self.skip()
            at = self.pos
            m = _NAME.match(self.text, self.pos)
            if m and not _NUMBER.fullmatch(m.group(0)):
                key = self.name()
                self.expect("=")
                if key not in params:
                    self.fail(f"unknown parameter {key!r} for {family}", at)
            else:
                if position >= len(params):
                    self.fail(f"too many arguments for {family}")
                key = params[position]
            if key in values:
                self.fail(f"parameter {key!r} given twice")
            values[key] = self.number()
            position += 1
            if self.accept(")"):
                return values
            self.expect(",")

    def build(self, cls, family, values, start):
        try:
            return cls(**values)
        except TypeError:
            missing = [f.name for f in dataclasses.fields(cls)
                       if f.name not in values and f.default is dataclasses.MISSING]
            self.fail(f"missing parameter(s) {', '.join(map(repr, missing))} for {family}", start)
        except InvalidParameterError as exc:
            self.fail(f"invalid {family}: {exc}", start)

    def distribution(self) -> Distribution:
        self.skip()
        start = self.pos
        family = self.name()
        if family == "mix":
            return self.mixture(start)
        if family == "emp":
            return self.empirical(start)
        if family not in FAMILIES:
            self.fail(f"unknown distribution {family!r}", start)
        cls, params = FAMILIES[family]
        if self.peek() != "(":
            self.fail(f"expected '(' after {family}, found {self.token()}")
        return self.build(cls, family, self.arguments(family, params, start), start)

    def mixture(self, start):
        self.expect("(")
        parts = []
        while True:
            self.skip()
            w_pos = self.pos
            w = self.number()
            if not (w > 0 and math.isfinite(w)):
                self.fail(f"mixture weight must be positive and finite, got {w!r}", w_pos)
            self.expect(":")
            parts.append((w, self.distribution()))
            if self.accept(")"):
                break
            self.expect(",")
        try:
            return Mixture(tuple(parts))
        except InvalidParameterError as exc:
            self.fail(f"invalid mixture: {exc}", start)

    def empirical(self, start):
        self.expect("(")
        self.skip()
        key_pos = self.pos
        if self.name() != "file":
            self.fail("emp expects file=PATH", key_pos)
        self.expect("=")
        self.skip()
        close = self.text.find(")", self.pos)
        if close < 0:
            self.fail("expected ')' to close emp(file=...)")
        raw = self.text[self.pos:close].strip()
        if not raw:
            self.fail("empty file path")
        path_pos = self.pos
        self.pos = close + 1
        path = Path(raw)
        if self.base_dir is not None and not path.is_absolute():
            path = self.base_dir / path
        try:
            values = read_sample(path)
        except OSError as exc:
            self.fail(f"cannot read {raw!r}: {exc.strerror}", path_pos)
        except InvalidParameterError as exc:
            self.fail(str(exc), path_pos)
        return Empirical(tuple(values), source=raw)

    def scoring(self, table, kind):
        self.skip()
        start = self.pos
        name = self.name()
        if name not in table:
            self.fail(f"unknown {kind} {name!r}", start)
        cls, params = table[name]
        values = self.arguments(name, params, start)
        if "k" in values:
            k = values["k"]
            if k != int(k):
                self.fail(f"squared-error power must be an integer, got {k!r}", start)
            values["k"] = int(k)
        return self.build(cls, name, values, start)


def read_sample(path) -> list:
    """Decimal numbers, one per line; blank lines are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if not _NUMBER.fullmatch(s):
                raise InvalidParameterError(f"{path}: line {lineno} is not a number: {s!r}")
            v = float(s)
            if not math.isfinite(v):
                raise InvalidParameterError(f"{path}: line {lineno} is not finite: {s!r}")
            out.append(v)
    if not out:
        raise InvalidParameterError(f"{path}: no values")
    return out


def parse_distribution(text: str, base_dir=None) -> Distribution:
    p = _Parser(text, base_dir)
    d = p.distribution()
    p.end()
    return d


def parse_rule(text: str):
    p = _Parser(text)
    r = p.scoring(RULES, "scoring rule")
    p.end()
    return r


def parse_function(text: str):
    p = _Parser(text)
    f = p.scoring(FUNCTIONS, "scoring function")
    p.end()
    return f


def _num(v) -> str:
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") else r


def format_distribution(F: Distribution) -> str:
    if isinstance(F, Mixture):
        return "mix(" + ", ".join(f"{_num(w)}:{format_distribution(d)}" for w, d in F.components) + ")"
    if isinstance(F, Empirical):
        if F.source is None:
            raise InvalidParameterError("an empirical distribution prints only when read from a file")
        return f"emp(file={F.source})"
    name, params = _NAMES[type(F)]
    return f"{name}(" + ",".join(f"{p}={_num(getattr(F, p))}" for p in params) + ")"


def format_rule(S) -> str:
    if isinstance(S, WCRPS):
        return f"wcrps(q={_num(S.q)})"
    return "crps"


def format_function(s) -> str:
    if isinstance(s, SquaredError):
        return f"se(k={s.k})"
    return f"pinball(alpha={_num(s.alpha)})"
