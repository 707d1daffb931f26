"""Exception hierarchy.

Parameter and grammar problems derive from :class:`ValueError`; numerical
failures (divergent integrals, violated preconditions of a construction)
derive from :class:`NumericalError`. The CLI maps the two families onto
exit statuses 2 and 3.
"""


class TailscoreError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(TailscoreError, ValueError):
    """A distribution, scoring rule or grid was given out-of-domain values."""


class SpecParseError(InvalidParameterError):
    """A textual spec could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if text is not None and position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class NumericalError(TailscoreError, ArithmeticError):
    """A computation could not produce a trustworthy number."""


class DivergentIntegralError(NumericalError):
    """An expected score or moment is infinite for the given inputs."""


class SignPatternError(NumericalError):
    """Inputs to the crossing construction lack the strict-consistency signs."""


class ConstructionError(NumericalError):
    """A counterexample construction failed its own re-measurement."""
