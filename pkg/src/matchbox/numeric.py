"""Scalar kernel: exact rationals, binomials and the exact/float evaluation modes.

Every computation in the package runs in one of two modes.  Exact values are
``int`` or :class:`fractions.Fraction`; float values are plain ``float``.  The
two are never mixed: Python would silently coerce ``Fraction + float`` to a
float, so the places that combine user-supplied scalars call :func:`mode_of`
/ :func:`require_same_mode` first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Exact = Union[int, Fraction]
Scalar = Union[int, Fraction, float]

EXACT = "exact"
FLOAT = "float"


class ModeError(TypeError):
    """Raised when exact and floating-point scalars meet in one computation."""


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0, with C(n, k) = 0 whenever k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def mode_of(x: Scalar) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return EXACT
    if isinstance(x, float):
        return FLOAT
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def require_same_mode(values: Iterable[Scalar]) -> str:
    """Return the common mode of ``values``; raise ModeError if they disagree."""
    modes = {mode_of(v) for v in values}
    if len(modes) > 1:
        raise ModeError("cannot mix exact and float scalars")
    return modes.pop() if modes else EXACT


def to_mode(x: Exact, mode: str) -> Scalar:
    """Lift an exact constant into ``mode`` (used for integer literals only)."""
    if mode == FLOAT:
        return float(x)
    return x


def render(x: Scalar) -> str:
    """Text form used by every CSV/JSON writer: "a/b" or 15 significant digits."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return format(x, ".15g")


@dataclass(frozen=True)
class Probability:
    """A big-chooser probability p in the open interval (0, 1).

    ``value`` is either exact (Fraction) or a float; ``q`` is derived in the
    same mode.
    """

    value: Scalar

    def __post_init__(self) -> None:
        v = self.value
        mode = mode_of(v)
        if mode == EXACT and not isinstance(v, Fraction):
            object.__setattr__(self, "value", Fraction(v))
        if mode == FLOAT and not math.isfinite(v):
            raise ValueError(f"probability must be finite, got {v!r}")
        if not 0 < self.value < 1:
            raise ValueError(f"probability must lie in (0, 1), got {render(self.value)}")

    @property
    def p(self) -> Scalar:
        return self.value

    @property
    def q(self) -> Scalar:
        return 1 - self.value

    @property
    def mode(self) -> str:
        return mode_of(self.value)

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def as_float(self) -> "Probability":
        return Probability(float(self.value))

    def __str__(self) -> str:
        return render(self.value)


_RATIO = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")
_DECIMAL = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")


def parse_probability(text: str, as_float: bool = False) -> Probability:
    """Parse "a/b" or a decimal literal.

    Decimals are read as the rational they denote ("0.25" is exactly 1/4),
    unless ``as_float`` is set.
    """
    m = _RATIO.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        value: Scalar = Fraction(num, den)
    elif _DECIMAL.match(text):
        value = Fraction(text.strip())
    else:
        raise ValueError(f"malformed probability {text!r}")
    if as_float:
        value = float(value)
    return Probability(value)


def as_probability(p: Union[Probability, Scalar, str]) -> Probability:
    if isinstance(p, Probability):
        return p
    if isinstance(p, str):
        return parse_probability(p)
    return Probability(p)
