"""Truncated power series and the generating functions built on them.

``s_series`` is the Raney series S(z) = sum s_i z^i, ``first_return_pgf`` is
(1/q) S(p^{k-1} q z) (the law of the order of the first diagonal return) and
``diagonal_probabilities`` is 1/(1 - that), whose n-th coefficient is the
probability of sitting at a diagonal state after kn steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from .combinatorics import s_count
from .numeric import (
    EXACT,
    FLOAT,
    Probability,
    Scalar,
    as_probability,
    binomial,
    mode_of,
    render,
    require_same_mode,
    to_mode,
)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0 .. c_N of a power series, all in one scalar mode."""

    coeffs: Tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        require_same_mode(self.coeffs)

    @classmethod
    def of(cls, coeffs: Sequence[Scalar]) -> "TruncatedSeries":
        return cls(tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def mode(self) -> str:
        return require_same_mode(self.coeffs)

    def __getitem__(self, n: int) -> Scalar:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _check(self, other: "TruncatedSeries") -> int:
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")
        require_same_mode(self.coeffs[:1] + other.coeffs[:1])
        return self.order

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        N = self._check(other)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(N + 1):
            out.append(sum((a[i] * b[n - i] for i in range(n + 1)), to_mode(0, self.mode)))
        return TruncatedSeries(tuple(out))

    def scale(self, c: Scalar) -> "TruncatedSeries":
        require_same_mode((c, self.coeffs[0]))
        return TruncatedSeries(tuple(c * x for x in self))

    def substitute(self, a: Scalar) -> "TruncatedSeries":
        """The series of f(a z)."""
        require_same_mode((a, self.coeffs[0]))
        out, power = [], to_mode(1, mode_of(a))
        for c in self.coeffs:
            out.append(c * power)
            power *= a
        return TruncatedSeries(tuple(out))

    def power(self, e: int) -> "TruncatedSeries":
        result = one(self.order, self.mode)
        for _ in range(e):
            result = result * self
        return result

    def reciprocal(self) -> "TruncatedSeries":
        """1/f through the usual triangular recurrence; c_0 must be nonzero."""
        c = self.coeffs
        if c[0] == 0:
            raise ZeroDivisionError("constant term is not a unit")
        if self.mode == FLOAT:
            return TruncatedSeries(tuple(_float_reciprocal(np.asarray(c, dtype=float))))
        inv0 = Fraction(1) / c[0]
        r = [inv0]
        for n in range(1, len(c)):
            acc = sum(c[i] * r[n - i] for i in range(1, n + 1))
            r.append(-acc * inv0)
        return TruncatedSeries(tuple(r))

    def evaluate(self, z: Scalar) -> Scalar:
        """Horner evaluation of the truncated polynomial."""
        require_same_mode((z, self.coeffs[0]))
        acc = to_mode(0, mode_of(z))
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def csv_rows(self) -> List[Tuple[str, str]]:
        return [(str(n), render(c)) for n, c in enumerate(self.coeffs)]


def _float_reciprocal(c: np.ndarray) -> List[float]:
    N = len(c) - 1
    r = np.zeros(N + 1)
    r[0] = 1.0 / c[0]
    for n in range(1, N + 1):
        r[n] = -np.dot(c[1 : n + 1], r[n - 1 :: -1][:n]) * r[0]
    return [float(x) for x in r]


def one(N: int, mode: str = EXACT) -> TruncatedSeries:
    return TruncatedSeries((to_mode(1, mode),) + (to_mode(0, mode),) * N)


def monomial(N: int, degree: int, mode: str = EXACT) -> TruncatedSeries:
    coeffs = [to_mode(0, mode)] * (N + 1)
    if degree <= N:
        coeffs[degree] = to_mode(1, mode)
    return TruncatedSeries(tuple(coeffs))


def s_series(k: int, N: int) -> TruncatedSeries:
    """S^(k)(z) through z^N, exact integer coefficients."""
    return TruncatedSeries((0,) + tuple(s_count(k, i) for i in range(1, N + 1)))


def _log_weights(k: int, p: float, N: int) -> List[float]:
    # s_i overflows a double long before s_i x^i does, so build in log space.
    q = 1.0 - p
    log_x = (k - 1) * math.log(p) + math.log(q)
    out = [0.0]
    for i in range(1, N + 1):
        out.append(math.exp(math.log(s_count(k, i)) + i * log_x - math.log(q)))
    return out


def first_return_pgf(k: int, p: Union[Probability, Scalar, str], N: int) -> TruncatedSeries:
    """(1/q) S(p^{k-1} q z): coefficient i is s_i p^{(k-1)i} q^{i-1}."""
    prob = as_probability(p)
    if prob.exact:
        x = prob.p ** (k - 1) * prob.q
        return s_series(k, N).substitute(x).scale(1 / prob.q)
    return TruncatedSeries(tuple(_log_weights(k, float(prob.p), N)))


def diagonal_series(k: int, p: Union[Probability, Scalar, str], N: int) -> TruncatedSeries:
    g = first_return_pgf(k, p, N)
    return (one(N, g.mode) - g).reciprocal()


def diagonal_probabilities(k: int, p: Union[Probability, Scalar, str], N: int) -> List[Scalar]:
    """f_0 .. f_N: probability of a diagonal state after kn steps."""
    return list(diagonal_series(k, p, N))


def diagonal_probability_closed(k: int, p: Union[Probability, Scalar, str], n: int) -> Scalar:
    """Direct sum p^{(k-1)n} sum_i (n-i)/n C((k-1)n+i-1, i) q^i."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prob = as_probability(p)
    pv, qv = prob.p, prob.q
    total = to_mode(0, prob.mode)
    qi = to_mode(1, prob.mode)
    for i in range(n):
        c = Fraction(n - i, n) * binomial((k - 1) * n + i - 1, i)
        total += (c if prob.exact else float(c)) * qi
        qi *= qv
    return pv ** ((k - 1) * n) * total


def s_radius(k: int) -> Fraction:
    """Radius of convergence of S^(k): (k-1)^(k-1) / k^k."""
    return Fraction((k - 1) ** (k - 1), k**k)


def closed_form_check(k: int, w: float) -> float:
    """Closed-form S^(k)(w) for k in {2, 3}; compare with s_series(...).evaluate."""
    if k not in (2, 3):
        raise ValueError("closed forms exist here only for k = 2, 3")
    if not 0 <= w < s_radius(k):
        raise ValueError(f"w={w} outside [0, {float(s_radius(k))})")
    if k == 2:
        return (1.0 - math.sqrt(1.0 - 4.0 * w)) / 2.0
    return 4.0 / 3.0 * math.sin(math.asin(math.sqrt(27.0 * w / 4.0)) / 3.0) ** 2
