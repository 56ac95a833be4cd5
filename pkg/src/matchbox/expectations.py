"""Expected residue M_n and expected first-return order R_n.

Four independent routes to M_n are provided (``METHODS``):

* ``recursion``: the first-phase recursion on (aggregate of the k-1 larger
  boxes, smallest box), tabulated bottom-up;
* ``diagonal_sum``: (k-1)n - (p/q) * sum_{i<n} (1 - f_i);
* ``gf_coefficient``: coefficient extraction from the residue generating
  function, assembled as a product of truncated series;
* ``oracle``: exhaustive trajectory expansion (tiny n only).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

from . import oracle
from .combinatorics import d_count, s_count
from .numeric import Probability, Scalar, as_probability, binomial, to_mode
from .series import (
    TruncatedSeries,
    diagonal_probabilities,
    diagonal_series,
    first_return_pgf,
    monomial,
    s_series,
)

PLike = Union[Probability, Scalar, str]

METHODS = ("recursion", "diagonal_sum", "gf_coefficient", "oracle")


class InvalidState(ValueError):
    pass


# ---------------------------------------------------------------------------
# First-phase recursion


def _first_phase_columns(k: int, a_max: int, b_max: int, prob: Probability):
    """Yield (b, column) where column[a] = First_{a,b} for (k-1)b <= a <= a_max.

    Entries below the wedge are None.  Only one previous column is kept, so
    memory is O(a_max).
    """
    p, q = prob.p, prob.q
    prev = [to_mode(a, prob.mode) for a in range(a_max + 1)]
    yield 0, prev
    for b in range(1, b_max + 1):
        lo = (k - 1) * b
        col: List = [None] * (a_max + 1)
        if lo <= a_max:
            col[lo] = prev[lo]
            for a in range(lo + 1, a_max + 1):
                col[a] = p * col[a - 1] + q * prev[a]
        yield b, col
        prev = col


def first_phase_expectation(k: int, a: int, b: int, p: PLike) -> Scalar:
    """Expected residue from aggregate ``a`` in the big boxes and ``b`` in the
    smallest."""
    if k < 2 or b < 0 or a < (k - 1) * b:
        raise InvalidState(f"(a={a}, b={b}) is outside the wedge a >= (k-1)b >= 0")
    prob = as_probability(p)
    for bb, col in _first_phase_columns(k, a, b, prob):
        if bb == b:
            return col[a]
    raise AssertionError("unreachable")


def residue_by_recursion(k: int, p: PLike, N: int) -> List[Scalar]:
    prob = as_probability(p)
    out = []
    for b, col in _first_phase_columns(k, (k - 1) * N, N, prob):
        if b >= 1:
            out.append(col[(k - 1) * b])
    return out


# ---------------------------------------------------------------------------
# Closed routes


def residue_by_diagonal_sum(k: int, p: PLike, N: int) -> List[Scalar]:
    prob = as_probability(p)
    if N < 1:
        return []
    f = diagonal_probabilities(k, prob, N - 1)
    ratio = prob.p / prob.q
    out, shortfall = [], to_mode(0, prob.mode)
    for n in range(1, N + 1):
        shortfall += 1 - f[n - 1]
        out.append((k - 1) * n - ratio * shortfall)
    return out


def _ramp(N: int, mode: str) -> TruncatedSeries:
    """z/(1-z)^2 = sum n z^n."""
    return TruncatedSeries(tuple(to_mode(n, mode) for n in range(N + 1)))


def _tail(N: int, mode: str) -> TruncatedSeries:
    """z/(1-z) = sum_{n>=1} z^n."""
    return TruncatedSeries((to_mode(0, mode),) + (to_mode(1, mode),) * N)


def residue_generating_function(k: int, p: PLike, N: int) -> TruncatedSeries:
    """M(z) = (k - 1/q) z/(1-z)^2 + (p/q) z/(1-z) f(z), truncated at z^N."""
    prob = as_probability(p)
    mode = prob.mode
    f = diagonal_series(k, prob, N)
    slope = k - 1 / prob.q
    return _ramp(N, mode).scale(slope) + (_tail(N, mode) * f).scale(prob.p / prob.q)


def residue_series(k: int, p: PLike, N: int, method: str = "gf_coefficient") -> List[Scalar]:
    """M_1 .. M_N by the chosen method."""
    if method == "recursion":
        return residue_by_recursion(k, p, N)
    if method == "diagonal_sum":
        return residue_by_diagonal_sum(k, p, N)
    if method == "gf_coefficient":
        return list(residue_generating_function(k, p, N).coeffs[1:])
    if method == "oracle":
        prob = as_probability(p)
        return [oracle.poly_eval(oracle.residue_polynomial(k, n), prob.p) for n in range(1, N + 1)]
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def expected_residue(k: int, n: int, p: PLike, method: str = "diagonal_sum") -> Scalar:
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "oracle":
        prob = as_probability(p)
        return oracle.poly_eval(oracle.residue_polynomial(k, n), prob.p)
    return residue_series(k, p, n, method)[n - 1]


def knuth_residue(n: int, p: PLike) -> Scalar:
    """Two-box residue n - sum (n-i) c_i p^i q^{i-1}, c_i = C(2(i-1), i-1)/i."""
    prob = as_probability(p)
    total = to_mode(n, prob.mode)
    for i in range(1, n):
        c = Fraction(binomial(2 * (i - 1), i - 1), i)
        c = c if prob.exact else float(c)
        total -= (n - i) * c * prob.p**i * prob.q ** (i - 1)
    return total


# ---------------------------------------------------------------------------
# Contribution of trajectories with no intermediate diagonal state


def l_value(k: int, n: int, p: PLike) -> Scalar:
    """Expected-residue mass from trajectories that never revisit a diagonal
    state before a box empties: sum_j j d_{n,j} p^{(k-1)n-j} q^{n-1}."""
    if n < 2:
        raise ValueError("l_value needs n >= 2")
    prob = as_probability(p)
    pv, qv = prob.p, prob.q
    total = to_mode(0, prob.mode)
    for j in range(k, (k - 1) * n + 1):
        d = d_count(k, n, j)
        if d:
            total += j * d * pv ** ((k - 1) * n - j)
    return total * qv ** (n - 1)


def l_series(k: int, p: PLike, N: int) -> TruncatedSeries:
    """Generating function of l_value (coefficients 0 and 1 vanish), from the
    rational expression in S(p^{k-1} q z)."""
    prob = as_probability(p)
    if not prob.exact:
        raise ValueError("l_series is an exact cross-check")
    pv, qv = prob.p, prob.q
    S = s_series(k, N).substitute(pv ** (k - 1) * qv)
    z = monomial(N, 1)
    z2 = monomial(N, 2)
    z3 = monomial(N, 3)
    numer = (z * S).scale(k * pv - (k - 1)) - (
        z2.scale(qv * ((2 * k - 1) * pv - (2 * k - 2))) + z3.scale(qv * (k - 1) * qv)
    )
    inv_sq = TruncatedSeries(tuple(Fraction(n + 1) for n in range(N + 1)))
    return (numer * inv_sq).scale(1 / qv**2)


# ---------------------------------------------------------------------------
# First diagonal return


@dataclass(frozen=True)
class ReturnDistribution:
    """Law of the first-return order Y; ``probs[i-1]`` is P(Y = i)."""

    k: int
    n: int
    p: Probability
    probs: tuple

    def total(self) -> Scalar:
        return sum(self.probs, to_mode(0, self.p.mode))

    def mean(self) -> Scalar:
        return sum(((i + 1) * x for i, x in enumerate(self.probs)), to_mode(0, self.p.mode))


def first_return_distribution(k: int, n: int, p: PLike) -> ReturnDistribution:
    if n < 1:
        raise ValueError("n must be >= 1")
    prob = as_probability(p)
    g = first_return_pgf(k, prob, n)
    probs = [g[i] for i in range(1, n)]
    probs.append(1 - sum(probs, to_mode(0, prob.mode)))
    return ReturnDistribution(k, n, prob, tuple(probs))


def expected_first_return(k: int, n: int, p: PLike) -> Scalar:
    """R_n = n - sum_{i<n} (n-i) P(first return at order i)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prob = as_probability(p)
    g = first_return_pgf(k, prob, n)
    total = to_mode(n, prob.mode)
    for i in range(1, n):
        total -= (n - i) * g[i]
    return total


def first_return_series(k: int, p: PLike, N: int) -> List[Scalar]:
    """R_1 .. R_N from R(z) = z/(1-z)^2 (1 - g(z))."""
    prob = as_probability(p)
    g = first_return_pgf(k, prob, N)
    one_minus_g = TruncatedSeries((to_mode(1, prob.mode),) + tuple(-c for c in g.coeffs[1:]))
    return list((_ramp(N, prob.mode) * one_minus_g).coeffs[1:])


def expected_first_return_series(k: int, p: PLike, N: int) -> List[Scalar]:
    """R_1 .. R_N in O(N) using running sums of the first-return weights."""
    prob = as_probability(p)
    g = first_return_pgf(k, prob, N)
    out = []
    mass, weighted = to_mode(0, prob.mode), to_mode(0, prob.mode)
    for n in range(1, N + 1):
        # sum_{i<n} (n-i) g_i = n * mass - weighted
        out.append(n - (n * mass - weighted))
        mass += g[n]
        weighted += n * g[n]
    return out
