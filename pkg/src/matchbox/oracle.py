"""Exhaustive trajectory expansion of the k-box chooser process.

Each trajectory from (n, ..., n) is a sequence of big/little arrivals; its
probability is the monomial p^a q^b.  Trajectories are expanded one by one on
the full sorted box tuple (no aggregation, no memoization), so these results
share no code path with the recursions they are used to check.  Polynomials
are integer coefficient lists in p, lowest degree first.
"""

from __future__ import annotations

from collections import Counter
from typing import Callable, Dict, List, Optional, Tuple

from .numeric import Scalar, binomial

Poly = List[int]
State = Tuple[int, ...]

ORACLE_LIMIT = 81


def _check_size(k: int, n: int) -> None:
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    if k**n > ORACLE_LIMIT:
        raise ValueError(f"exhaustive expansion limited to k**n <= {ORACLE_LIMIT}")


def _move(state: State, big: bool) -> State:
    boxes = list(state)
    if big:
        boxes[0] -= 1
    else:
        boxes[-1] -= 1
    return tuple(sorted(boxes, reverse=True))


def _expand(k: int, n: int, outcome: Callable[[State, int], Optional[int]]) -> Counter:
    """Count trajectories by (outcome, #big, #little).

    ``outcome(state, steps)`` returns the recorded value once the trajectory
    stops, or None to keep going.
    """
    tally: Counter = Counter()

    def walk(state: State, a: int, b: int) -> None:
        value = outcome(state, a + b)
        if value is not None:
            tally[(value, a, b)] += 1
            return
        walk(_move(state, True), a + 1, b)
        walk(_move(state, False), a, b + 1)

    walk((n,) * k, 0, 0)
    return tally


def _monomial(a: int, b: int) -> Poly:
    """p^a (1-p)^b as coefficients in p."""
    out = [0] * (a + b + 1)
    for j in range(b + 1):
        out[a + j] += binomial(b, j) * (-1) ** j
    return out


def _add(acc: Poly, other: Poly, scale: int = 1) -> Poly:
    if len(acc) < len(other):
        acc = acc + [0] * (len(other) - len(acc))
    for i, c in enumerate(other):
        acc[i] += scale * c
    return acc


def _trim(poly: Poly) -> Poly:
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def poly_eval(poly: Poly, p: Scalar) -> Scalar:
    acc = 0 * p
    for c in reversed(poly):
        acc = acc * p + c
    return acc


def residue_distribution(k: int, n: int) -> Dict[int, Poly]:
    """Law of the residue as {residue: P(residue) polynomial in p}."""
    _check_size(k, n)

    def stop(state: State, steps: int) -> Optional[int]:
        return sum(state) if state[-1] == 0 else None

    dist: Dict[int, Poly] = {}
    for (value, a, b), count in _expand(k, n, stop).items():
        dist[value] = _add(dist.get(value, [0]), _monomial(a, b), count)
    return {v: _trim(poly) for v, poly in sorted(dist.items())}


def residue_polynomial(k: int, n: int) -> Poly:
    """Expected residue M_n as a polynomial in p."""
    total: Poly = [0]
    for value, poly in residue_distribution(k, n).items():
        total = _add(total, poly, value)
    return _trim(total)


def first_return_distribution(k: int, n: int) -> Dict[int, Poly]:
    """Law of the first diagonal-return order Y (capped at n)."""
    _check_size(k, n)

    def stop(state: State, steps: int) -> Optional[int]:
        if steps == 0:
            return None
        if state[0] == state[-1]:
            return n - state[0]
        if state[-1] == 0:
            return n
        return None

    dist: Dict[int, Poly] = {}
    for (value, a, b), count in _expand(k, n, stop).items():
        dist[value] = _add(dist.get(value, [0]), _monomial(a, b), count)
    return {v: _trim(poly) for v, poly in sorted(dist.items())}


def first_return_polynomial(k: int, n: int) -> Poly:
    total: Poly = [0]
    for value, poly in first_return_distribution(k, n).items():
        total = _add(total, poly, value)
    return _trim(total)
