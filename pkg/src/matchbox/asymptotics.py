"""Large-n behaviour of M_n and R_n.

The regime is set by the sign of the drift 1 - kq of the walk that moves +1
with probability p and -(k-1) with probability q:

* supercritical, q < 1/k: a diagonal state is revisited almost surely and M_n
  tends to a constant;
* critical, q = 1/k: both M_n and R_n grow like sqrt(n);
* subcritical, q > 1/k: the return probability ``lam`` is below one and M_n
  grows linearly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .numeric import Probability, Scalar, as_probability, render

PLike = Union[Probability, Scalar, str]

SUPERCRITICAL = "supercritical"
CRITICAL = "critical"
SUBCRITICAL = "subcritical"

FLOAT_CRITICAL_TOL = 1e-12


class CriticalPointError(ValueError):
    """Raised for closed forms that are undefined at q = 1/k."""


def regime(k: int, p: PLike) -> str:
    prob = as_probability(p)
    if prob.exact:
        diff = prob.q - Fraction(1, k)
        if diff == 0:
            return CRITICAL
    else:
        diff = float(prob.q) - 1.0 / k
        if abs(diff) < FLOAT_CRITICAL_TOL:
            return CRITICAL
    return SUPERCRITICAL if diff < 0 else SUBCRITICAL


def r_star(k: int, p: PLike) -> Scalar:
    """Radius of convergence (k-1)^{k-1} / (k^k p^{k-1} q) of the first-return PGF."""
    prob = as_probability(p)
    rho = Fraction((k - 1) ** (k - 1), k**k)
    if not prob.exact:
        rho = float(rho)
    return rho / (prob.p ** (k - 1) * prob.q)


def _small_root(k: int, target: float) -> float:
    """Root of s (1-s)^{k-1} = target on [0, 1/k].

    The left side increases on that bracket, from 0 to its maximum at 1/k, so
    bisection always converges; a few Newton steps then polish the root.
    """

    def g(s: float) -> float:
        return s * (1.0 - s) ** (k - 1) - target

    lo, hi = 0.0, 1.0 / k
    if g(hi) < 0:
        raise ArithmeticError("target exceeds the maximum of s(1-s)^(k-1)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    s = 0.5 * (lo + hi)
    for _ in range(3):
        dg = (1.0 - s) ** (k - 2) * (1.0 - k * s)
        if dg == 0:
            break
        step = g(s) / dg
        if not lo - 1e-12 <= s - step <= hi + 1e-12:
            break
        s -= step
    return s


def return_probability(k: int, p: PLike) -> float:
    """Probability that the process ever revisits a diagonal state (from an
    unbounded supply of matches): 1 unless q > 1/k."""
    reg = regime(k, p)
    if reg != SUBCRITICAL:
        return 1.0
    prob = as_probability(p)
    pf, qf = float(prob.p), float(prob.q)
    return _small_root(k, pf ** (k - 1) * qf) / qf


@dataclass(frozen=True)
class RegimeReport:
    k: int
    p: Probability
    regime: str
    lam: Optional[float]
    r_star: Scalar

    @property
    def q(self) -> Scalar:
        return self.p.q

    def row(self) -> dict:
        return {
            "k": self.k,
            "p": render(self.p.value),
            "regime": self.regime,
            "lambda": "" if self.lam is None else render(self.lam),
            "r_star": render(self.r_star),
        }


def classify(k: int, p: PLike) -> RegimeReport:
    prob = as_probability(p)
    reg = regime(k, prob)
    lam = return_probability(k, prob) if reg == SUBCRITICAL else None
    return RegimeReport(k, prob, reg, lam, r_star(k, prob))


def s_derivative_at_1(k: int, p: PLike) -> float:
    """d/dz S(p^{k-1} q z) at z = 1."""
    reg = regime(k, p)
    prob = as_probability(p)
    pf, qf = float(prob.p), float(prob.q)
    if reg == CRITICAL:
        raise CriticalPointError("derivative is infinite at q = 1/k")
    if reg == SUPERCRITICAL:
        return pf * qf / (1 - k * qf)
    lam = return_probability(k, prob)
    u = 1 - qf * lam
    x = pf ** (k - 1) * qf
    return u * x / (u**k - (k - 1) * x)


def s_second_derivative_at_1(k: int, p: PLike) -> float:
    """d^2/dz^2 S(p^{k-1} q z) at z = 1; supercritical side only."""
    if regime(k, p) != SUPERCRITICAL:
        raise CriticalPointError("closed form available only for q < 1/k")
    prob = as_probability(p)
    pf, qf = float(prob.p), float(prob.q)
    return pf * qf**2 * (k - 1) * (2 - qf * k) / (1 - qf * k) ** 3


def residue_asymptotic(k: int, n: int, p: PLike) -> float:
    """Leading-order estimate of M_n."""
    reg = regime(k, p)
    prob = as_probability(p)
    pf, qf = float(prob.p), float(prob.q)
    if reg == SUPERCRITICAL:
        return (k - 1) * (2 - k * qf) / (2 * (1 - k * qf))
    if reg == CRITICAL:
        return math.sqrt(2 * k * (k - 1) * n / math.pi)
    lam = return_probability(k, prob)
    return (k - 1 / qf) * n + (pf / qf) / (1 - lam)


def first_return_asymptotic(k: int, n: int, p: PLike) -> float:
    """Leading-order estimate of R_n."""
    reg = regime(k, p)
    prob = as_probability(p)
    pf, qf = float(prob.p), float(prob.q)
    if reg == SUPERCRITICAL:
        return pf / (1 - k * qf)
    if reg == CRITICAL:
        return math.sqrt(8 * (k - 1) * n / (k * math.pi))
    lam = return_probability(k, prob)
    u = 1 - qf * lam
    return n * (1 - lam) + pf ** (k - 1) * u / (u**k - (k - 1) * qf * pf ** (k - 1))
