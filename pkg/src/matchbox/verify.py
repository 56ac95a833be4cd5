"""Identity suites run by ``matchbox verify``.

Each suite returns a list of :class:`Check` records; a suite never raises on
a failed identity, it records it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import asymptotics as asy
from . import combinatorics as comb
from . import expectations as ex
from . import oracle
from . import series as ser

REFERENCE_S_TABLE = {
    2: [1, 1, 2, 5, 14, 42],
    3: [1, 2, 7, 30, 143, 728],
    4: [1, 3, 15, 91, 612, 4389],
}
PROBS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]


@dataclass
class Check:
    suite: str
    check: str
    params: Dict = field(default_factory=dict)
    passed: bool = False
    detail: str = ""

    def as_dict(self) -> Dict:
        d = asdict(self)
        d["status"] = "pass" if self.passed else "fail"
        del d["passed"]
        return d


def functional_residual(k: int, N: int) -> List:
    """Coefficients of S (1-S)^{k-1} - z through z^N."""
    S = ser.s_series(k, N)
    lhs = S * (ser.one(N) - S).power(k - 1)
    return list((lhs - ser.monomial(N, 1)).coeffs)


def suite_series(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    N = N or 30
    ks = [k] if k else list(range(2, 7))
    out = []
    for kk in ks:
        res = functional_residual(kk, N)
        out.append(Check("series", "functional_equation", {"k": kk, "N": N}, all(c == 0 for c in res)))
        if kk in REFERENCE_S_TABLE:
            got = list(ser.s_series(kk, 6).coeffs[1:])
            out.append(Check("series", "reference_table", {"k": kk}, got == REFERENCE_S_TABLE[kk], str(got)))
    return out


def suite_methods(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    max_n = max_n or 25
    ks = [k] if k else [2, 3, 4]
    out = []
    for kk in ks:
        for p in PROBS:
            a = ex.residue_series(kk, p, max_n, "recursion")
            b = ex.residue_series(kk, p, max_n, "diagonal_sum")
            c = ex.residue_series(kk, p, max_n, "gf_coefficient")
            out.append(Check("methods", "recursion=diagonal_sum=gf_coefficient",
                             {"k": kk, "p": str(p), "max_n": max_n}, a == b == c))
    return out


def suite_oracle(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    max_n = max_n or 4
    ks = [k] if k else [2, 3]
    out = []
    for kk in ks:
        for n in range(1, max_n + 1):
            poly = oracle.residue_polynomial(kk, n)
            # kn+1 distinct points pin down a polynomial of degree <= kn
            points = [Fraction(j, kk * n + 2) for j in range(1, kk * n + 2)]
            ok = all(
                ex.expected_residue(kk, n, p, m) == oracle.poly_eval(poly, p)
                for p in points
                for m in ("recursion", "diagonal_sum", "gf_coefficient")
            )
            out.append(Check("oracle", "methods_equal_exhaustive_expansion", {"k": kk, "n": n}, ok))
    return out


def suite_bijection(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    ks = [k] if k else list(range(2, comb.ENUMERATION_LIMIT + 1))
    out = []
    for kk in ks:
        top = comb.ENUMERATION_LIMIT // kk
        if max_n:
            top = min(top, max_n)
        for n in range(1, top + 1):
            out.append(_bijection_check(kk, n))
    return out


def _bijection_check(k: int, n: int) -> Check:
    paths = comb.enumerate_paths(k, n)
    path_set = dict(paths)
    by_i = Counter(i for _, i in paths)
    formula = {i: comb.paths_count(k, n, i) for i in range(n)}
    configs = comb.enumerate_manila(k, n)
    manila_by_i = Counter(comb.manila_index(c) for c in configs)
    images = [comb.mu_bijection(c) for c in configs]
    injective = len(set(images)) == len(images)
    lands = all(path_set.get(w) == comb.manila_index(c) for w, c in zip(images, configs))
    counts_ok = all(by_i.get(i, 0) == formula[i] == manila_by_i.get(i, 0) for i in range(n))
    ok = counts_ok and injective and lands and len(images) == len(paths)
    detail = f"paths={len(paths)} manila={len(configs)} injective={injective} index_preserved={lands}"
    return Check("bijection", "paths=manila=formula, mu bijective", {"k": k, "n": n}, ok, detail)


def suite_diagonal(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    max_n = max_n or 25
    ks = [k] if k else [2, 3, 4, 5]
    out = []
    for kk in ks:
        for p in PROBS:
            f = ser.diagonal_probabilities(kk, p, max_n)
            closed = all(ser.diagonal_probability_closed(kk, p, n) == f[n] for n in range(1, max_n + 1))
            paths = all(
                p ** ((kk - 1) * n) * sum(comb.paths_count(kk, n, i) * (1 - p) ** (n - 1 - i) for i in range(n)) == f[n]
                for n in range(1, max_n + 1)
            )
            bounds = all(0 < x <= 1 for x in f)
            out.append(Check("diagonal", "closed=series=weighted_paths", {"k": kk, "p": str(p), "max_n": max_n},
                             closed and paths and bounds))
    return out


def suite_coincidence(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    max_n = max_n or 50
    out = []
    for p in PROBS:
        M = ex.residue_series(2, p, max_n, "diagonal_sum")
        R = ex.expected_first_return_series(2, p, max_n)
        out.append(Check("coincidence", "M2=R2", {"p": str(p), "max_n": max_n}, M == R))
    p = Fraction(1, 2)
    M3 = ex.residue_series(3, p, 5, "diagonal_sum")
    R3 = ex.expected_first_return_series(3, p, 5)
    witness = next((n + 1 for n in range(5) if M3[n] != R3[n]), None)
    out.append(Check("coincidence", "M3!=R3 witness", {"p": "1/2"}, witness is not None, f"n={witness}"))
    return out


def suite_asymptotics(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    out = []
    M = ex.residue_series(2, 0.75, 200, "diagonal_sum")
    out.append(Check("asymptotics", "supercritical k=2 q=1/4", {"n": 200}, abs(M[-1] - 1.5) < 1e-6, repr(M[-1])))
    M = ex.residue_series(3, 0.8, 300, "diagonal_sum")
    est = asy.residue_asymptotic(3, 300, 0.8)
    out.append(Check("asymptotics", "supercritical k=3 q=0.2", {"n": 300}, abs(M[-1] - est) < 1e-6, repr(M[-1] - est)))
    M = ex.residue_series(3, 0.4, 300, "diagonal_sum")
    est = asy.residue_asymptotic(3, 300, 0.4)
    out.append(Check("asymptotics", "subcritical k=3 q=0.6", {"n": 300}, abs(M[-1] - est) < 1e-6, repr(M[-1] - est)))
    lam = asy.return_probability(3, 0.4)
    trunc = ser.first_return_pgf(3, 0.4, 400).evaluate(1.0)
    out.append(Check("asymptotics", "lambda=series", {"k": 3, "q": 0.6}, abs(lam - trunc) < 1e-10, repr(lam - trunc)))
    return out


def suite_derivatives(k: Optional[int] = None, max_n: Optional[int] = None, N: Optional[int] = None) -> List[Check]:
    N = N or 500
    ks = [k] if k else [2, 3]
    out = []
    for kk in ks:
        for q in (0.1, 0.2):
            d1, d2 = finite_difference_derivatives(kk, 1 - q, N)
            e1 = abs(d1 - asy.s_derivative_at_1(kk, 1 - q))
            e2 = abs(d2 - asy.s_second_derivative_at_1(kk, 1 - q))
            out.append(Check("derivatives", "S'(1), S''(1) closed forms", {"k": kk, "q": q, "N": N},
                             e1 < 1e-6 and e2 < 1e-6, f"err1={e1:.3g} err2={e2:.3g}"))
    return out


def finite_difference_derivatives(k: int, p: float, N: int = 500, h: float = 1e-4):
    """Central differences of z -> sum_{i<=N} s_i (p^{k-1} q z)^i at z = 1."""
    g = ser.first_return_pgf(k, float(p), N).scale(1.0 - p)
    f = g.evaluate
    d1 = (f(1 + h) - f(1 - h)) / (2 * h)
    d2 = (f(1 + h) - 2 * f(1.0) + f(1 - h)) / (h * h)
    return d1, d2


SUITES: Dict[str, Callable[..., List[Check]]] = {
    "series": suite_series,
    "methods": suite_methods,
    "oracle": suite_oracle,
    "bijection": suite_bijection,
    "diagonal": suite_diagonal,
    "coincidence": suite_coincidence,
    "asymptotics": suite_asymptotics,
    "derivatives": suite_derivatives,
}


ALIASES = {"gf": "series"}


def run(suites: Optional[List[str]] = None, **kwargs) -> List[Check]:
    names = suites or list(SUITES)
    checks: List[Check] = []
    for name in names:
        name = ALIASES.get(name, name)
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        checks.extend(SUITES[name](**kwargs))
    return checks
