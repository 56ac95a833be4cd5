import math
from fractions import Fraction

import pytest

from matchbox import asymptotics as asy
from matchbox.expectations import expected_first_return_series, residue_series
from matchbox.series import first_return_pgf
from matchbox.verify import finite_difference_derivatives


@pytest.mark.parametrize(
    "k,p,expected",
    [(2, Fraction(1, 2), 1), (3, Fraction(1, 2), Fraction(32, 27)), (3, Fraction(2, 3), 1)],
)
def test_r_star_examples(k, p, expected):
    assert asy.r_star(k, p) == expected
    assert asy.r_star(k, float(p)) == pytest.approx(float(expected))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_r_star_at_least_one(k):
    for j in range(1, 20):
        p = Fraction(j, 20)
        r = asy.r_star(k, p)
        if p == Fraction(k - 1, k):
            assert r == 1
        else:
            assert r > 1


@pytest.mark.parametrize(
    "k,p,reg",
    [
        (3, Fraction(2, 3), asy.CRITICAL),
        (3, Fraction(4, 5), asy.SUPERCRITICAL),
        (3, Fraction(2, 5), asy.SUBCRITICAL),
        (2, 0.5, asy.CRITICAL),
        (3, 1 - 1 / 3, asy.CRITICAL),
        (3, 0.7, asy.SUPERCRITICAL),
    ],
)
def test_regime(k, p, reg):
    assert asy.regime(k, p) == reg


def test_lambda_k2_closed_form():
    assert asy.return_probability(2, Fraction(1, 4)) == pytest.approx(1 / 3, abs=1e-14)
    for q in (0.55, 0.7, 0.9):
        assert asy.return_probability(2, 1 - q) == pytest.approx((1 - q) / q, abs=1e-13)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_lambda_is_one_when_not_subcritical(k):
    for q in (0.01, 0.5 / k, 1 / k):
        assert asy.return_probability(k, 1 - q) == 1


def test_lambda_matches_truncated_series():
    lam = asy.return_probability(3, 0.4)
    assert lam == pytest.approx(first_return_pgf(3, 0.4, 400).evaluate(1.0), abs=1e-10)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_lambda_continuity_and_monotonicity(k):
    qs = [1 / k + 10.0**-e for e in range(1, 8)]
    lams = [asy.return_probability(k, 1 - q) for q in qs]
    assert all(0 < x < 1 for x in lams)
    assert lams == sorted(lams)
    assert 1 - lams[-1] < 1e-3


def test_classify_report():
    rep = asy.classify(3, 0.4)
    assert rep.regime == asy.SUBCRITICAL and 0 < rep.lam < 1
    assert rep.q == pytest.approx(0.6)
    assert asy.classify(3, Fraction(4, 5)).lam is None
    assert asy.classify(3, Fraction(2, 3)).row()["r_star"] == "1"


def test_derivative_examples():
    assert asy.s_derivative_at_1(2, Fraction(3, 4)) == pytest.approx(3 / 8)
    assert asy.s_second_derivative_at_1(2, Fraction(3, 4)) == pytest.approx(9 / 16)


def test_derivative_errors():
    with pytest.raises(asy.CriticalPointError):
        asy.s_derivative_at_1(3, Fraction(2, 3))
    with pytest.raises(asy.CriticalPointError):
        asy.s_second_derivative_at_1(3, Fraction(2, 5))


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("q", [0.1, 0.2])
def test_derivatives_vs_finite_differences(k, q):
    d1, d2 = finite_difference_derivatives(k, 1 - q, 500)
    assert d1 == pytest.approx(asy.s_derivative_at_1(k, 1 - q), abs=1e-6)
    assert d2 == pytest.approx(asy.s_second_derivative_at_1(k, 1 - q), abs=1e-6)


def test_subcritical_first_derivative_vs_finite_differences():
    d1, _ = finite_difference_derivatives(3, 0.4, 1500, h=1e-5)
    assert d1 == pytest.approx(asy.s_derivative_at_1(3, 0.4), abs=1e-6)


def test_residue_estimates():
    assert asy.residue_asymptotic(2, 10, Fraction(3, 4)) == pytest.approx(1.5)
    assert asy.residue_asymptotic(3, 50, Fraction(2, 3)) == pytest.approx(math.sqrt(12 * 50 / math.pi))
    a, b = (asy.residue_asymptotic(3, n, 0.4) for n in (10, 11))
    assert b - a == pytest.approx(4 / 3)


def test_first_return_estimates():
    assert asy.first_return_asymptotic(2, 10, Fraction(3, 4)) == pytest.approx(1.5)
    assert asy.first_return_asymptotic(3, 50, Fraction(2, 3)) == pytest.approx(math.sqrt(16 * 50 / (3 * math.pi)))
    a, b = (asy.first_return_asymptotic(2, n, 0.25) for n in (10, 11))
    assert b - a == pytest.approx(2 / 3)


@pytest.mark.parametrize("k,p", [(2, Fraction(3, 4)), (3, Fraction(9, 10)), (4, Fraction(19, 20))])
def test_unit_root_monotone_from_below(k, p):
    x = p ** (k - 1) * (1 - p)
    g = first_return_pgf(k, p, 60)
    partial, prev = Fraction(0), Fraction(0)
    for i in range(1, 61):
        partial += g[i]
        assert prev < partial < 1
        prev = partial
    assert 1 - float(partial) < 1e-3
    assert x > 0


def test_supercritical_convergence():
    M = residue_series(2, 0.75, 200)
    assert abs(M[-1] - 1.5) < 1e-6
    M = residue_series(3, 0.8, 300)
    assert abs(M[-1] - asy.residue_asymptotic(3, 300, 0.8)) < 1e-6


def test_subcritical_convergence():
    M = residue_series(3, 0.4, 300)
    assert abs(M[-1] - asy.residue_asymptotic(3, 300, 0.4)) < 1e-6
    R = expected_first_return_series(3, 0.4, 300)
    assert abs(R[-1] - asy.first_return_asymptotic(3, 300, 0.4)) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3])
def test_critical_ratio(k):
    p = Fraction(k - 1, k)
    M = residue_series(k, float(p), 2000)
    assert 0.95 <= M[-1] / asy.residue_asymptotic(k, 2000, p) <= 1.05
