import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heisenberg_frames.bspline import (autocorrelation, bspline, bspline_autocorrelation_values,
                                       bspline_profile, midpoint_grid, periodized_spectrum,
                                       periodized_spectrum_direct, riesz_bounds_classical,
                                       spectrum_sq)
from heisenberg_frames.piecewise_poly import PiecewisePolynomial as PP
from heisenberg_frames.profiles import FrequencyIndicator, TimeDomain, sinc_tail_bound


def truncated_power(n, t):
    """Oracle: B_n(t) = sum_k (-1)^k C(n, k) (t - k)_+^{n-1} / (n - 1)!."""
    def plus(x):
        return (x > 0) if n == 1 else max(Fraction(0), x) ** (n - 1)
    return sum((-1) ** k * math.comb(n, k) * plus(t - k)
               for k in range(n + 1)) / math.factorial(n - 1)


def test_b3_pieces_exact():
    want = PP((0, 1, 2, 3), ((0, 0, Fraction(1, 2)), (Fraction(-3, 2), 3, -1),
                             (Fraction(9, 2), -3, Fraction(1, 2))))
    assert bspline(3) == want
    assert bspline(3)(Fraction(1, 2)) == Fraction(1, 8)
    assert bspline(3)(Fraction(3, 2)) == Fraction(3, 4)


@pytest.mark.parametrize("n", range(1, 7))
def test_bspline_against_truncated_power(n):
    b = bspline(n)
    for i in range(0, 4 * n + 1):
        t = Fraction(i, 4)
        if 0 < t < n:
            assert b(t) == truncated_power(n, t)
    assert b.integral() == 1
    assert b.support == (0, n)


def test_bspline_rejects_bad_order():
    with pytest.raises(ValueError):
        bspline(0)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5), st.fractions(0, 6, max_denominator=12))
def test_partition_of_unity(n, t):
    if n == 1 and t.denominator == 1:
        return  # B_1 is closed at both ends, so integers are counted twice (null set)
    assert sum(bspline(n)(t + k) for k in range(-8 - n, n + 2)) == 1


def test_hat_matches_sinc_power():
    xi = np.linspace(-3.3, 3.3, 41)
    for n in (1, 2, 4):
        got = np.abs(bspline_profile(n).hat(xi))
        np.testing.assert_allclose(got, np.abs(np.sinc(xi)) ** n, atol=1e-13)


def test_autocorrelation_closed_form():
    for n in (1, 2, 3, 4):
        assert autocorrelation(bspline(n)) == bspline_autocorrelation_values(n)


@pytest.mark.parametrize("lam", [0.05, 0.25, 0.5, 0.8, 1.0])
def test_periodized_b2_known_symbol(lam):
    # sum_k sinc^4(lam + k) = (2 + cos 2 pi lam) / 3
    want = (2 + math.cos(2 * math.pi * lam)) / 3
    assert abs(periodized_spectrum(bspline_profile(2), lam) - want) < 1e-14


@pytest.mark.parametrize("n", [2, 3, 4])
def test_symbol_and_direct_agree(n):
    prof = bspline_profile(n)
    for lam in (0.1, 0.37, 0.9):
        val, R, tail = periodized_spectrum_direct(prof, lam, 1e-10)
        assert tail < 1e-10
        assert abs(val - periodized_spectrum(prof, lam)) <= tail + 1e-13


def test_direct_sum_of_sinc_squared_is_one_within_tail():
    val, R, tail = periodized_spectrum_direct(bspline_profile(1), 0.3, 1e-5)
    assert abs(val - 1) <= tail + 1e-12


def test_sinc_tail_bound_dominates():
    for n, R in [(1, 10), (2, 5), (3, 4)]:
        k = np.arange(R + 1, 200000)
        lam = 0.5
        actual = np.sum(np.sinc(lam + k) ** (2 * n)) + np.sum(np.sinc(lam - k) ** (2 * n))
        assert actual <= sinc_tail_bound(n, R)


def test_frequency_indicator_counts_hits():
    assert periodized_spectrum(FrequencyIndicator(3), 0.4) == 3.0
    assert spectrum_sq(FrequencyIndicator(3), 2.9) == 1.0


def test_generic_time_profile_uses_symbol():
    h = PP.indicator(0, 2)           # two overlapping B_1 translates
    prof = TimeDomain(h)
    lam = 0.3
    # |hat h(xi)|^2 = 4 sinc^2(2 xi), whose periodisation is 2 + 2 cos(2 pi lam)
    assert abs(periodized_spectrum(prof, lam) - (2 + 2 * math.cos(2 * math.pi * lam))) < 1e-13


def test_classical_riesz_report():
    rep = riesz_bounds_classical(bspline_profile(3), grid_size=64)
    assert rep.A_est > 0
    assert rep.B_est <= 1 + 1e-12
    # B_3: minimum of the symbol sits at lam = 1/2 and equals 2/15 + 2 * 0 ...
    symbol_half = float(sum(v * (-1) ** j for j, v in autocorrelation(bspline(3)).items()))
    assert rep.A_est >= symbol_half - 1e-12
    assert json.loads(rep.to_json())["status"] == "estimated"
    assert rep.to_csv().splitlines()[0] == "lambda,phi_value"


def test_classical_riesz_direct_method_adds_tail():
    rep = riesz_bounds_classical(bspline_profile(2), grid_size=8, method="direct")
    assert rep.method == "direct" and rep.tail_bound < 1e-10


def test_riesz_rejects_bad_method():
    with pytest.raises(ValueError):
        riesz_bounds_classical(bspline_profile(2), grid_size=8, method="fft")


def test_midpoint_grid():
    np.testing.assert_allclose(midpoint_grid(4), [0.125, 0.375, 0.625, 0.875])
