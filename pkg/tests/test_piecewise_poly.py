import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from heisenberg_frames.bspline import bspline
from heisenberg_frames.piecewise_poly import (PiecewisePolynomial as PP, as_fraction,
                                              integrate_product_shifted, poly_mul,
                                              poly_shift)

from conftest import piecewise_polys, small_fractions

F = Fraction
MANY = settings(max_examples=1000, deadline=None)


def test_normalisation_merges_and_trims():
    p = PP((0, 1, 2, 3, 4), ((0,), (1,), (1,), (0,)))
    assert p == PP.indicator(1, 3)
    assert PP((0, 1), ((0, 0),)).is_zero


def test_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        PP((1, 0), ((1,),))
    with pytest.raises(ValueError):
        PP((0, 1, 2), ((1,),))


def test_as_fraction_is_exact_for_floats():
    assert as_fraction(0.5) == F(1, 2)
    assert as_fraction("3/7") == F(3, 7)


def test_evaluation_breakpoint_convention():
    p = PP((0, 1, 2), ((1,), (2,)))
    assert p(F(1)) == 2          # right piece at an interior breakpoint
    assert p(F(2)) == 2          # last piece at the final breakpoint
    assert p(F(-1)) == 0 and p(F(3)) == 0
    np.testing.assert_allclose(p.evaluate([0.0, 0.5, 1.0, 2.0, 2.5]), [1, 1, 2, 2, 0])


def test_integrate_partial():
    b = bspline(3)
    assert b.integrate(0, 1) == F(1, 6)
    assert b.integrate(-5, 5) == 1


def test_shifted_products_of_b3():
    b = bspline(3)
    assert integrate_product_shifted(b, b, 0, (0, 1)) == F(1, 20)
    assert integrate_product_shifted(b, b, 1, (0, 1)) == F(13, 120)


def test_restrict_and_reflect():
    b = bspline(2)
    assert b.restrict(0, 1) == PP((0, 1), ((0, 1),))
    assert b.reflect().translate(2) == b   # B_2 is symmetric about 1


@pytest.mark.parametrize("omega", [0.0, 1e-3, 0.3, math.pi, 40.0, -7.5])
def test_modulated_integral_matches_quadrature(omega):
    b = bspline(3)
    re = sum(integrate.quad(lambda t: float(b(t)) * math.cos(omega * t), a, a + 1)[0]
             for a in range(3))
    im = sum(integrate.quad(lambda t: float(b(t)) * math.sin(omega * t), a, a + 1)[0]
             for a in range(3))
    assert abs(b.modulated_integral(omega) - complex(re, im)) < 1e-12


def test_modulated_integral_of_indicator_closed_form():
    lam = np.linspace(0.01, 0.99, 50)
    got = PP.indicator(0, 2).modulated_integral(np.pi * lam)
    want = 2 * np.exp(1j * np.pi * lam) * np.sinc(lam)
    np.testing.assert_allclose(got, want, atol=1e-13)


def test_json_round_trip_literal():
    p = PP((0, F(1, 2)), ((F(-3, 4), 2),))
    data = p.to_json()
    assert data == {"breakpoints": ["0/1", "1/2"], "pieces": [["-3/4", "2/1"]]}
    assert PP.from_json(data) == p


# --- algebraic identities (randomised) -----------------------------------------

@MANY
@given(piecewise_polys(), piecewise_polys())
def test_addition_commutes_and_inverts(p, q):
    assert p + q == q + p
    assert (p + q) - q == p
    assert (p - p).is_zero


@MANY
@given(piecewise_polys(), piecewise_polys(), piecewise_polys())
def test_product_distributes(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p


@MANY
@given(piecewise_polys(max_pieces=2), piecewise_polys(max_pieces=2))
def test_convolution_integral_and_commutativity(p, q):
    c = p.convolve(q)
    assert c.integral() == p.integral() * q.integral()
    assert c == q.convolve(p)


@MANY
@given(piecewise_polys(), small_fractions, small_fractions)
def test_translate_consistent_with_evaluation(p, a, t):
    assert p.translate(a)(t) == p(t - a)
    assert p.translate(a).integral() == p.integral()


@MANY
@given(piecewise_polys(), small_fractions)
def test_scale_and_json(p, c):
    assert p.scale(c).integral() == c * p.integral()
    assert PP.from_json(p.to_json()) == p


@MANY
@given(st.lists(small_fractions, min_size=1, max_size=4),
       st.lists(small_fractions, min_size=1, max_size=4), small_fractions, small_fractions)
def test_coefficient_helpers(a, b, s, t):
    ev = lambda c, x: sum(ci * x ** i for i, ci in enumerate(c))
    assert ev(poly_mul(tuple(a), tuple(b)), t) == ev(a, t) * ev(b, t)
    assert ev(poly_shift(tuple(a), s), t) == ev(a, t + s)


@settings(max_examples=200, deadline=None)
@given(piecewise_polys(), st.floats(-30, 30))
def test_modulated_integral_against_gauss_oracle(p, omega):
    # Gauss-Legendre on each piece as an independent numerical oracle
    x, w = np.polynomial.legendre.leggauss(40)
    total = 0j
    for a, b, _ in p.intervals():
        a, b = float(a), float(b)
        t = (b - a) / 2 * x + (a + b) / 2
        vals = p.evaluate(t)
        total += np.sum(w * vals * np.exp(1j * omega * t)) * (b - a) / 2
    scale = max(1.0, sum(abs(float(c)) for _, _, cs in p.intervals() for c in cs))
    assert abs(p.modulated_integral(omega) - total) < 1e-9 * scale
