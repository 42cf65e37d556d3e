from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heisenberg_frames.bspline import bspline, bspline_profile
from heisenberg_frames.exact import SingularSystemError, kernel, rank, solve
from heisenberg_frames.heisenberg import GroupElement, SeparableGenerator
from heisenberg_frames.moment import (ORIGIN, MomentSystem, TranslateIndex, dual_inner,
                                      existence_test, oblique_dual, q_integral,
                                      reconstruction_matrix, restricted_gram, solve_dual,
                                      support_box, support_index_set, translate_inner,
                                      verify_biorthogonality, verify_reconstruction)
from heisenberg_frames.piecewise_poly import PiecewisePolynomial as PP
from heisenberg_frames.profiles import FrequencyIndicator, TimeDomain

PHI = SeparableGenerator(PP.indicator(0, 2), PP.indicator(0, 1), bspline_profile(3))
TENT4 = PP((0, 2, 4), ((0, F(1, 2)), (2, F(-1, 2))))
PHI_SHEAR = SeparableGenerator(TENT4, PP.indicator(0, 1), bspline_profile(2))


@pytest.fixture(scope="module")
def dual():
    return oblique_dual(PHI)


@pytest.fixture(scope="module")
def shear_dual():
    return oblique_dual(PHI_SHEAR)


def test_index_sets():
    assert support_index_set(1, 1) == [ORIGIN]
    assert set(support_index_set(1, 3)) == {(0, 0, 0), (0, 0, -1), (0, 0, -2)}
    big = support_index_set(2, 1)
    assert len(big) == 12 and big[0] == ORIGIN
    assert {i.m for i in big} == {-1, 0, 1}
    assert {(i.k, i.l) for i in big} == {(-1, -1), (-1, 0), (0, -1), (0, 0)}
    with pytest.raises(ValueError):
        support_index_set(0, 1)


def test_support_box():
    assert support_box(PHI) == (1, 3)
    assert support_box(PHI_SHEAR) == (2, 2)
    with pytest.raises(TypeError):
        support_box(SeparableGenerator(PP.indicator(0, 2), PP.indicator(0, 1),
                                       FrequencyIndicator(2)))
    with pytest.raises(ValueError):
        support_box(SeparableGenerator(PP.indicator(-1, 2), PP.indicator(0, 1),
                                       bspline_profile(2)))


def test_translate_index_element():
    assert TranslateIndex(1, -2, 3).element == GroupElement(2, -2, 3)
    assert str(TranslateIndex(0, -1, 2)) == "(0,-1,2)"


def test_example43_gram_exact():
    S = restricted_gram(PHI, support_index_set(1, 3))
    assert S.exact
    order = [TranslateIndex(0, 0, m) for m in (0, -1, -2)]
    G = [[S.gram[S.indices.index(a)][S.indices.index(b)] * 60 for b in order] for a in order]
    assert G == [[6, 13, 1], [13, 54, 13], [1, 13, 6]]
    assert all(isinstance(x, F) for row in S.gram for x in row)
    assert S.rhs[S.target] == 1 and sum(S.rhs) == 1


def test_off_lattice_rows_vanish_for_example43():
    S = restricted_gram(PHI, [ORIGIN, (-1, 0, 0), (0, -1, 0), (1, 0, -1)])
    for i in range(1, 4):
        assert all(x == 0 for x in S.gram[i])
    assert S.gram[0][0] > 0


def test_existence_verdicts():
    assert existence_test(restricted_gram(PHI, support_index_set(1, 3))).label == "solvable"
    c = F(3, 7)
    dup = MomentSystem([ORIGIN, TranslateIndex(0, 0, 1)], [[c, c], [c, c]], [F(1), F(0)], True)
    assert existence_test(dup).label == "not_solvable"
    rng = np.random.default_rng(0)
    diag = np.diag(rng.uniform(0.5, 2, 4))
    idx = [ORIGIN] + [TranslateIndex(0, 0, m) for m in (1, 2, 3)]
    sys_f = MomentSystem(idx, diag.tolist(), [1, 0, 0, 0], False)
    assert existence_test(sys_f).solvable


def test_unsolvable_generator_reports_kernel():
    # chi_[0,4] makes the k = 0 and k = -1 restrictions coincide on Q
    phi = SeparableGenerator(PP.indicator(0, 4), PP.indicator(0, 1), bspline_profile(2))
    with pytest.raises(SingularSystemError) as err:
        oblique_dual(phi)
    assert err.value.kernel


def test_example43_dual_exact(dual):
    d = {i.m: v for i, v in dual.coefficients.items()}
    assert d == {0: F(93, 2), -1: F(-39, 2), -2: F(69, 2)}
    assert dual.exact
    assert dual.t_poly == PP.polynomial_on([F(15, 2), -54, 60], 0, 1)
    assert dual.t_poly == PP.polynomial_on([5, -36, 40], 0, 1).scale(F(3, 2))
    assert dual.dual.u == PP.indicator(0, 2) and dual.dual.v == PP.indicator(0, 1)


def test_single_index_system():
    c = F(5, 3)
    S = MomentSystem([ORIGIN], [[c]], [F(1)], True)
    d = solve_dual(PHI, S)
    assert d.coefficients[ORIGIN] == 1 / c
    assert d.t_poly == bspline(3).restrict(0, 1).scale(1 / c)


def test_dual_evaluate_matches_separable_form(dual):
    rng = np.random.default_rng(1)
    x, y, t = rng.uniform(-0.5, 2.5, 50), rng.uniform(-0.5, 1.5, 50), rng.uniform(-0.5, 1.5, 50)
    np.testing.assert_allclose(dual.evaluate(x, y, t), dual.dual(x, y, t), atol=1e-12)


def test_biorthogonality_example43(dual):
    assert translate_inner(PHI, ORIGIN, dual.dual, ORIGIN) == (1, True)
    assert dual_inner(PHI, dual, ORIGIN, (2, 0, 0))[0] == 0
    rep = verify_biorthogonality(PHI, dual, (range(-2, 3), range(-2, 3), range(-4, 5)))
    assert rep.max_deviation <= 1e-10 and rep.exact


def test_reconstruction_example43(dual):
    assert verify_reconstruction(PHI, dual, {ORIGIN: 1.0}) <= 1e-10
    assert verify_reconstruction(PHI, dual, {TranslateIndex(0, 0, 5): 2.5}) <= 1e-10
    rng = np.random.default_rng(7)
    support = [TranslateIndex(k, l, m) for k in (-1, 0, 1) for l in (-1, 0, 1) for m in (-1, 0, 1)]
    cache = reconstruction_matrix(PHI, dual, support)
    for _ in range(5):
        c = dict(zip(support, rng.standard_normal(27)))
        assert verify_reconstruction(PHI, dual, c, cache) <= 1e-8


def test_dual_translates_orthogonal(dual):
    w = [TranslateIndex(k, l, m) for k in (-1, 0, 1) for l in (-1, 0, 1) for m in (-1, 0, 1)]
    for a in w:
        for b in w:
            val, ex = translate_inner(dual.dual, a, dual.dual, b)
            if a != b:
                assert val == 0


@pytest.mark.parametrize("s", [F(2), F(-1, 3), F(5, 4)])
def test_scaling_covariance(dual, s):
    phi_s = SeparableGenerator(PHI.u, PHI.v, TimeDomain(PHI.t_part.h.scale(s)))
    ds = oblique_dual(phi_s)
    for i, v in dual.coefficients.items():
        assert ds.coefficients[i] == v / s ** 2
    assert ds.t_poly == dual.t_poly.scale(1 / s)
    assert translate_inner(phi_s, ORIGIN, ds.dual, ORIGIN)[0] == 1


def test_general_quadrature_agrees_with_fast_path():
    for a, b in [((0, 0, 0), (0, 0, -1)), ((0, 0, -1), (0, 0, -1)), ((0, 0, -2), (0, 0, 0))]:
        a, b = TranslateIndex(*a), TranslateIndex(*b)
        exact_val = restricted_gram(PHI, [ORIGIN, a, b]).gram[1][2] if a != b else \
            restricted_gram(PHI, [ORIGIN, a]).gram[-1][-1]
        quad, err = q_integral([(1, PHI, a.element.inverse())], [(1, PHI, b.element.inverse())])
        assert abs(quad - float(exact_val)) <= 1e-12


def test_sheared_generator_uses_general_path(shear_dual):
    S = restricted_gram(PHI_SHEAR, support_index_set(2, 2))
    assert not S.exact and len(S.indices) == 16
    assert np.allclose(S.as_array(), S.as_array().T, atol=1e-14)
    assert shear_dual.dual is None
    assert any(i.k != 0 for i, v in shear_dual.coefficients.items() if abs(v) > 1e-12)
    rep = verify_biorthogonality(PHI_SHEAR, shear_dual,
                                 (range(-1, 2), range(-1, 2), range(-2, 3)))
    assert rep.max_deviation <= 1e-10 and not rep.exact


def test_sheared_entry_against_hand_integral():
    # w = (-1, 0, 0): (L_w phi)(x, y, t) = u(x + 2) v(y) h(t - y).  On Q this gives
    # int_0^2 (1 - x/2)(x/2) dx * int_0^1 int_y^1 (t - y) t dt dy = (1/3)(1/8)
    right = SeparableGenerator(TENT4.restrict(0, 2), PP.indicator(0, 1),
                               TimeDomain(bspline(2).restrict(0, 1)))
    val, ex = translate_inner(PHI_SHEAR, TranslateIndex(-1, 0, 0), right, ORIGIN)
    assert not ex
    assert abs(val - 1 / 24) < 1e-13


def test_exact_linear_algebra():
    A = [[1, 2], [2, 4]]
    assert rank(A) == 1
    (v,) = kernel(A)
    assert [2 * v[0] + 4 * v[1], v[0] + 2 * v[1]] == [0, 0]
    assert solve([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    with pytest.raises(SingularSystemError):
        solve(A, [1, 0])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_exact_solve_property(A, x):
    b = [sum(a * xi for a, xi in zip(row, x)) for row in A]
    sol = solve(A, b)
    assert [sum(a * s for a, s in zip(row, sol)) for row in A] == b
    for v in kernel(A):
        assert all(sum(a * vi for a, vi in zip(row, v)) == 0 for row in A)
