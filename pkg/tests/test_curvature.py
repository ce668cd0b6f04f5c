from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curv import doubleform as df
from curv.curvature import (
    PreconditionError,
    constant_curvature,
    cp_curvature,
    d_of_n,
    d_of_n_brute,
    dd_star_p,
    decompose_general,
    duality_defect,
    effective_p_threshold,
    effective_p_threshold_brute,
    einstein,
    gauss_bonnet,
    h4_closed_form,
    invert_from_ddstar2,
    iota_lemma_check,
    lovelock,
    lovelock4_via_composition,
    p_curvature,
    p_curvature_formula,
    pq_curvature,
    product_curvature,
    random_algebraic_curvature,
    riemann_power,
    ricci,
    ruse_lanczos_2,
    same_weyl_expansion,
    scal,
    scal_from_s2,
    spanning_set,
)
from curv.curvature.core import AlgebraicCurvature

g = df.metric
zero = df.norm


def test_constant_curvature_hierarchy_s4():
    R = constant_curvature(4, 1)
    assert zero(ricci(R) - df.scale(g(4), 3)) == 0
    assert scal(R) == 12
    assert zero(einstein(R) - df.scale(g(4), 3)) == 0
    assert zero(dd_star_p(R, 2) - R.form) == 0
    assert zero(ruse_lanczos_2(R) - R.form) == 0


@pytest.mark.parametrize("n,k", [(4, 1), (5, Fraction(-1, 3)), (6, 2)])
def test_dd_star_constant_curvature(n, k):
    R = constant_curvature(n, k)
    for p in range(n - 1):
        expected = df.scale(df.metric_power(n, p), k / 2 * (n - p) * (n - p - 1) / Fraction(factorial(p)))
        assert zero(dd_star_p(R, p) - expected) == 0


def test_dd_star_0_and_1():
    assert dd_star_p(constant_curvature(5, 1), 0).scalar() == 10
    R = random_algebraic_curvature(3, 5)
    assert zero(dd_star_p(R, 1) - einstein(R)) == 0
    assert dd_star_p(R, 0).scalar() == scal(R) / 2


def test_flat_everything_zero():
    R = constant_curvature(5, 0)
    for p in range(4):
        assert zero(dd_star_p(R, p)) == 0
    assert zero(einstein(R)) == 0 and gauss_bonnet(R, 2) == 0
    assert zero(invert_from_ddstar2(dd_star_p(R, 2)).form) == 0


def test_product_s2_s2():
    R = product_curvature([(2, 1), (2, 1)])
    assert zero(ricci(R) - g(4)) == 0
    assert scal(R) == 4
    e = np.eye(4, dtype=np.int64)
    assert p_curvature(R, [e[0], e[1]]) == 2
    assert p_curvature(R, [e[0], e[2]]) == 0
    assert duality_defect(dd_star_p(R, 2), 1) == 0
    assert duality_defect(dd_star_p(R, 2), -1) > 0.1


def test_anti_self_dual_product():
    R = product_curvature([(2, 1), (2, -1)])
    assert scal(R) == 0
    assert duality_defect(dd_star_p(R, 2), -1) == 0


def test_riemann_power_constant():
    R = constant_curvature(5, 1)
    assert zero(riemann_power(R, 1) - R.form) == 0
    expected = df.scale(df.metric_power(5, 4), Fraction(1, 4))
    assert zero(riemann_power(R, 2) - expected) == 0


def test_lovelock_closed_forms():
    assert zero(pq_curvature(constant_curvature(5, 1), 1, 2) - df.scale(g(5), 6)) == 0
    assert zero(lovelock(constant_curvature(5, 1), 2) - df.scale(g(5), 6)) == 0
    assert zero(lovelock4_via_composition(constant_curvature(5, 1)) - df.scale(g(5), 6)) == 0
    # (k/2)^q (n-1)!/(n-2q-1)! at n=6, q=2, k=1 is 120/4 = 30
    assert zero(lovelock(constant_curvature(6, 1), 2) - df.scale(g(6), 30)) == 0
    R = random_algebraic_curvature(5, 5)
    assert zero(lovelock(R, 1) - einstein(R)) == 0


def test_gauss_bonnet_examples():
    for n, val in ((4, 6), (5, 30)):
        R = constant_curvature(n, 1)
        assert gauss_bonnet(R, 2) == h4_closed_form(R) == df.inner_product(R.form, dd_star_p(R, 2)) == val
    assert pq_curvature(constant_curvature(4, 1), 0, 2).scalar() == 6
    assert gauss_bonnet(constant_curvature(4, 0), 2) == 0


def test_iota_lemma_examples():
    R = constant_curvature(4, 1)
    h = df.from_symmetric_matrix(np.diag([1, 2, 3, 4]))
    assert iota_lemma_check(R, h) == 0
    assert iota_lemma_check(random_algebraic_curvature(1, 5), g(5)) == 0


def test_inversion_s4_and_random():
    R = constant_curvature(4, 1)
    assert zero(invert_from_ddstar2(dd_star_p(R, 2)).form - R.form) == 0
    for n in (4, 5, 6, 7):
        R = random_algebraic_curvature(n, n)
        assert zero(invert_from_ddstar2(dd_star_p(R, 2)).form - R.form) == 0


def test_same_weyl_expansion_examples():
    R = random_algebraic_curvature(2, 5)
    assert zero(same_weyl_expansion(R, 2) - dd_star_p(R, 2)) == 0
    assert zero(same_weyl_expansion(R, 1) - einstein(R)) == 0


def test_p_curvature_examples(rng):
    from curv.curvature import random_orthonormal_frame

    R = constant_curvature(4, 1)
    e = np.eye(4, dtype=np.int64)
    assert p_curvature(R, [e[0], e[3]]) == 2 == p_curvature_formula(R, [e[0], e[3]])
    Rf = random_algebraic_curvature(9, 6, mode="float")
    for p in range(2, 5):
        F = random_orthonormal_frame(rng, 6, p)
        assert abs(p_curvature(Rf, F) - p_curvature_formula(Rf, F)) < 1e-10
        assert abs(2 * cp_curvature(Rf, F) - (scal(Rf) - p_curvature(Rf, F))) < 1e-10
    with pytest.raises(PreconditionError):
        p_curvature(R, [e[0], e[0] + e[1]])


def test_scal_from_s2_examples():
    assert scal_from_s2(constant_curvature(4, 1)) == 12
    for n in (5, 6):
        R = random_algebraic_curvature(n, n)
        assert scal_from_s2(R) == df.contraction(R.form, 2).scalar()
    assert scal_from_s2(constant_curvature(5, 0)) == 0


def test_decompose_general_rejects_non_bianchi():
    vals = np.zeros((6, 6), dtype=np.int64)
    vals[0, 5] = vals[5, 0] = 1  # (01;23) without its Bianchi partners
    w = df.DoubleForm(4, 2, 2, vals)
    with pytest.raises(PreconditionError):
        decompose_general(w)


def test_spanning_set_cases():
    R = random_algebraic_curvature(0, 5)
    assert [lab for lab, _ in spanning_set(1, False, False, R)] == ["ddstar_1"]
    assert len(spanning_set(2, True, True, R)) == 3


@pytest.mark.parametrize("n,expected", [(7, 3), (8, 4), (10, 4)])
def test_d_of_n_examples(n, expected):
    assert d_of_n(n) == d_of_n_brute(n) == expected


def test_effective_threshold_range():
    for n in range(4, 13):
        for q in range(1, n):
            if 2 <= 2 * q < n:
                assert effective_p_threshold(n, q) == effective_p_threshold_brute(n, q) == min(2 * q, n - 2 * q)


def test_random_generator_conventions():
    R1 = random_algebraic_curvature(5, 4, terms=1)
    assert isinstance(R1, AlgebraicCurvature)
    assert R1.form.coeffs.dtype == object
    assert random_algebraic_curvature(5, 4, mode="float").form.coeffs.dtype == float
    assert zero(random_algebraic_curvature(5, 4).form - random_algebraic_curvature(5, 4).form) == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([4, 5, 6]))
def test_ddstar_hereditary_property(seed, n):
    R = random_algebraic_curvature(seed, n)
    for p in range(1, n - 1):
        lhs = df.contraction(dd_star_p(R, p))
        assert zero(lhs - df.scale(dd_star_p(R, p - 1), n - p - 1)) == 0
