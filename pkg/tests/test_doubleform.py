import itertools
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curv import doubleform as df
from curv.curvature import core as cc
from curv.doubleform import DegreeError, DoubleForm


def rational_form(seed, n, p, q):
    rng = np.random.default_rng(seed)
    vals = np.empty((comb(n, p), comb(n, q)), dtype=object)
    for idx in np.ndindex(vals.shape):
        vals[idx] = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    return DoubleForm(n, p, q, vals)


forms = st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, n), st.integers(0, n), st.integers(0, 2 ** 16)))


def test_g_squared_component():
    g2 = df.metric(4) * df.metric(4)
    assert g2.coeffs[0, 0] == 2


def test_unit_and_metric_powers_identity_grids():
    w = rational_form(1, 4, 2, 1)
    assert df.norm(df.one(4) * w - w) == 0
    for n in (3, 4, 5):
        for p in range(n + 1):
            gp = df.scale(df.metric_power(n, p), Fraction(1, factorial(p)))
            assert (gp.coeffs == np.eye(comb(n, p), dtype=int)).all()


def test_contraction_examples():
    n = 5
    assert df.contraction(df.metric(n)).scalar() == n
    assert df.norm(df.contraction(df.metric_power(n, 2)) - df.scale(df.metric(n), 2 * (n - 1))) == 0
    with pytest.raises(DegreeError):
        df.contraction(df.one(n))
    S4 = cc.constant_curvature(4, 1)
    assert df.norm(df.contraction(cc.dd_star_p(S4, 2)) - df.scale(df.metric(4), 3)) == 0


@settings(max_examples=40, deadline=None)
@given(forms)
def test_double_star_sign(arg):
    n, p, q, seed = arg
    w = rational_form(seed, n, p, q)
    sign = (-1) ** (p * (n - p) + q * (n - q))
    assert df.norm(df.hodge_star(df.hodge_star(w)) - df.scale(w, sign)) == 0


def test_star_of_metric_powers():
    n = 4
    for p in range(n + 1):
        lhs = df.hodge_star(df.scale(df.metric_power(n, p), Fraction(1, factorial(p))))
        rhs = df.scale(df.metric_power(n, n - p), Fraction(1, factorial(n - p)))
        assert df.norm(lhs - rhs) == 0


def test_inner_product_examples():
    assert df.inner_product(df.metric(4), df.metric(4)) == 4
    S4, S5 = cc.constant_curvature(4, 1), cc.constant_curvature(5, 1)
    assert df.inner_product(S4.form, S4.form) == 6
    assert df.inner_product(S5.form, cc.dd_star_p(S5, 2)) == 30


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 16))
def test_interior_iota_adjoint(seed):
    n = 5
    rng = np.random.default_rng(seed)
    h = cc.random_symmetric(rng, n)
    p, q = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    w = rational_form(seed, n, p, q)
    v = rational_form(seed + 1, n, p - 1, q - 1)
    assert df.inner_product(df.interior_iota(h, w), v) == df.inner_product(w, h * v)


def test_interior_iota_special_cases():
    w = rational_form(3, 4, 2, 2)
    g = df.metric(4)
    assert df.norm(df.interior_iota(g, w) - df.contraction(w)) == 0
    h = df.from_symmetric_matrix(np.diag([1, 2, 3, 4]))
    assert df.interior_iota(h, g).scalar() == 10


def test_adjoint_interior_examples():
    w = rational_form(4, 4, 2, 3)
    assert df.norm(df.adjoint_interior(df.metric(4), w) - df.contraction(w)) == 0
    S4 = cc.constant_curvature(4, 1)
    assert df.adjoint_interior(S4.form, S4.form).scalar() == 6


def test_composition_examples():
    g, g2 = df.metric(4), df.metric_power(4, 2)
    assert df.norm(g @ g - g) == 0
    assert df.norm(g2 @ g2 - df.scale(g2, 2)) == 0


def test_first_bianchi_examples(rng):
    for k in range(1, 4):
        assert df.norm(df.first_bianchi_sum(df.metric_power(5, k))) == 0
    h = cc.random_symmetric(rng, 5)
    assert df.norm(df.first_bianchi_sum(h * h)) == 0


def test_evaluate_examples():
    e = np.eye(4, dtype=np.int64)
    g = df.metric(4)
    for i, j in itertools.product(range(4), repeat=2):
        assert df.evaluate(g, [e[i]], [e[j]]) == int(i == j)
    half_g2 = df.scale(df.metric_power(4, 2), Fraction(1, 2))
    assert df.evaluate(half_g2, [e[0], e[1]], [e[0], e[1]]) == 1
    R = cc.constant_curvature(4, Fraction(3, 2))
    x = np.array([Fraction(3, 5), Fraction(4, 5), 0, 0], dtype=object)
    y = np.array([Fraction(-4, 5), Fraction(3, 5), 0, 0], dtype=object)
    assert df.evaluate(R.form, [x, y], [x, y]) == Fraction(3, 2)


@settings(max_examples=30, deadline=None)
@given(forms)
def test_commutation_rule(arg):
    n, p, q, seed = arg
    w = rational_form(seed, n, min(p, n - 1), min(q, n - 1))
    assert df.norm(df.commutation_defect(w)) == 0


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        df.metric(4) + df.metric(5)
