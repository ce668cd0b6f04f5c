import math

import numpy as np
import pytest

from curv import doubleform as df
from curv.curvature import core as cc
from curv.geometry import calculus as gc
from curv.geometry import models as gm
from curv.geometry.chart import ConfigurationError, GeometryError, MetricChart
from curv.geometry.frame import christoffel, riemann_at


def test_christoffel_flat_and_polar():
    assert np.max(np.abs(christoffel(gm.euclidean(4).chart, np.ones(4) * 0.3))) == 0
    m = gm.sphere_polar()
    x = np.array([0.7, 0.2])
    G = christoffel(m.chart, x)
    assert G[0, 1, 1] == pytest.approx(-math.sin(0.7) * math.cos(0.7), abs=1e-12)


def test_christoffel_singular_metric():
    chart = MetricChart(2, lambda x: [[1.0, 0.0], [0.0, x[0] * x[0]]])
    with pytest.raises(GeometryError):
        chart.g(np.zeros(2))


def test_engines_agree_on_perturbed_flat():
    m = gm.perturbed_flat(4, seed=5, epsilon=0.05, degree=3)
    x = m.sample_points(1, 1)[0]
    a = m.chart.with_engine("dual").jet(x)
    b = m.chart.with_engine("finite_difference").jet(x)
    for u, v in zip((a.dg, a.ddg, a.dddg), (b.dg, b.ddg, b.dddg)):
        assert np.max(np.abs(u - v)) < 1e-6


def test_engine_configuration_errors():
    with pytest.raises(ConfigurationError):
        MetricChart(2, lambda x: np.eye(2), engine="symbolic")
    with pytest.raises(ConfigurationError):
        MetricChart(2, lambda x: np.eye(2), engine="analytic")
    with pytest.raises(ConfigurationError):
        MetricChart(2, lambda x: np.eye(2), steps={1: 1e-9, 2: 1e-3, 3: 1e-3})


@pytest.mark.parametrize("model", [gm.sphere(4), gm.hyperbolic(4), gm.euclidean(4),
                                   gm.product([gm.sphere(2), gm.sphere(2)])])
def test_riemann_matches_exact(model):
    exact = cc.to_float_form(model.exact_curvature.form)
    for x in model.sample_points(3, 2):
        assert df.norm(riemann_at(model.chart, x).R.form - exact) < 1e-8


def test_nabla_g_and_locally_symmetric():
    m = gm.sphere(4)
    x = m.sample_points(0, 1)[0]
    for w in gc.covariant_derivative(m.chart, gc.metric_field, x):
        assert df.norm(w) < 1e-8
    for w in gc.covariant_derivative(m.chart, lambda fc: fc.R.form, x):
        assert df.norm(w) < 1e-6


@pytest.fixture(scope="module")
def generic():
    m = gm.perturbed_flat(4, seed=7, epsilon=0.05, degree=3)
    return m, m.sample_points(2, 1)[0]


def test_divergence_free_dd_star(generic):
    m, x = generic
    for p in (1, 2):
        assert df.norm(gc.divergence_delta(m.chart, lambda fc, p=p: cc.dd_star_p(fc.R, p), x)) < 1e-6
    assert df.norm(gc.bianchi_sum_D(m.chart, lambda fc: fc.R.form, x)) < 1e-6
    assert df.norm(gc.bianchi_sum_D(m.chart, lambda fc: cc.dd_star_p(fc.R, 2), x)) > 1e-5


def test_contracted_bianchi(generic):
    m, x = generic
    assert df.norm(gc.divergence_delta(m.chart, lambda fc: cc.ricci(fc.R), x)) > 1e-4
    assert df.norm(gc.divergence_delta(m.chart, lambda fc: cc.einstein(fc.R), x)) < 1e-6
    d = gc.divergence_delta(m.chart, lambda fc: df.metric(4) * cc.scal(fc.R), x)
    grad = gc.scal_gradient(m.chart, x)
    assert np.max(np.abs(d.coeffs.ravel() + grad)) < 1e-8 and np.linalg.norm(grad) > 1e-4


def test_fd_mode_matches_dual(generic):
    m, x = generic
    F = lambda fc: cc.dd_star_p(fc.R, 1)
    a = gc.divergence_delta(m.chart, F, x)
    b = gc.divergence_delta(m.chart, F, x, mode="finite_difference")
    assert df.norm(a - b) < 1e-6
    with pytest.raises(ConfigurationError):
        gc.divergence_delta(m.chart, F, x, mode="finite_difference", h=1e-9)
    with pytest.raises(ConfigurationError):
        gc.divergence_delta(m.chart, F, x, mode="symbolic")


def test_catalog_expectations():
    ex = gm.model_catalog("sphere", {"n": 4}).expectations
    assert ex["scal"] == 12 and ex["h4"] == 6 and ex["s_p"][2] == 2 and ex["self_dual"]
    pr = gm.load_model({"model": "product", "params": {"factors": [
        {"model": "sphere", "params": {"n": 2}}, {"model": "hyperbolic", "params": {"n": 2}}]}})
    assert pr.expectations["scal"] == 0 and pr.expectations["anti_self_dual"]
    pf = gm.model_catalog("perturbed_flat", {"n": 4, "seed": 1})
    assert pf.exact_curvature is None


def test_polynomial_metric_config():
    cfg = {"polynomial_metric": {"n": 3, "epsilon": 0.1,
                                 "coefficients": [{"i": 0, "j": 1, "monomial": [1, 0, 1], "value": 1.0}]}}
    m = gm.load_model(cfg)
    x = np.array([0.1, 0.2, 0.3])
    g = m.chart.g(x)
    assert g[0, 1] == pytest.approx(0.1 * 0.1 * 0.3) and g[0, 0] == 1.0
    with pytest.raises(ConfigurationError):
        gm.load_model({"polynomial_metric": {"n": 3}})
    with pytest.raises(ConfigurationError):
        gm.load_model({"model": "torus"})
