"""Catalog of metric models with analytic partials and closed-form expectations."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .. import scalars as S
from ..curvature.core import AlgebraicCurvature, constant_curvature, product_curvature
from .chart import ConfigurationError, MetricChart, MetricJet

MODEL_NAMES = ("euclidean", "sphere", "hyperbolic", "product", "sphere_polar", "perturbed_flat")
MAX_MODEL_DIM = 8


@dataclass(frozen=True)
class Model:
    name: str
    params: dict
    chart: MetricChart
    expectations: dict
    exact_curvature: Optional[AlgebraicCurvature] = None
    center: np.ndarray = field(default=None)
    sample_radius: float = 0.5

    @property
    def n(self) -> int:
        return self.chart.n

    def sample_points(self, seed: int, count: int) -> list[np.ndarray]:
        """Seeded points uniformly distributed in the ball of radius ``sample_radius``."""
        rng = np.random.default_rng(seed)
        center = np.zeros(self.n) if self.center is None else self.center
        out = []
        for _ in range(count):
            v = rng.normal(size=self.n)
            v *= self.sample_radius * rng.uniform() ** (1 / self.n) / np.linalg.norm(v)
            out.append(center + v)
        return out


# analytic jets


def _conformal_jet(n: int, c: float, a: float, s: float) -> Callable:
    """Jet of ``g = c (a + s|x|**2)**-2 delta``."""

    def jet(x: np.ndarray) -> MetricJet:
        u = a + s * float(x @ x)
        f0, f1, f2, f3 = c * u ** -2, -2 * c * u ** -3, 6 * c * u ** -4, -24 * c * u ** -5
        du = 2 * s * x
        ddu = 2 * s * np.eye(n)
        d1 = f1 * du
        d2 = f2 * np.einsum("k,l->kl", du, du) + f1 * ddu
        d3 = (f3 * np.einsum("k,l,m->klm", du, du, du)
              + f2 * (np.einsum("kl,m->klm", ddu, du) + np.einsum("km,l->klm", ddu, du)
                      + np.einsum("lm,k->klm", ddu, du)))
        eye = np.eye(n)
        return MetricJet(f0 * eye, np.einsum("k,ij->kij", d1, eye),
                         np.einsum("kl,ij->klij", d2, eye), np.einsum("klm,ij->klmij", d3, eye))

    return jet


def _conformal_metric(n: int, c: float, a: float, s: float) -> Callable:
    def metric(x):
        r2 = 0.0
        for v in x:
            r2 = r2 + v * v
        f = c * (a + s * r2) ** -2
        return [[f if i == j else 0.0 for j in range(n)] for i in range(n)]

    return metric


def _polar_metric(x):
    return [[1.0, 0.0], [0.0, S.sin(x[0]) ** 2]]


def _polar_jet(x: np.ndarray) -> MetricJet:
    t = x[0]
    h = [math.sin(t) ** 2, math.sin(2 * t), 2 * math.cos(2 * t), -4 * math.sin(2 * t)]
    g = np.diag([1.0, h[0]])
    dg, ddg, dddg = np.zeros((2, 2, 2)), np.zeros((2,) * 4), np.zeros((2,) * 5)
    dg[0, 1, 1], ddg[0, 0, 1, 1], dddg[0, 0, 0, 1, 1] = h[1], h[2], h[3]
    return MetricJet(g, dg, ddg, dddg)


class PolynomialMetric:
    """``g = delta + epsilon * P(x)`` with symmetric polynomial entries.

    ``terms`` holds ``(i, j, value, exponents)`` with ``i <= j``; each term is
    added to both ``(i, j)`` and ``(j, i)``.
    """

    def __init__(self, n: int, epsilon: float, terms: Sequence[tuple[int, int, float, tuple[int, ...]]]):
        self.n = n
        self.epsilon = float(epsilon)
        self.terms = []
        for i, j, v, e in terms:
            i, j = min(i, j), max(i, j)
            e = tuple(int(k) for k in e)
            if not (0 <= i < n and 0 <= j < n) or len(e) != n or min(e, default=0) < 0:
                raise ConfigurationError(f"invalid polynomial term {(i, j, v, e)} for n={n}")
            self.terms.append((i, j, float(v), e))

    def __call__(self, x):
        n = self.n
        G = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
        for i, j, v, e in self.terms:
            mono = v * self.epsilon
            for k, p in enumerate(e):
                if p:
                    mono = mono * x[k] ** p
            G[i][j] = G[i][j] + mono
            if i != j:
                G[j][i] = G[j][i] + mono
        return G

    def _deriv(self, x: np.ndarray, dirs: tuple) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        counts = np.bincount(np.asarray(dirs, dtype=int), minlength=self.n) if dirs else np.zeros(self.n, int)
        for i, j, v, e in self.terms:
            coef = v * self.epsilon
            for k, p in enumerate(e):
                d = counts[k]
                if d > p:
                    coef = 0.0
                    break
                coef *= math.perm(p, d) * x[k] ** (p - d)
            out[i, j] += coef
            if i != j:
                out[j, i] += coef
        if not dirs:
            out += np.eye(self.n)
        return out

    def jet(self, x: np.ndarray) -> MetricJet:
        n = self.n
        arrays = [self._deriv(x, ())]
        for m in range(1, 4):
            a = np.zeros((n,) * (m + 2))
            for combo in itertools.combinations_with_replacement(range(n), m):
                block = self._deriv(x, combo)
                for perm in set(itertools.permutations(combo)):
                    a[perm] = block
            arrays.append(a)
        return MetricJet(*arrays)

    def to_config(self) -> dict:
        return {"polynomial_metric": {
            "n": self.n, "epsilon": self.epsilon,
            "coefficients": [{"i": i, "j": j, "monomial": list(e), "value": v} for i, j, v, e in self.terms]}}


def _product_parts(factors: Sequence["Model"]):
    dims = [f.n for f in factors]
    offsets = np.cumsum([0] + dims)
    n = int(offsets[-1])

    def metric(x):
        G = [[0.0] * n for _ in range(n)]
        for f, o, d in zip(factors, offsets, dims):
            B = f.chart.metric(x[o:o + d])
            for i in range(d):
                for j in range(d):
                    G[o + i][o + j] = B[i][j]
        return G

    def jet(x):
        parts = [np.zeros((n,) * (m + 2)) for m in range(4)]
        for f, o, d in zip(factors, offsets, dims):
            fj = f.chart.analytic(x[o:o + d])
            for m, arr in enumerate([fj.g, fj.dg, fj.ddg, fj.dddg]):
                parts[m][(slice(o, o + d),) * (m + 2)] = arr
        return MetricJet(*parts)

    return n, metric, jet


# closed-form expectations


def constant_curvature_expectations(n: int, k) -> dict:
    """Closed forms on a space of constant sectional curvature ``k``."""
    out = {
        "sectional": k,
        "scal": n * (n - 1) * k,
        "ricci_factor": (n - 1) * k,
        "einstein_factor": Fraction((n - 1) * (n - 2), 2) * k,
        "s_p": {p: k * (n - p) * (n - p - 1) for p in range(n - 1)},
        "lovelock_factor": {q: (k / 2) ** q * Fraction(math.factorial(n - 1), math.factorial(n - 2 * q - 1))
                            for q in range(1, (n + 1) // 2) if 2 * q < n},
    }
    if n >= 4:
        out["h4"] = k * k * (n - 2) * (n - 3) * Fraction(n * (n - 1), 4)
    if n == 4:
        out["self_dual"] = True
        out["anti_self_dual"] = k == 0
    return out


def product_expectations(blocks: Sequence[tuple[int, object]]) -> dict:
    out = {"scal": sum(d * (d - 1) * k for d, k in blocks),
           "ricci_blocks": [(d, (d - 1) * k) for d, k in blocks]}
    if [d for d, _ in blocks] == [2, 2]:
        (_, k1), (_, k2) = blocks
        out["self_dual"] = k1 == k2
        out["anti_self_dual"] = k1 == -k2
    return out


def _exact(v):
    return Fraction(v) if isinstance(v, (int, float, Fraction)) else v


def _check_dim(n, lo=2):
    if not isinstance(n, int) or not lo <= n <= MAX_MODEL_DIM:
        raise ConfigurationError(f"dimension must be an integer in [{lo}, {MAX_MODEL_DIM}], got {n!r}")
    return n


def euclidean(n: int, engine: str = "dual") -> Model:
    _check_dim(n, 1)

    def metric(x):
        return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]

    def jet(x):
        return MetricJet(np.eye(n), *[np.zeros((n,) * (m + 2)) for m in range(1, 4)])

    return Model("euclidean", {"n": n}, MetricChart(n, metric, engine, jet, name="euclidean"),
                 constant_curvature_expectations(n, Fraction(0)), constant_curvature(n, 0), sample_radius=1.0)


def sphere(n: int, r=1, engine: str = "dual") -> Model:
    """Round sphere of radius ``r`` in stereographic coordinates."""
    _check_dim(n)
    if not r > 0:
        raise ConfigurationError("radius must be positive")
    r2 = float(r) ** 2
    args = (n, 4 * r2 * r2, r2, 1.0)
    k = 1 / _exact(r) ** 2
    chart = MetricChart(n, _conformal_metric(*args), engine, _conformal_jet(*args), name=f"sphere{n}")
    return Model("sphere", {"n": n, "r": r}, chart, constant_curvature_expectations(n, k),
                 constant_curvature(n, k), sample_radius=float(r))


def hyperbolic(n: int, r=1, engine: str = "dual") -> Model:
    """Hyperbolic space of curvature ``-1/r**2`` on the Poincare ball of radius ``r``."""
    _check_dim(n)
    if not r > 0:
        raise ConfigurationError("radius must be positive")
    r2 = float(r) ** 2
    args = (n, 4 * r2 * r2, r2, -1.0)
    k = -1 / _exact(r) ** 2
    chart = MetricChart(n, _conformal_metric(*args), engine, _conformal_jet(*args), name=f"hyperbolic{n}")
    return Model("hyperbolic", {"n": n, "r": r}, chart, constant_curvature_expectations(n, k),
                 constant_curvature(n, k), sample_radius=0.5 * float(r))


def sphere_polar(engine: str = "dual") -> Model:
    """Unit 2-sphere in polar coordinates ``(theta, phi)``."""
    chart = MetricChart(2, _polar_metric, engine, _polar_jet, name="sphere_polar")
    return Model("sphere_polar", {}, chart, constant_curvature_expectations(2, Fraction(1)),
                 constant_curvature(2, 1), center=np.array([math.pi / 2, 0.0]), sample_radius=0.5)


def product(factors: Sequence[Model], engine: str = "dual") -> Model:
    if len(factors) < 2:
        raise ConfigurationError("product needs at least two factors")
    if any(f.center is not None for f in factors):
        raise ConfigurationError("product factors must be centered at the origin")
    n, metric, jet = _product_parts(factors)
    _check_dim(n)
    blocks = []
    exact = all(f.exact_curvature is not None and "sectional" in f.expectations for f in factors)
    if exact:
        blocks = [(f.n, f.expectations["sectional"]) for f in factors]
    chart = MetricChart(n, metric, engine, jet, name="product")
    return Model("product", {"factors": [{"model": f.name, "params": f.params} for f in factors]}, chart,
                 product_expectations(blocks) if exact else {},
                 product_curvature(blocks) if exact else None,
                 sample_radius=min(f.sample_radius for f in factors))


def polynomial_metric(poly: PolynomialMetric, engine: str = "dual", name: str = "polynomial_metric",
                      params: Optional[dict] = None) -> Model:
    chart = MetricChart(poly.n, poly, engine, poly.jet, name=name)
    return Model(name, params if params is not None else poly.to_config()["polynomial_metric"], chart, {},
                 None, sample_radius=0.5)


def perturbed_flat(n: int, seed: int = 0, epsilon: float = 0.05, degree: int = 2, engine: str = "dual") -> Model:
    """``delta + epsilon * P`` with one seeded random monomial of each degree per entry."""
    _check_dim(n)
    if not 1 <= degree <= 6:
        raise ConfigurationError("degree must lie in [1, 6]")
    if not 0 <= epsilon <= 0.2:
        raise ConfigurationError("epsilon must lie in [0, 0.2] to keep the metric positive definite")
    rng = np.random.default_rng(seed)
    terms = []
    for i in range(n):
        for j in range(i, n):
            for d in range(1, degree + 1):
                e = np.bincount(rng.integers(0, n, size=d), minlength=n)
                terms.append((i, j, float(rng.uniform(-1, 1)), tuple(int(v) for v in e)))
    return polynomial_metric(PolynomialMetric(n, epsilon, terms), engine, "perturbed_flat",
                             {"n": n, "seed": seed, "epsilon": epsilon, "degree": degree})


def model_catalog(name: str, params: Optional[dict] = None, engine: str = "dual") -> Model:
    """Build a catalog model from its name and parameter dictionary."""
    params = dict(params or {})
    try:
        if name == "euclidean":
            return euclidean(params.pop("n"), engine=engine, **params)
        if name == "sphere":
            return sphere(params.pop("n"), engine=engine, **params)
        if name == "hyperbolic":
            return hyperbolic(params.pop("n"), engine=engine, **params)
        if name == "sphere_polar":
            return sphere_polar(engine=engine, **params)
        if name == "perturbed_flat":
            return perturbed_flat(params.pop("n"), engine=engine, **params)
        if name == "product":
            factors = [load_model(f, engine=engine) for f in params.pop("factors")]
            if params:
                raise TypeError(f"unexpected parameters {sorted(params)}")
            return product(factors, engine=engine)
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"invalid parameters for model {name!r}: {exc}") from exc
    raise ConfigurationError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")


def load_model(config: dict, engine: str = "dual") -> Model:
    """Model from a JSON-style config (see README for the schema)."""
    if not isinstance(config, dict):
        raise ConfigurationError("model config must be a JSON object")
    if "polynomial_metric" in config:
        poly_cfg = config["polynomial_metric"]
        try:
            n = _check_dim(poly_cfg["n"], 1)
            terms = [(c["i"], c["j"], c["value"], tuple(c["monomial"])) for c in poly_cfg["coefficients"]]
            poly = PolynomialMetric(n, poly_cfg.get("epsilon", 1.0), terms)
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"invalid polynomial_metric config: {exc}") from exc
        return polynomial_metric(poly, engine)
    if "model" not in config:
        raise ConfigurationError("model config needs a 'model' or 'polynomial_metric' key")
    return model_catalog(config["model"], config.get("params", {}), engine)
