"""Metrics on a single coordinate chart and their partial derivatives.

Three interchangeable derivative engines produce the same jet
``(g, dg, ddg, dddg)`` with ``dg[k, i, j] = d_k g_ij``,
``ddg[k, l, i, j] = d_k d_l g_ij`` and so on.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..scalars import Dual

ENGINES = ("analytic", "dual", "finite_difference")
# Central-difference steps per derivative order, each followed by one
# Richardson extrapolation. Higher orders need larger steps to stay above
# roundoff (error ~ eps / h**order).
FD_STEPS = {1: 1e-3, 2: 1e-3, 3: 3e-3}


class GeometryError(ArithmeticError):
    """Numeric failure: singular or indefinite metric, bad frame."""


class ConfigurationError(ValueError):
    """Invalid chart or engine configuration."""


@dataclass(frozen=True)
class MetricJet:
    g: np.ndarray
    dg: Optional[np.ndarray] = None
    ddg: Optional[np.ndarray] = None
    dddg: Optional[np.ndarray] = None

    @property
    def order(self) -> int:
        return sum(a is not None for a in (self.dg, self.ddg, self.dddg))

    def truncate(self, order: int) -> "MetricJet":
        parts = [self.dg, self.ddg, self.dddg]
        return MetricJet(self.g, *[p if i < order else None for i, p in enumerate(parts)])


def check_metric(g: np.ndarray, n: int) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (n, n):
        raise GeometryError(f"metric has shape {g.shape}, expected ({n}, {n})")
    if np.max(np.abs(g - g.T)) > 1e-12 * max(1.0, np.max(np.abs(g))):
        raise GeometryError("metric is not symmetric")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise GeometryError("metric is not positive definite") from exc
    return g


# nested-dual engine


def _seed(x0: float, flags) -> object:
    v = x0
    for f in flags:
        v = Dual(v, 1.0 if f else 0.0)
    return v


def _coef(x, bits) -> float:
    """Coefficient of ``prod_{l: bits[l]} eps_l`` in a nested dual (outermost level last)."""
    for level in reversed(range(len(bits))):
        if not isinstance(x, Dual):
            return 0.0 if any(bits[: level + 1]) else float(x)
        x = x.du if bits[level] else x.re
    return float(x)


def _dual_jet(metric: Callable, x: np.ndarray, order: int) -> MetricJet:
    n = len(x)
    g = check_metric(np.array([[float(_coef(v, ())) for v in row] for row in _eval(metric, x)]), n)
    if order == 0:
        return MetricJet(g)
    arrays = [np.zeros((n,) * (m + 2)) for m in range(1, order + 1)]
    for combo in itertools.combinations_with_replacement(range(n), order):
        xs = [_seed(x[i], [i == c for c in combo]) for i in range(n)]
        G = _eval(metric, xs)
        for bits in itertools.product((0, 1), repeat=order):
            dirs = tuple(c for c, b in zip(combo, bits) if b)
            if not dirs:
                continue
            block = np.array([[_coef(G[i][j], bits) for j in range(n)] for i in range(n)])
            for perm in set(itertools.permutations(dirs)):
                arrays[len(dirs) - 1][perm] = block
    return MetricJet(g, *arrays, *([None] * (3 - order)))


def _eval(metric: Callable, xs):
    G = metric(np.array(xs, dtype=object) if any(isinstance(v, Dual) for v in xs) else np.asarray(xs, float))
    return [[G[i][j] for j in range(len(xs))] for i in range(len(xs))]


# finite-difference engine


def _fd(F: Callable, x: np.ndarray, dirs: tuple, h: float) -> np.ndarray:
    if not dirs:
        return F(x)
    e = np.zeros_like(x)
    e[dirs[0]] = h
    return (_fd(F, x + e, dirs[1:], h) - _fd(F, x - e, dirs[1:], h)) / (2 * h)


def _fd_richardson(F: Callable, x: np.ndarray, dirs: tuple, h: float) -> np.ndarray:
    return (4 * _fd(F, x, dirs, h / 2) - _fd(F, x, dirs, h)) / 3


def _fd_jet(metric: Callable, x: np.ndarray, order: int, steps: dict) -> MetricJet:
    n = len(x)

    def F(y):
        return np.array(_eval(metric, y), dtype=float)

    g = check_metric(F(x), n)
    arrays = []
    for m in range(1, order + 1):
        a = np.zeros((n,) * (m + 2))
        for combo in itertools.combinations_with_replacement(range(n), m):
            block = _fd_richardson(F, x, combo, steps[m])
            for perm in set(itertools.permutations(combo)):
                a[perm] = block
        arrays.append(a)
    return MetricJet(g, *arrays, *([None] * (3 - order)))


@dataclass(frozen=True)
class MetricChart:
    """A metric ``g_ij(x)`` on one chart.

    ``metric`` must be written with plain arithmetic (and the helpers in
    :mod:`curv.scalars`) so that it also accepts nested dual numbers.
    ``analytic`` optionally returns the full order-3 :class:`MetricJet`.
    """

    n: int
    metric: Callable
    engine: str = "dual"
    analytic: Optional[Callable] = None
    max_order: int = 3
    name: str = ""
    steps: dict = field(default_factory=lambda: dict(FD_STEPS))

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ConfigurationError(f"unknown derivative engine {self.engine!r}; expected one of {ENGINES}")
        if self.engine == "analytic" and self.analytic is None:
            raise ConfigurationError("analytic engine needs closed-form partials")
        if not 0 <= self.max_order <= 3:
            raise ConfigurationError("max_order must lie in [0, 3]")
        for m in range(1, 4):
            h = self.steps.get(m)
            if h is None or not 1e-6 <= h <= 0.1:
                raise ConfigurationError(f"finite-difference step for order {m} must lie in [1e-6, 0.1]")

    def with_engine(self, engine: str) -> "MetricChart":
        return MetricChart(self.n, self.metric, engine, self.analytic, self.max_order, self.name, self.steps)

    def _point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ConfigurationError(f"point must have {self.n} coordinates, got shape {x.shape}")
        return x

    def g(self, x) -> np.ndarray:
        return check_metric(np.array(_eval(self.metric, self._point(x)), dtype=float), self.n)

    def jet(self, x, order: int = 3) -> MetricJet:
        x = self._point(x)
        if order > self.max_order:
            raise ConfigurationError(f"chart {self.name or '?'} provides derivatives up to order {self.max_order}")
        if self.engine == "analytic":
            jet = self.analytic(x)
            check_metric(jet.g, self.n)
            return jet.truncate(order)
        if self.engine == "dual":
            return _dual_jet(self.metric, x, order)
        return _fd_jet(self.metric, x, order, self.steps)
