"""Covariant derivative, divergence and second Bianchi sum of frame fields.

A *field* is a function ``FramedCurvature -> DoubleForm`` giving the frame
components of a ``(p, q)`` double form at a point, e.g.
``lambda fc: dd_star_p(fc.R, 2)``. Fields must be written with generic
arithmetic so that dual-valued curvature flows through them.
"""
from __future__ import annotations

from math import comb
from typing import Callable

import numpy as np

from .. import combinatorics as cb
from .. import doubleform as df
from ..curvature.core import scal, schouten
from ..doubleform import DegreeError, DoubleForm
from .chart import ConfigurationError, MetricChart
from .frame import FramedCurvature, framed, gradient_forms, riemann_at, value_form

Field = Callable[[FramedCurvature], DoubleForm]
MODES = ("dual", "finite_difference")
FD_FIELD_STEP = 1e-4


def derivation_matrix(omega_a: np.ndarray, n: int, p: int) -> np.ndarray:
    """Matrix of the derivation of ``Lambda^p`` induced by ``E_b -> sum_c omega_a[c, b] E_c``.

    ``M[K, I]`` is the coefficient of ``E_K`` in the image of ``E_I``.
    """
    M = np.zeros((comb(n, p), comb(n, p)))
    ranks = cb.rank_map(n, p)
    for r, I in enumerate(cb.basis(n, p)):
        for t, b in enumerate(I):
            rest = I[:t] + I[t + 1:]
            for c in range(n):
                w = omega_a[c, b]
                if w == 0 or (c in rest):
                    continue
                sign, merged = cb.merge_sign((c,), rest)
                # E_c placed in slot t, then sorted: moving it from the front costs t swaps
                M[ranks[merged], r] += w * sign * (-1) ** t
    return M


def _field_derivatives(chart: MetricChart, field: Field, x: np.ndarray, mode: str, h: float):
    """Frame value of the field and its coordinate partials ``d_k T``."""
    if mode == "dual":
        fc = framed(chart, x, lift=True)
        T = field(fc)
        return framed(chart, x).connection, fc, value_form(T), [w.coeffs for w in gradient_forms(T)]
    if mode != "finite_difference":
        raise ConfigurationError(f"unknown differentiation mode {mode!r}; expected one of {MODES}")
    if not 1e-6 <= h <= 1e-1:
        raise ConfigurationError(f"finite-difference step {h} outside [1e-6, 1e-1]")
    fc = framed(chart, x)

    def at(y):
        return np.asarray(field(riemann_at(chart, y)).coeffs, dtype=float)

    grads = []
    for k in range(chart.n):
        e = np.zeros(chart.n)
        e[k] = 1.0

        def central(s):
            return (at(x + s * e) - at(x - s * e)) / (2 * s)

        grads.append((4 * central(h / 2) - central(h)) / 3)
    return fc.connection, fc, value_form(field(fc)), grads


def covariant_derivative(chart: MetricChart, field: Field, x, mode: str = "dual",
                         h: float = FD_FIELD_STEP) -> list[DoubleForm]:
    """``[nabla_{E_a} T for a in range(n)]`` in the moving frame."""
    x = np.asarray(x, dtype=float)
    n = chart.n
    omega, fc, T, grads = _field_derivatives(chart, field, x, mode, h)
    E = fc.frame  # rows are frame vectors
    out = []
    for a in range(n):
        dir_deriv = sum(E[a, k] * grads[k] for k in range(n))
        Mp = derivation_matrix(omega[a], n, T.p)
        Mq = derivation_matrix(omega[a], n, T.q)
        coeffs = dir_deriv - Mp.T @ T.coeffs - T.coeffs @ Mq
        out.append(DoubleForm(n, T.p, T.q, np.asarray(coeffs, dtype=float)))
    return out


def divergence_from(nabla: list[DoubleForm]) -> DoubleForm:
    """``(delta T)(x_2..x_p; y) = -sum_a (nabla_a T)(E_a, x_2..x_p; y)``."""
    n, p, q = nabla[0].n, nabla[0].p, nabla[0].q
    if p < 1:
        raise DegreeError("divergence needs p >= 1")
    out = np.zeros((comb(n, p - 1), comb(n, q)))
    table = cb.insertion(n, p - 1)
    for a in range(n):
        I, aI, s = table[a]
        if len(I):
            out[I] -= s[:, None] * nabla[a].coeffs[aI]
    return DoubleForm(n, p - 1, q, out)


def bianchi_from(nabla: list[DoubleForm]) -> DoubleForm:
    """``(D T)(x_1..x_{p+1}; y) = sum_j (-1)**(j+1) (nabla_{x_j} T)(..x_j hat..; y)``."""
    n, p, q = nabla[0].n, nabla[0].p, nabla[0].q
    if p + 1 > n:
        raise DegreeError(f"second Bianchi sum needs p + 1 <= n, got p={p}, n={n}")
    out = np.zeros((comb(n, p + 1), comb(n, q)))
    table = cb.insertion(n, p)
    for k in range(n):
        I, kI, s = table[k]
        if len(I):
            out[kI] += s[:, None] * nabla[k].coeffs[I]
    return DoubleForm(n, p + 1, q, out)


def divergence_delta(chart: MetricChart, field: Field, x, mode: str = "dual",
                     h: float = FD_FIELD_STEP) -> DoubleForm:
    return divergence_from(covariant_derivative(chart, field, x, mode, h))


def bianchi_sum_D(chart: MetricChart, field: Field, x, mode: str = "dual",
                  h: float = FD_FIELD_STEP) -> DoubleForm:
    return bianchi_from(covariant_derivative(chart, field, x, mode, h))


def hodge_field(field: Field) -> Field:
    return lambda fc: df.hodge_star(field(fc))


def star_delta_star(chart: MetricChart, field: Field, x, mode: str = "dual") -> DoubleForm:
    """``* delta *`` applied to the field; equals ``(-1)**p D`` of the field."""
    return df.hodge_star(divergence_delta(chart, hodge_field(field), x, mode))


def cotton(chart: MetricChart, x, mode: str = "dual") -> DoubleForm:
    """``D A`` for the Schouten tensor ``A``; a ``(2,1)`` form."""
    return bianchi_sum_D(chart, lambda fc: schouten(fc.R), x, mode)


def scal_gradient(chart: MetricChart, x) -> np.ndarray:
    """``E_a(Scal)`` for each frame vector."""
    fc = framed(chart, np.asarray(x, dtype=float), lift=True)
    s = scal(fc.R)
    grad = np.asarray(getattr(s, "du", np.zeros(chart.n)), dtype=float)
    return fc.frame @ grad


def metric_field(fc: FramedCurvature) -> DoubleForm:
    return df.metric(fc.n)
