"""Levi-Civita data at a point: Christoffel symbols, curvature in a moving orthonormal frame.

The pipeline is written once, for generic scalars. Feeding it plain floats
gives values; feeding it duals ``Dual(value, gradient)`` built from the next
order of the metric jet gives the coordinate gradient of every output as
well, which is what covariant derivatives of curvature fields need.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import doubleform as df
from .. import scalars as S
from ..curvature.core import AlgebraicCurvature
from ..scalars import Dual
from .chart import GeometryError, MetricChart, MetricJet

FRAME_TOL = 1e-10
CURVATURE_TOL = 1e-8


def _lift(values: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """Object array of ``Dual(values[idx], grads[:, idx])``."""
    out = np.empty(values.shape, dtype=object)
    for idx in np.ndindex(values.shape):
        out[idx] = Dual(float(values[idx]), grads[(slice(None),) + idx].copy())
    return out


def _values(a: np.ndarray) -> np.ndarray:
    if a.dtype != object:
        return a
    return np.vectorize(S.to_float, otypes=[float])(a)


def _gradients(a: np.ndarray, n: int) -> np.ndarray:
    """``out[k, idx] = d_k a[idx]`` for an object array of gradient duals."""
    out = np.zeros((n,) + a.shape)
    for idx in np.ndindex(a.shape):
        v = a[idx]
        if isinstance(v, Dual):
            out[(slice(None),) + idx] = v.du
    return out


def gram_schmidt(G: np.ndarray) -> np.ndarray:
    """Orthonormalize the coordinate basis in order; returns ``E`` with frame vectors as columns."""
    n = G.shape[0]
    E = np.zeros((n, n), dtype=G.dtype)
    for a in range(n):
        v = np.zeros(n, dtype=G.dtype)
        v[a] = 1.0
        for b in range(a):
            v = v - E[:, b] * (E[:, b] @ G[:, a])
        nrm2 = v @ G @ v
        if S.to_float(nrm2) <= 0:
            raise GeometryError("Gram-Schmidt failed: metric not positive definite")
        E[:, a] = v * (1 / S.sqrt(nrm2))
    return E


def _christoffel_first(dG: np.ndarray) -> np.ndarray:
    """``Gamma1[l, i, j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2``."""
    return (np.einsum("ijl->lij", dG) + np.einsum("jil->lij", dG) - dG) * 0.5


def _riemann_coordinates(ddG: np.ndarray, G1: np.ndarray, G2: np.ndarray) -> np.ndarray:
    """``R_ijkl`` with ``R_ijij > 0`` on round spheres.

    ``G1`` is the Christoffel symbol of the first kind, ``G2`` of the second.
    """
    second = (np.einsum("jkil->ijkl", ddG) + np.einsum("iljk->ijkl", ddG)
              - np.einsum("ikjl->ijkl", ddG) - np.einsum("jlik->ijkl", ddG)) * 0.5
    quad = np.einsum("qjk,qil->ijkl", G1, G2) - np.einsum("qik,qjl->ijkl", G1, G2)
    return second + quad


def _to_frame(T: np.ndarray, E: np.ndarray) -> np.ndarray:
    for _ in range(T.ndim):
        # contract the leading coordinate axis and append the frame axis
        T = np.tensordot(T, E, axes=([0], [0]))
    return T


@dataclass(frozen=True)
class FramedCurvature:
    """Curvature at ``point`` in the Gram-Schmidt frame.

    ``frame`` rows are the orthonormal frame vectors in coordinates.
    ``connection[a, c, b] = g(nabla_{E_a} E_b, E_c)``. When ``lifted`` is
    true, ``R`` has dual coefficients carrying coordinate gradients.
    """

    point: np.ndarray
    frame: np.ndarray
    R: AlgebraicCurvature
    connection: np.ndarray
    lifted: bool = False

    @property
    def n(self) -> int:
        return len(self.point)


def christoffel(chart: MetricChart, x) -> np.ndarray:
    """``Gamma[k, i, j]``, the Christoffel symbols of the second kind."""
    jet = chart.jet(x, 1)
    G1 = _christoffel_first(jet.dg)
    try:
        ginv = np.linalg.inv(jet.g)
    except np.linalg.LinAlgError as exc:
        raise GeometryError("singular metric") from exc
    return np.einsum("kl,lij->kij", ginv, G1)


def _connection(jet: MetricJet) -> tuple[np.ndarray, np.ndarray]:
    """Frame (values) and ``connection[a, c, b]``, from the first-order lift of ``g``."""
    n = jet.g.shape[0]
    E_lift = gram_schmidt(_lift(jet.g, jet.dg))
    E = _values(E_lift)
    dE = _gradients(E_lift, n)
    G1 = _christoffel_first(jet.dg)
    # omega^c_ab = sum_k E_ka [ E_lc g_li d_k E_ib + E_lc Gamma1[l,k,j] E_jb ]
    term1 = np.einsum("ka,lc,li,kib->acb", E, E, jet.g, dE)
    term2 = np.einsum("ka,lc,lkj,jb->acb", E, E, G1, E)
    omega = term1 + term2
    if np.max(np.abs(omega + np.transpose(omega, (0, 2, 1))), initial=0.0) > 1e-8 * max(1.0, np.max(np.abs(omega))):
        raise GeometryError("frame connection is not antisymmetric")
    return E, omega


def riemann_at(chart: MetricChart, x, lift: bool = False, check: bool = True) -> FramedCurvature:
    """Curvature at ``x`` in the Gram-Schmidt frame of the coordinate basis."""
    x = np.asarray(x, dtype=float)
    n = chart.n
    jet = chart.jet(x, 3 if lift else 2)
    E, omega = _connection(jet)
    if lift:
        G = _lift(jet.g, jet.dg)
        dG = _lift(jet.dg, jet.ddg)
        ddG = _lift(jet.ddg, jet.dddg)
        Ef = gram_schmidt(G)
    else:
        G, dG, ddG, Ef = jet.g, jet.dg, jet.ddg, E
    G1 = _christoffel_first(dG)
    ginv = Ef @ Ef.T
    G2 = np.einsum("kl,lij->kij", ginv, G1)
    Rc = _riemann_coordinates(ddG, G1, G2)
    Rf = _to_frame(Rc, Ef)
    form = df.from_components(Rf, n, 2, 2)
    if check:
        defect = np.max(np.abs(E.T @ jet.g @ E - np.eye(n)))
        if defect > FRAME_TOL:
            raise GeometryError(f"frame not orthonormal (defect {defect:.2e})")
        ref = max(1.0, df.norm(form))
        if df.norm(form - df.transpose(form)) > CURVATURE_TOL * ref:
            raise GeometryError("computed curvature is not symmetric")
        if n >= 3 and df.norm(df.first_bianchi_sum(form)) > CURVATURE_TOL * ref:
            raise GeometryError("computed curvature violates the first Bianchi identity")
    return FramedCurvature(x, E.T.copy(), AlgebraicCurvature(form, check=False), omega, lift)


_cache: "OrderedDict[tuple, tuple[MetricChart, FramedCurvature]]" = OrderedDict()
_CACHE_SIZE = 16


def framed(chart: MetricChart, x, lift: bool = False) -> FramedCurvature:
    """Memoized :func:`riemann_at`; charts are immutable so results can be shared."""
    key = (id(chart), tuple(np.asarray(x, dtype=float).tolist()), lift)
    hit = _cache.get(key)
    if hit is not None and hit[0] is chart:
        _cache.move_to_end(key)
        return hit[1]
    fc = riemann_at(chart, x, lift=lift)
    _cache[key] = (chart, fc)
    while len(_cache) > _CACHE_SIZE:
        _cache.popitem(last=False)
    return fc


def value_form(w: df.DoubleForm) -> df.DoubleForm:
    """Strip dual parts from a form's coefficients."""
    return df.DoubleForm(w.n, w.p, w.q, _values(w.coeffs).astype(float))


def gradient_forms(w: df.DoubleForm) -> list[df.DoubleForm]:
    """``[d_k w for k in range(n)]`` in coordinates, from dual coefficients."""
    grads = _gradients(w.coeffs, w.n)
    return [df.DoubleForm(w.n, w.p, w.q, grads[k]) for k in range(w.n)]
