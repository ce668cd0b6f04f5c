"""Double forms over an ``n``-dimensional orthonormal frame.

A ``(p, q)`` double form is stored as its coefficient grid
``w[rank(I), rank(J)] = w(e_I; e_J)`` over increasing multi-indices ``I`` of
size ``p`` and ``J`` of size ``q``. In this representation the metric ``g`` is
the identity ``(1, 1)`` grid, the Hodge star is a signed permutation, and the
natural inner product is the Frobenius pairing of grids.

Operator sugar: ``a * b`` is the exterior product when both operands are
double forms and scaling otherwise, ``a @ b`` is the composition product and
``g ** k`` is the ``k``-fold exterior power.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial
from typing import Sequence

import numpy as np

from . import combinatorics as cb
from .scalars import as_factor, is_nonzero, to_float


class DegreeError(ValueError):
    """Bidegree out of range for the requested operation."""


class ShapeError(ValueError):
    """Operands live over different dimensions or bidegrees."""


def _zeros(shape, dtype):
    if np.dtype(dtype) == object:
        return np.zeros(shape, dtype=object)
    return np.zeros(shape, dtype=dtype)


def _scale_array(a: np.ndarray, c) -> np.ndarray:
    return a * as_factor(c, a)


@dataclass(frozen=True, eq=False)
class DoubleForm:
    n: int
    p: int
    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        cb._check_dim(self.n)
        if not (0 <= self.p <= self.n and 0 <= self.q <= self.n):
            raise DegreeError(f"bidegree ({self.p},{self.q}) out of range for n={self.n}")
        c = np.asarray(self.coeffs)
        shape = (comb(self.n, self.p), comb(self.n, self.q))
        if c.shape != shape:
            raise ShapeError(f"grid shape {c.shape} != {shape} for ({self.p},{self.q}), n={self.n}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> tuple[int, int]:
        return self.p, self.q

    @property
    def dtype(self):
        return self.coeffs.dtype

    def __repr__(self):
        return f"DoubleForm(n={self.n}, p={self.p}, q={self.q}, dtype={self.coeffs.dtype})"

    def __getitem__(self, IJ):
        I, J = IJ
        return self.coeffs[cb.rank(I, self.n), cb.rank(J, self.n)]

    def scalar(self):
        if self.degree != (0, 0):
            raise DegreeError(f"({self.p},{self.q}) form is not a scalar")
        return self.coeffs[0, 0]

    def _same_shape(self, other: "DoubleForm"):
        if not isinstance(other, DoubleForm):
            raise TypeError(f"expected DoubleForm, got {type(other).__name__}")
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise ShapeError(
                f"shape mismatch: n={self.n} ({self.p},{self.q}) vs n={other.n} ({other.p},{other.q})")

    def __add__(self, other):
        self._same_shape(other)
        return DoubleForm(self.n, self.p, self.q, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same_shape(other)
        return DoubleForm(self.n, self.p, self.q, self.coeffs - other.coeffs)

    def __neg__(self):
        return DoubleForm(self.n, self.p, self.q, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, DoubleForm):
            return exterior_product(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __truediv__(self, c):
        if isinstance(c, (int, np.integer)):
            return scale(self, _fraction(1, int(c)))
        return DoubleForm(self.n, self.p, self.q, self.coeffs / c)

    def __matmul__(self, other):
        return composition(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def map(self, fn) -> "DoubleForm":
        """Apply ``fn`` entrywise (e.g. a scalar-type conversion)."""
        out = np.empty(self.coeffs.shape, dtype=object)
        for idx, v in np.ndenumerate(self.coeffs):
            out[idx] = fn(v)
        return DoubleForm(self.n, self.p, self.q, out)


def _fraction(a, b):
    from fractions import Fraction
    return Fraction(a, b)


# construction


def zeros(n: int, p: int, q: int, dtype=np.int64) -> DoubleForm:
    return DoubleForm(n, p, q, _zeros((comb(n, p), comb(n, q)), dtype))


def one(n: int) -> DoubleForm:
    """The unit ``g**0``: the scalar 1 as a ``(0, 0)`` form."""
    return DoubleForm(n, 0, 0, np.ones((1, 1), dtype=np.int64))


def constant(n: int, c) -> DoubleForm:
    a = np.empty((1, 1), dtype=object if not isinstance(c, (float, np.floating)) else float)
    a[0, 0] = c
    return DoubleForm(n, 0, 0, a)


def metric(n: int) -> DoubleForm:
    """The metric ``g`` as the identity ``(1, 1)`` grid."""
    return DoubleForm(n, 1, 1, np.eye(n, dtype=np.int64))


def metric_power(n: int, k: int) -> DoubleForm:
    """``g**k`` computed in closed form: ``k!`` times the identity grid.

    ``k == -1`` returns ``None`` to encode the convention ``g**-1 = 0``.
    """
    if k < 0:
        return None
    if k > n:
        raise DegreeError(f"g**{k} exceeds dimension {n}")
    return DoubleForm(n, k, k, np.eye(comb(n, k), dtype=np.int64) * factorial(k))


def from_symmetric_matrix(h) -> DoubleForm:
    h = np.asarray(h)
    return DoubleForm(h.shape[0], 1, 1, h)


def vector(v) -> DoubleForm:
    """A vector as a ``(1, 0)`` form."""
    v = np.asarray(v)
    return DoubleForm(len(v), 1, 0, v.reshape(-1, 1))


def from_components(R, n: int, p: int, q: int) -> DoubleForm:
    """Build a form from a full antisymmetric component array ``R[i1..ip, j1..jq]``."""
    R = np.asarray(R)
    out = _zeros((comb(n, p), comb(n, q)), R.dtype)
    for a, I in enumerate(cb.basis(n, p)):
        for b, J in enumerate(cb.basis(n, q)):
            out[a, b] = R[I + J]
    return DoubleForm(n, p, q, out)


def to_components(w: DoubleForm) -> np.ndarray:
    """Full component array with ``p + q`` axes, antisymmetric in each block."""
    import itertools
    n, p, q = w.n, w.p, w.q
    out = _zeros((n,) * (p + q), w.dtype)
    for a, I in enumerate(cb.basis(n, p)):
        for b, J in enumerate(cb.basis(n, q)):
            c = w.coeffs[a, b]
            if not is_nonzero(c):
                continue
            for sI in itertools.permutations(I):
                s1 = cb.permutation_sign(sI)
                for sJ in itertools.permutations(J):
                    out[sI + sJ] = c * (s1 * cb.permutation_sign(sJ))
    return out


# linear plumbing


def scale(w: DoubleForm, c) -> DoubleForm:
    """``c * w``. Exact rationals stay exact on integer/Fraction grids."""
    from fractions import Fraction
    from numbers import Rational
    if isinstance(c, (int, np.integer, Rational)) and not isinstance(c, bool):
        return DoubleForm(w.n, w.p, w.q, _scale_array(w.coeffs, Fraction(c)))
    return DoubleForm(w.n, w.p, w.q, w.coeffs * c)


def add(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    return a + b


def transpose(w: DoubleForm) -> DoubleForm:
    return DoubleForm(w.n, w.q, w.p, w.coeffs.T)


def inner_product(a: DoubleForm, b: DoubleForm):
    a._same_shape(b)
    return (a.coeffs * b.coeffs).sum()


def norm_sq(w: DoubleForm):
    return inner_product(w, w)


def norm(w: DoubleForm) -> float:
    return math.sqrt(max(to_float(norm_sq(w)), 0.0))


def asymmetry(w: DoubleForm) -> float:
    """``||w - transpose(w)||`` for ``(p, p)`` forms."""
    if w.p != w.q:
        raise DegreeError("symmetry is only defined for (p,p) forms")
    return norm(w - transpose(w))


def nnz(w: DoubleForm) -> int:
    if w.dtype == object:
        return sum(1 for v in w.coeffs.flat if is_nonzero(v))
    return int(np.count_nonzero(w.coeffs))


def _nonzero_entries(w: DoubleForm):
    if w.dtype == object:
        return [(i, j) for (i, j), v in np.ndenumerate(w.coeffs) if is_nonzero(v)]
    return list(zip(*np.nonzero(w.coeffs)))


# products


def exterior_product(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """Shuffle product acting on both factors independently.

    ``(a b)_{K,L} = sum sign(I, K-I) sign(J, L-J) a_{I,J} b_{K-I, L-J}``,
    with no factorial normalization (``g g`` on a unit biplane is 2).
    """
    if not isinstance(b, DoubleForm):
        raise TypeError("exterior_product expects two DoubleForms")
    if a.n != b.n:
        raise ShapeError(f"dimension mismatch: {a.n} vs {b.n}")
    n, p, q, r, s = a.n, a.p, a.q, b.p, b.q
    if p + r > n or q + s > n:
        raise DegreeError(f"({p},{q}) x ({r},{s}) overflows dimension {n}")
    # iterate over the sparser factor; graded commutativity fixes the sign
    if nnz(b) < nnz(a):
        sign = -1 if (p * r + q * s) % 2 else 1
        out = _exterior_kernel(b, a)
        return out if sign == 1 else -out
    return _exterior_kernel(a, b)


def _exterior_kernel(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    n, p, q, r, s = a.n, a.p, a.q, b.p, b.q
    dtype = np.result_type(a.coeffs, b.coeffs)
    out = _zeros((comb(n, p + r), comb(n, q + s)), dtype)
    left = cb.completions(n, p, r)
    right = cb.completions(n, q, s)
    bc = b.coeffs
    for i, j in _nonzero_entries(a):
        Ip, K, sI = left[i]
        Jp, L, sJ = right[j]
        block = bc[np.ix_(Ip, Jp)] * np.outer(sI, sJ)
        out[np.ix_(K, L)] += block * a.coeffs[i, j]
    return DoubleForm(n, p + r, q + s, out)


def power(w: DoubleForm, k: int) -> DoubleForm:
    if k < 0:
        raise DegreeError("negative powers are not defined")
    if k == 0:
        return one(w.n)
    if w.degree == (1, 1) and np.array_equal(w.coeffs, np.eye(w.n)) and w.dtype.kind in "iu":
        return metric_power(w.n, k)
    out = w
    for _ in range(k - 1):
        out = exterior_product(out, w)
    return out


def composition(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """Composition product: the grid matrix product in the increasing basis."""
    if not isinstance(b, DoubleForm):
        raise TypeError("composition expects two DoubleForms")
    if a.n != b.n or a.p != a.q or a.degree != b.degree:
        raise ShapeError(f"composition needs equal (p,p) bidegrees, got {a.degree} and {b.degree}")
    return DoubleForm(a.n, a.p, a.q, a.coeffs @ b.coeffs)


# contractions and duality


def contraction(w: DoubleForm, times: int = 1) -> DoubleForm:
    """Ricci contraction ``c``; ``times`` applies it repeatedly."""
    for _ in range(times):
        w = _contract_once(w)
    return w


def _contract_once(w: DoubleForm) -> DoubleForm:
    n, p, q = w.n, w.p, w.q
    if p < 1 or q < 1:
        raise DegreeError(f"cannot contract a ({p},{q}) form")
    out = _zeros((comb(n, p - 1), comb(n, q - 1)), w.dtype)
    rows = cb.insertion(n, p - 1)
    cols = cb.insertion(n, q - 1)
    for k in range(n):
        I, kI, sI = rows[k]
        J, kJ, sJ = cols[k]
        if len(I) and len(J):
            out[np.ix_(I, J)] += w.coeffs[np.ix_(kI, kJ)] * np.outer(sI, sJ)
    return DoubleForm(n, p - 1, q - 1, out)


def interior_iota(h: DoubleForm, w: DoubleForm) -> DoubleForm:
    """Interior product by a ``(1, 1)`` form; ``interior_iota(g, w) == c(w)``."""
    if h.degree != (1, 1) or h.n != w.n:
        raise ShapeError("interior_iota needs a (1,1) form over the same dimension")
    n, p, q = w.n, w.p, w.q
    if p < 1 or q < 1:
        raise DegreeError(f"cannot apply iota to a ({p},{q}) form")
    dtype = np.result_type(h.coeffs, w.coeffs)
    out = _zeros((comb(n, p - 1), comb(n, q - 1)), dtype)
    rows = cb.insertion(n, p - 1)
    cols = cb.insertion(n, q - 1)
    for k, l in _nonzero_entries(h):
        I, kI, sI = rows[k]
        J, lJ, sJ = cols[l]
        if len(I) and len(J):
            out[np.ix_(I, J)] += w.coeffs[np.ix_(kI, lJ)] * np.outer(sI, sJ) * h.coeffs[k, l]
    return DoubleForm(n, p - 1, q - 1, out)


def hodge_star(w: DoubleForm) -> DoubleForm:
    """Hodge star applied to each factor: ``(*w)_{Ic,Jc} = sign(I) sign(J) w_{I,J}``."""
    n, p, q = w.n, w.p, w.q
    cI, sI = cb.complements(n, p)
    cJ, sJ = cb.complements(n, q)
    out = _zeros((comb(n, n - p), comb(n, n - q)), w.dtype)
    out[np.ix_(cI, cJ)] = w.coeffs * np.outer(sI, sJ)
    return DoubleForm(n, n - p, n - q, out)


def adjoint_interior(a: DoubleForm, w: DoubleForm) -> DoubleForm:
    """``i_a w = *(a * (*w))``, the adjoint of exterior multiplication by ``a``."""
    if a.p != a.q:
        raise DegreeError("adjoint_interior needs an (r,r) form")
    if w.p < a.p or w.q < a.q:
        raise DegreeError(f"cannot apply i_a of degree {a.degree} to {w.degree}")
    return hodge_star(exterior_product(a, hodge_star(w)))


def first_bianchi_sum(w: DoubleForm) -> DoubleForm:
    """``(Bw)(x_1..x_{p+1}; y) = sum_j (-1)**(j+1) w(..x_j hat..; x_j, y)``."""
    n, p, q = w.n, w.p, w.q
    if q < 1 or p + 1 > n:
        raise DegreeError(f"Bianchi sum undefined for ({p},{q}) with n={n}")
    out = _zeros((comb(n, p + 1), comb(n, q - 1)), w.dtype)
    rows = cb.insertion(n, p)
    cols = cb.insertion(n, q - 1)
    for k in range(n):
        I, kI, sI = rows[k]
        L, kL, sL = cols[k]
        if len(I) and len(L):
            out[np.ix_(kI, L)] += w.coeffs[np.ix_(I, kL)] * np.outer(sI, sL)
    return DoubleForm(n, p + 1, q - 1, out)


def evaluate(w: DoubleForm, xs: Sequence, ys: Sequence):
    """``w(x_1, ..., x_p; y_1, ..., y_q)`` for coordinate vectors in the frame."""
    if len(xs) != w.p or len(ys) != w.q:
        raise DegreeError(f"need {w.p} + {w.q} vectors, got {len(xs)} + {len(ys)}")
    X = _wedge(xs, w.n)
    Y = _wedge(ys, w.n)
    return (X.T @ w.coeffs @ Y)[0, 0]


def _wedge(vs, n: int) -> np.ndarray:
    out = one(n)
    for v in vs:
        v = np.asarray(v)
        if v.shape != (n,):
            raise ShapeError(f"vector of length {v.shape} in dimension {n}")
        out = exterior_product(out, vector(v))
    return out.coeffs


def commutation_defect(w: DoubleForm) -> DoubleForm:
    """``c(g w) - g c(w) - (n - p - q) w``, identically zero."""
    g = metric(w.n)
    out = contraction(g * w) - scale(w, w.n - w.p - w.q)
    if w.p and w.q:
        out = out - g * contraction(w)
    return out
