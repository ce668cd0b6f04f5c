"""Algebraic curvature tensors and the hierarchy of generalized double duals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

import numpy as np

from .. import doubleform as df
from ..doubleform import DegreeError, DoubleForm
from ..scalars import is_exact_array, to_float

ALGEBRA_RTOL = 1e-10


class PreconditionError(ValueError):
    """Input violates a documented precondition (symmetry, Bianchi, range)."""


def is_negligible(w: DoubleForm, reference: float = 1.0, rtol: float = ALGEBRA_RTOL) -> bool:
    """Exact zero test on exact grids, relative tolerance otherwise."""
    if is_exact_array(w.coeffs):
        return not any(v != 0 for v in w.coeffs.flat)
    return df.norm(w) <= rtol * max(1.0, reference)


@dataclass(frozen=True)
class AlgebraicCurvature:
    """A symmetric (2,2) double form satisfying the first Bianchi identity."""

    form: DoubleForm
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        w = self.form
        if w.degree != (2, 2):
            raise PreconditionError(f"curvature must be a (2,2) form, got {w.degree}")
        if self.check:
            ref = df.norm(w)
            if not is_negligible(w - df.transpose(w), ref):
                raise PreconditionError("curvature tensor is not symmetric")
            if w.n >= 3 and not is_negligible(df.first_bianchi_sum(w), ref):
                raise PreconditionError("curvature tensor violates the first Bianchi identity")

    @property
    def n(self) -> int:
        return self.form.n


def as_form(R) -> DoubleForm:
    return R.form if isinstance(R, AlgebraicCurvature) else R


def _g(n: int, k: int) -> Optional[DoubleForm]:
    """``g**k`` with the conventions ``g**-1 = 0`` (``None``) and ``g**0 = 1``."""
    return df.metric_power(n, k)


def _gk_times(k: int, w: DoubleForm) -> Optional[DoubleForm]:
    gk = _g(w.n, k)
    return None if gk is None else gk * w


def _sum(terms: Sequence[Optional[DoubleForm]]) -> DoubleForm:
    terms = [t for t in terms if t is not None]
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


def _over_factorial(w: DoubleForm, k: int) -> DoubleForm:
    return df.scale(w, Fraction(1, factorial(k)))


# Ricci-level quantities


def ricci(R) -> DoubleForm:
    return df.contraction(as_form(R))


def scal(R):
    return df.contraction(as_form(R), 2).scalar()


def einstein(R) -> DoubleForm:
    R = as_form(R)
    return df.scale(df.metric(R.n), Fraction(1, 2)) * scal(R) - ricci(R)


def schouten(R) -> DoubleForm:
    R = as_form(R)
    n = R.n
    if n < 3:
        raise PreconditionError("Schouten tensor needs n >= 3")
    A = ricci(R) - df.scale(df.metric(n), Fraction(1, 2 * (n - 1))) * scal(R)
    return df.scale(A, Fraction(1, n - 2))


def traceless_ricci(R) -> DoubleForm:
    R = as_form(R)
    return ricci(R) - df.scale(df.metric(R.n), Fraction(1, R.n)) * scal(R)


# double duals


def _check_p(n: int, p: int, lo: int = 0):
    if not lo <= p <= n - 2:
        raise DegreeError(f"p={p} outside [{lo}, {n - 2}] for n={n}")


def dd_star_p(R, p: int) -> DoubleForm:
    """``*R*_p = *(g**(n-p-2) R) / (n-p-2)!``."""
    R = as_form(R)
    _check_p(R.n, p)
    k = R.n - p - 2
    return _over_factorial(df.hodge_star(_gk_times(k, R)), k)


def dd_star_p_contraction(R, p: int) -> DoubleForm:
    """Same tensor by contracting the full double dual: ``c**(n-p-2)(*R) / (n-p-2)!``."""
    R = as_form(R)
    _check_p(R.n, p)
    k = R.n - p - 2
    return _over_factorial(df.contraction(df.hodge_star(R), k), k)


def ruse_lanczos(R, p: int) -> DoubleForm:
    """``g^(p-2) R/(p-2)! - g^(p-1) Ric/(p-1)! + Scal g^p/(2 p!)``."""
    R = as_form(R)
    n = R.n
    _check_p(n, p)
    t2 = _gk_times(p - 2, R)
    t1 = _gk_times(p - 1, ricci(R))
    t0 = df.scale(_g(n, p), Fraction(1, 2 * factorial(p))) * scal(R)
    return _sum([
        None if t2 is None else _over_factorial(t2, p - 2),
        None if t1 is None else -_over_factorial(t1, p - 1),
        t0,
    ])


def ruse_lanczos_2(R) -> DoubleForm:
    """``*R*_2 = R - g Ric + Scal g**2 / 4``."""
    R = as_form(R)
    if R.n < 4:
        raise PreconditionError("the double dual *R*_2 needs n >= 4")
    g = df.metric(R.n)
    return R - g * ricci(R) + df.scale(g ** 2, Fraction(1, 4)) * scal(R)


def invert_from_ddstar2(D2: DoubleForm) -> AlgebraicCurvature:
    """Recover ``R`` from ``*R*_2``.

    The last term carries ``g**2``: ``c**2(*R*_2)`` is a scalar, so only
    ``g**2`` gives a (2,2) result.
    """
    n = D2.n
    if n <= 3:
        raise PreconditionError("inversion needs n >= 4")
    g = df.metric(n)
    out = (D2
           - df.scale(g * df.contraction(D2), Fraction(1, n - 3))
           + df.scale(g ** 2, Fraction(1, 2 * (n - 2) * (n - 3))) * df.contraction(D2, 2).scalar())
    return AlgebraicCurvature(out, check=False)


# orthogonal decomposition


@dataclass
class DecompositionResult:
    """Trace-free pieces with ``w = sum_i g**(k-i) omegas[i]``."""

    degree: int
    omegas: list

    def reconstruct(self) -> DoubleForm:
        return _sum([_gk_times(self.degree - i, om) for i, om in enumerate(self.omegas)])


def decompose(R):
    """``R = omega_2 + g omega_1 + g**2 omega_0`` with closed-form pieces.

    Returns ``(omega_0 scalar, omega_1 (1,1), omega_2 (2,2))``.
    """
    R = as_form(R)
    n = R.n
    if n < 3:
        raise PreconditionError("decomposition needs n >= 3")
    s = scal(R)
    g = df.metric(n)
    w0 = df.scale(df.one(n), Fraction(1, 2 * n * (n - 1))) * s
    w1 = df.scale(traceless_ricci(R), Fraction(1, n - 2))
    w2 = R - g * w1 - (g ** 2) * w0.scalar()
    return w0.scalar(), w1, w2


def weyl(R) -> DoubleForm:
    return decompose(R)[2]


def _climb(a: int, m: int, i: int, n: int) -> int:
    """``c**m (g**a w) = _climb(a, m, i, n) g**(a-m) w`` for trace-free ``(i,i)`` w."""
    out = 1
    for t in range(m):
        out *= (a - t) * (n - 2 * i - (a - t) + 1)
    return out


def decompose_general(w: DoubleForm, check: bool = True) -> DecompositionResult:
    """Split a symmetric Bianchi ``(k,k)`` form into trace-free pieces.

    Solves top-down: ``c**(k-i) w`` only sees ``omega_0 .. omega_i``, and the
    commutation rule gives each coefficient in closed form. Pieces with
    ``i > n - k`` are zero for dimensional reasons.
    """
    n, k = w.n, w.p
    if w.p != w.q:
        raise PreconditionError("decompose_general needs a (k,k) form")
    if check:
        ref = df.norm(w)
        if not is_negligible(w - df.transpose(w), ref):
            raise PreconditionError("form is not symmetric")
        if k >= 1 and k < n and not is_negligible(df.first_bianchi_sum(w), ref):
            raise PreconditionError("form violates the first Bianchi identity")
    omegas = []
    for i in range(k + 1):
        if i > n - k:
            omegas.append(df.zeros(n, i, i))
            continue
        rhs = df.contraction(w, k - i)
        for j, om in enumerate(omegas):
            coeff = _climb(k - j, k - i, j, n)
            if coeff:
                rhs = rhs - df.scale(_gk_times(i - j, om), coeff)
        lead = _climb(k - i, k - i, i, n)
        if lead == 0:
            raise DegreeError(f"singular decomposition at i={i}, k={k}, n={n}")
        omegas.append(df.scale(rhs, Fraction(1, lead)))
    return DecompositionResult(k, omegas)


def same_weyl_expansion(R, p: int) -> DoubleForm:
    """``*R*_p`` rebuilt from the irreducible pieces of ``R``."""
    R = as_form(R)
    n = R.n
    _check_p(n, p)
    w0, w1, w2 = decompose(R)
    t2 = _gk_times(p - 2, w2)
    t1 = _gk_times(p - 1, w1)
    t0 = df.scale(_g(n, p), Fraction((n - p) * (n - p - 1), factorial(p))) * w0
    return _sum([
        None if t2 is None else _over_factorial(t2, p - 2),
        None if t1 is None else df.scale(t1, Fraction(-(n - p - 1), factorial(p - 1))),
        t0,
    ])


def trace_free_part(w: DoubleForm) -> DoubleForm:
    return decompose_general(w, check=False).omegas[-1]


# duality and uniqueness


def duality_defect(w: DoubleForm, sign: int) -> float:
    """``||*w - sign w||`` for a middle-degree ``(p,p)`` form, ``n == 2p``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if w.p != w.q or w.n != 2 * w.p:
        raise PreconditionError(f"duality needs n == 2p, got n={w.n}, p={w.p}")
    return df.norm(df.hodge_star(w) - df.scale(w, sign))


def spanning_set(p: int, weyl_harmonic: bool, scal_constant: bool, R,
                 hierarchy: "CurvatureHierarchy | None" = None) -> list[tuple[str, DoubleForm]]:
    """Divergence-free R-linear ``(p,p)`` forms, per classification case."""
    R = as_form(R)
    n = R.n
    _check_p(n, p, lo=1)
    top = hierarchy.ddstar[p] if hierarchy is not None else dd_star_p(R, p)
    s = hierarchy.scal if hierarchy is not None else scal(R)
    if p == 1:
        out = [("ddstar_1", top)]
        if scal_constant:
            out.append(("scal_g", df.metric(n) * s))
        return out
    out = [(f"ddstar_{p}", top)]
    star_scal = ("star_g_scal", df.hodge_star(df.scale(_g(n, n - p), 1) * s))
    if weyl_harmonic and scal_constant:
        out.append(("star_g_ric", df.hodge_star(_gk_times(n - p - 1, ricci(R)))))
        out.append(star_scal)
    elif weyl_harmonic:
        out.append(("star_g_schouten", df.hodge_star(_gk_times(n - p - 1, schouten(R)))))
    elif scal_constant:
        out.append(star_scal)
    return out


@dataclass
class CurvatureHierarchy:
    R: AlgebraicCurvature
    ddstar: dict
    ric: DoubleForm
    scal: object
    einstein: DoubleForm
    weyl: Optional[DoubleForm]
    schouten: Optional[DoubleForm]
    traceless_ric: DoubleForm


def hierarchy(R) -> CurvatureHierarchy:
    Rc = R if isinstance(R, AlgebraicCurvature) else AlgebraicCurvature(R, check=False)
    w = Rc.form
    n = w.n
    return CurvatureHierarchy(
        R=Rc,
        ddstar={p: dd_star_p(w, p) for p in range(n - 1)},
        ric=ricci(w),
        scal=scal(w),
        einstein=einstein(w),
        weyl=weyl(w) if n >= 3 else None,
        schouten=schouten(w) if n >= 3 else None,
        traceless_ric=traceless_ricci(w),
    )


# model tensors and generators


def constant_curvature(n: int, k=1) -> AlgebraicCurvature:
    """``R = (k/2) g**2``: sectional curvature ``k`` on every plane."""
    g2 = df.metric_power(n, 2)
    if isinstance(k, float):
        return AlgebraicCurvature(df.scale(g2, k / 2), check=False)
    return AlgebraicCurvature(df.scale(g2, Fraction(k) / 2), check=False)


def product_curvature(blocks: Sequence[tuple[int, object]]) -> AlgebraicCurvature:
    """Block curvature of a product of constant-curvature factors ``[(dim, k), ...]``."""
    n = sum(d for d, _ in blocks)
    total = None
    start = 0
    for d, k in blocks:
        proj = np.zeros((n, n), dtype=np.int64)
        proj[start:start + d, start:start + d] = np.eye(d, dtype=np.int64)
        start += d
        if d < 2:
            continue
        gb = df.from_symmetric_matrix(proj)
        kk = k / 2 if isinstance(k, float) else Fraction(k) / 2
        term = df.scale(gb * gb, kk)
        total = term if total is None else total + term
    if total is None:
        total = df.zeros(n, 2, 2)
    return AlgebraicCurvature(total, check=False)


def random_symmetric(rng: np.random.Generator, n: int, mode: str = "rational") -> DoubleForm:
    if mode == "float":
        a = rng.uniform(-1.0, 1.0, size=(n, n))
        return df.from_symmetric_matrix((a + a.T) / 2)
    if mode != "rational":
        raise ValueError(f"unknown scalar mode {mode!r}")
    h = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            v = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
            h[i, j] = h[j, i] = v
    return df.from_symmetric_matrix(h)


def random_algebraic_curvature(seed: int, n: int, terms: int = 3, mode: str = "rational") -> AlgebraicCurvature:
    """``sum_t h_t * h_t`` for seeded random symmetric ``h_t``."""
    if n < 2 or terms < 1:
        raise PreconditionError("need n >= 2 and terms >= 1")
    rng = np.random.default_rng(seed)
    total = None
    for _ in range(terms):
        h = random_symmetric(rng, n, mode)
        total = h * h if total is None else total + h * h
    return AlgebraicCurvature(total, check=False)


def to_float_form(w: DoubleForm) -> DoubleForm:
    return DoubleForm(w.n, w.p, w.q, np.vectorize(to_float, otypes=[float])(w.coeffs)
                      if w.coeffs.size else w.coeffs.astype(float))
