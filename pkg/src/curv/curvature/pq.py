"""Gauss-Kronecker powers, (p,q)-curvature tensors and Lovelock tensors."""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping

from .. import doubleform as df
from ..doubleform import DegreeError, DoubleForm
from .core import PreconditionError, as_form, dd_star_p, decompose_general, ricci, scal

ROUTES = ("star", "contraction", "alternating")


def riemann_power(R, q: int) -> DoubleForm:
    """``R**q``, the q-fold exterior power, a ``(2q, 2q)`` form."""
    R = as_form(R)
    if q < 1 or 2 * q > R.n:
        raise DegreeError(f"R**{q} needs 1 <= q and 2q <= n (n={R.n})")
    return df.power(R, q)


def _check_pq(n: int, p: int, q: int):
    if not (1 <= q and 2 * q <= n and 0 <= p <= n - 2 * q):
        raise DegreeError(f"(p,q)=({p},{q}) outside 1 <= q <= n/2, 0 <= p <= n-2q for n={n}")


def pq_curvature(R, p: int, q: int, route: str = "star", Rq: DoubleForm | None = None) -> DoubleForm:
    """``R^(p,q) = *(g**(n-2q-p) R**q) / (n-2q-p)!``.

    ``route`` selects one of three algebraically independent evaluations:
    ``"star"`` (as above), ``"contraction"`` (``c**(n-2q-p)(*R**q)/(n-2q-p)!``)
    and ``"alternating"`` (the signed sum of ``g**j c**r (R**q)`` terms).
    """
    R = as_form(R)
    n = R.n
    _check_pq(n, p, q)
    if Rq is None:
        Rq = riemann_power(R, q)
    k = n - 2 * q - p
    if route == "star":
        return df.scale(df.hodge_star(df.metric_power(n, k) * Rq), Fraction(1, factorial(k)))
    if route == "contraction":
        return df.scale(df.contraction(df.hodge_star(Rq), k), Fraction(1, factorial(k)))
    if route == "alternating":
        out = None
        cr = Rq
        for r in range(2 * q + 1):
            if r:
                cr = df.contraction(cr)
            j = p - 2 * q + r
            if j < 0:
                continue
            coef = Fraction((-1) ** r, factorial(r) * factorial(j))
            term = df.scale(df.metric_power(n, j) * cr, coef)
            out = term if out is None else out + term
        return out
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


def lovelock(R, q: int) -> DoubleForm:
    """``T_2q = c**(2q) R**q g / (2q)! - c**(2q-1) R**q / (2q-1)!``; ``T_0 = g``."""
    R = as_form(R)
    n = R.n
    if q == 0:
        return df.metric(n)
    if q < 0 or 2 * q > n:
        raise DegreeError(f"T_{2 * q} needs 2 <= 2q <= n (n={n})")
    Rq = riemann_power(R, q)
    c_top = df.contraction(Rq, 2 * q - 1)
    full = df.contraction(c_top).scalar()
    return (df.scale(df.metric(n), Fraction(1, factorial(2 * q))) * full
            - df.scale(c_top, Fraction(1, factorial(2 * q - 1))))


def lovelock4_via_composition(R) -> DoubleForm:
    """``T_4`` from the four-index tensor ``R o *R*_2``."""
    R = as_form(R)
    if R.n < 4:
        raise PreconditionError("T_4 via composition needs n >= 4")
    X = df.composition(R, dd_star_p(R, 2))
    return (df.scale(df.metric(R.n), Fraction(1, 2)) * df.contraction(X, 2).scalar()
            - df.scale(df.contraction(X), 2))


def iota_lemma_defect(R, h: DoubleForm) -> DoubleForm:
    """``c(R o (g h)) - iota_h R - Ric o h``, identically zero for symmetric ``h``."""
    R = as_form(R)
    g = df.metric(R.n)
    return (df.contraction(df.composition(R, g * h))
            - df.interior_iota(h, R)
            - df.composition(ricci(R), h))


def iota_lemma_check(R, h: DoubleForm) -> float:
    return df.norm(iota_lemma_defect(R, h))


def greub_vanstone_defect(k: DoubleForm, h: DoubleForm) -> DoubleForm:
    """``(g k) o (g h) - g (k o h) - k h`` for (1,1) forms."""
    g = df.metric(k.n)
    return df.composition(g * k, g * h) - g * df.composition(k, h) - k * h


def lanczos_defect(R, times: int = 3) -> DoubleForm:
    """``c**t(R**2) - 12 c**(t-2)(R o *R*_2)`` for ``t`` in {3, 4}."""
    R = as_form(R)
    X = df.composition(R, dd_star_p(R, 2))
    return df.contraction(riemann_power(R, 2), times) - df.scale(df.contraction(X, times - 2), 12)


def gauss_bonnet(R, q: int):
    """The scalar ``R^(0,q)``."""
    return pq_curvature(R, 0, q).scalar()


def h4_closed_form(R):
    """``|R|**2 - |Ric|**2 + Scal**2 / 4``."""
    R = as_form(R)
    s = scal(R)
    return df.norm_sq(R) - df.norm_sq(ricci(R)) + s * s * Fraction(1, 4)


def hereditary_defect(R, p: int, q: int, coefficient: int | None = None) -> DoubleForm:
    """``c R^(p,q) - coefficient R^(p-1,q)``; default coefficient ``n - 2q - p + 1``."""
    R = as_form(R)
    n = R.n
    if p < 1:
        raise DegreeError("hereditary contraction needs p >= 1")
    if coefficient is None:
        coefficient = n - 2 * q - p + 1
    Rq = riemann_power(R, q)
    return (df.contraction(pq_curvature(R, p, q, Rq=Rq))
            - df.scale(pq_curvature(R, p - 1, q, Rq=Rq), coefficient))


def decomposition_defect(R, p: int, q: int) -> DoubleForm:
    """``(n-2q-p)! R^(p,q) - sum_i (-1)**i (n-p-i)!/(p-i)! g**(p-i) omega_i``.

    ``omega_i`` are the trace-free pieces of ``R**q``; pieces that vanish for
    dimensional reasons contribute nothing, which gives the truncated sum
    when ``n < 4q``.
    """
    R = as_form(R)
    n = R.n
    _check_pq(n, p, q)
    Rq = riemann_power(R, q)
    omegas = decompose_general(Rq, check=False).omegas
    lhs = df.scale(pq_curvature(R, p, q, Rq=Rq), factorial(n - 2 * q - p))
    rhs = None
    for i in range(min(2 * q, p) + 1):
        coef = Fraction((-1) ** i * factorial(n - p - i), factorial(p - i))
        term = df.scale(df.metric_power(n, p - i) * omegas[i], coef)
        rhs = term if rhs is None else rhs + term
    return lhs - rhs


def parent_field_lhs(R, alphas: Mapping[int, object], d: int) -> DoubleForm:
    """``sum_q alpha_q R^(d,q)``: assembles the tensor, never solves anything."""
    R = as_form(R)
    out = None
    for q, a in sorted(alphas.items()):
        term = df.scale(pq_curvature(R, d, q), a)
        out = term if out is None else out + term
    if out is None:
        raise ValueError("alphas must be non-empty")
    return out


def d_of_n(n: int) -> int:
    """Common parent degree: the closed form for ``max{min(2q, n-2q) : 2 <= 2q < n}``."""
    if n < 4:
        raise ValueError("d(n) is defined for n >= 4")
    if n % 2:
        return (n - 1) // 2
    return n // 2 if n % 4 == 0 else (n - 2) // 2


def d_of_n_brute(n: int) -> int:
    if n < 4:
        raise ValueError("d(n) is defined for n >= 4")
    return max(min(2 * q, n - 2 * q) for q in range(1, n) if 2 <= 2 * q < n)


def effective_p_threshold_brute(n: int, q: int) -> int:
    """Smallest ``p`` such that each nonvanishing piece ``omega_i`` of ``R**q``
    enters ``R^(p,q)`` through an injective term ``g**(p-i) omega_i``.

    Pieces with ``i > n - 2q`` vanish for dimensional reasons; multiplication
    by ``g**a`` is injective on trace-free ``(i,i)`` forms iff ``a <= n - 2i``.
    """
    if n < 4 or not 2 <= 2 * q < n:
        raise ValueError(f"need n >= 4 and 2 <= 2q < n, got n={n}, q={q}")
    present = [i for i in range(2 * q + 1) if i <= n - 2 * q]
    for p in range(n - 2 * q + 1):
        if all(i <= min(2 * q, p) and p - i <= n - 2 * i
               for i in present):
            return p
    raise AssertionError("unreachable: p = n - 2q always works")


def effective_p_threshold(n: int, q: int) -> int:
    """Smallest ``p`` for which every trace-free piece of ``R**q`` survives in ``R^(p,q)``."""
    if n < 4 or not 2 <= 2 * q < n:
        raise ValueError(f"need n >= 4 and 2 <= 2q < n, got n={n}, q={q}")
    return min(2 * q, n - 2 * q)
