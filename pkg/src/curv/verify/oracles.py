"""Brute-force component oracles built only from the generalized Kronecker delta.

Nothing here uses exterior products, Hodge stars or contractions. Each oracle
is linear in a fixed component tensor, so the delta coefficients are
enumerated once per ``(n, p[, q])`` and cached; that table is the literal
index sum, merely factored out of the per-tensor loop.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .. import combinatorics as cb
from ..doubleform import DoubleForm, to_components
from ..curvature.core import as_form

ORACLE_MAX_N = 6
PQ_ORACLE_MAX_N = {1: 6, 2: 5}


class CostGuardError(ValueError):
    """Request exceeds the brute-force oracle's size limit."""


def _delta_table_dd(n: int, p: int):
    """Nonzero ``delta^{ab I}_{cd J}`` over all ``a, b, c, d`` in ``[0, n)``."""
    rows = []
    for r_i, I in enumerate(cb.basis(n, p)):
        for r_j, J in enumerate(cb.basis(n, p)):
            for a, b, c, d in itertools.product(range(n), repeat=4):
                delta = cb.generalized_delta((a, b) + I, (c, d) + J)
                if delta:
                    rows.append((r_i, r_j, a, b, c, d, delta))
    return rows


_dd_cache: dict = {}


def oracle_dd_star_p(R, p: int, cold: bool = False) -> DoubleForm:
    """``(1/4) sum_{abcd} delta^{ab i_1..i_p}_{cd j_1..j_p} R_abcd``."""
    R = as_form(R)
    n = R.n
    if n > ORACLE_MAX_N:
        raise CostGuardError(f"oracle_dd_star_p is limited to n <= {ORACLE_MAX_N}")
    if not 0 <= p <= n - 2:
        raise ValueError(f"p={p} outside [0, {n - 2}]")
    key = (n, p)
    table = _delta_table_dd(n, p) if cold else _dd_cache.setdefault(key, None)
    if table is None:
        table = _dd_cache[key] = _delta_table_dd(n, p)
    comps = to_components(R)
    out = np.zeros((comb(n, p), comb(n, p)), dtype=object if comps.dtype == object else comps.dtype)
    for r_i, r_j, a, b, c, d, delta in table:
        out[r_i, r_j] += delta * comps[a, b, c, d]
    quarter = Fraction(1, 4) if out.dtype == object or out.dtype.kind in "iu" else 0.25
    return DoubleForm(n, p, p, out * quarter)


def oracle_riemann_power(R, q: int) -> dict:
    """Sorted-index components of ``R**q``:

    ``4**-q sum_{a,b} delta^{a_1..a_2q}_{I} delta^{b_1..b_2q}_{J} prod_l R_{a_{2l-1} a_{2l} b_{2l-1} b_{2l}}``.
    Only permutations of ``I`` (resp. ``J``) give a nonzero delta.
    """
    R = as_form(R)
    n = R.n
    comps = to_components(R)
    out = {}
    for I in itertools.combinations(range(n), 2 * q):
        for J in itertools.combinations(range(n), 2 * q):
            total = 0
            for a in itertools.permutations(I):
                da = cb.generalized_delta(a, I)
                for b in itertools.permutations(J):
                    term = da * cb.generalized_delta(b, J)
                    for l in range(q):
                        term = term * comps[a[2 * l], a[2 * l + 1], b[2 * l], b[2 * l + 1]]
                    total = total + term
            out[I, J] = total * Fraction(1, 4 ** q) if not isinstance(total, float) else total / 4 ** q
    return out


@lru_cache(maxsize=None)
def _delta_table_pq(n: int, p: int, q: int):
    """Coefficient of ``R**q_{sorted A, sorted B}`` in ``sum_{A,B} delta^{AI}_{BJ} R**q_{A,B}``.

    Tuples with a repeated entry make both the delta and ``R**q`` vanish, so
    only tuples of distinct entries are enumerated.
    """
    rows = {}
    ordered = list(itertools.permutations(range(n), 2 * q))
    for r_i, I in enumerate(cb.basis(n, p)):
        for r_j, J in enumerate(cb.basis(n, p)):
            for A in ordered:
                if set(A) & set(I):
                    continue
                sA = cb.permutation_sign(A)
                for B in ordered:
                    delta = cb.generalized_delta(A + I, B + J)
                    if delta:
                        key = (r_i, r_j, tuple(sorted(A)), tuple(sorted(B)))
                        rows[key] = rows.get(key, 0) + delta * sA * cb.permutation_sign(B)
    return tuple((k, v) for k, v in rows.items() if v)


def oracle_pq_curvature(R, p: int, q: int) -> DoubleForm:
    """``((2q)!)**-2 sum_{A,B} delta^{A i..}_{B j..} R**q_{(A,B)}``."""
    R = as_form(R)
    n = R.n
    limit = PQ_ORACLE_MAX_N.get(q, 0)
    if n > limit:
        raise CostGuardError(f"oracle_pq_curvature with q={q} is limited to n <= {limit}")
    if not (1 <= q and 0 <= p <= n - 2 * q):
        raise ValueError(f"(p,q)=({p},{q}) out of range for n={n}")
    Rq = oracle_riemann_power(R, q)
    out = np.zeros((comb(n, p), comb(n, p)), dtype=object)
    for (r_i, r_j, A, B), coef in _delta_table_pq(n, p, q):
        out[r_i, r_j] += coef * Rq[A, B]
    norm = Fraction(1, factorial(2 * q) ** 2)
    vals = out * norm
    if any(isinstance(v, float) for v in vals.flat):
        vals = vals.astype(float)
    return DoubleForm(n, p, p, vals)
