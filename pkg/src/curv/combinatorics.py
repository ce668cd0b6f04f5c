"""Multi-indices, permutation signs and the generalized Kronecker delta.

All indices are 0-based. A multi-index of size ``p`` over ``n`` is a strictly
increasing tuple of integers in ``[0, n)``; the basis of ``Lambda^p`` is the
list of such tuples in lexicographic order and :func:`rank` gives the position
of a tuple in that list.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

MAX_DIM = 16


class MultiIndexError(ValueError):
    """Malformed multi-index or dimension."""


def _check_dim(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1 or n > MAX_DIM:
        raise MultiIndexError(f"dimension must be an integer in [1, {MAX_DIM}], got {n!r}")


def check_multi_index(I: Sequence[int], n: int) -> tuple[int, ...]:
    _check_dim(n)
    I = tuple(int(i) for i in I)
    if any(i < 0 or i >= n for i in I):
        raise MultiIndexError(f"indices {I} out of range for n={n}")
    if any(a >= b for a, b in zip(I, I[1:])):
        raise MultiIndexError(f"indices {I} are not strictly increasing")
    return I


def rank(I: Sequence[int], n: int) -> int:
    """Lexicographic position of ``I`` among increasing tuples of its size.

    Uses the combinatorial number system on the reversed alphabet, so no
    tables are needed.
    """
    I = check_multi_index(I, n)
    p = len(I)
    return comb(n, p) - 1 - sum(comb(n - 1 - i, p - t) for t, i in enumerate(I))


def unrank(r: int, p: int, n: int) -> tuple[int, ...]:
    _check_dim(n)
    if not 0 <= p <= n:
        raise MultiIndexError(f"size {p} out of range for n={n}")
    total = comb(n, p)
    if not 0 <= r < total:
        raise MultiIndexError(f"rank {r} out of range [0, {total})")
    # invert rank(): peel off the largest c with comb(c, p - t) <= remainder
    rem = total - 1 - r
    out = []
    for t in range(p):
        k = p - t
        c = k - 1
        while comb(c + 1, k) <= rem:
            c += 1
        rem -= comb(c, k)
        out.append(n - 1 - c)
    return tuple(out)


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has a repeated entry."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inversions % 2 else 1


def merge_sign(A: Sequence[int], B: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the shuffle sorting the concatenation ``(A, B)``, and the merged index.

    Both inputs must be strictly increasing. The sign is 0 when they overlap.
    """
    A, B = tuple(A), tuple(B)
    for X in (A, B):
        if any(a >= b for a, b in zip(X, X[1:])):
            raise MultiIndexError(f"{X} is not strictly increasing")
    merged = tuple(sorted(A + B))
    if set(A) & set(B):
        return 0, merged
    inv = sum(1 for a in A for b in B if a > b)
    return (-1 if inv % 2 else 1), merged


def complement_sign(I: Sequence[int], n: int) -> tuple[int, tuple[int, ...]]:
    I = check_multi_index(I, n)
    Ic = tuple(k for k in range(n) if k not in I)
    sign, _ = merge_sign(I, Ic)
    return sign, Ic


def generalized_delta(A: Sequence[int], B: Sequence[int]) -> int:
    """det[A[r] == B[s]]: the sign of the permutation taking ``B`` to ``A``."""
    A, B = tuple(A), tuple(B)
    if len(A) != len(B):
        raise MultiIndexError(f"length mismatch: {len(A)} vs {len(B)}")
    if len(set(A)) != len(A) or len(set(B)) != len(B) or set(A) != set(B):
        return 0
    return permutation_sign(A) * permutation_sign(B)


# Cached index tables used by the double-form kernels. Each is a pure function
# of its integer arguments and returns read-only numpy arrays.


@lru_cache(maxsize=None)
def basis(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    _check_dim(n)
    if not 0 <= p <= n:
        raise MultiIndexError(f"degree {p} out of range for n={n}")
    return tuple(itertools.combinations(range(n), p))


@lru_cache(maxsize=None)
def rank_map(n: int, p: int) -> dict[tuple[int, ...], int]:
    return {I: r for r, I in enumerate(basis(n, p))}


def _frozen(*arrays):
    for a in arrays:
        a.flags.writeable = False
    return arrays


@lru_cache(maxsize=None)
def completions(n: int, p: int, r: int):
    """For each size-``p`` index ``I``: the size-``r`` indices disjoint from it.

    Returns a tuple indexed by ``rank(I)`` of ``(partner_ranks, union_ranks,
    signs)`` where ``signs`` is ``merge_sign(I, partner)``.
    """
    big = rank_map(n, p + r)
    small = rank_map(n, r)
    out = []
    for I in basis(n, p):
        rest = [k for k in range(n) if k not in I]
        partners, unions, signs = [], [], []
        for J in itertools.combinations(rest, r):
            s, K = merge_sign(I, J)
            partners.append(small[J])
            unions.append(big[K])
            signs.append(s)
        out.append(_frozen(np.array(partners, dtype=np.intp),
                           np.array(unions, dtype=np.intp),
                           np.array(signs, dtype=np.int64)))
    return tuple(out)


@lru_cache(maxsize=None)
def insertion(n: int, m: int):
    """For each ``k``: the size-``m`` indices ``I`` with ``k`` not in ``I``.

    Returns a tuple indexed by ``k`` of ``(I_ranks, kI_ranks, signs)`` where
    ``signs`` is ``merge_sign((k,), I)``, i.e. ``(-1)**(#{i in I : i < k})``.
    """
    small = rank_map(n, m)
    big = rank_map(n, m + 1)
    out = []
    for k in range(n):
        Is, Ks, ss = [], [], []
        for I in basis(n, m):
            if k in I:
                continue
            s, K = merge_sign((k,), I)
            Is.append(small[I])
            Ks.append(big[K])
            ss.append(s)
        out.append(_frozen(np.array(Is, dtype=np.intp),
                           np.array(Ks, dtype=np.intp),
                           np.array(ss, dtype=np.int64)))
    return tuple(out)


@lru_cache(maxsize=None)
def complements(n: int, p: int):
    """``(complement_ranks, signs)`` over the size-``p`` basis."""
    cmap = rank_map(n, n - p)
    ranks, signs = [], []
    for I in basis(n, p):
        s, Ic = complement_sign(I, n)
        ranks.append(cmap[Ic])
        signs.append(s)
    return _frozen(np.array(ranks, dtype=np.intp), np.array(signs, dtype=np.int64))
