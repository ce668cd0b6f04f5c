import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from curv import combinatorics as cb


def test_rank_examples():
    assert cb.rank((0, 1), 4) == 0
    assert cb.rank((2, 3), 4) == 5
    triples = list(itertools.combinations(range(5), 3))
    assert cb.rank((0, 2, 3), 5) == triples.index((0, 2, 3))


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_rank_unrank_roundtrip(np_):
    n, p = np_
    for r in range(comb(n, p)):
        I = cb.unrank(r, p, n)
        assert cb.rank(I, n) == r
        assert I == cb.basis(n, p)[r]


@pytest.mark.parametrize("bad", [(1, 0), (0, 0), (0, 4)])
def test_rank_rejects_bad_indices(bad):
    with pytest.raises(cb.MultiIndexError):
        cb.rank(bad, 4)


def test_merge_sign_examples():
    assert cb.merge_sign((0,), (1,)) == (1, (0, 1))
    assert cb.merge_sign((1,), (0,)) == (-1, (0, 1))
    assert cb.merge_sign((0, 2), (1, 3)) == (-1, (0, 1, 2, 3))
    assert cb.merge_sign((0, 1), (1, 2))[0] == 0


def test_complement_sign_examples():
    assert cb.complement_sign((0, 1), 4) == (1, (2, 3))
    assert cb.complement_sign((2, 3), 4) == (1, (0, 1))
    # (1,2,0,3) has two inversions
    assert cb.complement_sign((1, 2), 4) == (1, (0, 3))
    assert cb.permutation_sign((1, 2, 0, 3)) == 1


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1)))))
def test_complement_sign_matches_permutation(arg):
    n, s = arg
    I = tuple(sorted(s))
    sign, Ic = cb.complement_sign(I, n)
    assert sign == cb.permutation_sign(I + Ic)
    assert sorted(I + Ic) == list(range(n))


def test_generalized_delta_examples():
    assert cb.generalized_delta((1, 2), (1, 2)) == 1
    assert cb.generalized_delta((1, 2), (2, 1)) == -1
    assert cb.generalized_delta((1, 1), (1, 2)) == 0
    with pytest.raises(cb.MultiIndexError):
        cb.generalized_delta((1,), (1, 2))


@given(st.lists(st.integers(0, 5), min_size=1, max_size=4), st.randoms(use_true_random=False))
def test_generalized_delta_is_determinant(A, rnd):
    B = list(A)
    rnd.shuffle(B)
    if rnd.random() < 0.3:
        B[0] = rnd.randrange(6)
    det = np.linalg.det(np.array([[float(a == b) for b in B] for a in A]))
    assert cb.generalized_delta(A, B) == round(det)


def test_insertion_table_signs():
    n, m = 5, 2
    for k in range(n):
        I_ranks, kI_ranks, signs = cb.insertion(n, m)[k]
        for i, j, s in zip(I_ranks, kI_ranks, signs):
            I = cb.basis(n, m)[i]
            sign, merged = cb.merge_sign((k,), I)
            assert merged == cb.basis(n, m + 1)[j] and s == sign
