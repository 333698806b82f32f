import random

import numpy as np
import pytest

from fsg.fplinalg import (
    NotInvariant,
    FpSubspace,
    fixed_subspace,
    full_subspace,
    is_invariant,
    is_unipotent,
    nullspace,
    quotient_action,
    rref,
    subspace,
    sum_subspaces,
    zero_subspace,
)


def test_rref_identity():
    I = np.eye(4, dtype=np.int64)
    R, piv = rref(I, 5)
    assert np.array_equal(R, I) and piv == (0, 1, 2, 3)


def test_rref_zero():
    R, piv = rref(np.zeros((3, 3), dtype=np.int64), 3)
    assert R.shape == (0, 3) and piv == ()


def test_rref_rank_one_f2():
    R, piv = rref(np.array([[1, 1], [1, 1]]), 2)
    assert np.array_equal(R, [[1, 1]]) and piv == (0,)


def test_fixed_subspace_identity():
    S = fixed_subspace([np.eye(3, dtype=np.int64)], 3, 5)
    assert S.dim == 3


def test_fixed_subspace_jordan2_f3():
    J = np.array([[1, 1], [0, 1]])
    S = fixed_subspace([J], 2, 3)
    assert S.dim == 1 and np.array_equal(S.basis, [[1, 0]])


def test_fixed_subspace_jordan3_f2():
    J = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    S = fixed_subspace([J], 3, 2)
    assert S.dim == 1 and np.array_equal(S.basis, [[1, 0, 0]])


def test_canonical_equality_under_respanning():
    rng = random.Random(99)
    p = 2
    n = 6
    for _ in range(1000):
        k = rng.randrange(1, n + 1)
        rows = np.array(
            [[rng.randrange(p) for _ in range(n)] for _ in range(k)], dtype=np.int64
        )
        S = subspace(rows, p, n)
        # respan with random invertible combinations and extra redundant rows
        mix = rows[rng.choices(range(k), k=2 * k)]
        extra = (mix[: k // 2 + 1].sum(axis=0)) % p
        T = subspace(np.vstack([mix, extra[None, :]]), p, n)
        if S.dim == T.dim:
            span_rows = {tuple(r) for r in rows}
            # only assert when the respan really spans the same space
            if all(S.contains(r) for r in mix) and all(T.contains(r) for r in rows):
                assert S == T and S.key == T.key


def test_subspace_hashable_dedup():
    a = subspace([[1, 0], [0, 1]], 3, 2)
    b = full_subspace(3, 2)
    assert len({a, b}) == 1


def test_quotient_action_trivial_cases():
    J = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    qd, qmats, section = quotient_action([J], zero_subspace(3, 3))
    assert qd == 3 and np.array_equal(qmats[0], J % 3)
    qd, qmats, _ = quotient_action([J % 3], full_subspace(3, 3))
    assert qd == 0


def test_quotient_action_jordan3():
    # J_3 over F_3 modulo span{e1} induces the 2x2 unipotent Jordan block
    J = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    N = subspace([[1, 0, 0]], 3, 3)
    qd, qmats, section = quotient_action([J], N)
    assert qd == 2
    assert np.array_equal(qmats[0], [[1, 1], [0, 1]])


def test_quotient_action_rejects_noninvariant():
    M = np.array([[0, 1], [1, 0]])
    N = subspace([[1, 0]], 2, 2)
    with pytest.raises(NotInvariant):
        quotient_action([M], N)


def test_quotient_commutes_with_section():
    rng = random.Random(5)
    p = 3
    n = 5
    for _ in range(50):
        # random unipotent upper-triangular matrix
        M = np.eye(n, dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                M[i, j] = rng.randrange(p)
        # invariant subspace: span of first k coordinates is M-invariant
        k = rng.randrange(1, n)
        N = subspace(np.eye(n, dtype=np.int64)[:k], p, n)
        assert is_invariant([M], N)
        qd, (Q,), section = quotient_action([M], N)
        for _ in range(5):
            w = np.array([rng.randrange(p) for _ in range(qd)])
            lhs = (M @ section(w)) % p
            rhs = section(Q @ w % p)
            assert N.contains((lhs - rhs) % p)


def test_fixed_in_kernel_property():
    rng = random.Random(11)
    for _ in range(25):
        p = rng.choice([2, 3])
        n = rng.randrange(2, 6)
        mats = []
        for _ in range(2):
            M = np.eye(n, dtype=np.int64)
            for i in range(n):
                for j in range(i + 1, n):
                    M[i, j] = rng.randrange(p)
            mats.append(M)
        S = fixed_subspace(mats, n, p)
        for M in mats:
            for v in S.basis:
                assert np.array_equal(M @ v % p, v % p)


def test_nullspace_canonical():
    M = np.array([[1, 2, 0], [2, 4, 0]])
    B = nullspace(M, 5)
    assert B.shape[0] == 2
    R, _ = rref(B, 5)
    assert np.array_equal(B, R)


def test_sum_subspaces():
    a = subspace([[1, 0, 0]], 2, 3)
    b = subspace([[0, 1, 0]], 2, 3)
    s = sum_subspaces(a, b)
    assert s.dim == 2 and s.contains(np.array([1, 1, 0]))


def test_is_unipotent():
    assert is_unipotent(np.array([[1, 1], [0, 1]]), 3)
    assert not is_unipotent(np.array([[2, 0], [0, 1]]), 3)
