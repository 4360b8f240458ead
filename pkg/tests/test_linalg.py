"""Exact linear algebra: rref, spectral projectors, Gram projections."""

import random
from fractions import Fraction as F

import numpy as np
import pytest

from dualpolar.linalg import (
    ExactMatrix,
    ExactVector,
    cyclic_closure_dim,
    gram_project,
    int_idempotent_numerators,
    primitive_idempotents,
    restrict_operator,
    rref,
    safe_int_matmul,
)
from dualpolar.scalars import Scalar, q_power


def frac_matrix(rows):
    return ExactMatrix([[F(x) for x in r] for r in rows])


def test_rref_trivial_cases():
    I3 = ExactMatrix.identity(3)
    R, piv = rref(I3)
    assert R == I3 and piv == (0, 1, 2)
    Z = ExactMatrix.zeros(2, 3)
    R, piv = rref(Z)
    assert R == Z and piv == ()
    M = frac_matrix([[0, 1], [1, 0]])
    R, piv = rref(M)
    assert R == ExactMatrix.identity(2)


def test_rref_idempotent_and_row_space_canonical():
    rng = random.Random(5)
    for _ in range(25):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        M = frac_matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])
        R, piv = rref(M)
        R2, piv2 = rref(R)
        assert R == R2 and piv == piv2
        # mixing rows by a random invertible transform preserves the rref
        T = frac_matrix([[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)])
        if T.rank() == m:
            assert rref(T @ M)[0] == R


def test_primitive_idempotents_diag():
    A = frac_matrix([[2, 0], [0, 5]])
    E = primitive_idempotents(A, [F(2), F(5)])
    assert E[0] == frac_matrix([[1, 0], [0, 0]])
    assert E[1] == frac_matrix([[0, 0], [0, 1]])


def test_primitive_idempotents_relations():
    # a random rational diagonalizable matrix: S diag S^-1
    rng = random.Random(11)
    for _ in range(5):
        n = 4
        while True:
            S = frac_matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            if S.rank() == n:
                break
        thetas = random.Random(rng.random()).sample(range(-6, 7), n)
        A = S @ ExactMatrix.diagonal([F(t) for t in thetas]) @ S.inverse()
        E = primitive_idempotents(A, [F(t) for t in thetas])
        total = ExactMatrix.zeros(n, n)
        recon = ExactMatrix.zeros(n, n)
        for t, Ei in zip(thetas, E):
            assert Ei @ Ei == Ei
            total = total + Ei
            recon = recon + Ei.scale(F(t))
        assert total == ExactMatrix.identity(n)
        assert recon == A
        for i in range(n):
            for j in range(i + 1, n):
                assert (E[i] @ E[j]).is_zero()


def test_primitive_idempotents_errors():
    A = frac_matrix([[1, 1], [0, 1]])
    with pytest.raises(ValueError, match="distinct"):
        primitive_idempotents(A, [F(1), F(1)])
    with pytest.raises(ValueError, match="multiplicity-free"):
        primitive_idempotents(A, [F(1), F(2)])


def test_primitive_idempotents_symbolic():
    q = q_power(1)
    A = ExactMatrix([[q, Scalar((1,)) * 0], [Scalar((1,)) * 0, -q]])
    E = primitive_idempotents(A, [q, -1 * q])
    assert E[0] @ E[0] == E[0]
    assert E[0] + E[1] == ExactMatrix.identity(2)


def test_gram_project_trivial():
    one = F(1)
    basis = [ExactVector([one, F(0)]), ExactVector([F(0), one])]
    P = gram_project(basis, [F(1), F(3)])
    assert P == ExactMatrix.identity(2)
    P1 = gram_project([ExactVector([one, F(0)])], [F(1), F(3)])
    assert P1 == frac_matrix([[1, 0], [0, 0]])


def test_gram_project_general():
    #  projection onto span{(1,1,0),(0,1,1)} under weights (1,2,3)
    basis = [ExactVector([F(1), F(1), F(0)]), ExactVector([F(0), F(1), F(1)])]
    g = [F(1), F(2), F(3)]
    P = gram_project(basis, g)
    assert P @ P == P
    for b in basis:
        assert (P @ b) == b
    G = ExactMatrix.diagonal(g)
    assert G @ P == P.conj_transpose() @ G
    with pytest.raises(ValueError, match="dependent"):
        gram_project(basis + [ExactVector([F(1), F(2), F(1)])], g)


def test_restrict_operator():
    A = frac_matrix([[1, 2, 0], [0, 3, 0], [0, 0, 4]])
    basis = [ExactVector([F(1), F(0), F(0)]), ExactVector([F(0), F(1), F(0)])]
    M = restrict_operator(A, basis)
    assert M == frac_matrix([[1, 2], [0, 3]])
    bad = [ExactVector([F(1), F(1), F(1)])]
    with pytest.raises(ValueError, match="invariant"):
        restrict_operator(A, bad)


def test_cyclic_closure():
    A = frac_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])  # cyclic shift
    seed = [ExactVector([F(1), F(0), F(0)])]
    assert cyclic_closure_dim(seed, [A]) == 3
    B = ExactMatrix.identity(3)
    assert cyclic_closure_dim(seed, [B]) == 1


def test_safe_int_matmul_and_int_idempotents():
    rng = np.random.default_rng(3)
    a = rng.integers(-5, 5, size=(20, 20))
    b = rng.integers(-5, 5, size=(20, 20))
    assert np.array_equal(safe_int_matmul(a, b), a @ b)
    # big-int fallback stays exact
    big = (np.eye(3, dtype=object) * (1 << 40)).astype(object)
    r = safe_int_matmul(big, big)
    assert r[0][0] == 1 << 80

    # integer projector route agrees with the generic one
    A = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]])  # K3: eigenvalues 2, -1
    nums, dens = int_idempotent_numerators(A, [2, -1])
    E0 = frac_matrix([[F(int(x), dens[0]) for x in row] for row in nums[0]])
    assert E0 @ E0 == E0
    assert E0.trace() == F(1)
