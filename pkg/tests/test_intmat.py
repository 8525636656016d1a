import random

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nv.intmat import (
    det_bareiss,
    hnf_row_style,
    identity,
    invert_rational,
    kernel_basis,
    mat_mul,
    mat_rank,
    smith_normal_form,
    snf_diagonal,
    solve_rational,
    transpose,
)


def random_matrix(rng, r, c, lo=-5, hi=5):
    return [[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)]


small_int = st.integers(min_value=-6, max_value=6)


def matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


class TestSmithNormalForm:
    def test_identity(self):
        D, U, V = smith_normal_form(identity(3))
        assert D == identity(3)

    def test_a2_gram(self):
        M = [[2, -1], [-1, 2]]
        D, U, V = smith_normal_form(M)
        assert [D[0][0], D[1][1]] == [1, 3]
        assert mat_mul(mat_mul(U, M), V) == D

    def test_divisor_chain(self):
        M = [[2, 0], [0, 3]]
        assert snf_diagonal(M) == [1, 6]

    @given(matrices())
    @settings(max_examples=150, deadline=None)
    def test_umv_and_invariants(self, M):
        D, U, V = smith_normal_form(M)
        assert mat_mul(mat_mul(U, M), V) == D
        diag = snf_diagonal(M)
        # divisor chain, nonnegative
        for a, b in zip(diag, diag[1:]):
            assert a > 0 and b % a == 0
        # unimodularity of the transforms
        assert abs(det_bareiss(U)) == 1
        assert abs(det_bareiss(V)) == 1
        # against sympy's normal form
        import sympy
        from sympy.matrices.normalforms import smith_normal_form as snf_ref
        S = snf_ref(sympy.Matrix(M))
        ref = sorted(abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0)
        assert sorted(diag) == ref

    def test_deterministic(self):
        rng = random.Random(7)
        for _ in range(20):
            M = random_matrix(rng, 3, 3)
            assert smith_normal_form(M) == smith_normal_form([row[:] for row in M])


class TestKernel:
    @given(matrices())
    @settings(max_examples=100, deadline=None)
    def test_left_kernel(self, M):
        K = kernel_basis(M)
        assert len(K) == len(M) - mat_rank(M)
        for row in K:
            prod = [sum(row[i] * M[i][j] for i in range(len(M)))
                    for j in range(len(M[0]))]
            assert all(x == 0 for x in prod)


class TestRationalSolve:
    def test_solve(self):
        A = [[2, 1], [1, 1]]
        b = [3, 2]
        x = solve_rational(A, b)
        assert [sum(x[i] * A[i][j] for i in range(2)) for j in range(2)] == b

    def test_singular(self):
        assert solve_rational([[1, 1], [1, 1]], [1, 0]) is None

    @given(matrices(3))
    @settings(max_examples=60, deadline=None)
    def test_inverse(self, M):
        if len(M) != len(M[0]) or det_bareiss(M) == 0:
            return
        Minv = invert_rational(M)
        prod = [[sum(Fraction(M[i][k]) * Minv[k][j] for k in range(len(M)))
                 for j in range(len(M))] for i in range(len(M))]
        assert prod == [[Fraction(int(i == j)) for j in range(len(M))]
                        for i in range(len(M))]


class TestHermiteForm:
    def test_canonical_under_row_ops(self):
        rng = random.Random(11)
        for _ in range(25):
            M = random_matrix(rng, 3, 4)
            # shuffle rows and add multiples; span is unchanged
            N = [row[:] for row in M]
            rng.shuffle(N)
            N[0] = [a + 2 * b for a, b in zip(N[0], N[-1])]
            assert hnf_row_style(M) == hnf_row_style(N)

    def test_pivots_positive(self):
        H = hnf_row_style([[-2, 1], [0, -3]])
        assert H[0][0] > 0 and H[1][1] > 0
