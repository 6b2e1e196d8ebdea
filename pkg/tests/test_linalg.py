from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cclab.linalg import (
    GF,
    QQ,
    Matrix,
    RankStratum,
    brute_force_stratum,
    column_space_basis,
    complement_columns,
    determinant,
    inverse,
    kernel_basis,
    left_kernel_basis,
    matrix_stratum,
    rank,
    solve,
    stratum_cokernel,
    stratum_kernel,
)
from cclab.linalg import _rref


def matrices(field, max_dim=4, lo=-3, hi=3):
    def build(shape_and_entries):
        (m, n), entries = shape_and_entries
        return Matrix(field, [entries[i * n:(i + 1) * n] for i in range(m)], n)

    shapes = st.tuples(st.integers(1, max_dim), st.integers(1, max_dim))
    return shapes.flatmap(
        lambda s: st.tuples(st.just(s), st.lists(st.integers(lo, hi), min_size=s[0] * s[1], max_size=s[0] * s[1]))
    ).map(build)


low_rank = st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2), st.randoms(use_true_random=False))


def _low_rank(field, spec):
    m, n, r, rng = spec
    B = Matrix(field, [[rng.randint(-2, 2) for _ in range(r)] for _ in range(m)], r)
    C = Matrix(field, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(r)], n)
    return B @ C


def test_field_arithmetic():
    F = GF(7)
    assert F(Fraction(1, 3)) == 5
    assert F.inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 7))
    with pytest.raises(ValueError):
        GF(1)


def test_rank_of_known_matrices():
    A = Matrix(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(A) == 2
    assert rank(A.change_field(GF(2))) == 1
    assert rank(Matrix(GF(3), [[1, 1], [1, 1]])) == 1
    assert rank(Matrix.zeros(QQ, 3, 0)) == 0


@given(matrices(QQ, 5))
def test_fraction_free_rank_matches_rref(A):
    _, piv = _rref(QQ, [list(r) for r in A.rows], A.ncols)
    assert rank(A) == len(piv)


def _sparse_matrix(field, spec):
    m, n, rng = spec
    rows = [[0] * n for _ in range(m)]
    for _ in range(max(1, m * n // 6)):
        rows[rng.randrange(m)][rng.randrange(n)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3) if field.p == 0 else 1)
    # repeat a combination of two rows so ranks are not always full
    if m > 2:
        rows[-1] = [2 * a - b for a, b in zip(rows[0], rows[1])]
    return Matrix(field, rows, n)


@given(st.sampled_from([QQ, GF(2), GF(7)]),
       st.tuples(st.integers(1, 12), st.integers(1, 12), st.randoms(use_true_random=False)))
def test_sparse_rank_matches_rref(F, spec):
    A = _sparse_matrix(F, spec)
    _, piv = _rref(F, [list(r) for r in A.rows], A.ncols)
    assert rank(A) == len(piv)


@given(st.sampled_from([QQ, GF(2), GF(5)]).flatmap(lambda F: matrices(F)))
def test_kernel_and_cokernel(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.ncols == A.ncols - rank(A)
    L = left_kernel_basis(A)
    assert (L @ A).is_zero()
    assert L.nrows == A.nrows - rank(A)
    assert column_space_basis(A).ncols == rank(A)


@given(matrices(QQ, 4))
def test_solve_finds_preimages(A):
    x = Matrix(QQ, [[i + 1] for i in range(A.ncols)], 1)
    b = A @ x
    y = solve(A, b)
    assert y is not None and A @ y == b


def test_solve_reports_inconsistency():
    A = Matrix(QQ, [[1, 1], [1, 1]])
    assert solve(A, Matrix(QQ, [[1], [2]], 1)) is None


@given(matrices(QQ, 4))
def test_inverse_when_square(A):
    if A.nrows != A.ncols or determinant(A) == 0:
        return
    assert A @ inverse(A) == Matrix.identity(QQ, A.nrows)


def test_determinant_small():
    assert determinant(Matrix(QQ, [[1, 2], [3, 4]])) == -2
    assert determinant(Matrix(GF(5), [[1, 2], [3, 4]])) == 3


@given(low_rank)
def test_stratum_matches_brute_force_over_QQ(spec):
    A = _low_rank(QQ, spec)
    assert matrix_stratum(A) == brute_force_stratum(A)


@given(st.sampled_from([2, 3]).flatmap(lambda p: matrices(GF(p))))
def test_stratum_matches_brute_force_mod_p(A):
    assert matrix_stratum(A) == brute_force_stratum(A)


def test_stratum_example():
    A = Matrix(QQ, [[0, 0, 0], [0, 1, 1], [0, 2, 2]])
    assert matrix_stratum(A) == RankStratum(1, (2,), (2,))
    assert matrix_stratum(Matrix.zeros(QQ, 2, 2)) == RankStratum(0, (), ())


@given(st.sampled_from([QQ, GF(3)]).flatmap(lambda F: matrices(F)))
def test_stratum_kernel_and_cokernel_span_the_same_spaces(A):
    K = stratum_kernel(A)
    assert (A @ K).is_zero() and rank(K) == K.ncols == A.ncols - rank(A)
    C = stratum_cokernel(A)
    assert (C @ A).is_zero() and rank(C) == C.nrows == A.nrows - rank(A)


def test_complement_columns_complete_a_basis():
    B = Matrix(QQ, [[1, 0], [1, 0], [0, 1]])
    comp = complement_columns(B)
    cols = [list(c) for c in B.columns()] + [[int(i == c) for i in range(3)] for c in comp]
    assert rank(Matrix.from_columns(QQ, cols, 3)) == 3
