import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import sym_det, sym_invariants, sym_rank
from wittlab import intmat


def matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def sparse_unit_matrices():
    """Boundary-like matrices: mostly zero, entries in {-2..2}."""
    entry = st.sampled_from([0, 0, 0, 0, 1, -1, 1, -1, 2, -2])
    return st.integers(1, 8).flatmap(
        lambda m: st.integers(1, 8).flatmap(
            lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def test_smith_small_example():
    snf = intmat.smith_normal_form([[2, 4], [6, 8]], transforms=True, check=True)
    assert snf.invariants == (2, 4)
    assert snf.torsion == (2, 4)


def test_smith_zero_matrix():
    snf = intmat.smith_normal_form([[0, 0], [0, 0]])
    assert snf.rank == 0 and snf.invariants == ()


@given(matrices())
def test_smith_matches_sympy(A):
    snf = intmat.smith_normal_form(A, transforms=True, check=True)
    assert snf.invariants == sym_invariants(A)
    assert intmat.matmul(intmat.matmul(snf.U, A), snf.V) == snf.D


@given(sparse_unit_matrices())
def test_rank_and_torsion_matches_both_routes(A):
    # sparse elimination against the dense Smith form and against sympy
    r, tors = intmat.rank_and_torsion(A)
    dense = intmat.smith_normal_form(A)
    assert (r, tors) == (dense.rank, dense.torsion)
    inv = sym_invariants(A)
    assert (r, tors) == (len(inv), tuple(d for d in inv if d > 1))


def test_rank_and_torsion_keeps_torsion_behind_units():
    # a unit pivot sitting next to the torsion block must not hide it
    A = [[1, 1, 0], [0, 2, 0], [0, 0, 3]]
    assert intmat.rank_and_torsion(A) == (3, (6,))


@given(matrices(4, 4, -4, 4))
def test_det_and_rank(A):
    assert intmat.rank(A) == sym_rank(A)
    if len(A) == len(A[0]):
        assert intmat.det(A) == sym_det(A)


@given(matrices(4, 6, -3, 3))
def test_kernel_basis_is_saturated_kernel(A):
    n = len(A[0])
    K = intmat.kernel_basis(A, ncols=n)
    cols = intmat.columns(K) if K and K[0] else []
    assert len(cols) == n - sym_rank(A)
    for c in cols:
        assert all(sum(a * x for a, x in zip(row, c)) == 0 for row in A)
    if cols:
        # saturated: the invariant factors of the basis are all 1
        assert sym_invariants(K) == (1,) * len(cols)


def test_inverse_and_solve():
    A = [[2, 1], [1, 1]]
    assert intmat.inverse(A) == ((1, -1), (-1, 2))
    assert intmat.solve(A, [3, 2]) == (1, 1)
    with pytest.raises(ValueError):
        intmat.inverse([[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        intmat.solve([[2], [0]], [1, 0])


def test_lll_keeps_lattice():
    basis = [(1, 0, 0, 7), (0, 1, 0, 11), (0, 0, 1, 13)]
    red = intmat.lll_reduce(basis)
    # same lattice: both bases express each other with integer coefficients
    assert abs(sym_det([list(r) for r in intmat.matmul(red, intmat.transpose(red))])) == abs(
        sym_det([list(r) for r in intmat.matmul(basis, intmat.transpose(basis))])
    )
    assert sym_invariants(list(basis) + list(red)) == (1, 1, 1)


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        intmat.as_matrix([[1, 2], [3]])
