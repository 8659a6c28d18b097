import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtilt import linalg
from qtilt.linalg import (
    Matrix,
    eye,
    from_rows,
    hstack,
    nullspace_basis,
    rank,
    rref,
    solve_right,
    zeros,
)


def M2(rows):
    return from_rows(2, rows)


def test_prime_validation():
    with pytest.raises(ValueError):
        Matrix(4, [[0]])
    with pytest.raises(ValueError):
        Matrix(1, [[0]])
    Matrix(2, [[1]])
    Matrix(7919, [[5]])


def test_rref_identity():
    m = eye(2, 3)
    r, piv = rref(m)
    assert r == m
    assert piv == (0, 1, 2)


def test_rref_zero():
    m = zeros(2, 2, 2)
    r, piv = rref(m)
    assert r == m
    assert piv == ()


def test_rref_hand_example():
    # [[1,1],[1,1]] over GF(2): second row is eliminated by the first
    r, piv = rref(M2([[1, 1], [1, 1]]))
    assert r == M2([[1, 1], [0, 0]])
    assert piv == (0,)


def test_rank_examples():
    assert rank(eye(2, 5)) == 5
    assert rank(zeros(2, 3, 4)) == 0
    # third row is the sum of the first two
    assert rank(M2([[1, 0, 1], [0, 1, 1], [1, 1, 0]])) == 2


def test_nullspace_examples():
    assert nullspace_basis(eye(2, 4)).rows == 0
    assert nullspace_basis(zeros(2, 2, 3)) == eye(2, 3)
    assert nullspace_basis(M2([[1, 1]])) == M2([[1, 1]])


def test_nullspace_is_annihilated():
    rng = np.random.default_rng(7)
    for p in (2, 3, 5):
        m = Matrix(p, rng.integers(0, p, size=(6, 9)))
        ns = nullspace_basis(m)
        assert (m @ ns.T).is_zero()
        assert rank(m) + ns.rows == m.cols


def test_solve_right_examples():
    b = M2([[1], [0]])
    assert solve_right(eye(2, 2), b) == b
    assert solve_right(zeros(2, 2, 2), zeros(2, 2, 1)) == zeros(2, 2, 1)
    x = solve_right(M2([[1, 1], [0, 1]]), M2([[0], [1]]))
    assert x == M2([[1], [1]])


def test_solve_right_unsolvable():
    a = M2([[1, 0], [1, 0]])
    b = M2([[1], [0]])
    assert solve_right(a, b) is None


def test_solve_right_shape_contract():
    with pytest.raises(ValueError):
        solve_right(zeros(2, 2, 2), zeros(2, 3, 1))


def test_empty_shapes():
    m = zeros(2, 0, 4)
    assert rank(m) == 0
    assert nullspace_basis(m) == eye(2, 4)
    n = zeros(2, 4, 0)
    assert rank(n) == 0
    assert nullspace_basis(n).shape == (0, 0)
    assert (zeros(2, 3, 0) @ zeros(2, 0, 2)) == zeros(2, 3, 2)


def test_matmul_mod_p():
    a = Matrix(5, [[2, 3], [4, 1]])
    b = Matrix(5, [[1, 2], [3, 4]])
    assert a @ b == Matrix(5, [[(2 + 9) % 5, (4 + 12) % 5], [(4 + 3) % 5, (8 + 4) % 5]])


def test_solve_left():
    a = M2([[1, 1, 0], [0, 1, 1]])
    b = M2([[1, 0, 1]])
    x = linalg.solve_left(a, b)
    assert x is not None
    assert x @ a == b


@st.composite
def gf2_matrices(draw, max_dim=8):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    data = draw(st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return np.array(data, dtype=np.uint8).reshape(r, c)


@settings(max_examples=60, deadline=None)
@given(gf2_matrices())
def test_rref_idempotent(arr):
    m = Matrix(2, arr)
    r1, piv1 = rref(m)
    r2, piv2 = rref(r1)
    assert r1 == r2
    assert piv1 == piv2


@settings(max_examples=60, deadline=None)
@given(gf2_matrices())
def test_rank_plus_nullity(arr):
    m = Matrix(2, arr)
    assert rank(m) + nullspace_basis(m).rows == m.cols
    assert rank(m) == rank(m.T)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30))
def test_packed_and_generic_agree_on_random_64x64(seed):
    rng = np.random.default_rng(seed)
    arr = rng.integers(0, 2, size=(64, 64)).astype(np.uint8)
    packed, piv_packed = linalg._rref_gf2(arr)
    generic, piv_generic = linalg._rref_modp(arr, 2)
    assert np.array_equal(packed, generic.astype(np.uint8))
    assert piv_packed == piv_generic


@settings(max_examples=40, deadline=None)
@given(gf2_matrices(max_dim=6), st.integers(0, 2**30))
def test_solve_right_is_exact_when_solvable(arr, seed):
    rng = np.random.default_rng(seed)
    a = Matrix(2, arr)
    x_true = Matrix(2, rng.integers(0, 2, size=(a.cols, 2)))
    b = a @ x_true
    x = solve_right(a, b)
    assert x is not None
    assert a @ x == b


def test_hstack_kron():
    a = M2([[1, 0]])
    b = M2([[0, 1]])
    assert hstack([a, b]) == M2([[1, 0, 0, 1]])
    k = linalg.kron(M2([[1, 1]]), M2([[1, 0]]))
    assert k == M2([[1, 0, 1, 0]])
