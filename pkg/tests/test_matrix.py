import itertools

import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from conftest import M, matrices
from supertrop import (
    TropMatrix,
    TropVector,
    adjoint,
    big_quasi_inverse,
    determinant,
    is_quasi_identity,
    mat_ghost_surpasses,
    mat_nu_matched,
    quasi_identities,
    quasi_inverse,
    tangible_adjoint,
    tangible_quasi_inverse,
)
from supertrop.errors import DimensionMismatch, NotSquare, SingularMatrix, SizeCapExceeded
from supertrop.harness import Profile, random_matrix
from supertrop.matrix import mat_nu_leq, minor, scalar_mul
from supertrop.scalar import ONE, ZERO, Scalar, parse_scalar

S = parse_scalar


def qinv_matrices(n, count, seed=0):
    out = []
    rng = np.random.default_rng(seed)
    while len(out) < count:
        A = random_matrix(n, rng=rng)
        if determinant(A).value.is_tangible:
            out.append(A)
    return out


def test_identity_law():
    rng = np.random.default_rng(1)
    for n in range(1, 5):
        A = random_matrix(n, rng=rng)
        I = TropMatrix.identity(n)
        assert I @ A == A and A @ I == A


def test_counter1_product():
    A = M("0 10\n- 0")
    assert A @ TropVector(["10", "0"]) == TropVector(["10g", "0"])


def test_cramer_product():
    assert M("5 0\n5 1") @ TropVector(["0", "4"]) == TropVector(["5", "5g"])


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        M("1 2") @ M("1 2")
    with pytest.raises(DimensionMismatch):
        M("1 2") + M("1\n2")
    with pytest.raises(NotSquare):
        determinant(M("1 2"))
    with pytest.raises(IndexError):
        M("1 2")[1, 0]


def test_size_cap(monkeypatch):
    monkeypatch.setenv("SUPERTROP_MAX_N", "3")
    with pytest.raises(SizeCapExceeded):
        determinant(TropMatrix.identity(4))
    assert determinant(TropMatrix.identity(4), max_n=4).value == ONE


@pytest.mark.parametrize(
    "text, want",
    [("7", "7"), ("3g", "3g"), ("0 -\n- 0", "0"), ("0 10g\n10g 0", "20g"), ("5 0\n5 1", "6"), ("- -\n- -", "-"),
     ("1 1\n1 1", "2g"), ("0 10g\n- 0", "0")],
)
def test_determinant_examples(text, want):
    assert determinant(M(text)).value == S(want)


def test_determinant_attaining():
    d = determinant(M("0 1\n1 2"))
    assert d.value == S("2g")
    assert d.attaining == ((0, 1), (1, 0))
    assert determinant(M("- -\n- -")).attaining == ()
    assert determinant(M("5 0\n5 1")).attaining == ((0, 1),)


def test_zero_by_zero():
    assert determinant(TropMatrix([])).value == ONE
    assert adjoint(M("7")) == M("0")


@settings(max_examples=300)
@given(matrices(max_n=5))
def test_determinant_matches_oracle(A):
    value, attaining = oracles.permanent(oracles.pairs(A))
    d = determinant(A)
    assert oracles.pair(d.value) == value
    assert [tuple(p) for p in d.attaining] == attaining


@settings(max_examples=200)
@given(matrices(max_n=5))
def test_determinant_symmetries(A):
    n = A.rows
    d = determinant(A).value
    assert determinant(A.T).value == d
    perm = list(range(n))[::-1]
    assert determinant(TropMatrix([A.row(i) for i in perm])).value == d


@settings(max_examples=200)
@given(matrices(max_n=5))
def test_laplace_consistency(A):
    d = determinant(A).value
    P = A @ adjoint(A)
    for i in range(A.rows):
        assert P[i, i] == d


@settings(max_examples=200)
@given(matrices(max_n=4))
def test_adjoint_matches_brute_minors(A):
    n = A.rows
    adj = adjoint(A)
    for i, j in itertools.product(range(n), range(n)):
        if n == 1:
            want = (0, False)
        else:
            rows = [[A[r, c] for c in range(n) if c != i] for r in range(n) if r != j]
            want, _ = oracles.permanent([[oracles.pair(x) for x in r] for r in rows])
        assert oracles.pair(adj[i, j]) == want
    assert tangible_adjoint(A) == adj.retract()


def test_adjoint_two_by_two():
    assert adjoint(M("1 2\n3 4")) == M("4 2\n3 1")


def test_minor():
    assert minor(M("1 2 3\n4 5 6\n7 8 9"), 1, 0) == M("2 3\n8 9")


def test_triangular_adjoint_and_quasi_inverses():
    A = M("0 3 -\n- 0 4\n- - 0")
    assert adjoint(A) == M("0 3 7\n- 0 4\n- - 0")
    assert quasi_inverse(A) == M("0 3 7\n- 0 4\n- - 0")
    assert big_quasi_inverse(A) == M("0 3g 7g\n- 0 4g\n- - 0")
    assert quasi_identities(A)[0] == M("0 3g 7g\n- 0 4g\n- - 0")


def test_cramer_quasi_inverse():
    assert quasi_inverse(M("5 0\n5 1")) == M("-5 -6\n-1 -1")


def test_two_by_two_quasi_identities():
    a, b, c, d = 5, 1, 2, 3
    A = TropMatrix([[a, b], [c, d]])
    det = a + d
    I_A, I2_A = quasi_identities(A)
    assert I_A == TropMatrix([[0, Scalar(a + b - det, True)], [Scalar(c + d - det, True), 0]])
    assert I2_A == TropMatrix([[0, Scalar(b + d - det, True)], [Scalar(a + c - det, True), 0]])


def test_quasi_identity_examples():
    B1 = M("0 10g\n- 0")
    B2 = M("0 -\n10g 0")
    assert is_quasi_identity(B1) and is_quasi_identity(B2)
    assert is_quasi_identity(TropMatrix.identity(3))
    assert determinant(B1 + B2).value == S("20g")
    assert not is_quasi_identity(B1 + B2)
    assert not is_quasi_identity(M("0 1\n- 0"))
    assert not is_quasi_identity(M("0 1g\n1g 0"))


def test_singular_rejected():
    with pytest.raises(SingularMatrix):
        quasi_inverse(M("1 1\n1 1"))
    with pytest.raises(SingularMatrix):
        quasi_inverse(M("- -\n- -"))
    with pytest.raises(SingularMatrix):
        tangible_quasi_inverse(M("3g"))


def test_vector_relations():
    a = TropVector(["0g", "0g", "0g"])
    b = TropVector(["0g", "0g", "0"])
    c = TropVector(["0g", "0", "0"])
    assert mat_ghost_surpasses(a, b) and mat_ghost_surpasses(b, c) and mat_ghost_surpasses(a, c)
    assert not mat_ghost_surpasses(c, a)
    with pytest.raises(DimensionMismatch):
        mat_ghost_surpasses(a, TropVector(["0"]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_quasi_inverse_identities_random(n):
    for A in qinv_matrices(n, 60, seed=n):
        qi, tqi, bqi = quasi_inverse(A), tangible_quasi_inverse(A), big_quasi_inverse(A)
        I_A, I2_A = quasi_identities(A)
        assert A @ qi == I_A == A @ tqi
        assert qi @ A == I2_A == tqi @ A
        assert is_quasi_identity(I_A) and is_quasi_identity(I2_A)
        assert mat_ghost_surpasses(I_A, TropMatrix.identity(n))
        assert mat_nu_matched(bqi, qi) and mat_nu_matched(qi, tqi)
        assert mat_ghost_surpasses(bqi, qi) and mat_ghost_surpasses(qi, tqi)
        assert A @ bqi == I_A


@pytest.mark.parametrize("n", [2, 3])
def test_nu_matched_matrices_share_quasi_identity(n):
    rng = np.random.default_rng(7)
    for A in qinv_matrices(n, 40, seed=11):
        flips = rng.random((n, n)) < 0.3
        B = TropMatrix([[A[i, j].nu() if flips[i, j] else A[i, j] for j in range(n)] for i in range(n)])
        if determinant(B).value.is_tangible:
            assert quasi_identities(A)[0] == quasi_identities(B)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_adj01_random(n):
    rng = np.random.default_rng(n)
    for _ in range(60):
        A = random_matrix(n, rng=rng)
        adj = adjoint(A)
        lhs = scalar_mul(determinant(A).value, adj)
        assert mat_nu_leq(adj @ A @ adj, lhs)


def test_random_matrix_profiles():
    t = random_matrix(4, Profile(ghost_prob=0.0, zero_prob=0.0), seed=3)
    assert t.is_tangible and all(not x.is_zero for x in t.entries())
    z = random_matrix(3, Profile(zero_prob=1.0), seed=3)
    assert z == TropMatrix.zeros(3)
    assert random_matrix(5, seed=9) == random_matrix(5, seed=9)


def test_matrix_immutable_and_hashable():
    A = M("1 2\n3 4")
    assert hash(A) == hash(M("1 2\n3 4"))
    with pytest.raises(AttributeError):
        A.shape = (1, 1)
    assert A.T == M("1 3\n2 4")
    assert A ** 0 == TropMatrix.identity(2)
    assert A ** 2 == A @ A
    assert (A * S("1")) == M("2 3\n4 5")
    assert ZERO not in A.entries()
