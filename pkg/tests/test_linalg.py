import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gruss_lab.errors import DomainError, InvalidInputError, ShapeError, SymmetryError
from gruss_lab.linalg import (
    abs_matrix, adjoint, as_matrix, contraction_factor, direct_sum, eigh, hadamard, identity,
    is_hermitian, is_psd, kron, matrix_from_json, matrix_to_json, op_norm, pad, psd_sqrt,
    pseudo_inverse, random_hermitian, random_psd, random_unitary, singular_values,
)
from helpers import cgauss, dims, exact_svd_example, seeds


# -- singular values ---------------------------------------------------------

def test_singular_values_examples():
    assert np.allclose(singular_values(np.diag([3, 1, 2])), [3, 2, 1], atol=0)
    assert np.array_equal(singular_values([[0, 2], [0, 0]]), [2, 0])
    M, s = exact_svd_example()
    # characteristic polynomial of MM*: (x - 4)(x^2 - 32x + 64)
    assert np.allclose(np.sort(np.linalg.eigvalsh(M @ M.conj().T)),
                       np.sort(s ** 2), atol=1e-12)
    assert np.allclose(singular_values(M), s, atol=1e-12)


def test_singular_values_padding_is_exact():
    A = cgauss(4, (3, 3))
    s = singular_values(A)
    padded = singular_values(pad(A, 5))
    assert np.array_equal(padded[:3], s)
    assert np.array_equal(padded[3:], [0.0, 0.0])


@settings(max_examples=60, deadline=None)
@given(seeds, dims, dims)
def test_singular_values_unitarily_invariant(seed, r, c):
    A = cgauss(seed, (r, c))
    U, V = random_unitary(r, seed + 1), random_unitary(c, seed + 2)
    s = singular_values(A)
    assert np.allclose(singular_values(adjoint(A)), s, atol=1e-10)
    assert np.allclose(singular_values(U @ A @ V), s, atol=1e-10)
    assert np.all(np.diff(s) <= 1e-15)


def test_non_finite_input_rejected():
    with pytest.raises(InvalidInputError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(ShapeError):
        as_matrix(np.zeros((2, 2, 2)))


# -- positivity -------------------------------------------------------------

def test_is_psd_examples():
    ok, lam = is_psd(identity(3), 1e-10)
    assert ok and lam == pytest.approx(1.0)
    ok, lam = is_psd(np.diag([1.0, -1e-3]), 1e-10)
    assert not ok and lam == pytest.approx(-1e-3)
    A = np.array([[2, 1], [1, 1]])
    assert is_psd(np.block([[A, A], [A, A]]), 1e-10).holds


def test_is_psd_rejects_non_hermitian():
    with pytest.raises(SymmetryError):
        is_psd([[0, 1], [0, 0]])


def test_psd_tolerance_is_relative():
    big = np.diag([1e6, -1e-5])
    assert is_psd(big, 1e-9).holds
    assert not is_psd(np.diag([1.0, -1e-5]), 1e-9).holds


@settings(max_examples=200, deadline=None)
@given(seeds, dims)
def test_doubled_block_psd_iff_block_psd(seed, d):
    H = random_hermitian(d, seed)
    assert is_psd(H).holds == is_psd(np.block([[H, H], [H, H]])).holds


@settings(max_examples=200, deadline=None)
@given(seeds, dims, dims)
def test_off_diagonal_block_norm(seed, r, c):
    X = cgauss(seed, (r, c))
    Z = np.block([[np.zeros((r, r)), X], [adjoint(X), np.zeros((c, c))]])
    assert abs(op_norm(Z) - op_norm(X)) <= 1e-10 * (1 + op_norm(X))


# -- square root, pseudo-inverse ----------------------------------------------

def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-15)
    assert np.array_equal(psd_sqrt(np.zeros((3, 3))), np.zeros((3, 3)))
    G = cgauss(5, (4, 4))
    P = adjoint(G) @ G
    S = psd_sqrt(P)
    assert op_norm(S @ S - P) <= 1e-10 * (1 + op_norm(P))
    assert is_psd(S).holds


def test_psd_sqrt_clamps_roundoff_but_rejects_negative():
    assert np.allclose(psd_sqrt(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))
    with pytest.raises(DomainError):
        psd_sqrt(np.diag([1.0, -1e-3]))


def test_abs_matrix_polar_identity():
    A = cgauss(6, (3, 3))
    Q = abs_matrix(A)
    assert np.allclose(Q @ Q, adjoint(A) @ A, atol=1e-10)


def test_pseudo_inverse_examples():
    assert np.allclose(pseudo_inverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    U = random_unitary(3, 7)
    assert np.allclose(pseudo_inverse(U), adjoint(U), atol=1e-12)
    A = cgauss(8, (3, 2))
    P = pseudo_inverse(A)
    # Penrose conditions
    assert op_norm(A @ P @ A - A) <= 1e-10
    assert op_norm(P @ A @ P - P) <= 1e-10
    assert op_norm(adjoint(A @ P) - A @ P) <= 1e-10
    assert op_norm(adjoint(P @ A) - P @ A) <= 1e-10


# -- products and block constructions ----------------------------------------

def test_kron_hadamard_direct_sum_examples():
    assert np.array_equal(kron(identity(2), identity(3)), identity(6))
    A = cgauss(9, (3, 3))
    assert np.array_equal(hadamard(A, np.ones((3, 3))), A)
    assert op_norm(direct_sum([[3.0]], [[5.0]])) == 5.0
    with pytest.raises(ShapeError):
        hadamard(np.ones((2, 2)), np.ones((2, 3)))


@settings(max_examples=100, deadline=None)
@given(seeds, dims, dims)
def test_direct_sum_norm_is_max(seed, a, b):
    A, B = cgauss(seed, (a, a)), cgauss(seed ^ 1, (b, b))
    # equal up to a few ulps: the block SVD and the small SVDs round differently
    expected = max(op_norm(A), op_norm(B))
    assert abs(op_norm(direct_sum(A, B)) - expected) <= 4 * np.finfo(float).eps * expected


# -- random generators --------------------------------------------------------

def test_random_unitary_basic():
    u = random_unitary(1, 123)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-15
    U = random_unitary(4, 7)
    assert op_norm(adjoint(U) @ U - identity(4)) <= 1e-12
    assert np.array_equal(U, random_unitary(4, 7))


def test_random_unitary_haar_moment():
    dim, draws = 4, 10_000
    vals = np.array([abs(random_unitary(dim, s)[0, 0]) ** 2 for s in range(draws)])
    # |u_11|^2 ~ Beta(1, dim - 1): mean 1/dim, variance (dim - 1) / (dim^2 (dim + 1))
    sigma = np.sqrt((dim - 1) / (dim ** 2 * (dim + 1)) / draws)
    assert abs(vals.mean() - 1 / dim) <= 3 * sigma


def test_random_unitary_phase_moment():
    # Haar: E[u_11^2] = 0; a QR without phase correction biases this
    vals = np.array([random_unitary(3, s)[0, 0] for s in range(4000)])
    assert abs(np.mean(vals ** 2)) < 0.03
    assert abs(np.mean(vals.real)) < 0.03


def test_random_psd_and_hermitian():
    assert is_hermitian(random_hermitian(3, 1))
    assert is_psd(random_psd(3, 1)).holds
    assert np.linalg.matrix_rank(random_psd(4, 2, rank=1)) == 1


# -- contraction factor ---------------------------------------------------------

def test_contraction_factor_examples():
    K, valid = contraction_factor(identity(2), 0.5 * identity(2), identity(2))
    assert valid and np.allclose(K, 0.5 * identity(2))
    K, valid = contraction_factor(identity(2), 2 * identity(2), identity(2))
    assert not valid and op_norm(K) == pytest.approx(2.0)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_contraction_from_gram_partition(seed, p, q):
    G = cgauss(seed, (p + q + 1, p + q))
    P = adjoint(G) @ G
    C, X, D = P[:p, :p], P[:p, p:], P[p:, p:]
    K, valid = contraction_factor(C, X, D)
    assert valid and op_norm(K) <= 1 + 1e-8


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 3), st.floats(0.2, 2.0))
def test_block_schur_contraction_equivalence(seed, d, scale):
    C = random_psd(d, seed) + 0.1 * identity(d)
    D = random_psd(d, seed + 1) + 0.1 * identity(d)
    X = scale * cgauss(seed + 2, (d, d))
    block = np.block([[C, X], [adjoint(X), D]])
    lam_block = np.linalg.eigvalsh(block)[0]
    schur = C - X @ np.linalg.inv(D) @ adjoint(X)
    lam_schur = np.linalg.eigvalsh((schur + adjoint(schur)) / 2)[0]
    if min(abs(lam_block), abs(lam_schur)) < 1e-6:
        return  # too close to the boundary for a meaningful comparison
    _, valid = contraction_factor(C, X, D)
    assert (lam_block > 0) == (lam_schur > 0) == valid


# -- JSON -------------------------------------------------------------------------

@settings(max_examples=30)
@given(seeds, dims, dims)
def test_matrix_json_round_trip(seed, r, c):
    A = cgauss(seed, (r, c))
    text = json.dumps(matrix_to_json(A))
    assert np.array_equal(matrix_from_json(json.loads(text)), A)


@pytest.mark.parametrize("obj, field", [
    ({"rows": 1, "cols": 1}, "X.data"),
    ({"rows": 2, "cols": 1, "data": [[1, 0]]}, "X.data"),
    ({"rows": "a", "cols": 1, "data": [[1, 0]]}, "X.rows"),
    ({"rows": 1, "cols": 1, "data": [["x", 0]]}, "X.data"),
    ([1, 2], "X"),
])
def test_matrix_json_errors_name_field(obj, field):
    with pytest.raises(InvalidInputError, match=field.replace(".", r"\.")):
        matrix_from_json(obj, "X")


def test_eigh_requires_hermitian():
    with pytest.raises(SymmetryError):
        eigh([[0, 1], [0, 0]])
    values, vectors = eigh(np.diag([2.0, 1.0]))
    assert np.allclose(values, [1.0, 2.0])
