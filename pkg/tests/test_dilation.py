import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gruss_lab.cpmaps import KrausMap, ReductionMap, kraus_to_choi, random_unital_cp
from gruss_lab.dilation import (
    StinespringDilation, build_stinespring, minimize_stinespring, verify_stinespring,
)
from gruss_lab.errors import DomainError, ShapeError
from gruss_lab.linalg import adjoint, identity, is_psd, op_norm, random_unitary
from helpers import cgauss, seeds

dims = st.integers(1, 4)


def trace_map(m, n):
    """``X -> tr(X)/m I_n`` with the ``mn`` Kraus operators ``e_a e_i^T / sqrt(m)``."""
    ops = []
    for a in range(n):
        for i in range(m):
            K = np.zeros((n, m), dtype=complex)
            K[a, i] = 1 / np.sqrt(m)
            ops.append(K)
    return KrausMap(ops)


def test_identity_map_dilation():
    D = build_stinespring(KrausMap([identity(3)]))
    assert D.r == 1 and D.dim == 3 and np.array_equal(D.V, identity(3))
    Dmin = minimize_stinespring(D)
    assert Dmin.dim == 3 and Dmin.minimal
    assert verify_stinespring(D, KrausMap([identity(3)])) == 0.0


def test_trace_map_reconstruction():
    m, n = 3, 2
    phi = trace_map(m, n)
    assert phi.is_unital()
    X = cgauss(1, (m, m))
    assert np.allclose(phi(X), np.trace(X) / m * identity(n))
    D = build_stinespring(phi)
    assert verify_stinespring(D, phi) <= 1e-10


def test_zero_kraus_operator_is_pruned():
    phi = random_unital_cp(2, 2, 3, seed=4)
    padded = KrausMap(list(phi.kraus) + [np.zeros((2, 2))])
    D = build_stinespring(padded)
    assert D.r == 4
    assert minimize_stinespring(D).r < 4


@settings(max_examples=50, deadline=None)
@given(seeds, dims, dims)
def test_duplicate_kraus_collapses_to_choi_rank(seed, m, n):
    phi = random_unital_cp(m, n, m * n, seed)
    K0 = phi.kraus[0] / np.sqrt(2)
    dup = KrausMap([K0, K0] + list(phi.kraus[1:]))
    r_dup = minimize_stinespring(build_stinespring(dup)).r
    r_orig = minimize_stinespring(build_stinespring(phi)).r
    assert r_dup == r_orig == np.linalg.matrix_rank(kraus_to_choi(phi).C, tol=1e-8)


def test_perturbed_dilation_error_band():
    phi = random_unital_cp(3, 2, 6, seed=2)
    D = build_stinespring(phi)
    E = cgauss(3, D.V.shape)
    bad = StinespringDilation(D.m, D.n, D.r, D.V + 1e-3 * E / op_norm(E))
    assert 1e-4 <= verify_stinespring(bad, phi) <= 1e-1


def test_requires_unital_cp():
    with pytest.raises(DomainError) as info:
        build_stinespring(ReductionMap(3))
    assert info.value.mode == "cp" and info.value.min_eig < 0
    with pytest.raises(DomainError) as info:
        build_stinespring(KrausMap([2 * identity(2)]))
    assert info.value.mode == "unital"


@settings(max_examples=100, deadline=None)
@given(seeds, dims, dims, st.sampled_from([1, 2, None]))
def test_dilation_invariants(seed, m, n, r):
    r = m * n if r is None else r
    if r * m < n:
        return
    phi = random_unital_cp(m, n, r, seed)
    for D in (build_stinespring(phi), minimize_stinespring(build_stinespring(phi))):
        V = D.V
        assert op_norm(adjoint(V) @ V - identity(n)) <= 1e-10
        P = V @ adjoint(V)
        assert np.linalg.eigvalsh(P)[-1] <= 1 + 1e-10
        Q = identity(D.dim) - P
        assert op_norm(Q @ Q - Q) <= 1e-9
        assert verify_stinespring(D, phi, trials=3, seed=seed) <= 1e-10
        assert D.dim <= m * m * n or not D.minimal


def test_unitary_conjugation_minimal_dilation_is_unitary():
    U = random_unitary(3, 5)
    phi = KrausMap([adjoint(U)])
    D = minimize_stinespring(build_stinespring(phi))
    assert D.r == 1
    assert op_norm(D.V @ adjoint(D.V) - identity(3)) <= 1e-12


@settings(max_examples=500, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_block_positivity_through_dilation(seed, m, n):
    phi = random_unital_cp(m, n, m * n, seed)
    D = build_stinespring(phi)
    A, B = cgauss(seed + 1, (m, m)), cgauss(seed + 2, (m, m))
    comp = D.compress
    pairs = [[(A, A), (A, B)], [(B, A), (B, B)]]
    G = np.block([[comp(adjoint(X) @ Y) - comp(adjoint(X)) @ comp(Y) for X, Y in row]
                  for row in pairs])
    assert is_psd(G, 1e-10).holds


def test_kraus_read_back_and_json():
    phi = random_unital_cp(2, 3, 4, seed=8)
    D = build_stinespring(phi)
    assert all(np.array_equal(a, b) for a, b in zip(D.kraus(), phi.kraus))
    back = StinespringDilation.from_json(json.loads(json.dumps(D.to_json())))
    assert np.array_equal(back.V, D.V) and (back.m, back.n, back.r) == (2, 3, 4)
    obj = D.to_json()
    obj["r"] = 5
    with pytest.raises(ShapeError):
        StinespringDilation.from_json(obj)


def test_pi_is_homomorphism_exactly_on_units():
    D = build_stinespring(random_unital_cp(2, 2, 3, seed=1))
    X, Y = cgauss(1, (2, 2)), cgauss(2, (2, 2))
    assert np.allclose(D.pi(X @ Y), D.pi(X) @ D.pi(Y), atol=1e-14)
    assert np.array_equal(D.pi(identity(2)), identity(D.dim))
