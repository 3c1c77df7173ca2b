"""Linear maps between matrix algebras.

Convention: a map sends ``m x m`` inputs to ``n x n`` outputs.  Kraus maps act
as ``X -> sum_i K_i X K_i^*`` with ``K_i`` of shape ``n x m``; unital means
``sum_i K_i K_i^* = I_n``.  The Choi matrix is ``sum_ij E_ij (x) Phi(E_ij)``,
an ``mn x mn`` matrix with the input index as the outer block index.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError, InvalidInputError, NoKrausFormError, ShapeError
from .linalg import (
    DEFAULT_TOL, RANK_TOL, adjoint, as_matrix, identity, is_psd, op_norm,
    matrix_from_json, matrix_to_json,
)
from .rng import as_rng


def _frozen(A):
    A = np.array(A, dtype=np.complex128)
    A.setflags(write=False)
    return A


class LinearMap:
    """Common interface: ``input_dim``, ``output_dim`` and ``__call__``."""

    input_dim: int
    output_dim: int

    def _check_input(self, X):
        X = as_matrix(X, "X")
        if X.shape != (self.input_dim, self.input_dim):
            raise ShapeError(
                f"map expects {self.input_dim}x{self.input_dim} input, got {X.shape}")
        return X

    def __call__(self, X):
        raise NotImplementedError

    def unitality_defect(self):
        return op_norm(self(identity(self.input_dim)) - identity(self.output_dim))

    def is_unital(self, tol=DEFAULT_TOL):
        return self.unitality_defect() <= tol


class KrausMap(LinearMap):
    def __init__(self, kraus):
        ops = [as_matrix(K, "Kraus operator") for K in kraus]
        if not ops:
            raise ShapeError("a Kraus map needs at least one operator")
        shape = ops[0].shape
        for K in ops:
            if K.shape != shape:
                raise ShapeError("Kraus operators must share a shape")
        self.kraus = tuple(_frozen(K) for K in ops)
        self.output_dim, self.input_dim = shape

    @property
    def rank(self):
        return len(self.kraus)

    def __call__(self, X):
        X = self._check_input(X)
        out = np.zeros((self.output_dim, self.output_dim), dtype=np.complex128)
        for K in self.kraus:
            out += K @ X @ adjoint(K)
        return out

    def unitality_defect(self):
        S = sum(K @ adjoint(K) for K in self.kraus)
        return op_norm(S - identity(self.output_dim))

    def __repr__(self):
        return f"KrausMap(m={self.input_dim}, n={self.output_dim}, rank={self.rank})"


class ReductionMap(LinearMap):
    """``X -> 2 tr(X) I_d - X``, optionally scaled by ``1/(2d - 1)``.

    Positive (2-positive for ``d = 3``) but not completely positive, so it is
    stored in direct form and has no Kraus representation.
    """

    def __init__(self, d, normalize=False):
        if d < 2:
            raise ShapeError("reduction map needs d >= 2")
        self.d = self.input_dim = self.output_dim = int(d)
        self.normalize = bool(normalize)

    @property
    def kraus(self):
        raise NoKrausFormError("the reduction map is not completely positive")

    def __call__(self, X):
        X = self._check_input(X)
        out = 2 * np.trace(X) * identity(self.d) - X
        if self.normalize:
            out = out / (2 * self.d - 1)
        return out

    def __repr__(self):
        return f"ReductionMap(d={self.d}, normalize={self.normalize})"


def reduction_map(d, normalize=False):
    return ReductionMap(d, normalize)


class CompressionMap(KrausMap):
    """``X -> V^* X V`` for an isometry ``V``."""

    def __init__(self, V):
        V = as_matrix(V, "V")
        super().__init__([adjoint(V)])


class AmplifiedMap(LinearMap):
    """``Phi_s``: apply ``Phi`` to each ``m x m`` block of an ``sm x sm`` matrix."""

    def __init__(self, phi, s):
        if s < 1:
            raise ShapeError("amplification order must be >= 1")
        self.base = phi
        self.s = int(s)
        self.input_dim = self.s * phi.input_dim
        self.output_dim = self.s * phi.output_dim

    def __call__(self, X):
        X = self._check_input(X)
        m, n, s = self.base.input_dim, self.base.output_dim, self.s
        out = np.zeros((s * n, s * n), dtype=np.complex128)
        for i in range(s):
            for j in range(s):
                out[i * n:(i + 1) * n, j * n:(j + 1) * n] = self.base(
                    X[i * m:(i + 1) * m, j * m:(j + 1) * m])
        return out


def amplify(phi, s):
    if s == 1:
        return phi
    return AmplifiedMap(phi, s)


def apply(phi, X):
    return phi(X)


@dataclass(frozen=True)
class ChoiMatrix:
    m: int
    n: int
    C: np.ndarray


def matrix_unit(d, i, j):
    E = np.zeros((d, d), dtype=np.complex128)
    E[i, j] = 1.0
    return E


def choi_matrix(phi):
    """Choi matrix of any linear map, built from its action on matrix units."""
    m, n = phi.input_dim, phi.output_dim
    C = np.zeros((m * n, m * n), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            C[i * n:(i + 1) * n, j * n:(j + 1) * n] = phi(matrix_unit(m, i, j))
    return ChoiMatrix(m, n, _frozen(C))


def kraus_to_choi(phi):
    if not isinstance(phi, KrausMap):
        raise TypeError("kraus_to_choi expects a KrausMap")
    m, n = phi.input_dim, phi.output_dim
    C = np.zeros((m * n, m * n), dtype=np.complex128)
    for K in phi.kraus:
        v = K.T.reshape(-1)  # v[i*n + a] = K[a, i]
        C += np.outer(v, np.conj(v))
    return ChoiMatrix(m, n, _frozen(C))


def choi_to_kraus(choi, rank_tol=RANK_TOL, tol=DEFAULT_TOL):
    """Kraus operators from the eigendecomposition of a PSD Choi matrix."""
    m, n, C = choi.m, choi.n, as_matrix(choi.C)
    if C.shape != (m * n, m * n):
        raise ShapeError("Choi matrix shape does not match (m, n)")
    ok, lam = is_psd(C, tol)
    if not ok:
        raise NoKrausFormError("Choi matrix is not PSD; map is not completely positive",
                               min_eig=lam)
    values, vectors = np.linalg.eigh((C + adjoint(C)) / 2)
    top = max(values[-1], 0.0)
    kraus = []
    for lam_k, v in zip(values[::-1], vectors.T[::-1]):
        if lam_k <= rank_tol * top:
            break
        kraus.append(np.sqrt(lam_k) * v.reshape(m, n).T)
    if not kraus:
        kraus = [np.zeros((n, m), dtype=np.complex128)]
    return KrausMap(kraus)


class PositivityVerdict(NamedTuple):
    order_tested: int
    mode: str
    holds: bool
    witness: Optional[tuple]  # (input block, min eigenvalue of the image)


def max_entangled_gram(k, m):
    """``sum_ij E_ij (x) E_ij`` restricted to a ``k``-block input over ``M_m``.

    Its image under ``Phi_k`` is a compression of the Choi matrix, so for
    ``k >= m`` it is the standard witness against ``k``-positivity.
    """
    d = min(k, m)
    v = np.zeros(k * m, dtype=np.complex128)
    for i in range(d):
        v[i * m + i] = 1.0
    return np.outer(v, v)


def positivity_order_test(phi, k, mode="sampled", trials=200, seed=0,
                          tol=DEFAULT_TOL, witnesses=()):
    """Test ``k``-positivity of ``phi``.

    ``mode="exact_complete"`` ignores ``k`` and decides complete positivity
    from the Choi matrix.  ``mode="sampled"`` first replays any ``witnesses``
    and then draws ``trials`` Gram inputs ``G^* G``; one failure is decisive,
    success is only evidence.
    """
    if k < 1:
        raise ValueError("positivity order must be >= 1")
    if mode == "exact_complete":
        C = choi_matrix(phi).C
        ok, lam = is_psd(C, tol)
        witness = None if ok else (max_entangled_gram(phi.input_dim, phi.input_dim), lam)
        return PositivityVerdict(phi.input_dim, mode, ok, witness)
    if mode != "sampled":
        raise ValueError(f"unknown positivity mode {mode!r}")
    rng = as_rng(seed)
    big = amplify(phi, k)
    dim = k * phi.input_dim
    candidates = [np.asarray(w, dtype=np.complex128) for w in witnesses]
    for t in range(len(candidates) + trials):
        if t < len(candidates):
            X = candidates[t]
        else:
            G = rng.complex_normal((dim, dim))
            X = adjoint(G) @ G
        ok, lam = is_psd(big(X), tol)
        if not ok:
            return PositivityVerdict(k, mode, False, (X, lam))
    return PositivityVerdict(k, mode, True, None)


def is_completely_positive(phi, tol=DEFAULT_TOL):
    if isinstance(phi, KrausMap):
        return True
    return positivity_order_test(phi, 1, "exact_complete", tol=tol).holds


def random_unital_cp(m, n, rank=None, seed=0, max_retries=8):
    """Random unital CP map ``K_i = S^{-1/2} G_i`` with ``S = sum G_i G_i^*``."""
    r = m * n if rank is None else int(rank)
    if r < 1 or r * m < n:
        raise ValueError(f"infeasible rank {r} for m={m}, n={n}: need r*m >= n")
    rng = as_rng(seed)
    for _ in range(max_retries + 1):
        G = [rng.complex_normal((n, m)) for _ in range(r)]
        S = sum(g @ adjoint(g) for g in G)
        s = np.linalg.eigvalsh(S)
        if s[0] > 1e-12 * s[-1]:
            values, vectors = np.linalg.eigh(S)
            inv_root = (vectors / np.sqrt(values)) @ adjoint(vectors)
            return KrausMap([inv_root @ g for g in G])
        rng = as_rng(rng.next_u64())
    raise DomainError("could not draw a nonsingular frame operator")


def conditional_expectation(C, X, tol=DEFAULT_TOL):
    """``sum_j C_j^* X_j C_j`` for a family with ``sum_j C_j^* C_j = I``."""
    Cs = [as_matrix(c, "C_j") for c in C]
    Xs = [as_matrix(x, "X_j") for x in X]
    if len(Cs) != len(Xs):
        raise ShapeError("C and X lists must have equal length")
    if not Cs:
        raise ShapeError("empty family")
    d = Cs[0].shape[1]
    defect = op_norm(sum(adjoint(c) @ c for c in Cs) - identity(d))
    if defect > tol:
        raise DomainError(f"sum C_j^* C_j deviates from I by {defect:.3e}", defect=defect)
    return sum(adjoint(c) @ x @ c for c, x in zip(Cs, Xs))


def quadrature_field_expectation(fields, weights, tol=DEFAULT_TOL):
    """``sum_t mu_t A_t`` for a probability vector ``mu``."""
    A = [as_matrix(a, "A_t") for a in fields]
    w = np.asarray(weights, dtype=float)
    if len(A) != w.size or not A:
        raise ShapeError("fields and weights must be non-empty and of equal length")
    if (w < 0).any() or abs(w.sum() - 1.0) > tol:
        raise DomainError(f"weights must be a probability vector (sum={w.sum()!r})",
                          defect=abs(w.sum() - 1.0))
    if len({a.shape for a in A}) != 1:
        raise ShapeError("all fields must share a shape")
    return sum(mu * a for mu, a in zip(w, A))


class DirectSumExpectation(LinearMap):
    """``(+)_j X_j -> sum_j C_j^* X_j C_j`` on block-diagonal inputs.

    Off-diagonal blocks are discarded, which is the standard way to extend the
    expectation to a CP map on the full matrix algebra.
    """

    def __init__(self, C):
        self.C = [as_matrix(c, "C_j") for c in C]
        self.block = self.C[0].shape[0]
        self.output_dim = self.C[0].shape[1]
        self.input_dim = self.block * len(self.C)

    def __call__(self, X):
        X = self._check_input(X)
        b = self.block
        blocks = [X[j * b:(j + 1) * b, j * b:(j + 1) * b] for j in range(len(self.C))]
        return sum(adjoint(c) @ x @ c for c, x in zip(self.C, blocks))


def map_to_json(phi):
    if isinstance(phi, ReductionMap):
        return {"kind": "reduction", "d": phi.d, "normalize": phi.normalize}
    if isinstance(phi, KrausMap):
        return {"kind": "kraus", "m": phi.input_dim, "n": phi.output_dim,
                "kraus": [matrix_to_json(K) for K in phi.kraus]}
    if isinstance(phi, ChoiMatrix):
        return {"kind": "choi", "m": phi.m, "n": phi.n, "C": matrix_to_json(phi.C)}
    raise TypeError(f"cannot serialize {type(phi).__name__}")


def _int_field(obj, key):
    if key not in obj:
        raise InvalidInputError(f"{key}: missing")
    try:
        return int(obj[key])
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{key}: not an integer ({obj[key]!r})") from exc


def map_from_json(obj):
    """Inverse of :func:`map_to_json`; Choi input is converted to Kraus form.

    Error messages start with the offending field.
    """
    if not isinstance(obj, dict):
        raise InvalidInputError(f"map: expected an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind == "reduction":
        return ReductionMap(_int_field(obj, "d"), bool(obj.get("normalize", False)))
    if kind == "kraus":
        m, n = _int_field(obj, "m"), _int_field(obj, "n")
        ops = obj.get("kraus")
        if not isinstance(ops, list) or not ops:
            raise InvalidInputError("kraus: expected a non-empty list of matrices")
        mats = [matrix_from_json(K, f"kraus[{i}]") for i, K in enumerate(ops)]
        for i, K in enumerate(mats):
            if K.shape != (n, m):
                raise InvalidInputError(f"kraus[{i}]: shape {K.shape}, expected {(n, m)}")
        return KrausMap(mats)
    if kind == "choi":
        m, n = _int_field(obj, "m"), _int_field(obj, "n")
        if "C" not in obj:
            raise InvalidInputError("C: missing")
        return choi_to_kraus(ChoiMatrix(m, n, matrix_from_json(obj["C"], "C")))
    raise InvalidInputError(f"kind: unknown map kind {kind!r}")


__all__ = [
    "LinearMap", "KrausMap", "ReductionMap", "CompressionMap", "AmplifiedMap",
    "DirectSumExpectation", "ChoiMatrix", "PositivityVerdict", "amplify", "apply",
    "choi_matrix", "kraus_to_choi", "choi_to_kraus", "positivity_order_test",
    "is_completely_positive", "reduction_map", "random_unital_cp",
    "conditional_expectation", "quadrature_field_expectation", "max_entangled_gram",
    "matrix_unit", "map_to_json", "map_from_json",
]
