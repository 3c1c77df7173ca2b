"""Stinespring dilations ``Phi(X) = V^* (X (x) I_r) V`` of unital CP maps.

The dilation space is ``C^m (x) C^r`` with the system leg first, so the row
index of ``V`` is ``a * r + i`` for system index ``a`` and multiplicity index
``i``.  The representation is never stored; it is rebuilt from ``r``.
"""
from dataclasses import dataclass

import numpy as np

from .cpmaps import KrausMap, choi_matrix
from .errors import DomainError, ShapeError
from .linalg import (
    DEFAULT_TOL, RANK_TOL, adjoint, as_matrix, identity, is_psd, matrix_from_json,
    matrix_to_json, op_norm,
)
from .rng import as_rng


@dataclass(frozen=True)
class StinespringDilation:
    m: int
    n: int
    r: int
    V: np.ndarray
    minimal: bool = False

    @property
    def dim(self):
        """Dimension of the dilation space."""
        return self.m * self.r

    def pi(self, X):
        return np.kron(as_matrix(X), identity(self.r))

    def compress(self, X):
        return adjoint(self.V) @ self.pi(X) @ self.V

    def kraus(self):
        """Kraus operators read back from the blocks of ``V``."""
        blocks = self.V.reshape(self.m, self.r, self.n)
        return [adjoint(blocks[:, i, :]) for i in range(self.r)]

    def to_json(self):
        return {"m": self.m, "n": self.n, "r": self.r,
                "V": matrix_to_json(self.V), "minimal": self.minimal}

    @classmethod
    def from_json(cls, obj):
        V = matrix_from_json(obj["V"], "V")
        m, n, r = int(obj["m"]), int(obj["n"]), int(obj["r"])
        if V.shape != (m * r, n):
            raise ShapeError(f"V has shape {V.shape}, expected {(m * r, n)}")
        return cls(m, n, r, V, bool(obj.get("minimal", False)))


def _dilation_matrix(kraus, m, n):
    r = len(kraus)
    V = np.zeros((m, r, n), dtype=np.complex128)
    for i, K in enumerate(kraus):
        V[:, i, :] = adjoint(K)
    return V.reshape(m * r, n)


def build_stinespring(phi, tol=DEFAULT_TOL):
    """Dilation with ``V = sum_i K_i^* (x) e_i``; requires a unital CP map."""
    if not isinstance(phi, KrausMap):
        ok, lam = is_psd(choi_matrix(phi).C, tol)
        raise DomainError("map has no Kraus form; a dilation needs a CP map",
                          min_eig=lam, mode="cp")
    defect = phi.unitality_defect()
    if defect > tol:
        raise DomainError(f"map is not unital (defect {defect:.3e})",
                          defect=defect, mode="unital")
    m, n = phi.input_dim, phi.output_dim
    V = _dilation_matrix(phi.kraus, m, n)
    return StinespringDilation(m, n, len(phi.kraus), V, minimal=False)


def minimize_stinespring(D, rank_tol=RANK_TOL):
    """Restrict to the closed span of ``pi(A) V C^n``.

    That span is ``C^m (x) W`` where ``W`` is spanned by the multiplicity
    components of the columns of ``V``; an orthonormal basis ``Q`` of ``W``
    gives the minimal isometry ``(I_m (x) Q^*) V``.
    """
    blocks = D.V.reshape(D.m, D.r, D.n)
    M = blocks.transpose(1, 0, 2).reshape(D.r, D.m * D.n)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    q = int(np.sum(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    q = max(q, 1)
    Q = U[:, :q]
    V = np.einsum("iq,ain->aqn", np.conj(Q), blocks).reshape(D.m * q, D.n)
    return StinespringDilation(D.m, D.n, q, V, minimal=True)


def verify_stinespring(D, phi, trials=20, seed=0):
    """Largest defect over reconstruction, isometry and homomorphism checks."""
    if (phi.input_dim, phi.output_dim) != (D.m, D.n):
        raise ShapeError("dilation and map dimensions differ")
    rng = as_rng(seed)
    worst = op_norm(adjoint(D.V) @ D.V - identity(D.n))
    worst = max(worst, op_norm(D.pi(identity(D.m)) - identity(D.dim)))
    for _ in range(trials):
        X = rng.complex_normal((D.m, D.m))
        Y = rng.complex_normal((D.m, D.m))
        scale = 1.0 + op_norm(X)
        worst = max(worst, op_norm(D.compress(X) - phi(X)) / scale)
        worst = max(worst, op_norm(D.pi(X @ Y) - D.pi(X) @ D.pi(Y)) / (scale * (1.0 + op_norm(Y))))
        worst = max(worst, op_norm(D.pi(adjoint(X)) - adjoint(D.pi(X))) / scale)
    return float(worst)
