"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  All
tolerances are relative: a quantity is compared against ``tol * (1 + ||A||)``
so that verdicts do not depend on the overall scale of the input.
"""
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidInputError, ShapeError, SymmetryError
from .rng import as_rng

DEFAULT_TOL = 1e-9
RANK_TOL = 1e-10


class PsdVerdict(NamedTuple):
    holds: bool
    min_eig: float


class HermitianEigen(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


class Contraction(NamedTuple):
    K: np.ndarray
    valid: bool


def as_matrix(A, name="A"):
    """Convert to a finite 2-D complex array, rejecting NaN/Inf."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return M


def _square(A, name="A"):
    M = as_matrix(A, name)
    if M.shape[0] != M.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {M.shape}")
    return M


def adjoint(A):
    return np.conj(np.asarray(A)).T


def op_norm(A):
    """Spectral norm (largest singular value)."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def identity(n):
    return np.eye(n, dtype=np.complex128)


def singular_values(A):
    """Singular values in nonincreasing order, length ``min(rows, cols)``.

    Zero rows and columns are stripped before the decomposition, which makes
    ``singular_values(A (+) 0)`` agree with ``singular_values(A)`` exactly on
    the shared prefix.
    """
    M = as_matrix(A)
    length = min(M.shape)
    rows = np.any(M != 0, axis=1)
    cols = np.any(M != 0, axis=0)
    core = M[rows][:, cols]
    out = np.zeros(length)
    if core.size:
        s = np.linalg.svd(core, compute_uv=False)
        out[: s.size] = s
    return out


def is_hermitian(A, tol=DEFAULT_TOL):
    M = np.asarray(A)
    return op_norm(M - adjoint(M)) <= tol * (1.0 + op_norm(M))


def hermitian_part(A):
    M = np.asarray(A)
    return (M + adjoint(M)) / 2


def real_part(A):
    """Operator real part ``(A + A*) / 2``."""
    return hermitian_part(A)


def eigh(A, tol=DEFAULT_TOL):
    M = _square(A)
    if not is_hermitian(M, tol):
        raise SymmetryError("matrix is not Hermitian within tolerance")
    values, vectors = np.linalg.eigh(hermitian_part(M))
    return HermitianEigen(values, vectors)


def is_psd(A, tol=DEFAULT_TOL):
    """PSD test returning ``(holds, min_eig)``.

    ``holds`` is true iff the smallest eigenvalue is at least
    ``-tol * (1 + ||A||)``.
    """
    M = _square(A)
    scale = 1.0 + op_norm(M)
    if op_norm(M - adjoint(M)) > tol * scale:
        raise SymmetryError("matrix is not Hermitian within tolerance")
    lam = float(np.linalg.eigvalsh(hermitian_part(M))[0])
    return PsdVerdict(lam >= -tol * scale, lam)


def psd_sqrt(A, tol=DEFAULT_TOL):
    """Positive square root; eigenvalues in ``[-tol*scale, 0)`` are clamped."""
    M = _square(A)
    scale = 1.0 + op_norm(M)
    values, vectors = eigh(M, tol)
    if values.size and values[0] < -tol * scale:
        raise DomainError("matrix is not positive semidefinite",
                          min_eig=float(values[0]))
    root = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * root) @ adjoint(vectors)


def abs_matrix(A, tol=DEFAULT_TOL):
    """``|A| = (A* A)^{1/2}``."""
    M = as_matrix(A)
    return psd_sqrt(adjoint(M) @ M, tol)


def pseudo_inverse(A, rank_tol=RANK_TOL):
    """Moore-Penrose inverse; singular values below ``rank_tol * s_1`` are dropped."""
    M = as_matrix(A)
    return np.linalg.pinv(M, rcond=rank_tol)


def kron(A, B):
    return np.kron(as_matrix(A, "A"), as_matrix(B, "B"))


def hadamard(A, B):
    X, Y = as_matrix(A, "A"), as_matrix(B, "B")
    if X.shape != Y.shape:
        raise ShapeError(f"Hadamard product needs equal shapes, got {X.shape} and {Y.shape}")
    return X * Y


def direct_sum(*blocks):
    """Block-diagonal matrix ``A (+) B (+) ...``."""
    mats = [as_matrix(b, "block") for b in blocks]
    rows = sum(b.shape[0] for b in mats)
    cols = sum(b.shape[1] for b in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for b in mats:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def pad(A, size):
    """Embed a square matrix as ``A (+) 0`` of the given total size."""
    M = as_matrix(A)
    if size < max(M.shape):
        raise ShapeError("padding size smaller than matrix")
    out = np.zeros((size, size), dtype=np.complex128)
    out[: M.shape[0], : M.shape[1]] = M
    return out


def random_complex(rows, cols, seed):
    """Matrix of standard complex Gaussians."""
    return as_rng(seed).complex_normal((rows, cols))


def random_unitary(dim, seed):
    """Haar unitary: QR of a complex Gaussian with the phases of R removed."""
    if dim < 1:
        raise ShapeError("dimension must be at least 1")
    Z = random_complex(dim, dim, seed)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    phases = d / np.abs(d)
    return Q * phases


def random_hermitian(dim, seed):
    Z = random_complex(dim, dim, seed)
    return (Z + adjoint(Z)) / 2


def random_psd(dim, seed, rank=None):
    G = random_complex(rank or dim, dim, seed)
    return adjoint(G) @ G


def contraction_factor(C, X, D, tol=1e-8):
    """Recover ``K`` with ``X = C^{1/2} K D^{1/2}``.

    ``valid`` holds iff ``K`` is a contraction and reproduces ``X``; this is
    equivalent (within tolerance) to positivity of ``[[C, X], [X*, D]]``.
    """
    C, X, D = _square(C, "C"), as_matrix(X, "X"), _square(D, "D")
    if X.shape != (C.shape[0], D.shape[0]):
        raise ShapeError("block [[C, X], [X*, D]] is not conformable")
    for name, M in (("C", C), ("D", D)):
        ok, lam = is_psd(M, tol)
        if not ok:
            raise DomainError(f"{name} is not positive semidefinite", min_eig=lam)
    root_c = psd_sqrt(C, tol)
    root_d = psd_sqrt(D, tol)
    K = pseudo_inverse(root_c) @ X @ pseudo_inverse(root_d)
    recon = op_norm(root_c @ K @ root_d - X)
    valid = op_norm(K) <= 1.0 + tol and recon <= tol * (1.0 + op_norm(X))
    return Contraction(K, bool(valid))


def matrix_to_json(A):
    """``{"rows", "cols", "data": [[re, im], ...]}`` in row-major order."""
    M = as_matrix(A)
    data = [[float(z.real), float(z.imag)] for z in M.ravel()]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": data}


def matrix_from_json(obj, field="matrix"):
    """Inverse of :func:`matrix_to_json`; errors name ``field``."""
    if not isinstance(obj, dict):
        raise InvalidInputError(f"{field}: expected a matrix object, got {type(obj).__name__}")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise InvalidInputError(f"{field}.{key}: missing")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{field}.rows/cols: not an integer ({exc})") from exc
    data = obj["data"]
    if not isinstance(data, list) or len(data) != rows * cols:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise InvalidInputError(f"{field}.data: has {got} entries, expected {rows * cols}")
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{field}.data: malformed entry ({exc})") from exc
    return as_matrix(flat.reshape(rows, cols), field)
