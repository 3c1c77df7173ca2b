"""Unitary-orbit diameter and distance to the scalars.

``d_A = sup_U ||AU - UA|| = 2 inf_z ||A - z I||``.  The infimum is computed
exactly for Hermitian and normal matrices (spread of the spectrum, smallest
enclosing disk of the eigenvalues) and by derivative-free descent on the
convex function ``z -> ||A - z I||`` otherwise.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, GrussLabError, ShapeError
from .linalg import adjoint, as_matrix, identity, is_hermitian, op_norm, random_unitary
from .rng import as_rng

HERMITIAN_TOL = 1e-10
NORMAL_TOL = 1e-10


class DiameterResult(NamedTuple):
    d: float
    lambda_star: complex
    method: str
    iterations: int
    certificate_gap: float


@dataclass(frozen=True)
class BallSpec:
    """Ball of diameter ``[m I, M I]``."""

    m: complex
    M: complex

    @property
    def center(self):
        return (self.m + self.M) / 2

    @property
    def radius(self):
        return abs(self.M - self.m) / 2

    @property
    def width(self):
        """``|M - m|``, the diameter of the ball."""
        return abs(self.M - self.m)


class Membership(NamedTuple):
    inside: bool
    defect: float      # max(0, ||A - c I|| - radius)
    distance: float    # ||A - c I||
    re_form_min: float  # lambda_min Re((M I - A)^* (A - m I))


# -- smallest enclosing disk ------------------------------------------------

def _circumcircle(a, b, c):
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        pairs = [(a, b), (a, c), (b, c)]
        p, q = max(pairs, key=lambda pq: abs(pq[0] - pq[1]))
        return (p + q) / 2, abs(p - q) / 2
    a2, b2, c2 = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    center = complex(ux, uy)
    return center, max(abs(center - a), abs(center - b), abs(center - c))


def smallest_enclosing_disk(points, seed=0):
    """Welzl's algorithm (iterative form) on complex points.

    Returns ``(center, radius)``.
    """
    pts = [complex(p) for p in points]
    if not pts:
        raise ValueError("no points")
    as_rng(seed).shuffle(pts)
    scale = max(abs(p) for p in pts)
    eps = 1e-12 * (1.0 + scale)

    def outside(p, c, r):
        return abs(p - c) > r + eps

    c, r = pts[0], 0.0
    for i in range(1, len(pts)):
        if not outside(pts[i], c, r):
            continue
        c, r = pts[i], 0.0
        for j in range(i):
            if not outside(pts[j], c, r):
                continue
            c, r = (pts[i] + pts[j]) / 2, abs(pts[i] - pts[j]) / 2
            for k in range(j):
                if outside(pts[k], c, r):
                    c, r = _circumcircle(pts[i], pts[j], pts[k])
    return c, r


# -- general case -----------------------------------------------------------

def _dist_batch(A, zs):
    n = A.shape[0]
    stack = A[None, :, :] - zs[:, None, None] * np.eye(n)[None, :, :]
    return np.linalg.svd(stack, compute_uv=False)[:, 0]


def stampfli_value(B, x):
    """``||Bx||^2 - |<Bx, x>|^2`` for unit ``x``; its sup over ``x`` is the
    squared distance of ``B`` to the scalars."""
    Bx = B @ x
    return float(np.vdot(Bx, Bx).real - abs(np.vdot(x, Bx)) ** 2)


def _stampfli_lower_bound(A, z):
    """Lower bound on ``inf ||A - zI||`` from the best unit vector in the top
    singular subspace of ``B = A - zI``.

    Up to three top right singular vectors are mixed; the mixing coefficients
    are optimized with BFGS starting from the best pairwise grid point.
    """
    B = A - z * identity(A.shape[0])
    _, s, Vh = np.linalg.svd(B)
    if s[0] == 0:
        return 0.0
    q = min(int(np.sum(s >= s[0] * (1 - 1e-3))), 3)
    V = np.conj(Vh[:q]).T
    S = s[:q] ** 2
    T = adjoint(V) @ B @ V

    def h(c):
        c = c / np.linalg.norm(c)
        return float(np.sum(S * np.abs(c) ** 2) - abs(np.vdot(c, T @ c)) ** 2)

    best_c = np.eye(q, dtype=complex)[0]
    best = h(best_c)
    if q == 1:
        return math.sqrt(max(best, 0.0))
    tt, pp = np.meshgrid(np.linspace(0, math.pi / 2, 17),
                         np.linspace(0, 2 * math.pi, 32, endpoint=False))
    for i in range(q):
        for j in range(i + 1, q):
            for t, p in zip(tt.ravel(), pp.ravel()):
                c = np.zeros(q, dtype=complex)
                c[i], c[j] = math.cos(t), math.sin(t) * complex(math.cos(p), math.sin(p))
                v = h(c)
                if v > best:
                    best, best_c = v, c

    def neg(x):
        c = x[:q] + 1j * x[q:]
        if not np.any(c):
            return 0.0
        return -h(c)

    res = minimize(neg, np.concatenate([best_c.real, best_c.imag]), method="BFGS",
                   options={"gtol": 1e-14, "maxiter": 500})
    best = max(best, -float(res.fun))
    return math.sqrt(max(best, 0.0))


def _descent(A, tol):
    n = A.shape[0]
    scale = 1.0 + op_norm(A)
    z0 = complex(np.trace(A)) / n
    radius = float(_dist_batch(A, np.array([z0]))[0])
    if radius == 0.0:
        return z0, 0.0, 0, 0.0
    # optimum lies within `radius` of z0 because tr(A)/n is in the numerical range
    best, half, evals = z0, radius, 1
    grid = np.linspace(-1.0, 1.0, 9)
    offsets = (grid[:, None] + 1j * grid[None, :]).ravel()
    for _ in range(3):
        zs = best + half * offsets
        vals = _dist_batch(A, zs)
        evals += zs.size
        best = complex(zs[int(np.argmin(vals))])
        half /= 4.0

    def f(p):
        return float(np.linalg.svd(A - complex(p[0], p[1]) * np.eye(n), compute_uv=False)[0])

    p = np.array([best.real, best.imag])
    fp = f(p)
    size = 2.0 * half
    gap = math.inf
    for _ in range(4):
        for _ in range(12):
            simplex = np.array([p, p + [size, 0.0], p + [0.0, size]])
            res = minimize(f, p, method="Nelder-Mead",
                           options={"initial_simplex": simplex, "xatol": 1e-13 * scale,
                                    "fatol": 1e-15 * scale, "maxiter": 2000})
            evals += res.nfev
            gain = fp - res.fun
            if res.fun < fp:
                p, fp = res.x, float(res.fun)
            size = max(4.0 * float(np.max(np.abs(res.final_simplex[0] - p))), 1e-12 * scale)
            if gain <= 1e-15 * scale:
                break
        gap = max(fp - _stampfli_lower_bound(A, complex(p[0], p[1])), 0.0)
        if gap <= tol * scale:
            break
        size = max(size, gap)
    return complex(p[0], p[1]), fp, evals, gap


def _is_normal(A, tol):
    nrm = op_norm(A)
    return op_norm(A @ adjoint(A) - adjoint(A) @ A) <= tol * max(1.0, nrm) ** 2


def scalar_distance(A, method="auto", tol=1e-7, seed=0):
    """``inf_z ||A - z I||`` together with a minimizing ``z``.

    ``method`` is one of ``auto``, ``hermitian``, ``disk``, ``descent``.
    ``tol`` is the relative target for the descent certificate gap.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"matrix must be square, got {A.shape}")
    n = A.shape[0]
    if method == "auto":
        if is_hermitian(A, HERMITIAN_TOL):
            method = "hermitian"
        elif _is_normal(A, NORMAL_TOL):
            method = "disk"
        else:
            method = "descent"
    if method == "hermitian":
        if not is_hermitian(A, HERMITIAN_TOL):
            raise DomainError("hermitian method needs a Hermitian matrix", mode="hermitian")
        ev = np.linalg.eigvalsh((A + adjoint(A)) / 2)
        lo, hi = float(ev[0]), float(ev[-1])
        return DiameterResult((hi - lo) / 2, complex((hi + lo) / 2), "hermitian_exact", 1, 0.0)
    if method == "disk":
        if not _is_normal(A, NORMAL_TOL):
            raise DomainError("disk method needs a normal matrix", mode="normal")
        c, r = smallest_enclosing_disk(np.linalg.eigvals(A), seed)
        actual = op_norm(A - c * identity(n))
        return DiameterResult(float(r), complex(c), "normal_disk", 1, abs(actual - r))
    if method == "descent":
        z, value, evals, gap = _descent(A, tol)
        return DiameterResult(float(value), z, "convex_descent", evals, gap)
    raise ValueError(f"unknown method {method!r}")


def orbit_diameter(A, method="auto", tol=1e-7, seed=0):
    """``d_A = 2 inf_z ||A - z I||``."""
    res = scalar_distance(A, method, tol, seed)
    return res._replace(d=2 * res.d, certificate_gap=2 * res.certificate_gap)


def swap_witness(A):
    """Unitary exchanging the extreme eigenvectors of a Hermitian ``A``."""
    values, vectors = np.linalg.eigh((A + adjoint(A)) / 2)
    n = A.shape[0]
    if n == 1:
        return identity(1)
    u, w = vectors[:, [0]], vectors[:, [-1]]
    return identity(n) - u @ adjoint(u) - w @ adjoint(w) + u @ adjoint(w) + w @ adjoint(u)


def commutator_lower_bound(A, trials=100, seed=0):
    """Sampled ``max ||AU - UA||`` over Haar unitaries; returns ``(value, U)``."""
    A = as_matrix(A)
    n = A.shape[0]
    rng = as_rng(seed)
    best, witness = 0.0, identity(n)
    candidates = []
    if is_hermitian(A, HERMITIAN_TOL):
        candidates.append(swap_witness(A))
    candidates.extend(random_unitary(n, rng) for _ in range(trials))
    for U in candidates:
        v = op_norm(A @ U - U @ A)
        if v > best:
            best, witness = v, U
    return best, witness


def tight_ball(A, **opts):
    """Smallest ball ``[m I, M I]`` containing ``A``: ``m, M = z* -/+ Delta``."""
    res = scalar_distance(A, **opts)
    z = res.lambda_star
    radius = op_norm(as_matrix(A) - z * identity(A.shape[0]))
    return BallSpec(z - radius, z + radius)


def ball_membership(A, ball, tol=1e-8):
    """Norm-ball test, cross-checked against ``Re((M - A)^*(A - m)) >= 0``."""
    A = as_matrix(A)
    n = A.shape[0]
    I = identity(n)
    c, r = ball.center, ball.radius
    dist = op_norm(A - c * I)
    form = adjoint(ball.M * I - A) @ (A - ball.m * I)
    re_min = float(np.linalg.eigvalsh((form + adjoint(form)) / 2)[0])
    # The Re-form equals r^2 - |A - c|^2, so its bottom eigenvalue is r^2 - dist^2.
    expected = r * r - dist * dist
    if abs(re_min - expected) > 1e-9 * (1.0 + r * r + dist * dist):
        raise GrussLabError(
            f"ball criteria disagree: Re-form min {re_min!r} vs {expected!r}")
    inside = dist <= r + tol * (1.0 + r)
    return Membership(bool(inside), max(dist - r, 0.0), dist, re_min)
