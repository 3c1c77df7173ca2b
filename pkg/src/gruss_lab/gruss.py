"""Grüss-type inequality checkers.

Each checker evaluates one inequality on one instance and returns an
:class:`InequalityReport`.  Preconditions of the underlying theorem are
verified first; a failed precondition raises, while a failed inequality is
reported (never clipped) so that violations surface as findings.
"""
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .cpmaps import (
    CompressionMap, KrausMap, DirectSumExpectation, ReductionMap, is_completely_positive,
    max_entangled_gram, positivity_order_test,
)
from .errors import DomainError, PreconditionError, ShapeError
from .linalg import (
    adjoint, as_matrix, direct_sum, hadamard, identity, is_hermitian, is_psd, kron,
    op_norm, psd_sqrt,
)
from .norms import OPERATOR, gauge_norm, identity_norm, parse_gauge
from .orbit import BallSpec, ball_membership, orbit_diameter

DEFAULT_TOL = 1e-8
OPERATOR_ORDER = "operator-order"


def digest(*arrays, seed=None):
    """Short SHA-256 fingerprint of the inputs (and seed)."""
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a, dtype=np.complex128))
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    h.update(repr(seed).encode())
    return h.hexdigest()[:16]


@dataclass
class InequalityReport:
    check_id: str
    gauge: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    tol: float
    inputs_digest: str = ""
    seed: Optional[int] = None
    dims: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self):
        details = dict(self.details)
        details.setdefault("inputs_digest", self.inputs_digest)
        return {
            "check_id": self.check_id,
            "gauge": self.gauge,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": float(self.slack),
            "satisfied": bool(self.satisfied),
            "tol": float(self.tol),
            "seed": self.seed,
            "dims": dict(self.dims),
            "details": details,
        }


def make_report(check_id, gauge, lhs, rhs, tol=DEFAULT_TOL, **kw):
    """Build a report; ``satisfied`` iff ``rhs - lhs >= -tol * (1 + rhs)``."""
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    return InequalityReport(check_id, str(gauge), lhs, rhs, slack,
                            bool(slack >= -tol * (1.0 + abs(rhs))), tol, **kw)


def report_dims(phi, k=None, rank=None):
    m, n = phi.input_dim, phi.output_dim
    if rank is None and isinstance(phi, KrausMap):
        rank = phi.rank
    return {"m": m, "n": n, "k": m * m if k is None else int(k), "rank": rank}


def _require_unital(phi, tol):
    defect = phi.unitality_defect()
    if defect > tol:
        raise PreconditionError(f"map is not unital (defect {defect:.3e})",
                                mode="unital", defect=defect)


def _require_cp(phi, tol):
    if not is_completely_positive(phi, tol):
        raise PreconditionError("map is not completely positive", mode="exact_complete")


def _square_input(phi, *mats):
    out = []
    for X in mats:
        X = as_matrix(X)
        if X.shape != (phi.input_dim, phi.input_dim):
            raise ShapeError(f"expected {phi.input_dim}x{phi.input_dim} input, got {X.shape}")
        out.append(X)
    return out


def gruss_defect(phi, A, B):
    """``Phi(AB) - Phi(A) Phi(B)``."""
    return phi(A @ B) - phi(A) @ phi(B)


# -- Kadison / variance ------------------------------------------------------

def kadison_defect(phi, A, tol=1e-10):
    """``Phi(A^*A) - Phi(A^*)Phi(A)`` and its PSD verdict (``holds, min_eig``)."""
    _require_cp(phi, DEFAULT_TOL)
    (A,) = _square_input(phi, A)
    Ad = adjoint(A)
    D = phi(Ad @ A) - phi(Ad) @ phi(A)
    return D, is_psd(D, tol)


def check_variance_bound(phi, A, gauge=OPERATOR, k=None, d_a=None, tol=DEFAULT_TOL,
                         seed=None):
    """``|||Phi(A^*A) - Phi(A^*)Phi(A)|||^{1/2} <= (1/2) sqrt(|||I_{kn}|||) d_A``."""
    _require_unital(phi, DEFAULT_TOL)
    D, verdict = kadison_defect(phi, A)
    return _variance_reports(phi, A, D, verdict, [gauge], k, d_a, tol, seed)[0]


def _variance_reports(phi, A, D, verdict, gauges, k, d_a, tol, seed):
    m, n = phi.input_dim, phi.output_dim
    k = m * m if k is None else k
    if d_a is None:
        d_a = orbit_diameter(A).d
    scale = 1.0 + op_norm(D)
    out = []
    for g in gauges:
        g = parse_gauge(g)
        lhs_sq = gauge_norm(g, D)
        rhs_sq = 0.25 * identity_norm(g, k * n) * d_a * d_a
        rep = make_report(
            "main1_i", g, math.sqrt(lhs_sq), math.sqrt(rhs_sq), tol,
            inputs_digest=digest(A, seed=seed), seed=seed, dims=report_dims(phi, k),
            details={"d_A": d_a, "kadison_min_eig": verdict.min_eig,
                     "kadison_scale": scale, "kadison_psd": bool(verdict.holds),
                     "squared_slack": rhs_sq - lhs_sq})
        # The verdict compares squares: a square root would inflate roundoff in a
        # vanishing defect (1e-16 -> 1e-8) past the tolerance.
        rep.satisfied = bool(rhs_sq - lhs_sq >= -tol * (1.0 + rhs_sq))
        out.append(rep)
    return out


# -- norm inequality for unital CP (and eta-positive) maps -----------------

def check_gruss_norm(phi, A, B, gauge=OPERATOR, eta_mode=False, k=None, d_a=None,
                     d_b=None, tol=DEFAULT_TOL, eta=12, positivity_trials=20, seed=None):
    """``|||Phi(AB) - Phi(A)Phi(B)||| <= (1/4) |||I_n||| |||I_{kn}||| d_A d_B``.

    With ``eta_mode`` the complete-positivity requirement is replaced by
    sampled ``eta``-positivity evidence (``eta >= 12`` is the proven range;
    smaller values are labelled exploratory).
    """
    evidence = _positivity_evidence(phi, eta_mode, eta, positivity_trials, seed)
    return _gruss_norm_reports(phi, A, B, [gauge], k, d_a, d_b, tol, seed, evidence)[0]


def _positivity_evidence(phi, eta_mode, eta, trials, seed):
    _require_unital(phi, DEFAULT_TOL)
    if not eta_mode:
        _require_cp(phi, DEFAULT_TOL)
        return {"mode": "exact_complete"}
    verdict = positivity_order_test(phi, eta, "sampled", trials=trials,
                                    seed=0 if seed is None else seed)
    if not verdict.holds:
        raise PreconditionError(f"sampled {eta}-positivity failed", mode="sampled",
                                min_eig=verdict.witness[1])
    return {"mode": "sampled", "eta": eta, "exploratory": eta < 12}


def _gruss_norm_reports(phi, A, B, gauges, k, d_a, d_b, tol, seed, evidence,
                        check_id=None):
    A, B = _square_input(phi, A, B)
    m, n = phi.input_dim, phi.output_dim
    k = m * m if k is None else k
    if d_a is None:
        d_a = orbit_diameter(A).d
    if d_b is None:
        d_b = orbit_diameter(B).d
    D = gruss_defect(phi, A, B)
    if check_id is None:
        check_id = "the2" if evidence.get("mode") == "sampled" else "main1_ii"
    out = []
    for g in gauges:
        g = parse_gauge(g)
        lhs = gauge_norm(g, D)
        rhs = 0.25 * identity_norm(g, n) * identity_norm(g, k * n) * d_a * d_b
        out.append(make_report(
            check_id, g, lhs, rhs, tol, inputs_digest=digest(A, B, seed=seed), seed=seed,
            dims=report_dims(phi, k), details={"d_A": d_a, "d_B": d_b, **evidence}))
    return out


# -- operator-order inequality on balls --------------------------------------

def _require_ball(A, ball, name, tol):
    mem = ball_membership(A, ball, tol)
    if not mem.inside:
        raise PreconditionError(
            f"{name} is outside the ball of diameter [{ball.m}, {ball.M}] "
            f"(excess {mem.defect:.3e})", defect=mem.defect, mode="ball")
    return mem


def _ball_details(prefix, ball):
    m, M = complex(ball.m), complex(ball.M)
    return {f"{prefix}_m": [m.real, m.imag], f"{prefix}_M": [M.real, M.imag]}


def _operator_order_report(check_id, D, c, tol, **kw):
    """Verdict on ``c I - |D| >= 0`` with the scalar form as a cross-check."""
    absD = psd_sqrt(adjoint(D) @ D)
    residual = c * identity(D.shape[0]) - absD
    lam = float(np.linalg.eigvalsh((residual + adjoint(residual)) / 2)[0])
    rep = make_report(check_id, OPERATOR_ORDER, op_norm(D), c, tol, **kw)
    psd_ok = lam >= -tol * (1.0 + abs(c))
    rep.details.update({"psd_residual_min": lam, "scalar_agrees": bool(psd_ok == rep.satisfied)})
    rep.satisfied = bool(psd_ok and rep.satisfied)
    return rep


def check_gruss_operator(phi, A, B, ball_a, ball_b, tol=DEFAULT_TOL, seed=None):
    """``|Phi(AB) - Phi(A)Phi(B)| <= (1/4)|M1 - m1||M2 - m2| I``."""
    _require_unital(phi, DEFAULT_TOL)
    _require_cp(phi, DEFAULT_TOL)
    A, B = _square_input(phi, A, B)
    _require_ball(A, ball_a, "A", tol)
    _require_ball(B, ball_b, "B", tol)
    c = 0.25 * ball_a.width * ball_b.width
    return _operator_order_report(
        "main2", gruss_defect(phi, A, B), c, tol,
        inputs_digest=digest(A, B, seed=seed), seed=seed, dims=report_dims(phi),
        details={**_ball_details("ball_A", ball_a), **_ball_details("ball_B", ball_b)})


def check_ball_variance(phi, A, ball, tol=DEFAULT_TOL, seed=None):
    """``Phi(|A|^2) - |Phi(A)|^2 <= (1/4)|M - m|^2 I`` as a PSD residual."""
    _require_unital(phi, DEFAULT_TOL)
    _require_cp(phi, DEFAULT_TOL)
    (A,) = _square_input(phi, A)
    _require_ball(A, ball, "A", tol)
    Ad = adjoint(A)
    V = phi(Ad @ A) - adjoint(phi(A)) @ phi(A)
    c = 0.25 * ball.width ** 2
    residual = c * identity(V.shape[0]) - V
    lam = float(np.linalg.eigvalsh((residual + adjoint(residual)) / 2)[0])
    lhs = float(np.linalg.eigvalsh((V + adjoint(V)) / 2)[-1])
    rep = make_report("ball_variance", OPERATOR_ORDER, lhs, c, tol, inputs_digest=digest(A, seed=seed),
                      seed=seed, dims=report_dims(phi), details={"psd_residual_min": lam,
                                                           **_ball_details("ball", ball)})
    return rep


# -- Hadamard product ---------------------------------------------------------

def selective_isometry(n):
    """``V: e_i -> e_i (x) e_i``, so that ``V^*(X (x) Y)V = X o Y``."""
    V = np.zeros((n * n, n), dtype=np.complex128)
    for i in range(n):
        V[i * n + i, i] = 1.0
    return V


def check_hadamard_gruss(A1, A2, B1, B2, ball_1, ball_2, tol=DEFAULT_TOL, seed=None):
    """``|(A1B1)o(A2B2) - (A1oA2)(B1oB2)| <= (1/4)|M1 - m1||M2 - m2| I``."""
    A1, A2, B1, B2 = (as_matrix(X) for X in (A1, A2, B1, B2))
    n = A1.shape[0]
    for X in (A1, A2, B1, B2):
        if X.shape != (n, n):
            raise ShapeError("Hadamard check needs four n x n matrices")
    A, B = kron(A1, A2), kron(B1, B2)
    _require_ball(A, ball_1, "A1 (x) A2", tol)
    _require_ball(B, ball_2, "B1 (x) B2", tol)
    V = selective_isometry(n)
    Vd = adjoint(V)
    for X, Y in ((A1, A2), (B1, B2), (A1 @ B1, A2 @ B2)):
        if not np.array_equal(Vd @ kron(X, Y) @ V, hadamard(X, Y)):
            raise AssertionError("selective isometry identity failed")
    D = hadamard(A1 @ B1, A2 @ B2) - hadamard(A1, A2) @ hadamard(B1, B2)
    via_dilation = gruss_defect(CompressionMap(V), A, B)
    c = 0.25 * ball_1.width * ball_2.width
    rep = _operator_order_report(
        "hadamard", D, c, tol, inputs_digest=digest(A1, A2, B1, B2, seed=seed), seed=seed,
        dims={"m": n * n, "n": n, "k": n ** 4, "rank": 1},
        details={**_ball_details("ball_1", ball_1), **_ball_details("ball_2", ball_2),
                 "dilation_route_diff": op_norm(D - via_dilation)})
    return rep


# -- discrete and field versions ---------------------------------------------

def _spectral_bounds(X):
    ev = np.linalg.eigvalsh((X + adjoint(X)) / 2)
    return float(ev[0]), float(ev[-1])


def check_discrete_gruss(C, A, B, m1, M1, m2, M2, tol=DEFAULT_TOL, seed=None):
    """``|sum C_j^* A_j B_j C_j - (sum C_j^* A_j C_j)(sum C_j^* B_j C_j)|
    <= (1/4)(M1 - m1)(M2 - m2) I``."""
    Cs = [as_matrix(c) for c in C]
    As = [as_matrix(a) for a in A]
    Bs = [as_matrix(b) for b in B]
    if not (len(Cs) == len(As) == len(Bs)) or not Cs:
        raise ShapeError("C, A, B must be non-empty lists of equal length")
    d = Cs[0].shape[1]
    defect = op_norm(sum(adjoint(c) @ c for c in Cs) - identity(d))
    if defect > DEFAULT_TOL:
        raise PreconditionError(f"sum C_j^* C_j deviates from I by {defect:.3e}",
                                defect=defect, mode="normalization")
    for label, mats, lo, hi in (("A", As, m1, M1), ("B", Bs, m2, M2)):
        for j, X in enumerate(mats):
            if not is_hermitian(X):
                raise PreconditionError(f"{label}_{j} is not Hermitian", mode="hermitian")
            a, b = _spectral_bounds(X)
            slack = tol * (1.0 + max(abs(lo), abs(hi)))
            if a < lo - slack or b > hi + slack:
                raise PreconditionError(
                    f"{label}_{j} has spectrum [{a}, {b}] outside [{lo}, {hi}]",
                    mode="bounds")
    phi = DirectSumExpectation(Cs)
    Abig, Bbig = direct_sum(*As), direct_sum(*Bs)
    D = gruss_defect(phi, Abig, Bbig)
    c = 0.25 * (M1 - m1) * (M2 - m2)
    return _operator_order_report(
        "discrete", D, c, tol, inputs_digest=digest(*Cs, *As, *Bs, seed=seed), seed=seed,
        dims={"m": Abig.shape[0], "n": d, "k": len(Cs) * As[0].shape[0] ** 2,
              "rank": len(Cs)},
        details={"bounds": [m1, M1, m2, M2]})


def check_field_gruss(fields_a, fields_b, weights, ball_1, ball_2, tol=DEFAULT_TOL,
                      seed=None):
    """``|sum mu_t A_t B_t - (sum mu_t A_t)(sum mu_t B_t)|
    <= (1/4)|M1 - m1||M2 - m2| I`` for finitely supported ``mu``."""
    As = [as_matrix(a) for a in fields_a]
    Bs = [as_matrix(b) for b in fields_b]
    w = np.asarray(weights, dtype=float)
    if not (len(As) == len(Bs) == w.size) or not As:
        raise ShapeError("fields and weights must be non-empty and of equal length")
    if (w < 0).any() or abs(w.sum() - 1.0) > DEFAULT_TOL:
        raise PreconditionError(f"weights sum to {w.sum()!r}, not 1", mode="normalization",
                                defect=abs(w.sum() - 1.0))
    for label, mats, ball in (("A", As, ball_1), ("B", Bs, ball_2)):
        for t, X in enumerate(mats):
            _require_ball(X, ball, f"{label}_{t}", tol)
    EA = sum(mu * a for mu, a in zip(w, As))
    EB = sum(mu * b for mu, b in zip(w, Bs))
    EAB = sum(mu * a @ b for mu, a, b in zip(w, As, Bs))
    c = 0.25 * ball_1.width * ball_2.width
    return _operator_order_report(
        "fields", EAB - EA @ EB, c, tol, inputs_digest=digest(*As, *Bs, w, seed=seed),
        seed=seed, dims={"m": As[0].shape[0], "n": As[0].shape[0], "k": None,
                         "rank": len(As)},
        details={**_ball_details("ball_1", ball_1), **_ball_details("ball_2", ball_2)})


# -- scalar versions ----------------------------------------------------------

def bpr_constant(n):
    """``(1/n) floor(n/2) (1 - (1/n) floor(n/2))`` as an exact fraction."""
    h = Fraction(n // 2, n)
    return h * (1 - h)


def check_scalar_gruss(a, b, m1=None, M1=None, m2=None, M2=None, tol=DEFAULT_TOL,
                       seed=None):
    """Classical (constant 1/4) and refined discrete Grüss bounds.

    Returns ``(classical, refined)`` reports; bounds default to the data range.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ShapeError("a and b must be non-empty 1-D sequences of equal length")
    m1 = a.min() if m1 is None else m1
    M1 = a.max() if M1 is None else M1
    m2 = b.min() if m2 is None else m2
    M2 = b.max() if M2 is None else M2
    if a.min() < m1 or a.max() > M1 or b.min() < m2 or b.max() > M2:
        raise PreconditionError("data outside the stated bounds", mode="bounds")
    n = a.size
    lhs = abs(np.mean(a * b) - np.mean(a) * np.mean(b))
    spread = (M1 - m1) * (M2 - m2)
    kw = dict(inputs_digest=digest(a, b, seed=seed), seed=seed,
              dims={"m": n, "n": 1, "k": n, "rank": None},
              details={"bounds": [float(m1), float(M1), float(m2), float(M2)]})
    classical = make_report("scalar_classical", "abs", lhs, 0.25 * spread, tol, **kw)
    kw["details"] = dict(kw["details"], constant=str(bpr_constant(n)))
    refined = make_report("scalar_bpr", "abs", lhs, float(bpr_constant(n)) * spread, tol, **kw)
    return classical, refined


# -- block Gram matrix and the counterexample --------------------------------

def block_gram(phi, A, B, convention="star_inside", tol=1e-10):
    """The ``2n x 2n`` block matrix of Kadison-type defects and its PSD verdict.

    ``convention="star_inside"`` uses ``Phi(X^*)Phi(Y)``; ``"star_outside"`` uses
    ``Phi(X)^*Phi(Y)`` (identical for adjoint-preserving maps).
    """
    A, B = _square_input(phi, A, B)
    if convention == "star_inside":
        left = lambda X: phi(adjoint(X))
    elif convention == "star_outside":
        left = lambda X: adjoint(phi(X))
    else:
        raise ValueError(f"unknown convention {convention!r}")
    pairs = [[(A, A), (A, B)], [(B, A), (B, B)]]
    G = np.block([[phi(adjoint(X) @ Y) - left(X) @ phi(Y) for X, Y in row] for row in pairs])
    return G, is_psd(G, tol)


@dataclass
class CounterexampleBundle:
    block_gram_min_eig: float
    d_a: float
    d_b: float
    reports: list

    @property
    def violated(self):
        return any(not r.satisfied for r in self.reports
                   if r.details.get("variant") == "raw")

    def to_dict(self):
        return {"block_gram_min_eig": self.block_gram_min_eig, "d_A": self.d_a,
                "d_B": self.d_b, "reports": [r.to_dict() for r in self.reports]}


COUNTEREXAMPLE_A = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=np.complex128)
COUNTEREXAMPLE_B = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 1]], dtype=np.complex128)


def choi_counterexample(tol=DEFAULT_TOL):
    """Reduction map ``X -> 2 tr(X) I_3 - X`` with the two Hermitian test matrices.

    The raw map breaks the operator-norm bound; the unital rescaling is
    evaluated the same way and recorded without any expectation.
    """
    A, B = COUNTEREXAMPLE_A, COUNTEREXAMPLE_B
    d_a = orbit_diameter(A).d
    d_b = orbit_diameter(B).d
    reports = []
    raw_min = None
    for normalize in (False, True):
        phi = ReductionMap(3, normalize)
        variant = "normalized" if normalize else "raw"
        G, verdict = block_gram(phi, A, B, convention="star_outside")
        if not normalize:
            raw_min = verdict.min_eig
        lam = verdict.min_eig
        facts = {
            "variant": variant,
            "unital": bool(phi.is_unital()),
            "completely_positive": bool(is_completely_positive(phi)),
            "three_positive": bool(positivity_order_test(
                phi, 3, witnesses=[max_entangled_gram(3, 3)], trials=0).holds),
        }
        reports.append(make_report(
            "block_gram", OPERATOR_ORDER, max(-lam, 0.0), max(lam, 0.0), tol,
            inputs_digest=digest(A, B), dims={"m": 3, "n": 3, "k": 9, "rank": None},
            details={"min_eig": lam, **facts}))
        reports.extend(_gruss_norm_reports(
            phi, A, B, [OPERATOR], None, d_a, d_b, tol, None,
            {"mode": "unchecked", **facts}, check_id="counterexample_norm"))
    return CounterexampleBundle(raw_min, d_a, d_b, reports)
