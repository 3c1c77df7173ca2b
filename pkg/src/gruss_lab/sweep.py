"""Seeded randomized sweeps over the inequality checkers.

Every (trial, check) pair gets its own seed derived from the master seed, so
results do not depend on how trials are scheduled across workers.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import gruss
from .cpmaps import LinearMap, ReductionMap, map_to_json, random_unital_cp
from .dilation import build_stinespring, minimize_stinespring, verify_stinespring
from .errors import ConfigError, GrussLabError
from .linalg import adjoint, direct_sum, kron, matrix_to_json, op_norm
from .norms import DEFAULT_GAUGES, parse_gauge
from .orbit import orbit_diameter, tight_ball
from .rng import SplitMix64, derive_seed

CHECKS = ("main1", "the2", "main2", "hadamard", "discrete", "fields", "scalar",
          "stinespring", "block_gram")
SUITES = {
    "core": ("main1", "stinespring", "block_gram"),
    "gruss": ("main1", "the2", "main2", "hadamard", "discrete", "fields", "scalar"),
    "all": CHECKS,
}
DIM_CHOICES = (2, 3, 4)
THREADS_ENV = "GRUSS_LAB_THREADS"


@dataclass
class CheckConfig:
    """Sweep configuration; ``None`` dimensions are drawn per trial."""

    m: object = None
    n: object = None
    kraus_rank: object = None
    trials: int = 100
    seed: int = 0
    gauges: list = field(default_factory=lambda: list(DEFAULT_GAUGES))
    tol: float = gruss.DEFAULT_TOL
    checks: tuple = SUITES["gruss"]
    eta: int = 12
    positivity_trials: int = 4

    def __post_init__(self):
        for name in ("m", "n", "kraus_rank"):
            v = getattr(self, name)
            if v is not None and int(v) < 1:
                raise ConfigError(f"{name} must be >= 1, got {v}")
        if self.trials < 0:
            raise ConfigError("trials must be >= 0")
        self.gauges = [parse_gauge(g).name for g in self.gauges]
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}")
        self.checks = tuple(self.checks)

    def to_dict(self):
        return asdict(self)


def trial_seed(master, trial, check):
    return derive_seed(derive_seed(master, trial), CHECKS.index(check))


def _dims(cfg, rng):
    m = int(cfg.m) if cfg.m is not None else rng.choice(DIM_CHOICES)
    n = int(cfg.n) if cfg.n is not None else rng.choice(DIM_CHOICES)
    if cfg.kraus_rank is not None:
        r = int(cfg.kraus_rank)
    else:
        r = rng.choice([r for r in sorted({1, 2, m * n}) if r * m >= n])
    return m, n, r


def _hermitian(rng, d):
    Z = rng.complex_normal((d, d))
    return (Z + adjoint(Z)) / 2


def generate_instance(check, seed, cfg):
    """Random inputs for one check, reproducible from ``seed``."""
    rng = SplitMix64(seed)
    if check in ("main1", "the2", "main2", "stinespring", "block_gram"):
        m, n, r = _dims(cfg, rng)
        phi = random_unital_cp(m, n, r, rng)
        A = rng.complex_normal((m, m))
        B = rng.complex_normal((m, m))
        return {"phi": phi, "A": A, "B": B}
    if check == "hadamard":
        n = int(cfg.n) if cfg.n is not None and cfg.n <= 3 else rng.choice((2, 3))
        return {k: rng.complex_normal((n, n)) for k in ("A1", "A2", "B1", "B2")}
    if check == "discrete":
        d = int(cfg.n) if cfg.n is not None else rng.choice(DIM_CHOICES)
        J = rng.choice((1, 2, 3, 4))
        Q, _ = np.linalg.qr(rng.complex_normal((J * d, d)))
        C = [Q[j * d:(j + 1) * d] for j in range(J)]
        return {"C": C, "A": [_hermitian(rng, d) for _ in range(J)],
                "B": [_hermitian(rng, d) for _ in range(J)]}
    if check == "fields":
        d = int(cfg.n) if cfg.n is not None else rng.choice(DIM_CHOICES)
        T = rng.choice((1, 2, 3, 4, 5))
        w = rng.uniform(T) + 0.05
        return {"A": [rng.complex_normal((d, d)) for _ in range(T)],
                "B": [rng.complex_normal((d, d)) for _ in range(T)],
                "weights": w / w.sum()}
    if check == "scalar":
        n = rng.integers(2, 21)
        return {"a": rng.standard_normal(n), "b": rng.standard_normal(n)}
    raise ConfigError(f"unknown check {check!r}")


def _spread(mats):
    ev = np.concatenate([np.linalg.eigvalsh(X) for X in mats])
    return float(ev.min()), float(ev.max())


def run_check(check, seed, cfg):
    """All reports for one (check, seed) instance."""
    inst = generate_instance(check, seed, cfg)
    tol = cfg.tol
    if check in ("main1", "the2"):
        phi, A, B = inst["phi"], inst["A"], inst["B"]
        d_a, d_b = orbit_diameter(A).d, orbit_diameter(B).d
        if check == "main1":
            D, verdict = gruss.kadison_defect(phi, A)
            scale = 1.0 + op_norm(D)
            out = [gruss.make_report(
                "kadison", gruss.OPERATOR_ORDER, max(-verdict.min_eig, 0.0) / scale, 0.0, 1e-10,
                inputs_digest=gruss.digest(A, seed=seed), seed=seed, dims=gruss.report_dims(phi),
                details={"min_eig": verdict.min_eig, "scale": scale})]
            out += gruss._variance_reports(phi, A, D, verdict, cfg.gauges, None, d_a, tol, seed)
            evidence = gruss._positivity_evidence(phi, False, None, 0, seed)
        else:
            out = []
            evidence = gruss._positivity_evidence(phi, True, cfg.eta, cfg.positivity_trials, seed)
        return out + gruss._gruss_norm_reports(phi, A, B, cfg.gauges, None, d_a, d_b, tol,
                                               seed, evidence)
    if check == "main2":
        phi, A, B = inst["phi"], inst["A"], inst["B"]
        ball_a, ball_b = tight_ball(A), tight_ball(B)
        return [gruss.check_gruss_operator(phi, A, B, ball_a, ball_b, tol, seed),
                gruss.check_ball_variance(phi, A, ball_a, tol, seed)]
    if check == "hadamard":
        A1, A2, B1, B2 = inst["A1"], inst["A2"], inst["B1"], inst["B2"]
        return [gruss.check_hadamard_gruss(A1, A2, B1, B2, tight_ball(kron(A1, A2)),
                                           tight_ball(kron(B1, B2)), tol, seed)]
    if check == "discrete":
        m1, M1 = _spread(inst["A"])
        m2, M2 = _spread(inst["B"])
        return [gruss.check_discrete_gruss(inst["C"], inst["A"], inst["B"], m1, M1, m2, M2,
                                           tol, seed)]
    if check == "fields":
        ball_1 = tight_ball(direct_sum(*inst["A"]))
        ball_2 = tight_ball(direct_sum(*inst["B"]))
        return [gruss.check_field_gruss(inst["A"], inst["B"], inst["weights"], ball_1, ball_2,
                                        tol, seed)]
    if check == "scalar":
        return list(gruss.check_scalar_gruss(inst["a"], inst["b"], tol=tol, seed=seed))
    if check == "stinespring":
        phi = inst["phi"]
        m, n = phi.input_dim, phi.output_dim
        D = build_stinespring(phi)
        Dmin = minimize_stinespring(D)
        defect = max(verify_stinespring(D, phi, 5, seed), verify_stinespring(Dmin, phi, 5, seed))
        kw = dict(inputs_digest=gruss.digest(*phi.kraus, seed=seed), seed=seed,
                  dims=gruss.report_dims(phi))
        return [
            gruss.make_report("stinespring_defect", "op", defect, 0.0, 1e-10, **kw),
            gruss.make_report("stinespring_dim", "count", Dmin.dim, m * m * n, 0.0,
                              **dict(kw, details={"r": D.r, "r_min": Dmin.r})),
        ]
    if check == "block_gram":
        phi, A, B = inst["phi"], inst["A"], inst["B"]
        G, verdict = gruss.block_gram(phi, A, B)
        scale = 1.0 + op_norm(G)
        return [gruss.make_report(
            "block_gram", gruss.OPERATOR_ORDER, max(-verdict.min_eig, 0.0) / scale, 0.0, 1e-10,
            inputs_digest=gruss.digest(A, B, seed=seed), seed=seed, dims=gruss.report_dims(phi),
            details={"min_eig": verdict.min_eig, "scale": scale})]
    raise ConfigError(f"unknown check {check!r}")


REPORT_SOURCE = {
    "kadison": "main1", "main1_i": "main1", "main1_ii": "main1", "the2": "the2",
    "main2": "main2", "ball_variance": "main2", "hadamard": "hadamard", "discrete": "discrete",
    "fields": "fields", "scalar_classical": "scalar", "scalar_bpr": "scalar",
    "stinespring_defect": "stinespring", "stinespring_dim": "stinespring",
    "block_gram": "block_gram",
}


def to_jsonable(obj):
    """Serialize instance inputs (maps, matrices, vectors) for witness files."""
    if isinstance(obj, LinearMap):
        return map_to_json(obj)
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_json(obj)
        return [float(v) for v in obj.real]
    return obj


def witness_inputs(report, cfg):
    """Regenerate and serialize the inputs behind a sweep report."""
    check = REPORT_SOURCE.get(report["check_id"])
    if check is None or report.get("seed") is None:
        return None
    return to_jsonable(generate_instance(check, report["seed"], cfg))


def _run_trial(cfg, t):
    reports, errors = [], []
    for check in cfg.checks:
        seed = trial_seed(cfg.seed, t, check)
        try:
            reports.extend(r.to_dict() for r in run_check(check, seed, cfg))
        except GrussLabError as exc:
            errors.append({"trial": t, "check": check, "seed": seed,
                           "error": f"{type(exc).__name__}: {exc}"})
    return reports, errors


def worker_count(workers=None):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def _report_key(r):
    return (r["check_id"], r["gauge"], str(r["seed"]), r["lhs"], r["rhs"])


def aggregate(reports, trials, errors=(), keep_reports=False):
    """Summary over report dicts; commutative in the reports it is given."""
    min_slack = {}
    violations, exploratory, witnesses = 0, 0, []
    for r in reports:
        per = min_slack.setdefault(r["check_id"], {})
        g = r["gauge"]
        per[g] = min(per.get(g, float("inf")), r["slack"])
        if not r["satisfied"]:
            if r["details"].get("exploratory"):
                exploratory += 1
            else:
                violations += 1
                witnesses.append(r)
    out = {
        "trials": int(trials),
        "reports": len(reports),
        "violations": violations,
        "exploratory_violations": exploratory,
        "min_slack_by_check": min_slack,
        "witnesses": sorted(witnesses, key=_report_key),
        "errors": sorted(errors, key=lambda e: (e["trial"], e["check"])),
    }
    if keep_reports:
        out["report_list"] = list(reports)
    return out


def sweep(cfg, workers=None, keep_reports=False):
    """Run ``cfg.trials`` seeded trials of every configured check."""
    n_workers = worker_count(workers)
    if n_workers == 1:
        results = [_run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(n_workers) as pool:
            results = list(pool.map(lambda t: _run_trial(cfg, t), range(cfg.trials)))
    reports = [r for rs, _ in results for r in rs]
    errors = [e for _, es in results for e in es]
    return aggregate(reports, cfg.trials, errors, keep_reports)


def exploratory_eta_sweep(etas=range(3, 12), trials=20, seed=0, mix=(0.0, 0.25, 0.5),
                          positivity_trials=50, tol=gruss.DEFAULT_TOL):
    """Probe ``2 < eta < 12`` with unital maps mixing the rescaled reduction map
    on ``M_3`` and random unital CP maps.  Results assert nothing."""

    class _Mix(LinearMap):
        def __init__(self, t, cp):
            self.t, self.cp, self.red = t, cp, ReductionMap(3, normalize=True)
            self.input_dim = self.output_dim = 3

        def __call__(self, X):
            return (1 - self.t) * self.red(X) + self.t * self.cp(X)

    reports = []
    for eta in etas:
        for trial in range(trials):
            s = derive_seed(derive_seed(seed, eta), trial)
            rng = SplitMix64(s)
            phi = _Mix(rng.choice(mix), random_unital_cp(3, 3, 9, rng))
            A, B = rng.complex_normal((3, 3)), rng.complex_normal((3, 3))
            try:
                ev = gruss._positivity_evidence(phi, True, eta, positivity_trials, s)
            except GrussLabError:
                continue
            ev["exploratory"] = True
            reports += [r.to_dict() for r in gruss._gruss_norm_reports(
                phi, A, B, ["op"], None, None, None, tol, s, ev, check_id="eta_exploratory")]
    return aggregate(reports, len(list(etas)) * trials)
