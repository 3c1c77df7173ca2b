"""Command-line front end: ``gruss-lab <subcommand> [flags]``.

Exit codes: 0 when every evaluated inequality holds, 2 when at least one is
violated (a witness file is written), 1 for usage, configuration, input or IO
errors.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, gruss
from .cpmaps import map_from_json, map_to_json, reduction_map
from .dilation import build_stinespring, minimize_stinespring, verify_stinespring
from .errors import ConfigError, GrussLabError
from .linalg import matrix_from_json, matrix_to_json
from .norms import DEFAULT_GAUGES
from .orbit import scalar_distance
from .sweep import SUITES, CheckConfig, aggregate, sweep, witness_inputs

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
REPORT_COLUMNS = ("check_id", "gauge", "lhs", "rhs", "slack", "satisfied", "tol", "seed",
                  "dims", "details")
CHECK_CHOICES = ("main1", "the2", "main2", "hadamard", "discrete", "scalar", "fields")
DILATION_TOL = 1e-10


class UsageError(Exception):
    def __init__(self, message, usage):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


@dataclass
class RunManifest:
    """Provenance header written into every output file.

    Timestamps are opt-in so that repeated runs stay byte-identical.
    """

    command: list
    config: dict
    seed: object = None
    version: str = __version__
    outputs: dict = field(default_factory=dict)
    started_at: object = None
    finished_at: object = None

    def to_dict(self):
        out = {"tool": "gruss-lab", "version": self.version, "command": list(self.command),
               "config": self.config, "seed": self.seed, "outputs": self.outputs}
        if self.started_at is not None:
            out["started_at"] = self.started_at
            out["finished_at"] = self.finished_at
        return out


def _now():
    return datetime.now(timezone.utc).isoformat()


# -- serialization -----------------------------------------------------------

def dumps(payload):
    """Bit-stable JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _compact(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def reports_to_csv(reports, header=()):
    """CSV with the report JSON keys as columns; nested objects as compact JSON.

    ``header`` lines are written first as ``# `` comments.
    """
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in reports:
        row = []
        for col in REPORT_COLUMNS:
            v = r.get(col)
            if isinstance(v, (dict, list)):
                v = _compact(v)
            elif v is None:
                v = ""
            row.append(v)
        writer.writerow(row)
    return buf.getvalue()


def emit(payload, fmt="json", path=None, stream=None):
    """Write ``payload`` as JSON or CSV to ``path`` (or ``stream``).

    CSV output needs ``payload["reports"]``; the manifest and aggregate go
    into comment lines above the table.
    """
    if fmt == "json":
        text = dumps(payload)
    elif fmt == "csv":
        if "reports" not in payload:
            raise ConfigError("csv output is only available for report-producing commands")
        header = [f"{key}: {_compact(payload[key])}" for key in sorted(payload)
                  if key != "reports"]
        text = reports_to_csv(payload["reports"], header)
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if path is None:
        (stream or sys.stdout).write(text)
    else:
        Path(path).write_text(text)
    return text


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") \
            from exc


def _in_file(path, parse):
    obj = _read_json(path)
    try:
        return parse(obj)
    except GrussLabError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _witness_path(args):
    if args.witnesses:
        return args.witnesses
    if args.out:
        p = Path(args.out)
        return str(p.with_name(p.stem + ".witnesses.json"))
    return "gruss-lab-witnesses.json"


# -- subcommands ---------------------------------------------------------------

def _gauge_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _config(args, checks):
    return CheckConfig(m=args.m, n=args.n, kraus_rank=args.rank, trials=args.trials,
                       seed=args.seed, gauges=_gauge_list(args.gauges), tol=args.tol,
                       checks=checks, eta=args.eta)


def _finish(args, manifest, payload, witnesses):
    """Attach the witness file, write everything, and pick the exit code."""
    agg = payload["aggregate"]
    if agg["violations"]:
        wpath = _witness_path(args)
        manifest.outputs["witnesses"] = wpath
        agg["witness_file"] = wpath
    if args.timestamps:
        manifest.finished_at = _now()
    payload["manifest"] = manifest.to_dict()
    if agg["violations"]:
        Path(wpath).write_text(dumps({"manifest": payload["manifest"],
                                      "witnesses": witnesses}))
    emit(payload, args.format, args.out)
    if agg["errors"]:
        for e in agg["errors"]:
            print(f"error: trial {e['trial']} {e['check']}: {e['error']}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_VIOLATION if agg["violations"] else EXIT_OK


def _run_sweep(args, argv, checks):
    cfg = _config(args, checks)
    manifest = RunManifest(argv, cfg.to_dict(), cfg.seed, outputs={"report": args.out})
    if args.timestamps:
        manifest.started_at = _now()
    keep = args.format == "csv" or args.all_reports
    agg = sweep(cfg, keep_reports=keep)
    payload = {"aggregate": agg}
    if keep:
        payload["reports"] = agg.pop("report_list")
    witnesses = [{"report": r, "inputs": witness_inputs(r, cfg)} for r in agg["witnesses"]]
    return _finish(args, manifest, payload, witnesses)


def cmd_check(args, argv):
    return _run_sweep(args, argv, (args.name,))


def cmd_sweep(args, argv):
    return _run_sweep(args, argv, SUITES[args.suite])


def cmd_counterexample(args, argv):
    manifest = RunManifest(argv, {"tol": args.tol}, None, outputs={"report": args.out})
    if args.timestamps:
        manifest.started_at = _now()
    bundle = gruss.choi_counterexample(args.tol)
    reports = [r.to_dict() for r in bundle.reports]
    agg = aggregate(reports, 1)
    summary = {k: v for k, v in bundle.to_dict().items() if k != "reports"}
    payload = {"aggregate": agg, "counterexample": summary, "reports": reports}
    inputs = {"A": matrix_to_json(gruss.COUNTEREXAMPLE_A), "B": matrix_to_json(gruss.COUNTEREXAMPLE_B)}
    witnesses = []
    for r in agg["witnesses"]:
        phi = reduction_map(3, normalize=r["details"]["variant"] == "normalized")
        witnesses.append({"report": r, "inputs": dict(inputs, phi=map_to_json(phi))})
    return _finish(args, manifest, payload, witnesses)


def _parse_matrix_file(obj):
    if isinstance(obj, dict) and "A" in obj and "data" not in obj:
        return matrix_from_json(obj["A"], "A")
    return matrix_from_json(obj, "matrix")


def cmd_diameter(args, argv):
    A = _in_file(args.input, _parse_matrix_file)
    res = scalar_distance(A, method=args.method, tol=args.tol, seed=args.seed)
    z = res.lambda_star
    result = {"d": 2 * res.d, "distance": res.d, "lambda_star": [z.real, z.imag],
              "method": res.method, "iterations": res.iterations,
              "certificate_gap": 2 * res.certificate_gap}
    manifest = RunManifest(argv, {"method": args.method, "tol": args.tol, "in": args.input},
                           args.seed, outputs={"report": args.out})
    emit({"manifest": manifest.to_dict(), "result": result}, "json", args.out)
    return EXIT_OK


def cmd_dilation(args, argv):
    phi = _in_file(args.map, map_from_json)
    D = build_stinespring(phi)
    if args.minimize:
        D = minimize_stinespring(D)
    result = {"dilation": D.to_json(), "dim": D.dim, "r": D.r}
    code = EXIT_OK
    if args.verify:
        defect = verify_stinespring(D, phi, seed=args.seed)
        result["verify"] = {"defect": defect, "tol": DILATION_TOL,
                            "satisfied": defect <= DILATION_TOL}
        code = EXIT_OK if defect <= DILATION_TOL else EXIT_VIOLATION
    manifest = RunManifest(argv, {"map": args.map, "minimize": args.minimize,
                                  "verify": args.verify}, args.seed,
                           outputs={"report": args.out})
    emit({"manifest": manifest.to_dict(), "result": result}, "json", args.out)
    return code


# -- parser ------------------------------------------------------------------

def _add_output(p, fmt=True):
    p.add_argument("--out", help="output path (default: stdout)")
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--witnesses", help="witness file path used when violations occur")
        p.add_argument("--timestamps", action="store_true",
                       help="record start/end times in the manifest (breaks byte identity)")


def _add_sweep_flags(p, trials):
    p.add_argument("--m", type=int, help="input dimension (default: drawn from 2..4)")
    p.add_argument("--n", type=int, help="output dimension (default: drawn from 2..4)")
    p.add_argument("--rank", type=int, help="Kraus rank (default: drawn from {1, 2, mn})")
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gauges", default=",".join(DEFAULT_GAUGES),
                   help="comma-separated: op, kyfan:K, schatten:P")
    p.add_argument("--tol", type=float, default=gruss.DEFAULT_TOL)
    p.add_argument("--eta", type=int, default=12, help="positivity order for the2")
    p.add_argument("--all-reports", action="store_true",
                   help="include every report in JSON output")
    _add_output(p)


def build_parser():
    parser = _Parser(prog="gruss-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gruss-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="randomized trials of one inequality")
    p.add_argument("name", choices=CHECK_CHOICES)
    _add_sweep_flags(p, trials=10)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="randomized trials of a suite of checks")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    _add_sweep_flags(p, trials=100)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterexample", help="reduction-map counterexample")
    p.add_argument("--tol", type=float, default=gruss.DEFAULT_TOL)
    _add_output(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("diameter", help="unitary-orbit diameter of a matrix")
    p.add_argument("--in", dest="input", required=True, help="matrix JSON file")
    p.add_argument("--method", choices=("auto", "hermitian", "disk", "descent"),
                   default="auto")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p, fmt=False)
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("dilation", help="Stinespring dilation of a map")
    p.add_argument("--map", required=True, help="map JSON file")
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p, fmt=False)
    p.set_defaults(func=cmd_dilation)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(exc.usage)
        print(f"gruss-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args, argv)
    except (GrussLabError, ValueError) as exc:
        print(f"gruss-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"gruss-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
