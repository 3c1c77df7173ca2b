"""Norm bounds for random unital completely positive maps.

For each gauge the Grüss defect Phi(AB) - Phi(A)Phi(B) stays under
(1/4) |||I_n||| |||I_kn||| d_A d_B, and the Kadison defect
Phi(A*A) - Phi(A*)Phi(A) is positive semidefinite with norm under the
variance bound.
"""
from gruss_lab import CheckConfig, sweep

cfg = CheckConfig(trials=50, seed=1, checks=("main1",),
                  gauges=["op", "kyfan:2", "schatten:1", "schatten:2", "schatten:3"])
agg = sweep(cfg, keep_reports=True)
print(f"{agg['trials']} trials, {agg['reports']} reports, {agg['violations']} violations")
by_check = {}
for r in agg["report_list"]:
    by_check.setdefault((r["check_id"], r["gauge"]), []).append(r)
print(f"{'check':10s} {'gauge':15s} {'worst lhs/rhs':>14s}")
for (check, gauge), reps in sorted(by_check.items()):
    ratio = max(r["lhs"] / r["rhs"] if r["rhs"] else 0.0 for r in reps)
    print(f"{check:10s} {gauge:15s} {ratio:14.4f}")
