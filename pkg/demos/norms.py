"""Unitarily invariant norms used as gauges.

Ky Fan k-norms, Schatten p-norms and the operator norm; the identity norm
|||I_k||| enters every bound.  Ky Fan dominance implies domination in
every unitarily invariant norm.
"""
import numpy as np

from gruss_lab import gauge_norm, identity_norm, ky_fan_dominates, parse_gauge

for name in ("op", "kyfan:2", "schatten:1", "schatten:2", "schatten:3"):
    g = parse_gauge(name)
    print(f"{name:11s} |||I_4||| = {identity_norm(g, 4):.6f}")

A = np.diag([2.0, 1.0, 0.0])
B = np.diag([2.0, 1.5, 0.5])
v = ky_fan_dominates(A, B)
print(f"\nKy Fan margins of A under B: {v.margins}, dominated: {v.holds}")
for name in ("op", "schatten:1", "schatten:2"):
    print(f"{name:11s} {gauge_norm(name, A):.4f} vs {gauge_norm(name, B):.4f}")
