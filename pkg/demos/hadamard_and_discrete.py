"""Consequences: Hadamard products, discrete sums and the scalar case.

The Hadamard product is a compression of the tensor product by the
isometry e_i -> e_i (x) e_i, so the operator inequality transfers.  For
scalars the refined constant floor(n/2)(n - floor(n/2))/n^2 improves 1/4
for odd n.
"""
from gruss_lab import CheckConfig, bpr_constant, check_scalar_gruss, sweep

for check in ("hadamard", "discrete", "fields"):
    agg = sweep(CheckConfig(trials=100, seed=6, checks=(check,)))
    print(f"{check:9s}: {agg['reports']} reports, {agg['violations']} violations")

print("\nrefined constants:", {n: str(bpr_constant(n)) for n in range(1, 8)})
a = [1.0, -1.0, 1.0, -1.0]
classical, refined = check_scalar_gruss(a, a, -1, 1, -1, 1)
print(f"alternating signs, n=4: lhs {classical.lhs} = bound {classical.rhs}")
a = [1.0, -1.0, 1.0]
classical, refined = check_scalar_gruss(a, a, -1, 1, -1, 1)
print(f"alternating signs, n=3: lhs {classical.lhs:.4f}, classical {classical.rhs}, "
      f"refined {refined.rhs:.4f}")
