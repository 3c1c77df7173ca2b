"""The reduction map on M_3 breaks the Grüss norm bound for positive maps.

Phi(X) = 2 tr(X) I - X is positive but not completely positive.  With two
fixed Hermitian matrices the Grüss defect exceeds (1/4) d_A d_B, and the
2x2 block Gram matrix built from Phi fails to be positive semidefinite.
"""
import math

from gruss_lab import choi_counterexample, is_completely_positive, reduction_map
from gruss_lab.gruss import COUNTEREXAMPLE_A, COUNTEREXAMPLE_B

phi = reduction_map(3)
print("Phi(X) = 2 tr(X) I - X on M_3")
print("  completely positive:", is_completely_positive(phi))
print("A =\n", COUNTEREXAMPLE_A.real)
print("B =\n", COUNTEREXAMPLE_B.real)

bundle = choi_counterexample()
print(f"\nd_A = {bundle.d_a:.6f}, d_B = {bundle.d_b:.6f} (sqrt 5 = {math.sqrt(5):.6f})")
for r in bundle.reports:
    v = r.details["variant"]
    if r.check_id == "block_gram":
        print(f"[{v}] block Gram lambda_min = {r.details['min_eig']:+.4f}")
    else:
        print(f"[{v}] ||Phi(AB) - Phi(A)Phi(B)|| = {r.lhs:.6f}  vs  bound {r.rhs:.6f}"
              f"  -> {'holds' if r.satisfied else 'VIOLATED'}")
print(f"\nexpected raw lhs 2 + 2 sqrt 3 = {2 + 2 * math.sqrt(3):.6f}")
