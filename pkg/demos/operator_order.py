"""Operator-order Grüss inequality on the tightest balls.

A and B are placed in their smallest balls [m I, M I]; then
|Phi(AB) - Phi(A)Phi(B)| <= (1/4)|M1 - m1||M2 - m2| I in the PSD order.
"""
from gruss_lab import CheckConfig, random_unital_cp, sweep, tight_ball
from gruss_lab.gruss import check_gruss_operator
from gruss_lab.rng import SplitMix64

rng = SplitMix64(3)
phi = random_unital_cp(3, 2, 2, rng)
A, B = rng.complex_normal((3, 3)), rng.complex_normal((3, 3))
ball_a, ball_b = tight_ball(A), tight_ball(B)
rep = check_gruss_operator(phi, A, B, ball_a, ball_b)
print(f"ball widths |M1 - m1| = {ball_a.width:.4f}, |M2 - m2| = {ball_b.width:.4f}")
print(f"lambda_max |D| = {rep.lhs:.4f} <= {rep.rhs:.4f}: {rep.satisfied}")
print(f"PSD residual lambda_min = {rep.details['psd_residual_min']:.4f}")

agg = sweep(CheckConfig(trials=100, seed=3, checks=("main2",)))
print(f"\n100 random trials: {agg['violations']} violations")
