"""Stinespring dilation of a unital CP map and its minimal form.

Phi(X) = V* (X (x) I_r) V with V an isometry.  The Kraus rank r can be
padded; minimization compresses the multiplicity space to the rank of the
Choi matrix.
"""
import numpy as np

from gruss_lab import (
    KrausMap, build_stinespring, minimize_stinespring, random_unital_cp, verify_stinespring,
)

phi = random_unital_cp(2, 3, 2, seed=4)
padded = KrausMap(list(phi.kraus) + [np.zeros_like(phi.kraus[0])] * 3)
D = build_stinespring(padded)
Dmin = minimize_stinespring(D)
print(f"padded Kraus rank {D.r}: dilation dimension {D.dim}")
print(f"minimal multiplicity {Dmin.r}: dilation dimension {Dmin.dim}")
print(f"defect (full)    = {verify_stinespring(D, phi):.2e}")
print(f"defect (minimal) = {verify_stinespring(Dmin, phi):.2e}")
