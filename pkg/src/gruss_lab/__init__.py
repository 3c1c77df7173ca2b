"""Numerical verification of Grüss-type inequalities for positive maps on
matrix algebras, with the supporting linear algebra: completely positive maps,
Stinespring dilations, unitarily invariant norms and unitary-orbit diameters.
"""
__version__ = "0.1.0"

from .errors import (
    ConfigError, DomainError, GrussLabError, InvalidInputError, NoKrausFormError,
    PreconditionError, ShapeError, SymmetryError,
)
from .rng import SplitMix64, derive_seed
from .norms import (
    OPERATOR, KyFanGauge, OperatorGauge, SchattenGauge, CustomGauge, gauge_norm,
    identity_norm, ky_fan_dominates, parse_gauge, parse_gauges, weak_majorization,
)
from .cpmaps import (
    ChoiMatrix, KrausMap, LinearMap, ReductionMap, amplify, choi_matrix, choi_to_kraus,
    is_completely_positive, kraus_to_choi, map_from_json, map_to_json,
    positivity_order_test, random_unital_cp, reduction_map,
)
from .dilation import (
    StinespringDilation, build_stinespring, minimize_stinespring, verify_stinespring,
)
from .orbit import (
    BallSpec, ball_membership, commutator_lower_bound, orbit_diameter, scalar_distance,
    smallest_enclosing_disk, tight_ball,
)
from .gruss import (
    InequalityReport, block_gram, bpr_constant, check_ball_variance, check_discrete_gruss,
    check_field_gruss, check_gruss_norm, check_gruss_operator, check_hadamard_gruss,
    check_scalar_gruss, check_variance_bound, choi_counterexample, gruss_defect,
    kadison_defect,
)
from .sweep import CheckConfig, sweep
