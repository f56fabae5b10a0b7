"""Symbolic toolkit for homogeneous local Poisson brackets.

Exact-arithmetic representation of degree-k homogeneous brackets on n
coordinates, with skewness and Jacobi verification, the k standard
connections and their flat linear combinations, curvature and flatness
checks, low-degree classification conditions, and the first differential
of the associated filtered complex.
"""

from .bracket import (
    CoordinateMap,
    HomogeneousBracket,
    NamedCoefficients,
    bivector,
    check_skew,
    check_skewh,
    constant_bracket,
    extract_named,
    lower_metric,
    metric_pair,
    skew_defects,
    skewh_defects,
    transform,
    validate,
)
from .connections import (
    CMatrix,
    Connection,
    CurvatureTensor,
    c_matrix,
    curvature,
    flat_combination,
    flip_torsion,
    genericity,
    is_flat,
    nabla_tensor,
    standard_connection,
    torsion,
)
from .diffpoly import (
    DiffPoly,
    JetVar,
    ThetaVar,
    d_x,
    mul,
    partial,
    project,
    variational,
)
from .errors import DegenerateMetricError, ParseError, PreconditionError
from .grammar import parse_expression
from .jacobi import apply_DP, check_jacobi, jacobi_defects
from .lowdegree import (
    ConditionResult,
    all_pass,
    canonical_k2,
    dn_check,
    ferguson_check,
    k4_connection_fixtures,
    potemin_build,
    potemin_check,
    quadratic_tail,
)
from .scalar import Scalar, parse_scalar, partial_u, scalar_arith
from .spectral import (
    D_minus1_closed,
    apply_D_graded,
    d1_as_connection,
    d1_closed,
    d1_spectral,
    d1_split,
    homotopy,
    in_B,
    include_B,
    project_B,
    require_poisson,
    spanning_monomials,
)

__all__ = [
    "CMatrix",
    "ConditionResult",
    "Connection",
    "CoordinateMap",
    "CurvatureTensor",
    "D_minus1_closed",
    "DegenerateMetricError",
    "DiffPoly",
    "HomogeneousBracket",
    "JetVar",
    "NamedCoefficients",
    "ParseError",
    "PreconditionError",
    "Scalar",
    "ThetaVar",
    "all_pass",
    "apply_DP",
    "apply_D_graded",
    "bivector",
    "c_matrix",
    "canonical_k2",
    "check_jacobi",
    "check_skew",
    "check_skewh",
    "constant_bracket",
    "curvature",
    "d1_as_connection",
    "d1_closed",
    "d1_spectral",
    "d1_split",
    "d_x",
    "dn_check",
    "extract_named",
    "ferguson_check",
    "flat_combination",
    "flip_torsion",
    "genericity",
    "homotopy",
    "in_B",
    "include_B",
    "is_flat",
    "jacobi_defects",
    "k4_connection_fixtures",
    "lower_metric",
    "metric_pair",
    "mul",
    "nabla_tensor",
    "parse_expression",
    "parse_scalar",
    "partial",
    "partial_u",
    "potemin_build",
    "potemin_check",
    "project",
    "project_B",
    "quadratic_tail",
    "require_poisson",
    "scalar_arith",
    "skew_defects",
    "skewh_defects",
    "spanning_monomials",
    "standard_connection",
    "torsion",
    "transform",
    "validate",
    "variational",
]

__version__ = "0.1.0"
