"""Faber rational functions and Zolotarev number bounds on pairs of
disjoint complex sets, with applications to singular value decay of
structured matrices and ADI shift selection."""

__version__ = "0.1.0"

from .adi import (
    ShiftSet,
    SylvesterProblem,
    adi_iterate,
    error_certificate,
    faber_shifts,
    fejer_shifts,
    leja_shifts,
    spectral_norm,
    sylvester_problem,
)
from .bounds import (
    BoundValue,
    GeometryConstants,
    asymptotic_constant,
    zolotarev_lower,
    zolotarev_upper,
)
from .conformal import (
    AnnulusMap,
    ExteriorOf,
    MobiusMap,
    mobius_two_disks,
    phi,
    psi_boundary,
    solve_annulus_map,
)
from .displacement import (
    ComplexMatrix,
    cauchy_matrix,
    singular_value_bounds,
    singular_values,
    vandermonde_h,
    vandermonde_matrix,
)
from .errors import (
    BoundaryPointError,
    EvaluationDomainError,
    FaberzolError,
    InvalidRegionError,
    MapNotResolvedError,
    NotDisjointError,
    QuadratureError,
    UncertifiedError,
)
from .faber import (
    FaberContext,
    build_context,
    count_zeros,
    empirical_ratio,
    eval_Rn,
    eval_inv_rn,
    eval_rn,
    rn_on_e_boundary,
    rn_on_f_boundary,
)
from .geometry import (
    Disk,
    Polygon,
    Rectangle,
    Region,
    SmoothCurve,
    boundary_samples,
    contains,
    contains_many,
    curve,
    disk,
    is_convex,
    polygon,
    random_points,
    rectangle,
    rotation,
)
from .quadrature import (
    BoundaryQuadrature,
    cauchy_boundary,
    cauchy_minus,
    cauchy_plus,
    cauchy_stabilized,
    winding_number,
)
from .rational import BarycentricRational, aaa_fit, bary_eval, poles_zeros

__all__ = [name for name in dir() if not name.startswith("_")]
