"""Projections onto hyperplanes, halfspaces, and their intersections.

Closed-form projectors with multiplier breakdowns, an active-set
enumeration oracle with KKT certificates, and iterative schemes
(composition and Dykstra) with machine-checkable convergence rates.
"""

from .errors import (
    DependentNormals,
    DimensionMismatch,
    EmptySet,
    PolyprojError,
    SingularGram,
    TooManyConstraints,
    ZeroNormal,
)
from .linalg import (
    DEPENDENCE_TOL,
    IndependentSubset,
    PairClass,
    PairTag,
    classify_pair,
    gram_matrix,
    inner,
    max_independent_subset,
    norm,
    solve_gram,
)
from .sets import (
    MEMBERSHIP_TOL,
    Feasibility,
    Halfspace,
    Hyperplane,
    Instance,
    Membership,
    ReducedHyperplaneSystem,
    contains,
    in_set,
    instance_from_dict,
    instance_to_dict,
    is_empty,
    is_whole_space,
    load_instance,
    reduce_hyperplane_system,
)
from .atomic import project_halfspace, project_hyperplane, project_onto
from .closed_form import (
    ProjectionBreakdown,
    Region,
    classify_region_halfspace_pair,
    project_halfspace_pair,
    project_hyperplane_halfspace,
    project_hyperplanes,
)
from .oracle import KktCertificate, OracleResult, kkt_check, oracle_project
from .iterate import (
    BamReport,
    BamSampleResult,
    BehaviorCase,
    BehaviorTag,
    DykstraState,
    IterationTrace,
    StopReason,
    compose_iterate,
    dykstra,
    predict_behavior,
    rate_gamma,
    verify_bam,
)

__all__ = [
    "BamReport",
    "BamSampleResult",
    "BehaviorCase",
    "BehaviorTag",
    "DEPENDENCE_TOL",
    "DependentNormals",
    "DimensionMismatch",
    "DykstraState",
    "EmptySet",
    "Feasibility",
    "Halfspace",
    "Hyperplane",
    "IndependentSubset",
    "Instance",
    "IterationTrace",
    "KktCertificate",
    "MEMBERSHIP_TOL",
    "Membership",
    "OracleResult",
    "PairClass",
    "PairTag",
    "PolyprojError",
    "ProjectionBreakdown",
    "ReducedHyperplaneSystem",
    "Region",
    "SingularGram",
    "StopReason",
    "TooManyConstraints",
    "ZeroNormal",
    "classify_pair",
    "classify_region_halfspace_pair",
    "compose_iterate",
    "contains",
    "dykstra",
    "gram_matrix",
    "in_set",
    "inner",
    "instance_from_dict",
    "instance_to_dict",
    "is_empty",
    "is_whole_space",
    "kkt_check",
    "load_instance",
    "max_independent_subset",
    "norm",
    "oracle_project",
    "predict_behavior",
    "project_halfspace",
    "project_halfspace_pair",
    "project_hyperplane",
    "project_hyperplane_halfspace",
    "project_hyperplanes",
    "project_onto",
    "rate_gamma",
    "reduce_hyperplane_system",
    "solve_gram",
    "verify_bam",
]

__version__ = "0.1.0"
