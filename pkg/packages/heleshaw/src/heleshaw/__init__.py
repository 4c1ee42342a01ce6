"""Self-similar Hele-Shaw corner profiles."""

from .errors import (
    BoundViolation,
    ConsistencyFailure,
    ContractionFailure,
    EpsilonRejected,
    NoConvergence,
    QuadratureFailure,
    SingularSystem,
)
from .gprofile import (
    DifferenceQuotients,
    EpsilonParams,
    GProfile,
    build_G,
    build_iHG,
    build_profile,
    build_weight,
    decay_envelope,
    linearized_residual,
    profile_summary,
    weight_bound_constant,
    weight_difference_quotients,
    weight_growth,
    weight_slope,
    weight_slope_constant,
)
from .interface import (
    InterfaceSnapshot,
    InterfaceSolution,
    SpaceTimeEvaluator,
    ZValue,
    corner,
    evaluate_Z,
    holomorphy_defect,
    interface_diagnostics,
    reconstruct_eta,
    residual_U,
    sample_interface,
    smoothness_tail,
)
from .linsolve import (
    LinearOperator,
    NormEquivalence,
    apply_L,
    assemble,
    bilinear_form,
    check_norm_equivalence,
    coercivity_constant,
    condition_estimate,
    norms,
    random_test_fields,
    relative_residual,
    solution_bound,
    solve_L,
    xnorm,
)
from .nonlinear import (
    GridConvergence,
    IterateState,
    ProfileSolution,
    assemble_F,
    assemble_N,
    assemble_S,
    fixed_point_residual,
    grid_convergence,
    lipschitz_estimate,
    make_state,
    picard_solve,
    residual_selfsimilar,
    response_exponent,
    solve_config,
)

__all__ = [
    "BoundViolation",
    "ConsistencyFailure",
    "ContractionFailure",
    "DifferenceQuotients",
    "EpsilonParams",
    "EpsilonRejected",
    "GProfile",
    "GridConvergence",
    "InterfaceSnapshot",
    "InterfaceSolution",
    "IterateState",
    "LinearOperator",
    "NoConvergence",
    "NormEquivalence",
    "ProfileSolution",
    "QuadratureFailure",
    "SingularSystem",
    "SpaceTimeEvaluator",
    "ZValue",
    "apply_L",
    "assemble",
    "assemble_F",
    "assemble_N",
    "assemble_S",
    "bilinear_form",
    "build_G",
    "build_iHG",
    "build_profile",
    "build_weight",
    "check_norm_equivalence",
    "coercivity_constant",
    "condition_estimate",
    "corner",
    "decay_envelope",
    "evaluate_Z",
    "fixed_point_residual",
    "grid_convergence",
    "holomorphy_defect",
    "interface_diagnostics",
    "linearized_residual",
    "lipschitz_estimate",
    "make_state",
    "norms",
    "picard_solve",
    "profile_summary",
    "random_test_fields",
    "reconstruct_eta",
    "relative_residual",
    "residual_U",
    "residual_selfsimilar",
    "response_exponent",
    "sample_interface",
    "smoothness_tail",
    "solution_bound",
    "solve_L",
    "solve_config",
    "weight_bound_constant",
    "weight_difference_quotients",
    "weight_growth",
    "weight_slope",
    "weight_slope_constant",
    "xnorm",
]
