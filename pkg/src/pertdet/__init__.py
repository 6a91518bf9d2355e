"""Regularized perturbation determinants and eigenvalue-counting bounds.

Dense complex matrices stand in for the operators; every identity and
inequality the package computes is verifiable against brute-force eigenvalue
oracles, which is exactly what the bundled campaigns and the ``pertdet``
CLI do.
"""

from ._kernels import BACKEND
from .bounds import (
    ResolventEnvelope,
    certify_envelope,
    count_factor,
    count_factor_limit,
    count_factor_relaxed,
    disk_exterior_radius,
    envelope_count_bound,
    jensen_identity_check,
    lambert_w,
    norm_count_bound,
    pseudospectrum_count_bound,
    unperturbed_count_bound,
)
from .campaign import CampaignConfig, CampaignResult, run_campaign
from .determinants import (
    GrowthConstant,
    RegularizationOrder,
    ceil_order,
    det_growth_constant,
    det_id_minus,
    factorization_check,
    growth_bound_check,
    lipschitz_check,
    regularized_det,
    regularized_det_forms,
    trace_power,
)
from .ideals import (
    IdealSpec,
    eigenvalue_lp,
    eigenvalue_norm_check,
    hille_tamarkin,
    ideal_axiom_check,
    ideal_norm,
    nuclear_upper,
    schatten,
)
from .linalg import (
    SingularResolvent,
    eigenvalues,
    matrix_exponential,
    norms,
    operator_norm,
    resolvent,
    singular_values,
    spectral_radius,
)
from .matrixio import load_matrix, load_pair, load_problem, save_matrix, save_pair, save_problem
from .perturbation import (
    Contour,
    Disk,
    HalfplaneReGt,
    OutsideRadius,
    PerturbationProblem,
    brute_count,
    decay_at_infinity,
    perturbation_determinant,
    pseudospectrum_member,
    winding_zero_count,
)
from .report import BoundReport, emit_report
from .semigroup import (
    GeneratorPair,
    contraction_certify,
    hille_tamarkin_pipeline,
    is_normal_dissipative,
    multiplicity_transfer_check,
    semigroup_bound,
    strip_count,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundReport",
    "CampaignConfig",
    "CampaignResult",
    "Contour",
    "Disk",
    "GeneratorPair",
    "GrowthConstant",
    "HalfplaneReGt",
    "IdealSpec",
    "OutsideRadius",
    "PerturbationProblem",
    "RegularizationOrder",
    "ResolventEnvelope",
    "SingularResolvent",
    "brute_count",
    "ceil_order",
    "certify_envelope",
    "contraction_certify",
    "count_factor",
    "count_factor_limit",
    "count_factor_relaxed",
    "decay_at_infinity",
    "det_growth_constant",
    "det_id_minus",
    "disk_exterior_radius",
    "eigenvalue_lp",
    "eigenvalue_norm_check",
    "eigenvalues",
    "emit_report",
    "envelope_count_bound",
    "factorization_check",
    "growth_bound_check",
    "hille_tamarkin",
    "hille_tamarkin_pipeline",
    "ideal_axiom_check",
    "ideal_norm",
    "is_normal_dissipative",
    "jensen_identity_check",
    "lambert_w",
    "lipschitz_check",
    "load_matrix",
    "load_pair",
    "load_problem",
    "matrix_exponential",
    "multiplicity_transfer_check",
    "norm_count_bound",
    "norms",
    "nuclear_upper",
    "operator_norm",
    "perturbation_determinant",
    "pseudospectrum_count_bound",
    "pseudospectrum_member",
    "regularized_det",
    "regularized_det_forms",
    "resolvent",
    "run_campaign",
    "save_matrix",
    "save_pair",
    "save_problem",
    "schatten",
    "semigroup_bound",
    "singular_values",
    "spectral_radius",
    "strip_count",
    "trace_power",
    "unperturbed_count_bound",
    "winding_zero_count",
]
