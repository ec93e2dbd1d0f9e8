"""Weak-measurement simulation and interaction-parameter estimation for
polarization qubits: first-order measurement model, exact two-photon PPBS
gate model, Fisher-information and Cramer-Rao analysis, moment estimation,
and seeded Monte Carlo validation."""

from .errors import (
    CouplingTooStrong,
    LinearizationInvalid,
    NonOrthonormalBasis,
    PostselectionSingular,
    TooManyDiscardedReplicas,
    WeakMeasError,
    WeakValueReferenceZero,
    ZeroCoincidenceNorm,
    ZeroInformation,
    ZeroProbability,
    ZeroProbeCoupling,
)
from .estimation import (
    ConditionalPair,
    EstimateResult,
    FisherReport,
    apparent_fisher,
    cramer_rao_bound,
    estimate_epsilon,
    extract_weak_value,
    fisher_information,
)
from .gatesim import (
    COMPENSATED_PPBS,
    UNCOMPENSATED_PPBS,
    GateParams,
    TwoPhotonState,
    exact_joint_probabilities,
    ideal_csign,
    ppbs_coincidence_operator,
    probe_state,
    product_state,
)
from .montecarlo import (
    CountRecord,
    EnsembleStats,
    ModelTag,
    model_distribution,
    philox_generator,
    run_ensemble,
    sample_counts,
)
from .qstate import (
    Observable,
    PolarAngle,
    QubitState,
    diag_states,
    inner_product,
    linear_pol_state,
    matrix_element,
    stokes_hv,
)
from .weakmodel import (
    CELLS,
    DEFAULT_METER,
    SINGULARITY_THRESHOLD,
    WEAKNESS_GUARD,
    JointDistribution,
    MeterModel,
    MeterOutcome,
    PostSelectOutcome,
    joint_probabilities_linear,
    log_derivative,
    measurement_operator,
    weak_value,
    weakness_margin,
)

__version__ = "0.1.0"

__all__ = [
    "CELLS",
    "COMPENSATED_PPBS",
    "ConditionalPair",
    "CountRecord",
    "CouplingTooStrong",
    "DEFAULT_METER",
    "EnsembleStats",
    "EstimateResult",
    "FisherReport",
    "GateParams",
    "JointDistribution",
    "LinearizationInvalid",
    "MeterModel",
    "MeterOutcome",
    "ModelTag",
    "NonOrthonormalBasis",
    "Observable",
    "PolarAngle",
    "PostSelectOutcome",
    "PostselectionSingular",
    "QubitState",
    "SINGULARITY_THRESHOLD",
    "TooManyDiscardedReplicas",
    "TwoPhotonState",
    "UNCOMPENSATED_PPBS",
    "WEAKNESS_GUARD",
    "WeakMeasError",
    "WeakValueReferenceZero",
    "ZeroCoincidenceNorm",
    "ZeroInformation",
    "ZeroProbability",
    "ZeroProbeCoupling",
    "apparent_fisher",
    "cramer_rao_bound",
    "diag_states",
    "estimate_epsilon",
    "exact_joint_probabilities",
    "extract_weak_value",
    "fisher_information",
    "ideal_csign",
    "inner_product",
    "joint_probabilities_linear",
    "linear_pol_state",
    "log_derivative",
    "matrix_element",
    "measurement_operator",
    "model_distribution",
    "philox_generator",
    "ppbs_coincidence_operator",
    "probe_state",
    "product_state",
    "run_ensemble",
    "sample_counts",
    "stokes_hv",
    "weak_value",
    "weakness_margin",
]
