"""Metric operators, factorized-metric observable chains and dual-equation
time evolution for finite-dimensional quasi-Hermitian Hamiltonians."""

from . import errors
from .matrixcore import (
    SpectralData,
    eig,
    hermitian_defect,
    inverse,
    is_positive_definite,
    mat_exp,
    matrix_from_json,
    matrix_to_json,
    vector_from_json,
    vector_to_json,
)
from .dieudonne import (
    MetricFamily,
    check_quasi_hermitian,
    metric_from_weights,
    physical_inner_product,
    solve_metric_space,
)
from .factorchain import (
    ObservableChain,
    Relation,
    VerificationReport,
    build_chain,
    lemma1_observable,
    n3_named_operators,
    verify_chain,
    verify_theorem1,
)
from .symmetry import (
    check_pct_symmetry,
    check_pseudo_hermiticity,
    check_pt_symmetry,
    involution_defect,
)
from .evolution import (
    TrajectoryRecord,
    expectation,
    norm_trajectory,
    propagate,
    propagate_dual,
)
from .models import (
    DeterministicRng,
    SweepResult,
    parity,
    pt_chain,
    qh_pair,
    random_hermitian_invertible,
    random_qh,
    spectral_reality,
    sweep_exceptional,
    toy_2x2,
    toy_2x2_metric,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "SpectralData",
    "eig",
    "hermitian_defect",
    "inverse",
    "is_positive_definite",
    "mat_exp",
    "matrix_from_json",
    "matrix_to_json",
    "vector_from_json",
    "vector_to_json",
    "MetricFamily",
    "check_quasi_hermitian",
    "metric_from_weights",
    "physical_inner_product",
    "solve_metric_space",
    "ObservableChain",
    "Relation",
    "VerificationReport",
    "build_chain",
    "lemma1_observable",
    "n3_named_operators",
    "verify_chain",
    "verify_theorem1",
    "check_pct_symmetry",
    "check_pseudo_hermiticity",
    "check_pt_symmetry",
    "involution_defect",
    "TrajectoryRecord",
    "expectation",
    "norm_trajectory",
    "propagate",
    "propagate_dual",
    "DeterministicRng",
    "SweepResult",
    "parity",
    "pt_chain",
    "qh_pair",
    "random_hermitian_invertible",
    "random_qh",
    "spectral_reality",
    "sweep_exceptional",
    "toy_2x2",
    "toy_2x2_metric",
]
