"""Extraction of qubit states by repeated ancilla measurements under dissipation."""

from .channel import (
    KrausSet,
    choi_matrix,
    choi_min_eigenvalue,
    contract_kraus,
    kraus_superoperator,
    propagator,
    trace_preservation_defect,
    zero_temperature_kraus,
)
from .extraction import (
    CriterionVerdict,
    ExtractionResult,
    MeasurementEstimate,
    MeasurementSpec,
    PureStateSpec,
    Trajectory,
    alpha_analytic,
    analyze,
    contracted_map,
    estimate_measurements,
    ideal_contracted_operator,
    optimal_tau_weak_damping,
    perturbative_purity,
    pure_eigenstate_criterion,
    success_weight,
    trajectory,
    validate_density_matrix,
)
from .linalg import EigenSystem, eig, expm
from .model import (
    CoupledBasis,
    ModelParams,
    ThermalOccupations,
    coupled_basis,
    dissipator,
    hamiltonian,
    hamiltonian_superoperator,
    liouvillian,
    thermal_occupations,
)

__version__ = "0.1.0"

__all__ = [
    "CoupledBasis",
    "CriterionVerdict",
    "EigenSystem",
    "ExtractionResult",
    "KrausSet",
    "MeasurementEstimate",
    "MeasurementSpec",
    "ModelParams",
    "PureStateSpec",
    "ThermalOccupations",
    "Trajectory",
    "alpha_analytic",
    "analyze",
    "choi_matrix",
    "choi_min_eigenvalue",
    "contract_kraus",
    "contracted_map",
    "coupled_basis",
    "dissipator",
    "eig",
    "estimate_measurements",
    "expm",
    "hamiltonian",
    "hamiltonian_superoperator",
    "ideal_contracted_operator",
    "kraus_superoperator",
    "liouvillian",
    "optimal_tau_weak_damping",
    "perturbative_purity",
    "propagator",
    "pure_eigenstate_criterion",
    "success_weight",
    "thermal_occupations",
    "trace_preservation_defect",
    "trajectory",
    "validate_density_matrix",
    "zero_temperature_kraus",
]
