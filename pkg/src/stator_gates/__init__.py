"""Probabilistic nonlocal gates from a single non-maximally entangled state."""

from .analysis import (
    CCoeffs,
    Curve,
    CurvePoint,
    c_coefficients,
    find_crossings,
    find_n0,
    generate_curve,
    optimal_xi,
    plan_for_xi,
)
from .improved import (
    ImprovedParams,
    coefficients_from_angles,
    failure_probability_closed,
    params_from_nb,
    povm_elements,
    run_improved_protocol,
)
from .linalg import (
    EPS_ALG,
    EPS_NUM,
    EPS_SIM,
    PauliAxis,
    StateVector,
    apply_gate,
    apply_kraus,
    binary_entropy,
    distance_up_to_phase,
    pauli_axis_matrix,
    ppt_min_eigenvalue,
    projective_measure,
    reduced_density_matrix,
    von_neumann_entropy,
)
from .multiparty import (
    MultipartySpec,
    bipartition_entropy,
    build_quasi_ghz,
    pairwise_separability,
    run_multiparty_protocol,
)
from .protocol import (
    GateSpec,
    ResourceSpec,
    branch_operator_closed_form,
    branch_probabilities,
    build_resource_state,
    deterministic_config,
    fpt_config,
    optimal_alpha,
    resource_entanglement,
    run_general_protocol,
    smallxi_config,
    target_gate,
)
from .stator import BranchRecord, MeasurementAngles, ProtocolReport

__version__ = "0.1.0"
