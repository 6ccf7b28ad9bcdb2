"""Loss-landscape statistics for Clifford + Pauli-rotation circuits.

The package splits into exact machinery (pauli, stabilizer, circuit),
a dense cross-checking simulator (statevector), sampling and quadrature
estimators (estimators), closed-form reference values (analytics), and a
seeded experiment runner (cli).
"""

from .analytics import (
    ReferenceValue,
    bp_threshold_check,
    clifford_ratio,
    continuous_pair_leading,
    random_pauli_pair_moment,
    random_pauli_second_moment,
    stabilizer_pair_moment,
    two_design_variance,
    wg4_identity,
)
from .circuit import (
    CliffordGate,
    CliffordPoint,
    CprCircuit,
    ParameterPoint,
    PauliRotation,
    circuit_from_text,
    circuit_to_text,
    clifford_loss_matrix,
    clifford_point_to_angles,
    eval_at_clifford_point,
    hea_circuit,
    nonzero_term_count,
    random_clifford_point,
    validate,
)
from .estimators import (
    CHUNK,
    Estimate,
    ExperimentConfig,
    continuous_correlator,
    derive_seed,
    discrete_correlator,
    ensemble_pair_moment,
    ensemble_second_moment,
    estimate_from_stream,
    exact_grid_moment,
    loss_samples_clifford,
    loss_samples_uniform,
    variance_clifford,
    variance_uniform,
    warmstart_search,
)
from .pauli import (
    GATE_NAMES,
    PauliString,
    PhasedProduct,
    commutes,
    conjugate_by_gate,
    conjugate_by_quarter_rotation,
    expectation_in_zero,
    multiply,
    pauli_from_label,
    random_pauli,
    two_body_nn_paulis,
)
from .stabilizer import (
    CliffordTableau,
    StabilizerState,
    apply_gate_forward,
    compose,
    conjugate_pauli,
    enumerate_stabilizer_states,
    identity_tableau,
    inverse,
    random_clifford,
    random_stabilizer_state,
    stabilizer_expectation,
    tableau_from_gates,
    tableau_to_text,
)
from .statevector import (
    ObservableSum,
    apply_gate,
    apply_pauli,
    apply_rotation,
    evaluate_loss,
    expectation,
    loss_matrix,
    prepare_stabilizer,
    zero_state,
)

__version__ = "0.1.0"
