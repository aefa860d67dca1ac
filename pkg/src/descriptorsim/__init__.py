"""Heisenberg-picture descriptor simulator.

Evolves per-subsystem operator descriptors through quantum networks,
foliates them into labeled relative descriptors at measurement-like
interactions, computes branch measures, and runs the Bell/CHSH
experiment family with an independent state-vector oracle for
cross-validation.
"""

from .operators import (
    DEFAULT_TOLERANCE,
    AlgebraError,
    LayoutError,
    Operator,
    SpaceLayout,
    embed_local,
    embed_matrix,
    frobenius,
    haar_random_unitary,
    projector_pm,
    qudit_shift_clock,
    reference_expectation,
)
from .gates import (
    Cnot,
    ControlledPlus,
    CustomGate,
    GateApplication,
    Hadamard,
    Network,
    NetworkError,
    Plus,
    RotationY,
)
from .engine import (
    Descriptor,
    EngineError,
    NetworkEvolution,
    algebra_residual,
    cumulative_evolve,
    cumulative_unitary,
    functional_form,
    initial_descriptors,
    initial_qubit_descriptor,
    initial_qudit_descriptor,
    is_sharp,
    locality_residual,
    step_evolve,
)
from .foliation import Branch, Foliation, FoliationError, branch_measure, foliate
from .oracle import (
    StateVector,
    joint_outcome_distribution,
    reduced_density_matrix,
    reference_state,
    simulate_statevector,
)
from .bell import (
    BellConfig,
    BellNetwork,
    BellOutcome,
    Chained,
    Decohered,
    NonIsomorphismReport,
    Plain,
    WignerReport,
    WignerUndo,
    build_bell_network,
    closed_form_measures,
    nonisomorphism_witness,
    run_bell,
    run_chain,
    run_decoherence,
    run_wigner_undo,
)
from .chsh import (
    ALICE_ANGLES,
    BOB_ANGLES,
    CLASSICAL_BOUND,
    DeterministicStrategy,
    all_strategies,
    chsh_win_rate,
    enumerate_classical,
    expected_win_rate,
    quantum_distribution,
    referee_demo,
    win_predicate,
)

__version__ = "0.1.0"
