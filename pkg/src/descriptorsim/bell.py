"""The Bell-experiment networks and their descriptor-level runners.

The plain network entangles two particles, rotates them by the two input
angles, copies each particle's z observable onto an observer qubit, and
records both outcomes on a 4-level register via controlled +2/+1 shifts
(Alice's side strictly first).  Variants insert a decoherent environment
interaction, replace the direct record interactions with copy chains, or
undo and redo Bob's measurement after an extra rotation.

All branch measures come from foliating the record's descriptor; the
state-vector oracle is used only for decoherence diagnostics, never for
the measures themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import NetworkEvolution, cumulative_unitary, is_sharp
from .foliation import Foliation, foliate
from .gates import (
    Cnot,
    ControlledPlus,
    CustomGate,
    GateApplication,
    Hadamard,
    Network,
    RotationY,
)
from .operators import (
    DEFAULT_TOLERANCE,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Operator,
    SpaceLayout,
    embed_local,
    haar_random_unitary,
    projector_pm,
)
from .oracle import reduced_density_matrix, simulate_statevector

BRANCH_KEYS = ("00", "01", "10", "11")


@dataclass(frozen=True)
class Plain:
    pass


@dataclass(frozen=True)
class Decohered:
    """Environment qubit copies Particle 1's z basis before measurement.

    ``seed`` scrambles the environment (plus a hidden ancilla) with a
    Haar-random two-qubit unitary so its descriptor is a generic Pauli
    representation; ``seed=None`` leaves the environment fresh.
    """

    seed: int | None = 0


@dataclass(frozen=True)
class Chained:
    """Outcomes travel through copy chains before reaching the record."""

    alice: int = 2
    bob: int = 2

    def __post_init__(self) -> None:
        if self.alice < 0 or self.bob < 0:
            raise ValueError("chain lengths must be >= 0")


@dataclass(frozen=True)
class WignerUndo:
    """Undo Bob's measurement, rotate his particle again, re-measure.

    ``rerotation`` defaults to pi - phi, the angle that flips which Bob
    each Alice meets.
    """

    rerotation: float | None = None


Variant = Plain | Decohered | Chained | WignerUndo


@dataclass(frozen=True)
class BellConfig:
    theta: float = 0.0
    phi: float = math.pi / 4
    variant: Variant = field(default_factory=Plain)
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("angles must be finite")


@dataclass(frozen=True)
class BellNetwork:
    """A built network plus the bookkeeping the measure pipeline needs."""

    network: Network
    alice_controller: str
    bob_controller: str
    alice_record_time: int
    bob_record_time: int
    environment: str | None = None
    environment_interaction_time: int | None = None


@dataclass(frozen=True)
class BellOutcome:
    config: BellConfig
    branch_measures: dict[str, float]
    alice_marginal: tuple[float, float]
    bob_marginal: tuple[float, float]
    reconstruction_residual: float
    alice_sharpness: dict[str, bool]
    diagnostics: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class WignerReport:
    outcome: BellOutcome
    effective_bob_angle: float
    conditional_bob_given_alice: dict[tuple[int, int], float | None]


@dataclass(frozen=True)
class NonIsomorphismReport:
    state_distance: float
    descriptor_distance: float
    marginal_expectation_gap: float
    states_match: bool
    descriptors_differ: bool


RECORD = "SC"


def closed_form_measures(theta: float, phi: float) -> dict[str, float]:
    """The four record measures as closed trigonometric forms of theta - phi."""
    half = (theta - phi) / 2
    c, s = math.cos(half) ** 2 / 2, math.sin(half) ** 2 / 2
    return {"00": c, "01": s, "10": s, "11": c}


def _entangle_and_rotate(theta: float, phi: float) -> list[GateApplication]:
    return [
        GateApplication(Hadamard(), ("Q1",), 0),
        GateApplication(Cnot(), ("Q1", "Q2"), 1),
        GateApplication(RotationY(theta), ("Q1",), 2),
        GateApplication(RotationY(phi), ("Q2",), 2),
    ]


def build_bell_network(cfg: BellConfig) -> BellNetwork:
    """Assemble the timed gate list of the requested variant: the plain
    network plus environment, chain, or undo insertions."""
    v = cfg.variant
    if isinstance(v, Plain):
        layout = SpaceLayout((("Q1", 2), ("Q2", 2), ("QA", 2), ("QB", 2), (RECORD, 4)))
        gates = _entangle_and_rotate(cfg.theta, cfg.phi)
        gates += [
            GateApplication(Cnot(), ("Q1", "QA"), 3),
            GateApplication(Cnot(), ("Q2", "QB"), 3),
            GateApplication(ControlledPlus(2), ("QA", RECORD), 4),
            GateApplication(ControlledPlus(1), ("QB", RECORD), 5),
        ]
        return BellNetwork(Network(layout, tuple(gates)), "QA", "QB", 4, 5)

    if isinstance(v, Decohered):
        layout = SpaceLayout(
            (("Q1", 2), ("Q2", 2), ("QE", 2), ("QF", 2), ("QA", 2), ("QB", 2), (RECORD, 4))
        )
        gates = []
        if v.seed is not None:
            scramble = haar_random_unitary(4, np.random.default_rng(v.seed))
            gates.append(
                GateApplication(CustomGate(scramble, "env-scramble"), ("QE", "QF"), 0)
            )
        gates += _entangle_and_rotate(cfg.theta, cfg.phi)
        gates += [
            GateApplication(Cnot(), ("Q1", "QE"), 3),
            GateApplication(Cnot(), ("Q1", "QA"), 4),
            GateApplication(Cnot(), ("Q2", "QB"), 4),
            GateApplication(ControlledPlus(2), ("QA", RECORD), 5),
            GateApplication(ControlledPlus(1), ("QB", RECORD), 6),
        ]
        return BellNetwork(
            Network(layout, tuple(gates)), "QA", "QB", 5, 6,
            environment="QE", environment_interaction_time=3,
        )

    if isinstance(v, Chained):
        alice_ids = ["QA"] + [f"QA{i}" for i in range(1, v.alice + 1)]
        bob_ids = ["QB"] + [f"QB{i}" for i in range(1, v.bob + 1)]
        layout = SpaceLayout(
            tuple(
                [("Q1", 2), ("Q2", 2)]
                + [(sid, 2) for sid in alice_ids + bob_ids]
                + [(RECORD, 4)]
            )
        )
        gates = _entangle_and_rotate(cfg.theta, cfg.phi)
        gates += [
            GateApplication(Cnot(), ("Q1", "QA"), 3),
            GateApplication(Cnot(), ("Q2", "QB"), 3),
        ]
        for i in range(max(v.alice, v.bob)):
            t = 4 + i
            if i < v.alice:
                gates.append(
                    GateApplication(Cnot(), (alice_ids[i], alice_ids[i + 1]), t)
                )
            if i < v.bob:
                gates.append(GateApplication(Cnot(), (bob_ids[i], bob_ids[i + 1]), t))
        t_rec = 4 + max(v.alice, v.bob)
        gates += [
            GateApplication(ControlledPlus(2), (alice_ids[-1], RECORD), t_rec),
            GateApplication(ControlledPlus(1), (bob_ids[-1], RECORD), t_rec + 1),
        ]
        return BellNetwork(
            Network(layout, tuple(gates)), alice_ids[-1], bob_ids[-1], t_rec, t_rec + 1
        )

    if isinstance(v, WignerUndo):
        rerotation = math.pi - cfg.phi if v.rerotation is None else v.rerotation
        layout = SpaceLayout((("Q1", 2), ("Q2", 2), ("QA", 2), ("QB", 2), (RECORD, 4)))
        gates = _entangle_and_rotate(cfg.theta, cfg.phi)
        gates += [
            GateApplication(Cnot(), ("Q1", "QA"), 3),
            GateApplication(Cnot(), ("Q2", "QB"), 3),
            GateApplication(Cnot(), ("Q2", "QB"), 4),  # Cnot is self-inverse
            GateApplication(RotationY(rerotation), ("Q2",), 5),
            GateApplication(Cnot(), ("Q2", "QB"), 6),
            GateApplication(ControlledPlus(2), ("QA", RECORD), 7),
            GateApplication(ControlledPlus(1), ("QB", RECORD), 8),
        ]
        return BellNetwork(Network(layout, tuple(gates)), "QA", "QB", 7, 8)

    raise TypeError(f"unknown variant {type(v).__name__}")


def _record_foliation(
    built: BellNetwork, tol: float
) -> tuple[Foliation, NetworkEvolution, Operator, Operator]:
    """Evolve descriptors, foliate the record by Alice's then Bob's
    controlling observable, and return the foliation plus the controls."""
    evo = NetworkEvolution(built.network)
    evo.run_to(built.alice_record_time)
    control_a = evo.descriptor(built.alice_controller).components[1]
    record = evo.descriptor(RECORD)
    fol = foliate(
        record,
        control_a,
        record.components[0].matpow(2),
        f"{built.alice_controller}.z",
        tol,
    )
    evo.run_to(built.bob_record_time)
    control_b = evo.descriptor(built.bob_controller).components[1]
    fol = fol.refine(
        control_b,
        record.components[0].matpow(1),
        f"{built.bob_controller}.z",
        tol,
    )
    return fol, evo, control_a, control_b


def _marginal(control: Operator) -> tuple[float, float]:
    return (
        float(projector_pm(control, +1).expectation().real),
        float(projector_pm(control, -1).expectation().real),
    )


def run_bell(cfg: BellConfig) -> BellOutcome:
    """Run the configured experiment and report the record's branch measures."""
    built = build_bell_network(cfg)
    tol = cfg.tolerance
    fol, evo, control_a, control_b = _record_foliation(built, tol)

    evo.run()
    final_record = evo.descriptor(RECORD)
    residual = max(
        got.distance(want)
        for got, want in zip(fol.branch_sum(), final_record.components)
    )

    alice = evo.descriptor(built.alice_controller)
    qx, qz = alice.components
    qy = 1j * (qx @ qz)
    sharpness = {
        "x": is_sharp(qx, tol)[0],
        "z": is_sharp(qz, tol)[0],
        "y": is_sharp(qy, tol)[0],
    }

    diagnostics: dict[str, float] = {
        "measure_sum": float(sum(fol.measures().values()))
    }
    if built.environment is not None:
        t_after = built.environment_interaction_time + 1
        probe = NetworkEvolution(built.network).run_to(t_after)
        q1x_after = probe.descriptor("Q1").components[0]
        diagnostics["q1_x_expectation"] = abs(q1x_after.expectation())
        rho = reduced_density_matrix(
            simulate_statevector(built.network, t_after), "Q1"
        )
        diagnostics["q1_offdiagonal"] = float(abs(rho[0, 1]))

    measures = fol.measures()
    return BellOutcome(
        config=cfg,
        branch_measures={k: measures[k] for k in BRANCH_KEYS},
        alice_marginal=_marginal(control_a),
        bob_marginal=_marginal(control_b),
        reconstruction_residual=residual,
        alice_sharpness=sharpness,
        diagnostics=diagnostics,
    )


def run_decoherence(cfg: BellConfig) -> BellOutcome:
    """Run the decohered variant; measures must match the plain variant."""
    if not isinstance(cfg.variant, Decohered):
        raise TypeError("run_decoherence needs a Decohered variant")
    return run_bell(cfg)


def run_chain(cfg: BellConfig) -> BellOutcome:
    """Run the chain-reaction variant; measures must match the plain variant."""
    if not isinstance(cfg.variant, Chained):
        raise TypeError("run_chain needs a Chained variant")
    return run_bell(cfg)


def run_wigner_undo(
    theta: float,
    phi: float,
    rerotation: float | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> WignerReport:
    """Undo-and-redo continuation of Bob's measurement, with the joint
    measures and the conditional measures of Bob's record given Alice's."""
    cfg = BellConfig(theta, phi, WignerUndo(rerotation), tolerance)
    outcome = run_bell(cfg)
    m = outcome.branch_measures
    conditionals: dict[tuple[int, int], float | None] = {}
    for a in (0, 1):
        total = m[f"{a}0"] + m[f"{a}1"]
        for b in (0, 1):
            conditionals[(b, a)] = None if total < tolerance else m[f"{a}{b}"] / total
    effective = phi + (math.pi - phi if rerotation is None else rerotation)
    return WignerReport(outcome, effective, conditionals)


def nonisomorphism_witness(tolerance: float = DEFAULT_TOLERANCE) -> NonIsomorphismReport:
    """Two networks with one final wave function but different descriptors.

    The empty two-qubit network and the single-Cnot network both leave the
    state at |00>, yet the Cnot rewrites Q1's x component into a two-qubit
    product; descriptors carry strictly more structure than the state.
    """
    layout = SpaceLayout((("Q1", 2), ("Q2", 2)))
    empty = Network(layout, ())
    cnot = Network(layout, (GateApplication(Cnot(), ("Q1", "Q2"), 0),))

    state_empty = simulate_statevector(empty)
    state_cnot = simulate_statevector(cnot)
    state_distance = float(
        np.linalg.norm(state_empty.amplitudes - state_cnot.amplitudes)
    )

    evo_empty = NetworkEvolution(empty).run()
    evo_cnot = NetworkEvolution(cnot).run()
    descriptor_distance = max(
        a.distance(b)
        for sid in layout.ids
        for a, b in zip(
            evo_empty.descriptor(sid).components, evo_cnot.descriptor(sid).components
        )
    )

    gap = 0.0
    for sid in layout.ids:
        for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
            base = embed_local(pauli, sid, layout)
            exp = []
            for net in (empty, cnot):
                u = cumulative_unitary(net)
                exp.append((u.H @ base @ u).expectation())
            gap = max(gap, abs(exp[0] - exp[1]))

    return NonIsomorphismReport(
        state_distance=state_distance,
        descriptor_distance=descriptor_distance,
        marginal_expectation_gap=gap,
        states_match=state_distance < 1e-12,
        descriptors_differ=descriptor_distance > 0.5,
    )
