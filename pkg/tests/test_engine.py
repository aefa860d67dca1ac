import math

import numpy as np
import pytest

from descriptorsim import (
    AlgebraError,
    BellConfig,
    Cnot,
    ControlledPlus,
    CustomGate,
    EngineError,
    GateApplication,
    Hadamard,
    Network,
    NetworkEvolution,
    Plus,
    RotationY,
    SpaceLayout,
    algebra_residual,
    build_bell_network,
    cumulative_evolve,
    embed_local,
    functional_form,
    initial_descriptors,
    initial_qubit_descriptor,
    initial_qudit_descriptor,
    is_sharp,
    locality_residual,
    step_evolve,
)
from descriptorsim.operators import PAULI_X, PAULI_Z, haar_random_unitary
from conftest import random_network

ONE_QUBIT = SpaceLayout((("Q1", 2),))
TWO_QUBITS = SpaceLayout((("Q1", 2), ("Q2", 2)))
QUBIT_AND_RECORD = SpaceLayout((("Q1", 2), ("SC", 4)))


class TestInitialDescriptors:
    def test_single_qubit_pair(self):
        d = initial_qubit_descriptor("Q1", ONE_QUBIT)
        assert np.array_equal(d.components[0].matrix, PAULI_X)
        assert np.array_equal(d.components[1].matrix, PAULI_Z)
        assert d.time == 0

    def test_two_qubit_ordering(self):
        d = initial_qubit_descriptor("Q2", TWO_QUBITS)
        assert np.array_equal(d.components[0].matrix, np.kron(np.eye(2), PAULI_X))
        assert np.array_equal(d.components[1].matrix, np.kron(np.eye(2), PAULI_Z))

    def test_components_anticommute_exactly(self):
        d = initial_qubit_descriptor("Q1", TWO_QUBITS)
        x, z = (c.matrix for c in d.components)
        assert np.array_equal(x @ z, -(z @ x))

    def test_qubit_descriptor_rejects_qudit(self):
        with pytest.raises(Exception):
            initial_qubit_descriptor("SC", QUBIT_AND_RECORD)

    def test_qudit_embedded_patterns(self):
        d = initial_qudit_descriptor("SC", QUBIT_AND_RECORD)
        from descriptorsim import qudit_shift_clock

        shift, clock = qudit_shift_clock(4)
        assert np.allclose(d.components[0].matrix, np.kron(np.eye(2), shift))
        assert np.allclose(d.components[1].matrix, np.kron(np.eye(2), clock))

    def test_computational_observable_is_clock_polynomial(self):
        # solve diag(0..3) = sum_k c_k clock^k and check the reconstruction
        from descriptorsim import qudit_shift_clock

        _, clock = qudit_shift_clock(4)
        vander = np.array([[clock[j, j] ** k for k in range(4)] for j in range(4)])
        coeffs = np.linalg.solve(vander, np.arange(4.0))
        rebuilt = sum(
            coeffs[k] * np.linalg.matrix_power(clock, k) for k in range(4)
        )
        assert np.allclose(rebuilt, np.diag([0, 1, 2, 3]), atol=1e-12)

    def test_dim_two_qudit_matches_qubit(self):
        qudit = initial_qudit_descriptor("Q1", TWO_QUBITS)
        qubit = initial_qubit_descriptor("Q1", TWO_QUBITS)
        for a, b in zip(qudit.components, qubit.components):
            assert a.isclose(b, 1e-15)


class TestFunctionalForm:
    def fresh(self, layout):
        return initial_descriptors(layout)

    def test_hadamard_defining_equation(self):
        app = GateApplication(Hadamard(), ("Q1",), 0)
        net = Network(ONE_QUBIT, (app,))
        u = functional_form(app, self.fresh(ONE_QUBIT))
        assert u.isclose(net.embedded(app), 1e-15)
        x, z = (c.matrix for c in initial_qubit_descriptor("Q1", ONE_QUBIT).components)
        assert np.allclose(u.matrix, (x + z) / np.sqrt(2))

    def test_rotation_zero_angle_is_identity(self):
        app = GateApplication(RotationY(0.0), ("Q1",), 0)
        u = functional_form(app, self.fresh(ONE_QUBIT))
        assert np.allclose(u.matrix, np.eye(2))

    @pytest.mark.parametrize("seed", range(6))
    def test_rotation_defining_equation_random_angles(self, seed):
        theta = float(np.random.default_rng(seed).uniform(-2 * np.pi, 2 * np.pi))
        app = GateApplication(RotationY(theta), ("Q1",), 0)
        net = Network(ONE_QUBIT, (app,))
        u = functional_form(app, self.fresh(ONE_QUBIT))
        assert u.isclose(net.embedded(app), 1e-12)

    def test_cnot_defining_equation_and_action(self):
        app = GateApplication(Cnot(), ("Q1", "Q2"), 0)
        net = Network(TWO_QUBITS, (app,))
        descs = self.fresh(TWO_QUBITS)
        u = functional_form(app, descs)
        assert u.isclose(net.embedded(app), 1e-14)
        # explicit conjugation moves control x onto the target
        q1x = descs["Q1"].components[0]
        moved = u.H @ q1x @ u
        q2x = descs["Q2"].components[0]
        assert moved.isclose(q1x @ q2x, 1e-13)

    def test_controlled_plus_defining_equation(self):
        app = GateApplication(ControlledPlus(2), ("Q1", "SC"), 0)
        net = Network(QUBIT_AND_RECORD, (app,))
        u = functional_form(app, self.fresh(QUBIT_AND_RECORD))
        assert u.isclose(net.embedded(app), 1e-14)

    def test_plus_defining_equation(self):
        app = GateApplication(Plus(3), ("SC",), 0)
        net = Network(QUBIT_AND_RECORD, (app,))
        u = functional_form(app, self.fresh(QUBIT_AND_RECORD))
        assert u.isclose(net.embedded(app), 1e-14)

    def test_custom_gate_at_time_zero(self, rng):
        gate = CustomGate(haar_random_unitary(4, rng), "scramble")
        app = GateApplication(gate, ("Q1", "Q2"), 0)
        net = Network(TWO_QUBITS, (app,))
        u = functional_form(app, self.fresh(TWO_QUBITS))
        assert u.isclose(net.embedded(app), 1e-13)

    def test_custom_gate_later_needs_frame(self, rng):
        gate = CustomGate(haar_random_unitary(2, rng))
        descs = self.fresh(TWO_QUBITS)
        descs = step_evolve(descs, GateApplication(Hadamard(), ("Q1",), 0))
        with pytest.raises(EngineError):
            functional_form(GateApplication(gate, ("Q1",), 1), descs)

    def test_mixed_times_rejected(self):
        descs = self.fresh(TWO_QUBITS)
        evolved = step_evolve(descs, GateApplication(Hadamard(), ("Q1",), 0))
        mixed = {"Q1": evolved["Q1"], "Q2": descs["Q2"]}
        with pytest.raises(EngineError):
            functional_form(GateApplication(Cnot(), ("Q1", "Q2"), 1), mixed)


class TestStepEvolve:
    def test_hadamard_swaps_components(self):
        descs = initial_descriptors(TWO_QUBITS)
        out = step_evolve(descs, GateApplication(Hadamard(), ("Q1",), 0))
        assert out["Q1"].components[0].isclose(descs["Q1"].components[1], 1e-14)
        assert out["Q1"].components[1].isclose(descs["Q1"].components[0], 1e-14)
        assert out["Q1"].time == 1

    def test_cnot_after_hadamard_matches_wire_labels(self):
        descs = initial_descriptors(TWO_QUBITS)
        descs = step_evolve(descs, GateApplication(Hadamard(), ("Q1",), 0))
        descs = step_evolve(descs, GateApplication(Cnot(), ("Q1", "Q2"), 1))
        q1x0 = embed_local(PAULI_X, "Q1", TWO_QUBITS)
        q1z0 = embed_local(PAULI_Z, "Q1", TWO_QUBITS)
        q2x0 = embed_local(PAULI_X, "Q2", TWO_QUBITS)
        q2z0 = embed_local(PAULI_Z, "Q2", TWO_QUBITS)
        assert descs["Q1"].components[0].isclose(q1z0 @ q2x0, 1e-13)
        assert descs["Q1"].components[1].isclose(q1x0, 1e-13)
        assert descs["Q2"].components[0].isclose(q2x0, 1e-13)
        assert descs["Q2"].components[1].isclose(q2z0 @ q1x0, 1e-13)

    @pytest.mark.parametrize("seed", range(20))
    def test_rotation_mixes_components(self, seed):
        theta = float(np.random.default_rng(seed + 100).uniform(-np.pi, np.pi))
        descs = initial_descriptors(TWO_QUBITS)
        out = step_evolve(descs, GateApplication(RotationY(theta), ("Q1",), 0))
        qx, qz = descs["Q1"].components
        c, s = math.cos(theta), math.sin(theta)
        assert out["Q1"].components[0].isclose(c * qx + s * qz, 1e-12)
        assert out["Q1"].components[1].isclose(-s * qx + c * qz, 1e-12)

    def test_non_acted_descriptor_passed_through_unchanged(self):
        descs = initial_descriptors(TWO_QUBITS)
        out = step_evolve(descs, GateApplication(Hadamard(), ("Q1",), 0))
        for a, b in zip(out["Q2"].components, descs["Q2"].components):
            assert np.array_equal(a.matrix, b.matrix)

    def test_time_mismatch_rejected(self):
        descs = initial_descriptors(TWO_QUBITS)
        with pytest.raises(EngineError):
            step_evolve(descs, GateApplication(Hadamard(), ("Q1",), 3))


class TestCumulativeEvolve:
    def test_time_zero_is_initial(self):
        net = Network(TWO_QUBITS, (GateApplication(Hadamard(), ("Q1",), 0),))
        out = cumulative_evolve(net, 0)
        init = initial_descriptors(TWO_QUBITS)
        for sid in TWO_QUBITS.ids:
            for a, b in zip(out[sid].components, init[sid].components):
                assert a.isclose(b, 1e-15)

    def test_out_of_range(self):
        net = Network(TWO_QUBITS, (GateApplication(Hadamard(), ("Q1",), 0),))
        with pytest.raises(EngineError):
            cumulative_evolve(net, 2)

    def test_bell_alice_z_component_shape(self):
        theta, phi = 0.37, -1.1
        built = build_bell_network(BellConfig(theta, phi))
        layout = built.network.layout
        out = cumulative_evolve(built.network, 4)
        q1x = embed_local(PAULI_X, "Q1", layout)
        q1z = embed_local(PAULI_Z, "Q1", layout)
        q2x = embed_local(PAULI_X, "Q2", layout)
        qaz = embed_local(PAULI_Z, "QA", layout)
        qax = embed_local(PAULI_X, "QA", layout)
        expected_z = qaz @ (
            (-math.sin(theta)) * (q1z @ q2x) + math.cos(theta) * q1x
        )
        assert out["QA"].components[1].isclose(expected_z, 1e-12)
        assert out["QA"].components[0].isclose(qax, 1e-12)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_step_engine_on_random_networks(self, seed):
        net = random_network(np.random.default_rng(seed))
        evo = NetworkEvolution(net).run()
        cum = cumulative_evolve(net)
        worst = max(
            a.distance(b)
            for sid in net.layout.ids
            for a, b in zip(evo.descriptor(sid).components, cum[sid].components)
        )
        assert worst < 1e-9

    def test_step_engine_handles_custom_gates_via_frame(self, rng):
        gate = CustomGate(haar_random_unitary(4, rng), "mix")
        net = Network(
            TWO_QUBITS,
            (
                GateApplication(Hadamard(), ("Q1",), 0),
                GateApplication(gate, ("Q1", "Q2"), 1),
                GateApplication(RotationY(0.7), ("Q2",), 2),
            ),
        )
        evo = NetworkEvolution(net).run()
        cum = cumulative_evolve(net)
        for sid in TWO_QUBITS.ids:
            for a, b in zip(evo.descriptor(sid).components, cum[sid].components):
                assert a.isclose(b, 1e-11)


class TestSharpness:
    def test_initial_z_sharp_plus_one(self):
        z = embed_local(PAULI_Z, "Q1", TWO_QUBITS)
        assert is_sharp(z) == (True, 1.0)

    def test_identity_sharp_value_one(self):
        from descriptorsim import Operator

        assert is_sharp(Operator.identity(TWO_QUBITS)) == (True, 1.0)

    def test_entangled_alice_not_sharp(self):
        built = build_bell_network(BellConfig(0.2, 0.9))
        evo = NetworkEvolution(built.network).run_to(4)
        qz = evo.descriptor("QA").components[1]
        sharp, value = is_sharp(qz)
        assert not sharp and value is None
        assert abs(qz.expectation()) < 1e-12
        assert abs(complex(qz.matrix[0, :] @ qz.matrix[:, 0]) - 1) < 1e-12

    def test_non_hermitian_rejected(self):
        shift = initial_qudit_descriptor("SC", QUBIT_AND_RECORD).components[0]
        with pytest.raises(AlgebraError):
            is_sharp(shift)


class TestInvariants:
    def test_algebra_preserved_along_bell_network(self):
        built = build_bell_network(BellConfig(0.5, -0.3))
        evo = NetworkEvolution(built.network)
        for _ in range(built.network.n_steps):
            evo.advance()
            assert algebra_residual(evo.descriptors) < 1e-11

    def test_locality_residual_small_on_random_networks(self, rng):
        for _ in range(5):
            assert locality_residual(random_network(rng)) < 1e-12

    def test_locality_residual_on_bell_network(self):
        built = build_bell_network(BellConfig(0.4, 1.2))
        assert locality_residual(built.network) < 1e-12

    def test_evolution_rewind_rejected(self):
        net = Network(TWO_QUBITS, (GateApplication(Hadamard(), ("Q1",), 0),))
        evo = NetworkEvolution(net).run()
        with pytest.raises(EngineError):
            evo.run_to(0)
