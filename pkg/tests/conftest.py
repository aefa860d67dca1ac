import numpy as np
import pytest

from descriptorsim import (
    Cnot,
    ControlledPlus,
    GateApplication,
    Hadamard,
    Network,
    Plus,
    RotationY,
    SpaceLayout,
)


def random_network(
    rng: np.random.Generator,
    max_subsystems: int = 4,
    max_gates: int = 8,
    with_qudit: bool | None = None,
) -> Network:
    """A random well-formed network: qubits plus (optionally) one 4-level
    system, one gate per time slice, gate kinds drawn uniformly."""
    n_sub = int(rng.integers(2, max_subsystems + 1))
    if with_qudit is None:
        with_qudit = bool(rng.integers(2))
    subsystems = [(f"S{i}", 2) for i in range(n_sub)]
    if with_qudit:
        subsystems[-1] = (subsystems[-1][0], 4)
    layout = SpaceLayout(tuple(subsystems))
    qubits = [sid for sid, dim in layout.subsystems if dim == 2]
    qudits = [sid for sid, dim in layout.subsystems if dim == 4]

    gates = []
    n_gates = int(rng.integers(1, max_gates + 1))
    t = 0
    while t < n_gates:
        kind = rng.integers(5)
        if kind == 0:
            app = GateApplication(Hadamard(), (rng.choice(qubits),), t)
        elif kind == 1:
            theta = float(rng.uniform(-np.pi, np.pi))
            app = GateApplication(RotationY(theta), (rng.choice(qubits),), t)
        elif kind == 2 and len(qubits) >= 2:
            c, tgt = rng.choice(qubits, size=2, replace=False)
            app = GateApplication(Cnot(), (c, tgt), t)
        elif kind == 3 and qudits:
            app = GateApplication(Plus(int(rng.integers(1, 4))), (rng.choice(qudits),), t)
        elif kind == 4 and qudits:
            app = GateApplication(
                ControlledPlus(int(rng.integers(1, 4))),
                (rng.choice(qubits), rng.choice(qudits)),
                t,
            )
        else:
            continue
        gates.append(app)
        t += 1
    return Network(layout, tuple(gates))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
