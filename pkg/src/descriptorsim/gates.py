"""Gate kinds, timed gate applications, and networks.

A network is an ordered list of gate applications over a declared layout.
Applications carry an integer time slice; several gates may share a slice
when they act on disjoint subsystems.  Gate kinds know their matrix form
only; their functional (operator-valued) forms live in the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .operators import (
    DEFAULT_TOLERANCE,
    HADAMARD,
    Operator,
    SpaceLayout,
    embed_matrix,
    frobenius,
    qudit_shift_clock,
)


class NetworkError(ValueError):
    """Malformed network: bad times, overlapping slices, or gate/dim mismatch."""


def _require_dims(name: str, dims: tuple[int, ...], expected: tuple[int, ...]) -> None:
    if dims != expected:
        raise NetworkError(f"{name} expects subsystem dims {expected}, got {dims}")


@dataclass(frozen=True)
class Hadamard:
    n_subsystems = 1

    def matrix(self, dims: tuple[int, ...]) -> np.ndarray:
        _require_dims("H", dims, (2,))
        return HADAMARD.copy()

    def label(self) -> str:
        return "H"


@dataclass(frozen=True)
class RotationY:
    """Bloch-sphere rotation around the y axis by ``theta`` radians."""

    theta: float
    n_subsystems = 1

    def matrix(self, dims: tuple[int, ...]) -> np.ndarray:
        _require_dims("Ry", dims, (2,))
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)

    def label(self) -> str:
        return f"Ry({self.theta:g})"


@dataclass(frozen=True)
class Cnot:
    """Controlled-not; subsystems are (control, target)."""

    n_subsystems = 2

    def matrix(self, dims: tuple[int, ...]) -> np.ndarray:
        _require_dims("Cnot", dims, (2, 2))
        m = np.eye(4, dtype=complex)
        m[2:, 2:] = np.array([[0, 1], [1, 0]])
        return m

    def label(self) -> str:
        return "Cnot"


@dataclass(frozen=True)
class Plus:
    """|j> -> |j + k mod d> on one qudit."""

    k: int
    n_subsystems = 1

    def matrix(self, dims: tuple[int, ...]) -> np.ndarray:
        (d,) = dims
        shift, _ = qudit_shift_clock(d)
        return np.linalg.matrix_power(shift, self.k % d)

    def label(self) -> str:
        return f"+{self.k}"


@dataclass(frozen=True)
class ControlledPlus:
    """Adds k to the target qudit when the control qubit holds bit 1.

    Subsystems are (control qubit, target qudit); the shift fires on the
    -1 eigenvalue of the control's z observable.
    """

    k: int
    n_subsystems = 2

    def matrix(self, dims: tuple[int, ...]) -> np.ndarray:
        c, d = dims
        if c != 2:
            raise NetworkError(f"ControlledPlus control must be a qubit, got dim {c}")
        shift, _ = qudit_shift_clock(d)
        m = np.zeros((2 * d, 2 * d), dtype=complex)
        m[:d, :d] = np.eye(d)
        m[d:, d:] = np.linalg.matrix_power(shift, self.k % d)
        return m

    def label(self) -> str:
        return f"Ctrl-+{self.k}"


@dataclass(frozen=True, eq=False)
class CustomGate:
    """An arbitrary unitary supplied as an explicit matrix."""

    unitary: np.ndarray
    name: str = "custom"

    def __post_init__(self) -> None:
        u = np.array(self.unitary, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise NetworkError(f"custom gate matrix must be square, got {u.shape}")
        if frobenius(u.conj().T @ u - np.eye(u.shape[0])) > DEFAULT_TOLERANCE:
            raise NetworkError(f"custom gate {self.name!r} is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def n_subsystems(self) -> None:
        return None  # any subsystem count whose dim product matches

    def matrix(self, dims: tuple[int, ...]) -> np.ndarray:
        if self.unitary.shape[0] != prod(dims):
            raise NetworkError(
                f"custom gate dim {self.unitary.shape[0]} does not match "
                f"acted dims {dims}"
            )
        return self.unitary

    def label(self) -> str:
        return self.name


Gate = Hadamard | RotationY | Cnot | Plus | ControlledPlus | CustomGate


@dataclass(frozen=True)
class GateApplication:
    """One gate applied to an ordered tuple of subsystem ids at a time slice."""

    gate: Gate
    subsystems: tuple[str, ...]
    time: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        expected = self.gate.n_subsystems
        if expected is not None and len(self.subsystems) != expected:
            raise NetworkError(
                f"{self.gate.label()} acts on {expected} subsystem(s), "
                f"got {self.subsystems}"
            )
        if len(set(self.subsystems)) != len(self.subsystems):
            raise NetworkError(f"repeated subsystem in {self.subsystems}")
        if self.time < 0:
            raise NetworkError(f"negative gate time {self.time}")


@dataclass(frozen=True)
class Network:
    """Timed gate applications over a layout.

    Times must be non-decreasing and cover 0..n_steps-1 without gaps;
    gates sharing a slice must act on disjoint subsystems.
    """

    layout: SpaceLayout
    gates: tuple[GateApplication, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        times = [g.time for g in self.gates]
        if any(t2 < t1 for t1, t2 in zip(times, times[1:])):
            raise NetworkError("gate times must be non-decreasing")
        if times and sorted(set(times)) != list(range(max(times) + 1)):
            raise NetworkError(f"gate times {sorted(set(times))} leave gaps")
        for app in self.gates:
            dims = tuple(self.layout.dim_of(sid) for sid in app.subsystems)
            app.gate.matrix(dims)  # validates dims and unitarity
        for t in set(times):
            acted: set[str] = set()
            for app in self.gates:
                if app.time != t:
                    continue
                overlap = acted & set(app.subsystems)
                if overlap:
                    raise NetworkError(
                        f"slice {t}: subsystems {sorted(overlap)} acted twice"
                    )
                acted |= set(app.subsystems)

    @property
    def n_steps(self) -> int:
        return self.gates[-1].time + 1 if self.gates else 0

    def slices(self) -> list[list[GateApplication]]:
        out: list[list[GateApplication]] = [[] for _ in range(self.n_steps)]
        for app in self.gates:
            out[app.time].append(app)
        return out

    def embedded(self, app: GateApplication) -> Operator:
        """The gate's matrix tensored into the full space."""
        dims = tuple(self.layout.dim_of(sid) for sid in app.subsystems)
        return Operator(
            self.layout, embed_matrix(app.gate.matrix(dims), app.subsystems, self.layout)
        )

    def has_custom_gates(self) -> bool:
        return any(isinstance(app.gate, CustomGate) for app in self.gates)
