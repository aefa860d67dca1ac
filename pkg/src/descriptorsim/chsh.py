"""The CHSH game: classical strategy exhaustion and the quantum strategy.

Two cooperating players each receive a bit and answer a bit; they win
when the product of the questions equals the parity of the answers.
Deterministic strategies are exhaustively enumerable (there are 16) and
win at most 3 of the 4 input pairs; shared randomness cannot help, so the
classical expected win rate is capped at 3/4.  The quantum strategy
rotates each player's half of an entangled pair by an input-dependent
angle before measuring, and wins with rate cos^2(pi/8).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .bell import BellConfig, run_bell
from .operators import DEFAULT_TOLERANCE

ALICE_ANGLES = (0.0, math.pi / 2)
BOB_ANGLES = (math.pi / 4, -math.pi / 4)
CLASSICAL_BOUND = Fraction(3, 4)
INPUT_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def win_predicate(x: int, y: int, a: int, b: int) -> bool:
    """Product of the questions equals the parity of the answers."""
    for name, bit in (("x", x), ("y", y), ("a", a), ("b", b)):
        if bit not in (0, 1):
            raise ValueError(f"{name} must be a bit, got {bit}")
    return (x & y) == (a ^ b)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Fixed answer functions; element i is the answer to question i."""

    alice: tuple[int, int]
    bob: tuple[int, int]

    def wins(self) -> int:
        """How many of the four input pairs this strategy wins (exact)."""
        return sum(
            win_predicate(x, y, self.alice[x], self.bob[y]) for x, y in INPUT_PAIRS
        )


def all_strategies() -> list[DeterministicStrategy]:
    bits = ((0, 0), (0, 1), (1, 0), (1, 1))
    return [DeterministicStrategy(a, b) for a, b in product(bits, bits)]


def enumerate_classical() -> tuple[int, list[DeterministicStrategy]]:
    """Exhaustively score all 16 deterministic strategies; returns the best
    win count (out of 4) and every strategy achieving it."""
    strategies = all_strategies()
    best = max(s.wins() for s in strategies)
    return best, [s for s in strategies if s.wins() == best]


def expected_win_rate(strategies: list[DeterministicStrategy]) -> Fraction:
    """Exact expected rate of a uniform shared-randomness mixture."""
    if not strategies:
        raise ValueError("empty strategy mixture")
    return Fraction(sum(s.wins() for s in strategies), 4 * len(strategies))


def quantum_distribution(
    x: int, y: int, tolerance: float = DEFAULT_TOLERANCE
) -> dict[str, float]:
    """Outcome distribution of the entangled strategy for one input pair,
    straight from the Bell experiment at the strategy's angles."""
    if x not in (0, 1) or y not in (0, 1):
        raise ValueError(f"inputs must be bits, got ({x}, {y})")
    cfg = BellConfig(ALICE_ANGLES[x], BOB_ANGLES[y], tolerance=tolerance)
    return run_bell(cfg).branch_measures


def chsh_win_rate(
    tolerance: float = DEFAULT_TOLERANCE,
    alice_angles: tuple[float, float] = ALICE_ANGLES,
    bob_angles: tuple[float, float] = BOB_ANGLES,
) -> float:
    """Expected win rate of the rotation strategy over uniform inputs;
    defaults to the optimal angle table."""
    total = 0.0
    for x, y in INPUT_PAIRS:
        cfg = BellConfig(alice_angles[x], bob_angles[y], tolerance=tolerance)
        dist = run_bell(cfg).branch_measures
        total += sum(
            p for key, p in dist.items() if win_predicate(x, y, int(key[0]), int(key[1]))
        )
    return total / 4


def referee_demo(seed: int, rounds: int = 1000) -> float:
    """Monte-Carlo referee sampling inputs and outcomes; demonstration
    only, the analytic rate is :func:`chsh_win_rate`."""
    rng = np.random.default_rng(seed)
    rows = {(x, y): quantum_distribution(x, y) for x, y in INPUT_PAIRS}
    wins = 0
    for _ in range(rounds):
        x, y = INPUT_PAIRS[rng.integers(4)]
        keys = list(rows[(x, y)])
        outcome = rng.choice(keys, p=[rows[(x, y)][k] for k in keys])
        wins += win_predicate(x, y, int(outcome[0]), int(outcome[1]))
    return wins / rounds
