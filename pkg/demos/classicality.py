"""Decoherence and chain reactions leave the branch measures untouched.

Two ways the Bell experiment becomes more realistic: an environment qubit
copies the particle's measurement basis before the observer does
(decoherence), and outcomes travel to the record through chains of fresh
qubits instead of directly (classical communication).  Neither changes a
single branch measure.
"""

import math

from descriptorsim import (
    BellConfig,
    Chained,
    Decohered,
    run_bell,
    run_chain,
    run_decoherence,
)

theta, phi = 0.0, math.pi / 4
plain = run_bell(BellConfig(theta, phi)).branch_measures
print("plain measures:        ",
      {k: round(v, 10) for k, v in plain.items()})

print("\ndecoherence, one scrambled environment per seed:")
for seed in (0, 1, 2026):
    out = run_decoherence(BellConfig(theta, phi, Decohered(seed)))
    drift = max(abs(out.branch_measures[k] - plain[k]) for k in plain)
    print(f"  seed {seed:>5}: max drift from plain {drift:.2e}  "
          f"(Q1 coherence after interaction: {out.diagnostics['q1_offdiagonal']:.1e})")

print("\nchain reactions, outcomes relayed through fresh qubits:")
for lengths in ((0, 0), (1, 1), (2, 2), (2, 0)):
    out = run_chain(BellConfig(theta, phi, Chained(*lengths)))
    drift = max(abs(out.branch_measures[k] - plain[k]) for k in plain)
    print(f"  chain lengths {lengths}: max drift from plain {drift:.2e}")

print("\nThe copies only multiply the branch projector arguments by factors "
      "that hold value 1\non the reference vector, so the four measures are "
      "invariant: robustness to decoherence\nand relayed communication are "
      "exactly what makes these processes classical.")
