"""Foliation of descriptors into labeled relative descriptors.

A conditioned interaction whose control observable is unsharp splits a
descriptor into projector-weighted instances, one per control eigenvalue.
Each branch keeps three things: its label history, the accumulated
projector onto the controlling eigenvalues, and the accumulated
conditioned unitary (expressed in the base descriptor's components, which
is where every later gate polynomial must be expressed as well).  The
branch's relative descriptor is projector * W^dag(base components)W and
the branch measure is the reference expectation of the projector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import Descriptor
from .operators import (
    DEFAULT_TOLERANCE,
    AlgebraError,
    Operator,
    projector_pm,
)


class FoliationError(AlgebraError):
    """Control observable unsuitable for foliation."""


@dataclass(frozen=True)
class Branch:
    labels: tuple[tuple[str, int], ...]
    projector: Operator
    conditional: Operator
    measure: float

    @property
    def key(self) -> str:
        """Label bits in foliation order: eigenvalue +1 is bit 0."""
        return "".join("0" if sign == 1 else "1" for _, sign in self.labels)


@dataclass(frozen=True)
class Foliation:
    base: Descriptor
    branches: tuple[Branch, ...]

    def relative_components(self, branch: Branch) -> tuple[Operator, ...]:
        w = branch.conditional
        w_dag = w.H
        return tuple(
            branch.projector @ (w_dag @ c @ w) for c in self.base.components
        )

    def branch_sum(self) -> tuple[Operator, ...]:
        """Componentwise sum of all relative descriptors; reconstructs the
        evolved descriptor."""
        totals = None
        for branch in self.branches:
            comps = self.relative_components(branch)
            totals = comps if totals is None else tuple(
                t + c for t, c in zip(totals, comps)
            )
        assert totals is not None
        return totals

    def measures(self) -> dict[str, float]:
        return {b.key: b.measure for b in self.branches}

    def refine(
        self,
        control: Operator,
        gate_poly: Operator,
        control_id: str,
        tol: float = DEFAULT_TOLERANCE,
    ) -> "Foliation":
        """Foliate every branch again with a further conditioned interaction.

        ``gate_poly`` is the conditioned unitary expressed in the base
        components; within a branch it composes on the left of the
        accumulated conditional.
        """
        _check_control(control, self.base, tol)
        proj = {s: projector_pm(control, s, tol) for s in (+1, -1)}
        new_branches = []
        for branch in self.branches:
            for sign in (+1, -1):
                projector = branch.projector @ proj[sign]
                conditional = (
                    branch.conditional if sign == +1 else gate_poly @ branch.conditional
                )
                new_branches.append(
                    Branch(
                        branch.labels + ((control_id, sign),),
                        projector,
                        conditional,
                        _real_measure(projector, tol),
                    )
                )
        return Foliation(self.base, tuple(new_branches))

    def evolve_branches(self, gate_poly: Operator) -> "Foliation":
        """Follow-up unitary on the foliated system alone: every branch
        evolves independently, no splitting.  ``gate_poly`` again in base
        components."""
        return Foliation(
            self.base,
            tuple(
                Branch(b.labels, b.projector, gate_poly @ b.conditional, b.measure)
                for b in self.branches
            ),
        )


def foliate(
    target: Descriptor,
    control: Operator,
    gate_poly: Operator,
    control_id: str = "control",
    tol: float = DEFAULT_TOLERANCE,
) -> Foliation:
    """Split ``target`` under a conditioned interaction into two labeled
    relative descriptors.

    The +1 branch of the control is untouched; the -1 branch is conjugated
    by ``gate_poly`` (the conditioned unitary's functional form at the
    target's current time).  A sharp control is permitted and yields a
    measure-0 branch.
    """
    _check_control(control, target, tol)
    if not gate_poly.is_unitary(tol):
        raise FoliationError("conditioned gate polynomial is not unitary")
    branches = []
    for sign, conditional in (
        (+1, Operator.identity(target.layout)),
        (-1, gate_poly),
    ):
        projector = projector_pm(control, sign, tol)
        branches.append(
            Branch(
                ((control_id, sign),),
                projector,
                conditional,
                _real_measure(projector, tol),
            )
        )
    return Foliation(target, tuple(branches))


def branch_measure(
    projectors: Sequence[Operator], tol: float = DEFAULT_TOLERANCE
) -> float:
    """Reference expectation of a product of commuting projectors."""
    for i, p in enumerate(projectors):
        if not p.is_projector(tol):
            raise AlgebraError(f"argument {i} is not a hermitian idempotent")
        for q in projectors[i + 1 :]:
            if not p.commutes_with(q, tol):
                raise AlgebraError("branch projectors do not commute")
    if not projectors:
        return 1.0
    product = projectors[0]
    for p in projectors[1:]:
        product = product @ p
    return _real_measure(product, tol)


def _check_control(control: Operator, target: Descriptor, tol: float) -> None:
    if not control.is_involution(tol):
        raise FoliationError("control observable is not an involution")
    for c in target.components:
        if not control.commutes_with(c, tol):
            raise FoliationError(
                "control observable does not commute with the target descriptor"
            )


def _real_measure(projector: Operator, tol: float) -> float:
    value = projector.expectation()
    if abs(value.imag) > tol:
        raise AlgebraError(f"branch measure has imaginary part {value.imag}")
    return float(value.real)
