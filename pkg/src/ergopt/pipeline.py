"""One-call pipeline from a system and potential to the full solve bundle."""

from __future__ import annotations

from dataclasses import dataclass

from .instances import Instance
from .potential import (
    OneSidedPotential,
    TwoSidedPotential,
    compile_weights,
    reduce_two_sided,
)
from .symbolic import DEFAULT_NODE_BUDGET, DeBruijnGraph, SftSystem, refine
from .tropical import (
    BarrierMatrices,
    CriticalStructure,
    ErgodicSummary,
    calibrated_fixed_point,
    critical_structure,
    mane_matrix,
    minimizing_value,
    peierls_matrix,
)


@dataclass(frozen=True, eq=False)
class SolveBundle:
    sft: SftSystem
    potential: OneSidedPotential
    source_potential: OneSidedPotential | TwoSidedPotential
    graph: DeBruijnGraph
    weights: tuple
    summary: ErgodicSummary
    barriers: BarrierMatrices
    crit: CriticalStructure
    fixed_point: tuple

    @property
    def abar(self):
        return self.summary.abar


def solve_potential(sft, potential, order=None, node_budget=DEFAULT_NODE_BUDGET):
    """Refine, weight, and solve; returns everything downstream needs.

    A two-sided table is first reduced to its one-sided envelope. The
    working order defaults to the smallest one carrying the weights.
    """
    source = potential
    if isinstance(potential, TwoSidedPotential):
        potential = reduce_two_sided(potential, sft)
    if order is None:
        order = max(potential.range - 1, 1)
    graph = refine(sft, order, node_budget=node_budget)
    weights = compile_weights(potential, graph)
    summary = minimizing_value(graph, weights)
    phi = mane_matrix(graph, weights, summary.abar)
    crit = critical_structure(graph, weights, summary.abar, phi)
    h = peierls_matrix(graph, weights, summary.abar, phi, crit)
    barriers = BarrierMatrices(phi=phi, h=h)
    fixed_point = calibrated_fixed_point(graph, weights, summary.abar, crit, h=h)
    return SolveBundle(
        sft=sft,
        potential=potential,
        source_potential=source,
        graph=graph,
        weights=weights,
        summary=summary,
        barriers=barriers,
        crit=crit,
        fixed_point=fixed_point,
    )


def solve_instance(instance: Instance, order=None, node_budget=DEFAULT_NODE_BUDGET):
    return solve_potential(
        instance.sft, instance.potential, order=order, node_budget=node_budget
    )
