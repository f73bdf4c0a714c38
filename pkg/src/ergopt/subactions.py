"""Construction and verification of sub-actions: the calibrated family
parametrized by boundary data on the critical components, the dominant
member, finite-depth separating sub-actions with their certificates,
contact loci, convex combinations, and the u - v gap analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    BudgetExceeded,
    IncompatibleOrder,
    NotASubAction,
    NotCalibrated,
    NotInConstraintSet,
)
from .symbolic import DeBruijnGraph, Word, lift_to, lift_values
from .tropical import (
    CriticalStructure,
    calibrated_fixed_point,
    constraint_polytope,
    lax_oleinik_step,
    mane_matrix,
    peierls_matrix,
)


@dataclass(frozen=True)
class SubAction:
    """Node function at a fixed cylinder depth, with its origin tag."""

    depth: int
    values: tuple[Fraction, ...]
    provenance: str  # calibrated-from-boundary | dominant | separating | user-supplied


@dataclass(frozen=True)
class ContactSet:
    depth: int
    tight_edges: tuple[int, ...]
    tight_words: tuple[Word, ...]


@dataclass(frozen=True)
class BoundaryData:
    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class Verdict:
    is_subaction: bool
    is_calibrated: bool
    separating_certificate: bool
    critical_containment: bool
    tight_words: tuple[Word, ...]
    noncritical_tight_words: tuple[Word, ...]


@dataclass(frozen=True)
class SeparatingCertificate:
    ok: bool
    depth: int
    gamma: Fraction
    passes: int
    tight_words: tuple[Word, ...]
    residual_words: tuple[Word, ...]


@dataclass(frozen=True)
class GapReport:
    component_constants: tuple[Fraction, ...]
    minimum: Fraction
    argmin_nodes: tuple[int, ...]
    min_on_critical: Fraction
    attained_component: int


def itinerary_component(word: Word, crit: CriticalStructure) -> int | None:
    """Component index when every base step of `word` is a critical edge
    of one component; None otherwise.

    A bare node word (length = base order) is classified by its node.
    Consecutive critical edges share a node, and components are
    node-disjoint, so a fully critical word can never mix components;
    the cross-check stays because it is cheap.
    """
    graph: DeBruijnGraph = crit.graph
    r = graph.order
    if len(word) < r:
        raise ValueError(f"word {word} is shorter than the graph order {r}")
    if len(word) == r:
        return crit.node_component[graph.node_index(word)]
    comp: int | None = None
    for i in range(len(word) - r):
        k = graph.edge_index(word[i : i + r + 1])
        c = crit.edge_component.get(k)
        if c is None:
            return None
        if comp is None:
            comp = c
        elif c != comp:
            return None
    return comp


def _slacks(values: Sequence[Fraction], graph, weights: Sequence[Fraction],
            abar: Fraction) -> list[Fraction]:
    return [
        weights[k] - abar - values[e.head] + values[e.tail]
        for k, e in enumerate(graph.edges)
    ]


def calibrated_from_boundary(bd, crit: CriticalStructure,
                             h: Sequence[Sequence[Fraction]]) -> SubAction:
    """u(x) = min over components i of [u_i + h(rep_i, x)].

    Boundary data must satisfy the pairwise constraints
    u_j - u_i <= h(rep_i, rep_j); then u extends it, is calibrated, and
    restricting back to the representatives returns the data unchanged.
    """
    values = tuple(Fraction(v) for v in getattr(bd, "values", bd))
    reps = crit.representatives
    if len(values) != len(reps):
        raise ValueError(f"expected {len(reps)} boundary values, got {len(values)}")
    for i in range(len(reps)):
        for j in range(len(reps)):
            if values[j] - values[i] > h[reps[i]][reps[j]]:
                raise NotInConstraintSet(
                    f"boundary data violates u[{j}] - u[{i}] <= h(rep {i}, rep {j}) "
                    f"= {h[reps[i]][reps[j]]}"
                )
    n = crit.graph.n_nodes
    u = tuple(
        min(values[i] + h[reps[i]][x] for i in range(len(reps)))
        for x in range(n)
    )
    return SubAction(crit.graph.order, u, "calibrated-from-boundary")


def dominant_calibrated(i0: int, u_i0, crit: CriticalStructure,
                        h: Sequence[Sequence[Fraction]]) -> SubAction:
    """The unique calibrated sub-action whose boundary data is induced
    by component i0: u = u_i0 + h(rep_i0, .)."""
    reps = crit.representatives
    if not 0 <= i0 < len(reps):
        raise ValueError(f"component index {i0} out of range 0..{len(reps) - 1}")
    if not crit.node_disjoint:
        raise ValueError("dominant construction requires node-disjoint components")
    u_i0 = Fraction(u_i0)
    bd = tuple(u_i0 + h[reps[i0]][reps[j]] for j in range(len(reps)))
    direct = tuple(u_i0 + h[reps[i0]][x] for x in range(crit.graph.n_nodes))
    rebuilt = calibrated_from_boundary(bd, crit, h)
    if rebuilt.values != direct:
        raise AssertionError("dominant row disagrees with its boundary reconstruction")
    for i1 in range(len(reps)):
        if i1 == i0:
            continue
        if all(bd[j] == bd[i1] + h[reps[i1]][reps[j]] for j in range(len(reps))):
            raise AssertionError(
                f"component {i1} also reproduces the dominant boundary data; "
                "components cannot be disjoint"
            )
    return SubAction(crit.graph.order, direct, "dominant")


def contact_locus(u: SubAction, graph, weights: Sequence[Fraction],
                  abar: Fraction) -> ContactSet:
    """Edges where the sub-action inequality is an equality."""
    if u.depth != graph.order or len(u.values) != graph.n_nodes:
        raise IncompatibleOrder(
            f"sub-action depth {u.depth} does not match graph order {graph.order}"
        )
    slacks = _slacks(u.values, graph, weights, abar)
    for k, s in enumerate(slacks):
        if s < 0:
            raise NotASubAction(f"edge {graph.edges[k].word} has negative slack {s}")
    tight = tuple(k for k, s in enumerate(slacks) if s == 0)
    return ContactSet(u.depth, tight, tuple(graph.edges[k].word for k in tight))


def verify(u: SubAction, graph, weights: Sequence[Fraction], abar: Fraction,
           crit: CriticalStructure) -> Verdict:
    """Check the four defining predicates of u against the base system.

    The base graph is lifted to u's depth; nothing raises, the verdicts
    just report.
    """
    lifted, lw = lift_to(graph, weights, u.depth)
    if len(u.values) != lifted.n_nodes:
        raise IncompatibleOrder(
            f"sub-action carries {len(u.values)} values but depth {u.depth} "
            f"has {lifted.n_nodes} nodes"
        )
    slacks = _slacks(u.values, lifted, lw, abar)
    is_sub = all(s >= 0 for s in slacks)
    tight = [k for k, s in enumerate(slacks) if s == 0]
    tight_words = tuple(lifted.edges[k].word for k in tight)
    is_cal = is_sub and lax_oleinik_step(u.values, lifted, lw, abar) == u.values
    noncritical = tuple(
        w for w in tight_words if itinerary_component(w, crit) is None
    )
    certificate = is_sub and not noncritical
    containment = all(
        slacks[k] == 0
        for k, e in enumerate(lifted.edges)
        if itinerary_component(e.word, crit) is not None
    )
    return Verdict(is_sub, is_cal, certificate, containment, tight_words, noncritical)


def _phi_row(graph, weights: Sequence[Fraction], source: int) -> list[Fraction]:
    """Minimum weight of a nonempty path from source to each node."""
    dist: list[Fraction | None] = [None] * graph.n_nodes
    for k in graph.out_edges[source]:
        e = graph.edges[k]
        if dist[e.head] is None or weights[k] < dist[e.head]:
            dist[e.head] = weights[k]
    for _ in range(graph.n_nodes):
        changed = False
        for k, e in enumerate(graph.edges):
            d = dist[e.tail]
            if d is None:
                continue
            cand = d + weights[k]
            if dist[e.head] is None or cand < dist[e.head]:
                dist[e.head] = cand
                changed = True
        if not changed:
            break
    assert all(d is not None for d in dist)
    return dist  # type: ignore[return-value]


def _phi_col(graph, weights: Sequence[Fraction], target: int) -> list[Fraction]:
    """Minimum weight of a nonempty path from each node into target."""
    dist: list[Fraction | None] = [None] * graph.n_nodes
    for k in graph.in_edges[target]:
        e = graph.edges[k]
        if dist[e.tail] is None or weights[k] < dist[e.tail]:
            dist[e.tail] = weights[k]
    for _ in range(graph.n_nodes):
        changed = False
        for k, e in enumerate(graph.edges):
            d = dist[e.head]
            if d is None:
                continue
            cand = weights[k] + d
            if dist[e.tail] is None or cand < dist[e.tail]:
                dist[e.tail] = cand
                changed = True
        if not changed:
            break
    assert all(d is not None for d in dist)
    return dist  # type: ignore[return-value]


def _lifted_representative(lifted: DeBruijnGraph, crit: CriticalStructure,
                           comp_index: int) -> int:
    for n, word in enumerate(lifted.node_words):
        if itinerary_component(word, crit) == comp_index:
            return n
    raise AssertionError(f"component {comp_index} has no itinerary word at this depth")


def separating_subaction(graph, weights: Sequence[Fraction], abar: Fraction,
                         crit: CriticalStructure, depth_budget: int,
                         gamma: Fraction = Fraction(1, 2),
                         h: Sequence[Sequence[Fraction]] | None = None
                         ) -> tuple[SubAction, SeparatingCertificate]:
    """Finite-depth separating sub-action by perturb-and-average.

    Starting from the calibrated fixed point lifted to the working
    depth, each pass normalizes by the current sub-action (slacks B>=0),
    forms a family of B-compatible perturbations (j-step forward minima
    for j=1..depth, plus each component's barrier row from and potential
    column into a critical representative), and averages them into the
    sub-action. Tight sets intersect across the family, critical
    itineraries stay tight under every member, so the tight set shrinks
    toward the critical words; passes repeat until the certificate holds
    or the tight set stops moving.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie strictly between 0 and 1, got {gamma}")
    if depth_budget < graph.order:
        raise ValueError(
            f"depth budget {depth_budget} is below the graph order {graph.order}"
        )
    v = calibrated_fixed_point(graph, weights, abar, crit, h)
    lifted, lw = lift_to(graph, weights, depth_budget)
    u = lift_values(v, graph, lifted)
    reps = [
        _lifted_representative(lifted, crit, c.index) for c in crit.components
    ]
    max_passes = lifted.n_edges + 4
    prev_zero: frozenset[int] | None = None
    passes = 0
    while True:
        slacks = _slacks(u, lifted, lw, abar)
        assert all(s >= 0 for s in slacks), "perturbation broke the sub-action bound"
        zero = frozenset(k for k, s in enumerate(slacks) if s == 0)
        tight_words = tuple(lifted.edges[k].word for k in sorted(zero))
        residual = tuple(
            w for w in tight_words if itinerary_component(w, crit) is None
        )
        if not residual:
            sub = SubAction(depth_budget, tuple(u), "separating")
            return sub, SeparatingCertificate(
                True, depth_budget, gamma, passes, tight_words, ()
            )
        if zero == prev_zero or passes >= max_passes:
            sub = SubAction(depth_budget, tuple(u), "separating")
            raise BudgetExceeded(
                f"separating certificate not reached at depth {depth_budget}: "
                f"{len(residual)} non-critical tight words remain",
                best=sub,
                residual_words=residual,
            )
        prev_zero = zero
        passes += 1

        # Perturbation family. Signs make each member a sub-action:
        # forward minima and potential columns fall along cheap edges
        # (subtract), barrier rows rise along them (add).
        family: list[tuple[int, Sequence[Fraction]]] = []
        wj = [Fraction(0)] * lifted.n_nodes
        for _ in range(depth_budget):
            wj = [
                min(slacks[k] + wj[lifted.edges[k].head] for k in lifted.out_edges[x])
                for x in range(lifted.n_nodes)
            ]
            family.append((-1, list(wj)))
        for rep in reps:
            family.append((+1, _phi_row(lifted, slacks, rep)))
            family.append((-1, _phi_col(lifted, slacks, rep)))
        step = gamma / len(family)
        u = tuple(
            u[x] + step * sum(sign * g[x] for sign, g in family)
            for x in range(lifted.n_nodes)
        )


def gap_analysis(u: SubAction, v: SubAction, graph, weights: Sequence[Fraction],
                 abar: Fraction, crit: CriticalStructure) -> GapReport:
    """Where a calibrated u sits above another sub-action v.

    u - v is constant on every critical component, and its global
    minimum over all nodes is attained on the critical words, indeed on
    at least one whole component; both facts are checked exactly.
    """
    if u.depth != v.depth:
        raise IncompatibleOrder(f"depths differ: {u.depth} vs {v.depth}")
    lifted, lw = lift_to(graph, weights, u.depth)
    for name, sub in (("u", u), ("v", v)):
        if len(sub.values) != lifted.n_nodes:
            raise IncompatibleOrder(f"{name} does not fit depth {sub.depth}")
        if any(s < 0 for s in _slacks(sub.values, lifted, lw, abar)):
            raise NotASubAction(f"{name} violates the sub-action inequality")
    if lax_oleinik_step(u.values, lifted, lw, abar) != u.values:
        raise NotCalibrated("u is not a fixed point of the one-step minimum")

    diff = [a - b for a, b in zip(u.values, v.values)]
    comp_nodes: list[list[int]] = [[] for _ in crit.components]
    for n, word in enumerate(lifted.node_words):
        c = itinerary_component(word, crit)
        if c is not None:
            comp_nodes[c].append(n)
    constants = []
    for c, nodes in enumerate(comp_nodes):
        assert nodes, f"component {c} has no itinerary node at depth {u.depth}"
        vals = {diff[n] for n in nodes}
        if len(vals) != 1:
            raise AssertionError(f"u - v is not constant on component {c}")
        constants.append(vals.pop())
    minimum = min(diff)
    argmin = tuple(n for n, d in enumerate(diff) if d == minimum)
    min_critical = min(diff[n] for nodes in comp_nodes for n in nodes)
    if min_critical != minimum:
        raise AssertionError("minimum of u - v is not attained on a critical word")
    attained = next(c for c, const in enumerate(constants) if const == minimum)
    return GapReport(tuple(constants), minimum, argmin, min_critical, attained)


def convex_combination(subactions: Sequence[SubAction],
                       coefficients: Sequence[Fraction]) -> SubAction:
    """Rational convex combination; the tight set becomes the
    intersection of the constituents' tight sets."""
    if not subactions or len(subactions) != len(coefficients):
        raise ValueError("need matching, nonempty sub-actions and coefficients")
    depth = subactions[0].depth
    if any(s.depth != depth for s in subactions):
        raise IncompatibleOrder("convex combination requires equal depths")
    coeffs = [Fraction(c) for c in coefficients]
    if any(c < 0 for c in coeffs) or sum(coeffs) != 1:
        raise ValueError("coefficients must be nonnegative rationals summing to 1")
    n = len(subactions[0].values)
    values = tuple(
        sum(c * s.values[x] for c, s in zip(coeffs, subactions))
        for x in range(n)
    )
    return SubAction(depth, values, "user-supplied")
