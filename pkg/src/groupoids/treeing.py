"""Graphings, treeings, cost, and the induction onto a restriction.

A symmetric arrow set away from the units draws, over each unit x, the
graph whose vertices are the arrows ranged at x, with g adjacent to h
when g^-1 h lies in the set.  The induction takes an oriented treeing
and a target unit set Y and produces a treeing of the restriction to Y
with the same cost as the part of the original treeing it consumes:

* d(g) is the fiber-graph distance from g to the Y-sourced vertices;
  it only depends on the source of g, and is computed here by honest
  per-fiber breadth-first search.
* every arrow at distance n slides one step closer along the first
  piece (in the fixed deterministic piece enumeration) that decreases
  d; iterating gives the sliding map f.
* the slide steps form the discarded part of the treeing (exactly one
  chosen step per unit outside Y); every surviving edge is pushed to
  an edge between slid endpoints, giving the induced treeing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (ArrowSet, FiniteGroupoid, InputError, Restriction,
                   is_pmp, mu_r, restrict)
from .report import Report


class OrientedGraphing:
    """A symmetric arrow set with a chosen half: psi = psi_plus | psi_plus^-1."""

    def __init__(self, parent: FiniteGroupoid, psi_plus: Iterable[int]):
        self.parent = parent
        self.psi_plus = frozenset(psi_plus)
        units = parent.unit_arrows()
        if self.psi_plus & units:
            raise InputError("oriented half contains unit arrows")
        inv = frozenset(parent.inverse[g] for g in self.psi_plus)
        if self.psi_plus & inv:
            raise InputError("orientation broken: an arrow and its inverse both chosen")
        self.psi = self.psi_plus | inv

    def __contains__(self, g: int) -> bool:
        return g in self.psi


@dataclass
class FiberGraph:
    """The graph drawn by a symmetric arrow set over one unit."""
    base: int
    vertices: tuple[int, ...]
    adjacency: dict[int, tuple[int, ...]]
    edge_arrow: dict[tuple[int, int], int]   # (g, h) -> g^-1 h

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        frontier = [self.vertices[0]]
        while frontier:
            v = frontier.pop()
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == len(self.vertices)

    def is_tree(self) -> bool:
        edges = sum(len(v) for v in self.adjacency.values()) // 2
        return self.is_connected() and edges == len(self.vertices) - 1

    def distances_from(self, sources: Iterable[int]) -> dict[int, int]:
        dist = {v: 0 for v in sources}
        frontier = sorted(dist)
        while frontier:
            nxt = []
            for v in frontier:
                for w in self.adjacency[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        return dist


def fiber_graph(G: FiniteGroupoid, psi: frozenset[int], x: int) -> FiberGraph:
    verts = G.fiber_r(x)
    adj: dict[int, list[int]] = {g: [] for g in verts}
    edge_arrow = {}
    for g in verts:
        gi = G.inverse[g]
        for h in verts:
            step = G.compose(gi, h)
            if step in psi:
                adj[g].append(h)
                edge_arrow[(g, h)] = step
    return FiberGraph(x, verts, {g: tuple(sorted(v)) for g, v in adj.items()},
                      edge_arrow)


def is_graphing(G: FiniteGroupoid, graphing: OrientedGraphing) -> bool:
    return all(fiber_graph(G, graphing.psi, x).is_connected() for x in G.points())


def is_treeing(G: FiniteGroupoid, graphing: OrientedGraphing) -> bool:
    return all(fiber_graph(G, graphing.psi, x).is_tree() for x in G.points())


def cost(G: FiniteGroupoid, arrows: Iterable[int]) -> Fraction:
    """Half the range measure of a symmetric arrow set."""
    members = frozenset(arrows)
    if members != frozenset(G.inverse[g] for g in members):
        raise InputError("cost needs a symmetric arrow set")
    return mu_r(G, members) / 2


def decompose_pieces(graphing: OrientedGraphing) -> list[ArrowSet]:
    """Deterministic split of the graphing into paired bisections.

    Odd positions (1-based) hold sub-bisections of the oriented half,
    each immediately followed by its inverse; greedy by arrow index.
    """
    G = graphing.parent
    plus_pieces: list[list[int]] = []
    for g in sorted(graphing.psi_plus):
        for piece in plus_pieces:
            if all(G.range_[h] != G.range_[g] and G.source[h] != G.source[g]
                   for h in piece):
                piece.append(g)
                break
        else:
            plus_pieces.append([g])
    out: list[ArrowSet] = []
    for piece in plus_pieces:
        plus = ArrowSet(G, piece)
        out.append(plus)
        out.append(plus.inverse())
    return out


@dataclass
class InductionState:
    parent: FiniteGroupoid
    graphing: OrientedGraphing
    y_units: frozenset[int]
    pieces: list[ArrowSet]
    d: dict[int, Optional[int]]          # arrow -> distance (None off the target)
    f_map: dict[int, int]                # arrow -> slid arrow
    step_of_unit: dict[int, int]         # unit outside Y -> chosen step arrow
    psi0_plus: frozenset[int]
    psi0: frozenset[int]
    psi1: frozenset[int]
    j_map: dict[int, int]                # surviving arrow -> induced arrow
    theta: frozenset[int]
    theta_plus: frozenset[int]
    skipped_orbits: list[tuple[int, ...]] = field(default_factory=list)

    def restriction(self) -> Restriction:
        return restrict(self.parent, sorted(self.y_units))

    def theta_graphing(self) -> OrientedGraphing:
        """The induced treeing as an oriented graphing of the restriction."""
        sub = self.restriction()
        back = {g: i for i, g in enumerate(sub.parent_arrows)}
        return OrientedGraphing(sub, [back[g] for g in self.theta_plus])


def induce_treeing(G: FiniteGroupoid, graphing: OrientedGraphing,
                   y_units: Iterable[int],
                   allow_partial: bool = False) -> InductionState:
    """Run the induction of an oriented treeing onto the units in Y."""
    Y = frozenset(y_units)
    if not Y:
        raise InputError("target unit set is empty")
    if not Y <= frozenset(G.points()):
        raise InputError("target units outside the unit space")
    if not is_treeing(G, graphing):
        raise InputError("the given graphing is not a treeing")
    skipped = [tuple(sorted(orb)) for orb in G.orbits() if not (orb & Y)]
    if skipped and not allow_partial:
        raise InputError(
            f"target misses {len(skipped)} orbit(s); pass allow_partial to skip them")
    pieces = decompose_pieces(graphing)

    d: dict[int, Optional[int]] = {}
    for x in G.points():
        fg = fiber_graph(G, graphing.psi, x)
        targets = [g for g in fg.vertices if G.source[g] in Y]
        dist = fg.distances_from(targets)
        for g in fg.vertices:
            d[g] = dist.get(g)

    def step_at(x: int) -> int:
        """First piece whose step at x moves one unit closer to Y."""
        base = d[G.unit_of[x]]
        for piece in pieces:
            if x not in piece.r_set():
                continue
            step = piece.at(x)
            nxt = d[G.unit_of[G.source[step]]]
            if base is not None and nxt == base - 1:
                return step
        raise InputError(f"no distance-decreasing step at unit {x}")

    step_of_unit = {x: step_at(x)
                    for x in G.points()
                    if x not in Y and d[G.unit_of[x]] is not None}

    f_map: dict[int, int] = {}
    for g in G.arrows():
        if d[g] is None:
            continue
        cur = g
        while G.source[cur] not in Y:
            cur = G.compose(cur, step_of_unit[G.source[cur]])
        f_map[g] = cur

    psi0_plus = frozenset(step_of_unit.values())
    psi0 = psi0_plus | frozenset(G.inverse[g] for g in psi0_plus)
    live = frozenset(g for g in graphing.psi if d[g] is not None)
    psi1 = live - psi0

    j_map: dict[int, int] = {}
    for gamma in sorted(psi1):
        anchor = G.unit_of[G.range_[gamma]]
        j_map[gamma] = G.compose(G.inverse[f_map[anchor]], f_map[gamma])
    theta = frozenset(j_map.values())
    theta_plus = frozenset(j_map[g] for g in psi1 & graphing.psi_plus)
    return InductionState(G, graphing, Y, pieces, d, f_map, step_of_unit,
                          psi0_plus, psi0, psi1, j_map, theta, theta_plus,
                          skipped)


def verify_induction(state: InductionState) -> Report:
    """Exhaustive checks of the induction's invariants on a finite instance."""
    G = state.parent
    rep = Report()
    ok = all(state.d[G.compose(gamma, g)] == state.d[g]
             for g in G.arrows() if state.d[g] is not None
             for gamma in G.fiber_s(G.range_[g]))
    rep.add("induction.distance-left-invariant", ok,
            "d(gamma*g) == d(g) for every composable pair")
    ok = True
    for g, fg in state.f_map.items():
        for gamma in G.fiber_s(G.range_[g]):
            if state.f_map[G.compose(gamma, g)] != G.compose(gamma, fg):
                ok = False
    rep.add("induction.slide-equivariant", ok,
            "f(gamma*g) == gamma*f(g) for every composable pair")
    per_range: dict[int, list[int]] = {}
    for g in state.psi0_plus:
        per_range.setdefault(G.range_[g], []).append(g)
    reachable = {x for x in G.points()
                 if state.d[G.unit_of[x]] is not None}
    ok = (all(len(per_range.get(x, [])) == 1
              for x in reachable - state.y_units)
          and all(x not in per_range for x in state.y_units))
    rep.add("induction.one-step-per-unit", ok,
            "exactly one chosen step ranged at each unit outside the target, "
            "none inside")
    vals = sorted(state.j_map.values())
    rep.add("induction.push-injective", len(set(vals)) == len(vals),
            "the edge push is injective on surviving arrows")
    ok = all(state.j_map[G.inverse[g]] == G.inverse[state.j_map[g]]
             for g in state.psi1)
    rep.add("induction.push-inverse-compatible", ok,
            "push of the inverse is the inverse of the push")
    ok = not any(G.is_unit(a) for a in state.theta)
    rep.add("induction.push-avoids-units", ok, "no surviving edge collapses")
    ok = True
    for gamma in state.psi1:
        target = state.j_map[gamma]
        for g in G.fiber_s(G.range_[gamma]):
            if state.d[g] is None:
                continue
            lhs = G.compose(G.inverse[state.f_map[g]],
                            state.f_map[G.compose(g, gamma)])
            if lhs != target:
                ok = False
    rep.add("induction.push-anchor-independent", ok,
            "pushed edge is the same from every composing arrow")
    sub = state.restriction()
    theta_graphing = state.theta_graphing()
    rep.add("induction.induced-is-treeing", is_treeing(sub, theta_graphing),
            "induced edge set is a treeing of the restriction")
    lifted_ok = True
    for x in sorted(state.y_units):
        images: dict[tuple[int, int], int] = {}
        for h0 in G.fiber_r(x):
            if state.d[h0] is None:
                continue
            for h1 in G.fiber_r(x):
                if state.d[h1] is None:
                    continue
                step = G.compose(G.inverse[h0], h1)
                if step in state.psi1:
                    key = (state.f_map[h0], state.f_map[h1])
                    images[key] = images.get(key, 0) + 1
        if any(count != 1 for count in images.values()):
            lifted_ok = False
    rep.add("induction.lifted-edge-unique", lifted_ok,
            "each induced edge lifts to exactly one surviving edge per fiber")
    if is_pmp(G):
        pointwise = all(
            G.weight(G.range_[g]) == G.weight(G.range_[state.j_map[g]])
            for g in state.psi1)
        rep.add("induction.push-preserves-range-measure", pointwise,
                "pushed arrows keep their range weight")
        rep.add("induction.cost-preserved",
                cost(G, state.theta) == cost(G, state.psi1),
                f"cost of induced treeing equals cost of surviving part "
                f"({cost(G, state.theta)})")
    else:
        rep.add("induction.cost-comparison-skipped", True,
                "parent does not preserve the measure; cost equality not asserted")
    return rep
