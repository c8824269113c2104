"""Subgroupoids, normality, and quotient groupoids.

Normality is decided exactly.  A full-range choice section inside the
conjugation-stable set End(S) is the same thing as a selection, for
every unit, of one equivalence class in its fiber, such that the
selection is equivariant under translation by S-arrows.  Those
selections are governed by the orbits of the S-action on the total
class space {(unit, class)}: a family of choice functions inside
End(S) exists on an invariant piece if and only if every class-space
orbit over that piece meets each unit fiber exactly once.  The search
below computes those orbits (an exhaustive analysis of all candidate
sections), then assembles the family with the greedy minimal-index
rule over canonically ordered section pieces extended by units.

When the per-unit class count is not constant, the unit space splits
into invariant pieces on which it is, and the family is built piece by
piece; a single piece covering everything is the common case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (PROBABILITY, SIGMA_FINITE, ArrowSet, FiniteGroupoid,
                   InputError, ResourceBoundError, UnitSpace, bisection_product,
                   is_pmp, mu_r, unit_section, validate_groupoid)
from .report import CheckLine, Report


class SubgroupoidHandle:
    """An arrow subset of a parent groupoid that is itself a groupoid.

    Subgroupoids always carry the full unit space of the parent.
    """

    def __init__(self, parent: FiniteGroupoid, members: Iterable[int]):
        self.parent = parent
        self.members = frozenset(members)
        for x in parent.points():
            if parent.unit_of[x] not in self.members:
                raise InputError(f"subgroupoid misses the unit arrow of point {x}")
        for g in self.members:
            if parent.inverse[g] not in self.members:
                raise InputError(f"subgroupoid not closed under inverse at arrow {g}")
        for g in self.members:
            for h in self.members:
                k = parent.try_compose(g, h)
                if k is not None and k not in self.members:
                    raise InputError(
                        f"subgroupoid not closed under composition at ({g},{h})")

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def __len__(self):
        return len(self.members)

    def unit_orbits(self) -> list[tuple[int, ...]]:
        """Orbits of the unit space under the subgroupoid, each sorted."""
        G = self.parent
        seen: set[int] = set()
        out = []
        for x in G.points():
            if x in seen:
                continue
            orbit = {x}
            frontier = [x]
            while frontier:
                y = frontier.pop()
                for g in G.fiber_r(y):
                    if g in self.members and G.source[g] not in orbit:
                        orbit.add(G.source[g])
                        frontier.append(G.source[g])
            seen |= orbit
            out.append(tuple(sorted(orbit)))
        return out

    def as_groupoid(self) -> FiniteGroupoid:
        """The subgroupoid re-indexed as a standalone groupoid (same units)."""
        G = self.parent
        arrows = sorted(self.members)
        new = {g: i for i, g in enumerate(arrows)}
        compose = {(new[g], new[h]): new[k]
                   for (g, h), k in G.compose_table.items()
                   if g in self.members and h in self.members
                   for k in [G.compose_table[(g, h)]]}
        H = FiniteGroupoid(G.units,
                           [G.range_[g] for g in arrows],
                           [G.source[g] for g in arrows],
                           [new[G.inverse[g]] for g in arrows],
                           [new[G.unit_of[x]] for x in G.points()],
                           compose,
                           [G.arrow_labels[g] for g in arrows])
        H.parent_arrows = tuple(arrows)
        return H


def subgroupoid_generated(G: FiniteGroupoid, arrows: Iterable[int]) -> SubgroupoidHandle:
    members = set(G.unit_of) | set(arrows)
    members |= {G.inverse[g] for g in set(members)}
    changed = True
    while changed:
        changed = False
        for g in list(members):
            for h in list(members):
                k = G.try_compose(g, h)
                if k is not None and k not in members:
                    members.add(k)
                    members.add(G.inverse[k])
                    changed = True
    return SubgroupoidHandle(G, members)


class FiberClasses:
    """Per-unit partition of the range fiber into S-classes (g ~ h iff h^-1 g in S)."""

    def __init__(self, S: SubgroupoidHandle):
        G = S.parent
        self.S = S
        self.classes: list[list[tuple[int, ...]]] = []
        self.class_of: dict[int, tuple[int, int]] = {}
        for x in G.points():
            fiber = G.fiber_r(x)
            remaining = list(fiber)
            cls: list[tuple[int, ...]] = []
            while remaining:
                g = remaining[0]
                blk = tuple(h for h in fiber
                            if G.compose(G.inverse[h], g) in S.members)
                cls.append(blk)
                remaining = [h for h in remaining if h not in blk]
            cls.sort(key=min)
            self.classes.append(cls)
            for i, blk in enumerate(cls):
                for g in blk:
                    self.class_of[g] = (x, i)

    def count(self, x: int) -> int:
        return len(self.classes[x])

    def transport(self, gamma: int, node: tuple[int, int]) -> tuple[int, int]:
        """Image of a class under left multiplication by the S-arrow gamma."""
        G = self.S.parent
        x, i = node
        assert G.source[gamma] == x
        rep = self.classes[x][i][0]
        return self.class_of[G.compose(gamma, rep)]

    def unit_class_index(self, x: int) -> int:
        return self.class_of[self.S.parent.unit_of[x]][1]


def index_function(S: SubgroupoidHandle) -> dict[int, int]:
    """Per-unit number of S-classes in the range fiber; constant on parent orbits."""
    fc = FiberClasses(S)
    out = {x: fc.count(x) for x in S.parent.points()}
    for orbit in S.parent.orbits():
        vals = {out[x] for x in orbit}
        if len(vals) != 1:
            raise InputError(f"index function not constant on orbit {sorted(orbit)}")
    return out


def end_membership(S: SubgroupoidHandle, phi: ArrowSet) -> bool:
    """Does conjugation by the full-range r-section phi map S into S?"""
    G = S.parent
    if phi.kind not in ("r-section", "bisection") or phi.r_set() != frozenset(G.points()):
        raise InputError("end_membership needs an r-section with full range")
    at = {G.range_[g]: g for g in phi.members}
    for gamma in S.members:
        a = at[G.range_[gamma]]
        b = at[G.source[gamma]]
        conj = G.compose(G.compose(G.inverse[a], gamma), b)
        if conj not in S.members:
            return False
    return True


def _end_membership_on(S: SubgroupoidHandle, members: Iterable[int],
                       domain: frozenset[int]) -> bool:
    """End condition for an r-section with range `domain`, against S|_domain."""
    G = S.parent
    at = {G.range_[g]: g for g in members}
    for gamma in S.members:
        if G.range_[gamma] not in domain or G.source[gamma] not in domain:
            continue
        a = at[G.range_[gamma]]
        b = at[G.source[gamma]]
        if G.compose(G.compose(G.inverse[a], gamma), b) not in S.members:
            return False
    return True


@dataclass
class FamilyPiece:
    """Sections with range `domain` forming a choice family over that piece."""
    domain: frozenset[int]
    sections: tuple[ArrowSet, ...]


@dataclass
class ChoiceFamily:
    """Choice functions for S < G inside End(S), one block per invariant piece."""
    sub: SubgroupoidHandle
    pieces: tuple[FamilyPiece, ...]

    @property
    def single(self) -> Optional[FamilyPiece]:
        return self.pieces[0] if len(self.pieces) == 1 else None

    def piece_of(self, x: int) -> FamilyPiece:
        for piece in self.pieces:
            if x in piece.domain:
                return piece
        raise KeyError(x)

    def validate(self) -> None:
        """Exact choice-family conditions; raises with the offending (x, class)."""
        G = self.sub.parent
        fc = FiberClasses(self.sub)
        covered = set()
        for piece in self.pieces:
            if covered & piece.domain:
                raise InputError("family pieces overlap")
            covered |= piece.domain
            for phi in piece.sections:
                if phi.kind not in ("r-section", "bisection"):
                    raise InputError("family members must be r-sections")
                if phi.r_set() != piece.domain:
                    raise InputError("family member does not cover its piece")
                if not _end_membership_on(self.sub, phi.members, piece.domain):
                    raise InputError("family member conjugates S out of S")
            for x in sorted(piece.domain):
                hit: dict[int, int] = {}
                for j, phi in enumerate(piece.sections):
                    c = fc.class_of[phi.at(x)][1]
                    if c in hit:
                        raise InputError(
                            f"class {c} at unit {x} doubly covered by "
                            f"sections {hit[c]} and {j}")
                    hit[c] = j
                missing = set(range(fc.count(x))) - set(hit)
                if missing:
                    raise InputError(
                        f"class {min(missing)} at unit {x} not covered")
        if covered != frozenset(G.points()):
            raise InputError("family pieces do not cover the unit space")


@dataclass
class NormalitySearch:
    """Outcome of the exhaustive normality analysis."""
    family: Optional[ChoiceFamily]
    class_space_size: int
    orbit_count: int
    witness: Optional[tuple[int, int, int]] = None  # (unit, class, class)

    @property
    def normal(self) -> bool:
        return self.family is not None


def _class_space_orbits(S: SubgroupoidHandle, fc: FiberClasses,
                        units: Sequence[int]) -> list[list[tuple[int, int]]]:
    """Orbits of the S-action on {(unit, class)} over the given units."""
    G = S.parent
    nodes = [(x, i) for x in units for i in range(fc.count(x))]
    node_idx = {n: k for k, n in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    unit_set = set(units)
    for gamma in S.members:
        x = G.source[gamma]
        if x not in unit_set:
            continue
        for i in range(fc.count(x)):
            union(node_idx[(x, i)], node_idx[fc.transport(gamma, (x, i))])
    groups: dict[int, list[tuple[int, int]]] = {}
    for k, n in enumerate(nodes):
        groups.setdefault(find(k), []).append(n)
    return sorted(groups.values(), key=lambda orb: min(orb))


def normality_search(S: SubgroupoidHandle) -> NormalitySearch:
    """Decide S normal-in-parent and build the canonical choice family.

    The class-space orbit analysis is an exhaustive account of every
    candidate section assembled from the parent's arrows, so a negative
    answer is a proof, not a timeout; sizes are recorded on the result.
    """
    G = S.parent
    fc = FiberClasses(S)
    idx = index_function(S)
    levels = sorted({idx[x] for x in G.points()})
    pieces: list[FamilyPiece] = []
    space = sum(fc.count(x) for x in G.points())
    orbit_total = 0
    for level in levels:
        domain = frozenset(x for x in G.points() if idx[x] == level)
        per_orbit: dict[tuple[int, ...], list[list[tuple[int, int]]]] = {}
        for unit_orbit in S.unit_orbits():
            if unit_orbit[0] not in domain:
                continue
            orbs = _class_space_orbits(S, fc, unit_orbit)
            orbit_total += len(orbs)
            for orb in orbs:
                per_unit: dict[int, int] = {}
                for (x, i) in orb:
                    per_unit[x] = per_unit.get(x, 0) + 1
                bad = next((x for x, c in per_unit.items() if c > 1), None)
                if bad is not None:
                    dup = sorted(i for (x, i) in orb if x == bad)
                    return NormalitySearch(None, space, orbit_total,
                                           witness=(bad, dup[0], dup[1]))
            per_orbit[unit_orbit] = orbs
        pieces.append(_assemble_family_piece(S, fc, domain, per_orbit, level))
    family = ChoiceFamily(S, tuple(pieces))
    family.validate()
    return NormalitySearch(family, space, orbit_total)


def _section_for_orbit(S: SubgroupoidHandle, fc: FiberClasses,
                       orb: list[tuple[int, int]]) -> dict[int, int]:
    """Unit -> representative arrow for one multiplicity-one class orbit."""
    G = S.parent
    out = {}
    for (x, i) in orb:
        blk = fc.classes[x][i]
        unit = G.unit_of[x]
        out[x] = unit if unit in blk else min(blk)
    return out


def _assemble_family_piece(S, fc, domain, per_orbit, level) -> FamilyPiece:
    """Greedy minimal-index assembly of the family over one invariant piece.

    Candidate pool: the unit section first, then every class-orbit
    section extended by units outside its orbit, ordered by (piece
    length, lexicographic arrow indices).  Member n picks, at each
    unit, the first candidate whose class is still uncovered.
    """
    G = S.parent
    unit_sec = {x: G.unit_of[x] for x in domain}
    candidates: list[dict[int, int]] = [unit_sec]
    keyed = []
    for unit_orbit, orbs in per_orbit.items():
        for orb in orbs:
            sec = _section_for_orbit(S, fc, orb)
            keyed.append(((len(sec), tuple(sorted(sec.values()))), unit_orbit, sec))
    for _, unit_orbit, sec in sorted(keyed, key=lambda t: t[0]):
        full = dict(unit_sec)
        full.update(sec)
        candidates.append(full)
    sections: list[ArrowSet] = []
    covered: dict[int, set[int]] = {x: set() for x in domain}
    while any(len(covered[x]) < fc.count(x) for x in domain):
        chosen = {}
        for x in sorted(domain):
            for cand in candidates:
                c = fc.class_of[cand[x]][1]
                if c not in covered[x]:
                    chosen[x] = cand[x]
                    covered[x].add(c)
                    break
            else:
                raise InputError("family assembly ran out of candidates")
        sections.append(ArrowSet(G, chosen.values()))
    return FamilyPiece(domain, tuple(sections))


def is_normal(S: SubgroupoidHandle) -> Optional[ChoiceFamily]:
    """The canonical choice family inside End(S), or None with non-normality proved."""
    return normality_search(S).family


# --- the quotient construction ----------------------------------------------


@dataclass
class QuotientResult:
    parent: FiniteGroupoid
    sub: SubgroupoidHandle
    family: ChoiceFamily
    Q: FiniteGroupoid
    theta_point: tuple[int, ...]            # parent point -> Q point
    theta_arrow: tuple[int, ...]            # parent arrow -> Q arrow
    star: dict[tuple[int, int, int], int]   # (z, j, k) -> j *_z k
    unit_index: dict[int, int]              # z -> i_z
    inverse_index: dict[tuple[int, int], int]  # (z, j) -> kappa(z, j)
    arrow_of: dict[tuple[int, int], int]    # (z, j) -> Q arrow index
    zj_of: tuple[tuple[int, int], ...]      # Q arrow index -> (z, j)


def build_quotient(G: FiniteGroupoid, S: SubgroupoidHandle,
                   family: ChoiceFamily) -> QuotientResult:
    """Quotient groupoid of G by S along a validated choice family.

    Unit classes of the quotient are the S-orbits of units with summed
    weights; arrows over a class z are indexed by the family members of
    its piece, multiplied via the star table.
    """
    family.validate()
    fc = FiberClasses(S)
    orbits = sorted(S.unit_orbits(), key=min)
    theta_point = [0] * G.n_points
    for z, orb in enumerate(orbits):
        for x in orb:
            theta_point[x] = z
    zeta = [sum((G.weight(x) for x in orb), Fraction(0)) for orb in orbits]
    units = UnitSpace(zeta, G.units.mode,
                      ["{" + ",".join(G.units.labels[x] for x in orb) + "}"
                       for orb in orbits])

    def section_arrow(x: int, j: int) -> int:
        return family.piece_of(x).sections[j].at(x)

    def class_index_of(g: int) -> int:
        """Family index j with g ~ r(g) phi_j."""
        x = G.range_[g]
        cls = fc.class_of[g]
        piece = family.piece_of(x)
        for j, phi in enumerate(piece.sections):
            if fc.class_of[phi.at(x)] == cls:
                return j
        raise InputError(f"arrow {g} matches no family member")

    # target map per (z, j), checked to be constant over the class
    phi_map: dict[tuple[int, int], int] = {}
    for z, orb in enumerate(orbits):
        piece = family.piece_of(orb[0])
        for j in range(len(piece.sections)):
            targets = {theta_point[G.source[section_arrow(x, j)]] for x in orb}
            if len(targets) != 1:
                raise InputError(f"section {j} is not class-consistent on class {z}")
            phi_map[(z, j)] = targets.pop()

    star: dict[tuple[int, int, int], int] = {}
    unit_index: dict[int, int] = {}
    inverse_index: dict[tuple[int, int], int] = {}
    for z, orb in enumerate(orbits):
        piece = family.piece_of(orb[0])
        nj = len(piece.sections)
        for j in range(nj):
            for k in range(len(family.piece_of(
                    next(x for x in G.points() if theta_point[x] == phi_map[(z, j)])
            ).sections)):
                ls = set()
                for x in orb:
                    a = section_arrow(x, j)
                    b = section_arrow(G.source[a], k)
                    ls.add(class_index_of(G.compose(a, b)))
                if len(ls) != 1:
                    raise InputError(f"star product not constant on class {z}")
                star[(z, j, k)] = ls.pop()
        for x in orb:
            iz = next(j for j in range(nj) if section_arrow(x, j) in S.members)
            if unit_index.setdefault(z, iz) != iz:
                raise InputError(f"unit index not constant on class {z}")
        for j in range(nj):
            w = phi_map[(z, j)]
            found = set()
            for x in orb:
                a = section_arrow(x, j)
                for k in range(len(family.piece_of(G.source[a]).sections)):
                    b = section_arrow(G.source[a], k)
                    if G.compose(a, b) in S.members:
                        found.add(k)
            if len(found) != 1:
                raise InputError(f"inverse index not unique at ({z},{j})")
            inverse_index[(z, j)] = found.pop()

    zj_list = sorted(phi_map)
    arrow_of = {zj: i for i, zj in enumerate(zj_list)}
    rng = [z for (z, j) in zj_list]
    src = [phi_map[zj] for zj in zj_list]
    inv = [arrow_of[(phi_map[(z, j)], inverse_index[(z, j)])] for (z, j) in zj_list]
    unit_of = [arrow_of[(z, unit_index[z])] for z in range(len(orbits))]
    compose = {}
    for (z, j) in zj_list:
        w = phi_map[(z, j)]
        for (w2, k) in zj_list:
            if w2 == w:
                compose[(arrow_of[(z, j)], arrow_of[(w, k)])] = \
                    arrow_of[(z, star[(z, j, k)])]
    Q = FiniteGroupoid(units, rng, src, inv, unit_of, compose,
                       [f"[{z}]#{j}" for (z, j) in zj_list])
    theta_arrow = [arrow_of[(theta_point[G.range_[g]], class_index_of(g))]
                   for g in G.arrows()]
    return QuotientResult(G, S, family, Q, tuple(theta_point), tuple(theta_arrow),
                          star, unit_index, inverse_index, arrow_of, tuple(zj_list))


def verify_quotient(res: QuotientResult) -> Report:
    """Exhaustive checks of the quotient contract on a finite instance."""
    G, Q, S = res.parent, res.Q, res.sub
    rep = Report()
    rep.add("quotient.groupoid-axioms", not validate_groupoid(Q),
            "quotient tables satisfy all groupoid axioms")
    hom = all(
        res.theta_arrow[G.compose(g, h)] ==
        Q.compose(res.theta_arrow[g], res.theta_arrow[h])
        for g in G.arrows() for h in G.fiber_r(G.source[g]))
    rep.add("quotient.map-multiplicative", hom,
            "quotient map preserves every composition")
    kernel = frozenset(g for g in G.arrows() if Q.is_unit(res.theta_arrow[g]))
    rep.add("quotient.kernel", kernel == S.members,
            "kernel of the quotient map is exactly the subgroupoid")
    class_surj = all(
        {res.theta_arrow[g] for g in G.fiber_r(x)}
        == set(Q.fiber_r(res.theta_point[x]))
        for x in G.points())
    rep.add("quotient.class-surjective", class_surj,
            "each fiber maps onto the image fiber")
    pushed = all(
        Q.weight(z) == sum((G.weight(x) for x in G.points()
                            if res.theta_point[x] == z), Fraction(0))
        for z in Q.points())
    rep.add("quotient.pushforward-measure", pushed,
            "class weights are the summed unit weights")
    fc = FiberClasses(S)
    counts = all(fc.count(x) == len(Q.fiber_r(res.theta_point[x]))
                 for x in G.points())
    rep.add("quotient.fiber-class-count", counts,
            "per-unit class count equals the image fiber size")
    assoc = True
    for (z, j) in res.zj_of:
        wj = Q.source[res.arrow_of[(z, j)]]
        for k in [kk for (zz, kk) in res.zj_of if zz == wj]:
            wk = Q.source[res.arrow_of[(wj, k)]]
            for l in [ll for (zz, ll) in res.zj_of if zz == wk]:
                lhs = res.star[(z, res.star[(z, j, k)], l)]
                rhs = res.star[(z, j, res.star[(wj, k, l)])]
                if lhs != rhs:
                    assoc = False
    rep.add("quotient.star-associative", assoc,
            "(j *_z k) *_z l == j *_z (k *_w l) for all composable triples")
    return rep


def factor_through(res: QuotientResult, other: QuotientResult) -> dict[int, int]:
    """The unique map tau with other = tau o theta, for a second map killing S.

    `other` must be a quotient of the same parent whose kernel contains S.
    Returns the Q-arrow map and verifies it is the only homomorphism
    making the triangle commute.
    """
    G = res.parent
    if other.parent is not G:
        raise InputError("factorisation needs quotients of the same parent")
    kernel = frozenset(g for g in G.arrows() if other.Q.is_unit(other.theta_arrow[g]))
    if not res.sub.members <= kernel:
        raise InputError("second map does not kill the subgroupoid")
    tau: dict[int, int] = {}
    for g in G.arrows():
        a, b = res.theta_arrow[g], other.theta_arrow[g]
        if tau.setdefault(a, b) != b:
            raise InputError(f"no well-defined factorisation at arrow {g}")
    if set(tau) != set(res.Q.arrows()):
        raise InputError("factorisation does not cover the quotient")
    for a in res.Q.arrows():
        for b in res.Q.fiber_r(res.Q.source[a]):
            if tau[res.Q.compose(a, b)] != other.Q.compose(tau[a], tau[b]):
                raise InputError("factorisation is not a homomorphism")
    return tau


# --- the p.m.p. criterion -----------------------------------------------------


@dataclass
class PmpVerdict:
    pmp: bool
    witnesses: Optional[list[ArrowSet]]
    obstruction: Optional[int]  # a quotient arrow with unequal endpoint weights
    report: Report


def _global_bisections_covering(Q: FiniteGroupoid) -> list[frozenset[int]]:
    """For each arrow, a bisection with full range and source containing it."""
    out: set[frozenset[int]] = set()
    for a in Q.arrows():
        members = {a}
        covered_r = {Q.range_[a]}
        covered_s = {Q.source[a]}
        comp = sorted(Q.orbit_of(Q.range_[a]))
        cycle = [Q.range_[a], Q.source[a]] if Q.range_[a] != Q.source[a] \
            else [Q.range_[a]]
        cycle += [z for z in comp if z not in cycle]
        for i in range(1, len(cycle)):
            zr, zs = cycle[i], cycle[(i + 1) % len(cycle)]
            if zr in covered_r:
                continue
            g = min(g for g in Q.fiber_r(zr) if Q.source[g] == zs)
            members.add(g)
            covered_r.add(zr)
            covered_s.add(zs)
        for z in Q.points():
            if z not in covered_r:
                members.add(Q.unit_of[z])
        out.add(frozenset(members))
    return sorted(out, key=sorted)


def _lift_bisection(res: QuotientResult, psi: frozenset[int]) -> Optional[ArrowSet]:
    """A full bisection of the parent mapping onto psi under the quotient map."""
    G, Q = res.parent, res.Q
    target: dict[int, int] = {}
    for a in psi:
        target[Q.range_[a]] = a
    # bipartite matching x -> s(g) over lifts g of the targeted quotient arrow
    match_src: dict[int, int] = {}
    chosen: dict[int, int] = {}

    def candidates(x: int) -> list[int]:
        a = target[res.theta_point[x]]
        return [g for g in G.fiber_r(x) if res.theta_arrow[g] == a]

    def augment(x: int, seen: set[int]) -> bool:
        for g in sorted(candidates(x)):
            y = G.source[g]
            if y in seen:
                continue
            seen.add(y)
            if y not in match_src or augment(match_src[y], seen):
                match_src[y] = x
                chosen[x] = g
                return True
        return False

    for x in sorted(G.points()):
        if not augment(x, set()):
            return None
    return ArrowSet(G, chosen.values())


def _in_two_sided_end(S: SubgroupoidHandle, phi: ArrowSet) -> bool:
    """Conjugation carries S-restrictions onto S-restrictions exactly."""
    return end_membership(S, phi) and end_membership(S, phi.inverse())


def quotient_is_pmp(res: QuotientResult) -> PmpVerdict:
    """Direct measure check plus the witness-sequence side, asserted to agree."""
    G, Q, S = res.parent, res.Q, res.sub
    rep = Report()
    direct = is_pmp(Q)
    rep.add("pmp-criterion.direct", True,
            f"quotient measure check: {'preserving' if direct else 'not preserving'}")
    if not direct:
        obstruction = next(a for a in Q.arrows()
                           if Q.weight(Q.range_[a]) != Q.weight(Q.source[a]))
        rep.add("pmp-criterion.obstruction", True,
                "weight-changing quotient arrow excludes any witness sequence "
                f"(arrow {obstruction})")
        return PmpVerdict(False, None, obstruction, rep)
    fc = FiberClasses(S)
    witnesses: list[ArrowSet] = []
    covered: dict[int, set[int]] = {x: set() for x in G.points()}
    ok = True
    for psi in _global_bisections_covering(Q):
        phi = _lift_bisection(res, psi)
        if phi is None or not _in_two_sided_end(S, phi):
            ok = False
            break
        witnesses.append(phi)
        for g in phi.members:
            covered[G.range_[g]].add(fc.class_of[g][1])
    ok = ok and all(covered[x] == set(range(fc.count(x))) for x in G.points())
    rep.add("pmp-criterion.witnesses", ok,
            f"{len(witnesses)} full bisections, conjugation-exact on the "
            "subgroupoid, meeting every class")
    rep.add("pmp-criterion.biconditional", ok == direct,
            "measure check and witness existence agree")
    if not ok:
        return PmpVerdict(direct, None, None, rep)
    return PmpVerdict(True, witnesses, None, rep)


# --- HNN-style normality witness ---------------------------------------------


@dataclass
class HnnWitness:
    pieces: list[ArrowSet]
    e_minus: frozenset[int]
    e_plus: frozenset[int]
    report: Report


def _coset_structure(action, subgroup: frozenset[int],
                     labeling: Sequence[int], side: str):
    """Validate a point labeling as an equivariant map onto subgroup cosets.

    Each element of the base subgroup must permute the labels (same
    label in, same label out); the induced label action must be
    regular, so the labels are the cosets of its kernel.  Returns
    (kernel elements, per-element label permutation).  Violations name
    the point and group element.
    """
    n_labels = max(labeling) + 1
    perms: dict[int, tuple[int, ...]] = {}
    for e in sorted(subgroup):
        image = [None] * n_labels
        for x in range(len(action.units)):
            src, dst = labeling[x], labeling[action.apply(e, x)]
            if image[src] is None:
                image[src] = dst
            elif image[src] != dst:
                raise InputError(
                    f"{side} labeling not equivariant at point {x} under "
                    f"element {action.names[e]}")
        if None in image or sorted(image) != list(range(n_labels)):
            raise InputError(
                f"{side} labeling: element {action.names[e]} does not permute "
                "the labels")
        perms[e] = tuple(image)
    kernel = frozenset(e for e, p in perms.items()
                       if p == tuple(range(n_labels)))
    if len(kernel) * n_labels != len(subgroup):
        raise InputError(f"{side} labeling is not a regular coset labeling")
    return kernel, perms


def normality_witness_hnn(G, e_names: Sequence[str], t_name: str,
                          minus_labeling: Sequence[int],
                          plus_labeling: Sequence[int]) -> HnnWitness:
    """Bisection pieces certifying that the base subgroupoid is normal.

    ``G`` is a translation groupoid; the base subgroupoid is the action
    of the subgroup generated by ``e_names``.  The two labelings are
    equivariant maps onto the cosets of index-p and index-q subgroups
    of that base subgroup.  The stable-letter bisection {(x, t)} is cut
    along t(minus-blocks) intersected with plus-blocks, and every piece
    is certified to conjugate the restricted subgroupoid exactly onto a
    restricted subgroupoid.
    """
    action = G.action

    def element(name: str) -> int:
        e = next((i for i, nm in enumerate(action.names) if nm == name), None)
        if e is None:
            raise InputError(f"element {name!r} not in the closure")
        return e

    e_subgroup = action.subgroup_closure([element(nm) for nm in e_names])
    S = SubgroupoidHandle(G, G.subgroup_arrows(e_subgroup))
    t = element(t_name)
    minus_kernel, _ = _coset_structure(action, e_subgroup, minus_labeling, "minus")
    plus_kernel, _ = _coset_structure(action, e_subgroup, plus_labeling, "plus")
    n = len(action.units)
    k_labels = max(minus_labeling) + 1
    l_labels = max(plus_labeling) + 1
    phi_t = {G.arrow(x, t) for x in range(n)}
    rep = Report()
    pieces = []
    covered = set()
    for k in range(k_labels):
        shifted = {action.apply(t, x) for x in range(n) if minus_labeling[x] == k}
        for l in range(l_labels):
            domain = sorted(x for x in shifted if plus_labeling[x] == l)
            if not domain:
                continue
            piece = ArrowSet(G, [G.arrow(x, t) for x in domain])
            covered |= piece.members
            two_sided = (
                _conjugation_matches_restriction(G, S, piece)
            )
            rep.add("hnn-witness.piece-exact", two_sided,
                    f"piece (minus block {k}, plus block {l}) conjugates the "
                    "restricted subgroupoid onto a restricted subgroupoid")
            pieces.append(piece)
    rep.add("hnn-witness.pieces-cover", covered == phi_t,
            "the pieces partition the stable-letter bisection")
    return HnnWitness(pieces, minus_kernel, plus_kernel, rep)


def _conjugation_matches_restriction(G, S: SubgroupoidHandle,
                                     piece: ArrowSet) -> bool:
    """V_piece(S restricted to r(piece)) == S restricted to s(piece), exactly."""
    rset, sset = piece.r_set(), piece.s_set()
    at = {G.range_[g]: g for g in piece.members}
    image = set()
    for gamma in S.members:
        if G.range_[gamma] in rset and G.source[gamma] in rset:
            a, b = at[G.range_[gamma]], at[G.source[gamma]]
            image.add(G.compose(G.compose(G.inverse[a], gamma), b))
    target = {gamma for gamma in S.members
              if G.range_[gamma] in sset and G.source[gamma] in sset}
    return image == target


# --- bundled lemma-level property suite ---------------------------------------


def _end_pool(S: SubgroupoidHandle, cap: int = 48) -> list[ArrowSet]:
    """A deterministic sample of full-range End(S) sections (all, if few)."""
    G = S.parent
    search = normality_search(S)
    pool = [unit_section(G)]
    if search.family is not None and search.family.single is not None:
        pool.extend(search.family.single.sections)
        for phi, psi in itertools.product(list(pool), repeat=2):
            if len(pool) >= cap:
                break
            prod = bisection_product(G, phi, psi)
            if prod not in pool and prod.r_set() == frozenset(G.points()):
                pool.append(prod)
    return pool[:cap]


def normality_property_suite(G: FiniteGroupoid, S: SubgroupoidHandle,
                             intermediates: Sequence[SubgroupoidHandle] = (),
                             quotients: Sequence[QuotientResult] = ()) -> Report:
    """Exhaustive instance-level checks of the subgroupoid calculus."""
    rep = Report()
    fc = FiberClasses(S)
    pool = _end_pool(S)
    ok_inv = True
    for phi, psi in itertools.product(pool, repeat=2):
        agree = {x for x in G.points()
                 if fc.class_of[phi.at(x)] == fc.class_of[psi.at(x)]}
        from .core import saturate
        sat = set()
        for x in agree:
            for g in G.fiber_r(x):
                if g in S.members:
                    sat.add(G.source[g])
        if not sat <= agree:
            ok_inv = False
    rep.add("end.agreement-set-invariant", ok_inv,
            f"agreement sets of {len(pool)} End sections are closed under "
            "the subgroupoid")
    ok_prod = all(end_membership(S, bisection_product(G, phi, psi))
                  for phi, psi in itertools.product(pool, repeat=2))
    rep.add("end.closed-under-product", ok_prod,
            "products of End sections stay in End")
    search = normality_search(S)
    rep.add("normality.decision", True,
            f"subgroupoid is {'normal' if search.normal else 'not normal'} "
            f"(class space {search.class_space_size}, "
            f"{search.orbit_count} transport orbits)")
    if search.normal:
        cover_ok = _piece_cover_exists(G, S, search.family)
        rep.add("normality.piece-cover", cover_ok,
                "parent covered by conjugation-exact bisection pieces "
                "times the subgroupoid")
        for i, H in enumerate(intermediates):
            ok_mid = _normal_in_intermediate(S, H)
            rep.add("normality.restricts-to-intermediate", ok_mid,
                    f"normality passes to intermediate subgroupoid {i}")
    for i, qr in enumerate(quotients):
        kernel = frozenset(g for g in qr.parent.arrows()
                           if qr.Q.is_unit(qr.theta_arrow[g]))
        ok_ker = normality_search(
            SubgroupoidHandle(qr.parent, kernel)).normal
        rep.add("normality.kernel-normal", ok_ker,
                f"kernel of supplied quotient map {i} is normal")
    return rep


def _piece_cover_exists(G: FiniteGroupoid, S: SubgroupoidHandle,
                        family: ChoiceFamily) -> bool:
    """Cut the family sections into bisection pieces with exact conjugation.

    Every parent arrow must factor as (piece arrow) * (subgroupoid
    arrow); pieces are the family sections restricted to unit classes
    and split source-injectively.
    """
    pieces: list[ArrowSet] = []
    for orbit in S.unit_orbits():
        piece_sections = family.piece_of(orbit[0]).sections
        for phi in piece_sections:
            arrows = sorted(phi.at(x) for x in orbit)
            while arrows:
                taken: list[int] = []
                sources = set()
                rest = []
                for g in arrows:
                    if G.source[g] in sources:
                        rest.append(g)
                    else:
                        sources.add(G.source[g])
                        taken.append(g)
                pieces.append(ArrowSet(G, taken))
                arrows = rest
    if not all(_conjugation_matches_restriction(G, S, piece)
               for piece in pieces):
        return False
    fc = FiberClasses(S)
    for g in G.arrows():
        x = G.range_[g]
        if not any(x in piece.r_set()
                   and G.compose(G.inverse[piece.at(x)], g) in S.members
                   for piece in pieces):
            return False
    return True


def _normal_in_intermediate(S: SubgroupoidHandle,
                            H: SubgroupoidHandle) -> bool:
    if not S.members <= H.members:
        raise InputError("intermediate subgroupoid must contain the subgroupoid")
    Hg = H.as_groupoid()
    back = {g: i for i, g in enumerate(Hg.parent_arrows)}
    S_in_H = SubgroupoidHandle(Hg, [back[g] for g in S.members])
    return normality_search(S_in_H).normal
