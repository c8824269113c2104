"""Finite discrete measured groupoids with exact rational weights.

Arrows are dense integer indices.  Range, source, inverse and the unit
map are stored as tuples; composition is an explicit partial table
``(g, h) -> gh`` defined exactly when ``source(g) == range(h)``.  All
weights and measure values are `fractions.Fraction`; nothing in this
module touches floating point, so every verified identity is an exact
equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

PROBABILITY = "probability"
SIGMA_FINITE = "sigma-finite"


class InputError(ValueError):
    """Malformed instance data (bad shape, bad reference, bad weight)."""


class ResourceBoundError(RuntimeError):
    """An explicit resource bound was exceeded; the result would be truncated."""


def frac(value) -> Fraction:
    """Parse a Fraction from an int, Fraction, or 'a/b' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"not an exact rational: {value!r}")


def frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class UnitSpace:
    """Finite set of unit points, each carrying a positive rational weight."""

    def __init__(self, weights: Sequence, mode: str = PROBABILITY,
                 labels: Optional[Sequence[str]] = None):
        self.weights = tuple(frac(w) for w in weights)
        if mode not in (PROBABILITY, SIGMA_FINITE):
            raise InputError(f"unknown measure mode {mode!r}")
        self.mode = mode
        if any(w <= 0 for w in self.weights):
            raise InputError("every unit weight must be positive")
        if mode == PROBABILITY and sum(self.weights, Fraction(0)) != 1:
            raise InputError("probability mode requires weights summing to 1")
        if labels is None:
            labels = tuple(str(i) for i in range(len(self.weights)))
        self.labels = tuple(labels)
        if len(self.labels) != len(self.weights):
            raise InputError("labels and weights must have equal length")

    def __len__(self) -> int:
        return len(self.weights)

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def as_sigma_finite(self) -> "UnitSpace":
        return UnitSpace(self.weights, SIGMA_FINITE, self.labels)

    def __repr__(self):
        return f"UnitSpace({len(self)} points, {self.mode})"


def uniform_units(n: int, mode: str = PROBABILITY,
                  labels: Optional[Sequence[str]] = None) -> UnitSpace:
    if n <= 0:
        raise InputError("a unit space needs at least one point")
    w = Fraction(1, n) if mode == PROBABILITY else Fraction(1)
    return UnitSpace([w] * n, mode, labels)


@dataclass(frozen=True)
class Violation:
    """One broken groupoid axiom, with the witnessing indices."""
    rule: str
    witness: tuple
    detail: str

    def __str__(self):
        return f"[{self.rule}] {self.detail} (witness {self.witness})"


class FiniteGroupoid:
    """Explicit finite groupoid over a weighted unit space.

    The constructor checks only that the tables are well formed (indices
    in range, one unit arrow per point).  Whether the tables satisfy the
    groupoid axioms is the job of :func:`validate_groupoid`, which
    reports violations as data instead of raising.
    """

    def __init__(self, units: UnitSpace, range_: Sequence[int],
                 source: Sequence[int], inverse: Sequence[int],
                 unit_of: Sequence[int],
                 compose_table: Mapping[tuple[int, int], int],
                 arrow_labels: Optional[Sequence[str]] = None):
        self.units = units
        self.range_ = tuple(range_)
        self.source = tuple(source)
        self.inverse = tuple(inverse)
        self.unit_of = tuple(unit_of)
        self.compose_table = dict(compose_table)
        n = len(self.range_)
        if not (len(self.source) == len(self.inverse) == n):
            raise InputError("range/source/inverse tables disagree in length")
        if len(self.unit_of) != len(units):
            raise InputError("unit_of must assign one arrow per point")
        npts = len(units)
        for name, seq, bound in (("range", self.range_, npts),
                                 ("source", self.source, npts),
                                 ("inverse", self.inverse, n),
                                 ("unit_of", self.unit_of, n)):
            for v in seq:
                if not 0 <= v < bound:
                    raise InputError(f"{name} table references index {v} out of range")
        for (g, h), k in self.compose_table.items():
            if not (0 <= g < n and 0 <= h < n and 0 <= k < n):
                raise InputError(f"compose entry ({g},{h})->{k} out of range")
        if arrow_labels is None:
            arrow_labels = tuple(str(i) for i in range(n))
        self.arrow_labels = tuple(arrow_labels)
        if len(self.arrow_labels) != n:
            raise InputError("arrow labels must match arrow count")
        self._fibers_r = tuple(
            tuple(g for g in range(n) if self.range_[g] == x) for x in range(npts))
        self._fibers_s = tuple(
            tuple(g for g in range(n) if self.source[g] == x) for x in range(npts))

    @property
    def n_arrows(self) -> int:
        return len(self.range_)

    @property
    def n_points(self) -> int:
        return len(self.units)

    def arrows(self) -> range:
        return range(self.n_arrows)

    def points(self) -> range:
        return range(self.n_points)

    def is_unit(self, g: int) -> bool:
        return self.unit_of[self.range_[g]] == g and self.range_[g] == self.source[g]

    def unit_arrows(self) -> frozenset[int]:
        return frozenset(self.unit_of)

    def compose(self, g: int, h: int) -> int:
        try:
            return self.compose_table[(g, h)]
        except KeyError:
            raise InputError(
                f"arrows {g} and {h} are not composable "
                f"(source {self.source[g]} != range {self.range_[h]})") from None

    def try_compose(self, g: int, h: int) -> Optional[int]:
        return self.compose_table.get((g, h))

    def fiber_r(self, x: int) -> tuple[int, ...]:
        """Arrows with range x."""
        return self._fibers_r[x]

    def fiber_s(self, x: int) -> tuple[int, ...]:
        """Arrows with source x."""
        return self._fibers_s[x]

    def orbit_of(self, x: int) -> frozenset[int]:
        return frozenset(self.source[g] for g in self._fibers_r[x])

    def orbits(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for x in self.points():
            if x in seen:
                continue
            orb = self.orbit_of(x)
            seen.update(orb)
            out.append(orb)
        return out

    def weight(self, x: int) -> Fraction:
        return self.units.weights[x]

    def __repr__(self):
        return f"FiniteGroupoid({self.n_points} points, {self.n_arrows} arrows)"


def validate_groupoid(G: FiniteGroupoid) -> list[Violation]:
    """Check every groupoid axiom on the tables; an empty list means valid.

    Violations are returned as data (not raised) so that deliberately
    broken instances can be inspected and reported.
    """
    out: list[Violation] = []
    n = G.n_arrows
    for x in G.points():
        u = G.unit_of[x]
        if G.range_[u] != x or G.source[u] != x:
            out.append(Violation("unit-endpoints", (x, u),
                                 f"unit arrow of point {x} has range/source "
                                 f"({G.range_[u]},{G.source[u]})"))
    for (g, h), k in sorted(G.compose_table.items()):
        if G.source[g] != G.range_[h]:
            out.append(Violation("compose-domain", (g, h),
                                 "compose defined though source(g) != range(h)"))
            continue
        if G.range_[k] != G.range_[g] or G.source[k] != G.source[h]:
            out.append(Violation("compose-endpoints", (g, h, k),
                                 "range/source of composite disagree with factors"))
    for g in range(n):
        for h in range(n):
            if G.source[g] == G.range_[h] and (g, h) not in G.compose_table:
                out.append(Violation("compose-missing", (g, h),
                                     "composable pair has no table entry"))
    if any(v.rule in ("compose-domain", "compose-missing") for v in out):
        return out  # the remaining checks assume a well-shaped table
    for g in range(n):
        gi = G.inverse[g]
        if G.range_[gi] != G.source[g] or G.source[gi] != G.range_[g]:
            out.append(Violation("inverse-endpoints", (g, gi),
                                 "inverse swaps range and source incorrectly"))
            continue
        if G.compose(g, gi) != G.unit_of[G.range_[g]]:
            out.append(Violation("inverse-right", (g, gi),
                                 "g * inverse(g) is not the range unit"))
        if G.compose(gi, g) != G.unit_of[G.source[g]]:
            out.append(Violation("inverse-left", (g, gi),
                                 "inverse(g) * g is not the source unit"))
    for g in range(n):
        ur, us = G.unit_of[G.range_[g]], G.unit_of[G.source[g]]
        if G.compose(ur, g) != g:
            out.append(Violation("unit-left", (g,), "range unit does not act as identity"))
        if G.compose(g, us) != g:
            out.append(Violation("unit-right", (g,), "source unit does not act as identity"))
    for g in range(n):
        for h in G._fibers_r[G.source[g]]:
            gh = G.compose(g, h)
            for k in G._fibers_r[G.source[h]]:
                if G.compose(gh, k) != G.compose(g, G.compose(h, k)):
                    out.append(Violation("associativity", (g, h, k),
                                         "(g*h)*k != g*(h*k)"))
    return out


# --- bisection calculus ----------------------------------------------------

PLAIN = "plain"
R_SECTION = "r-section"
S_SECTION = "s-section"
BISECTION = "bisection"


class ArrowSet:
    """A subset of arrows, tagged by how injective range and source are on it."""

    def __init__(self, parent: FiniteGroupoid, members: Iterable[int]):
        self.parent = parent
        self.members = frozenset(members)
        for g in self.members:
            if not 0 <= g < parent.n_arrows:
                raise InputError(f"arrow index {g} out of range")
        r_inj = len({parent.range_[g] for g in self.members}) == len(self.members)
        s_inj = len({parent.source[g] for g in self.members}) == len(self.members)
        if r_inj and s_inj:
            self.kind = BISECTION
        elif r_inj:
            self.kind = R_SECTION
        elif s_inj:
            self.kind = S_SECTION
        else:
            self.kind = PLAIN

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __eq__(self, other):
        return (isinstance(other, ArrowSet) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash(self.members)

    def r_set(self) -> frozenset[int]:
        return frozenset(self.parent.range_[g] for g in self.members)

    def s_set(self) -> frozenset[int]:
        return frozenset(self.parent.source[g] for g in self.members)

    def at(self, x: int) -> int:
        """The unique member with range x (requires an r-section)."""
        if self.kind not in (R_SECTION, BISECTION):
            raise InputError("at() needs an r-section")
        for g in self.members:
            if self.parent.range_[g] == x:
                return g
        raise KeyError(x)

    def mapping(self) -> dict[int, int]:
        """The induced point map r(member) -> s(member) of an r-section."""
        if self.kind not in (R_SECTION, BISECTION):
            raise InputError("mapping() needs an r-section")
        return {self.parent.range_[g]: self.parent.source[g] for g in self.members}

    def inverse(self) -> "ArrowSet":
        return ArrowSet(self.parent, (self.parent.inverse[g] for g in self.members))

    def __repr__(self):
        return f"ArrowSet({sorted(self.members)}, {self.kind})"


def bisection_product(G: FiniteGroupoid, phi: ArrowSet, psi: ArrowSet) -> ArrowSet:
    """Pointwise product {g*h : g in phi, h in psi, composable}."""
    if phi.kind not in (R_SECTION, BISECTION) or psi.kind not in (R_SECTION, BISECTION):
        raise InputError("bisection_product needs r-sections")
    by_range = {G.range_[h]: h for h in psi.members}
    out = []
    for g in phi.members:
        h = by_range.get(G.source[g])
        if h is not None:
            out.append(G.compose(g, h))
    return ArrowSet(G, out)


def unit_section(G: FiniteGroupoid, points: Optional[Iterable[int]] = None) -> ArrowSet:
    pts = G.points() if points is None else points
    return ArrowSet(G, (G.unit_of[x] for x in pts))


def mu_r(G: FiniteGroupoid, S) -> Fraction:
    """Range measure of an arrow set: sum of weight(range(g)) over g in S."""
    members = S.members if isinstance(S, ArrowSet) else S
    return sum((G.weight(G.range_[g]) for g in members), Fraction(0))


def mu_s(G: FiniteGroupoid, S) -> Fraction:
    """Source measure of an arrow set: sum of weight(source(g)) over g in S."""
    members = S.members if isinstance(S, ArrowSet) else S
    return sum((G.weight(G.source[g]) for g in members), Fraction(0))


def radon_nikodym(G: FiniteGroupoid, g: int) -> Fraction:
    """Density of the range measure against the source measure at one arrow."""
    return G.weight(G.range_[g]) / G.weight(G.source[g])


def is_pmp(G: FiniteGroupoid) -> bool:
    """True iff every arrow preserves the unit weight (range and source weigh the same)."""
    return all(G.weight(G.range_[g]) == G.weight(G.source[g]) for g in G.arrows())


def saturate(G: FiniteGroupoid, A: Iterable[int]) -> frozenset[int]:
    """Smallest invariant point set containing A (sources of arrows ranged in A)."""
    base = set(A)
    out = set(base)
    for x in base:
        for g in G.fiber_r(x):
            out.add(G.source[g])
    return frozenset(out)


class Restriction(FiniteGroupoid):
    """Full subgroupoid on a point subset, with maps back to the parent.

    Weights are kept as in the parent (not renormalised), so the result
    is tagged sigma-finite; exact cost comparisons across a restriction
    rely on this.
    """

    def __init__(self, parent: FiniteGroupoid, points: Sequence[int]):
        pts = sorted(set(points))
        if not pts:
            raise InputError("empty unit space")
        point_new = {x: i for i, x in enumerate(pts)}
        arrows = [g for g in parent.arrows()
                  if parent.range_[g] in point_new and parent.source[g] in point_new]
        arrow_new = {g: i for i, g in enumerate(arrows)}
        units = UnitSpace([parent.weight(x) for x in pts], SIGMA_FINITE,
                          [parent.units.labels[x] for x in pts])
        compose = {}
        for g in arrows:
            for h in arrows:
                k = parent.try_compose(g, h)
                if k is not None:
                    compose[(arrow_new[g], arrow_new[h])] = arrow_new[k]
        super().__init__(
            units,
            [point_new[parent.range_[g]] for g in arrows],
            [point_new[parent.source[g]] for g in arrows],
            [arrow_new[parent.inverse[g]] for g in arrows],
            [arrow_new[parent.unit_of[x]] for x in pts],
            compose,
            [parent.arrow_labels[g] for g in arrows])
        self.parent = parent
        self.parent_points = tuple(pts)
        self.parent_arrows = tuple(arrows)


def restrict(G: FiniteGroupoid, A: Iterable[int]) -> Restriction:
    return Restriction(G, list(A))


# --- builders ---------------------------------------------------------------

def group_groupoid(table: Sequence[Sequence[int]], inverse: Sequence[int],
                   identity: int, weight: Fraction = Fraction(1),
                   labels: Optional[Sequence[str]] = None) -> FiniteGroupoid:
    """A finite group as a one-point groupoid, from its multiplication table."""
    n = len(table)
    units = UnitSpace([weight], PROBABILITY if weight == 1 else SIGMA_FINITE)
    compose = {(g, h): table[g][h] for g in range(n) for h in range(n)}
    return FiniteGroupoid(units, [0] * n, [0] * n, list(inverse), [identity],
                          compose, labels)


def cyclic_group_groupoid(n: int, weight: Fraction = Fraction(1)) -> FiniteGroupoid:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    inverse = [(-i) % n for i in range(n)]
    return group_groupoid(table, inverse, 0, weight,
                          [f"+{i}" for i in range(n)])


def equivalence_groupoid(units: UnitSpace,
                         blocks: Sequence[Sequence[int]]) -> FiniteGroupoid:
    """The principal groupoid of a partition: one arrow (x, y) per related pair."""
    block_of: dict[int, int] = {}
    for b, blk in enumerate(blocks):
        for x in blk:
            if x in block_of:
                raise InputError(f"point {x} appears in two blocks")
            block_of[x] = b
    if sorted(block_of) != list(range(len(units))):
        raise InputError("blocks must partition the unit space")
    pairs = [(x, y) for x in range(len(units)) for y in range(len(units))
             if block_of[x] == block_of[y]]
    idx = {p: i for i, p in enumerate(pairs)}
    compose = {}
    for (x, y) in pairs:
        for (y2, z) in pairs:
            if y == y2:
                compose[(idx[(x, y)], idx[(y2, z)])] = idx[(x, z)]
    return FiniteGroupoid(
        units,
        [x for (x, y) in pairs],
        [y for (x, y) in pairs],
        [idx[(y, x)] for (x, y) in pairs],
        [idx[(x, x)] for x in range(len(units))],
        compose,
        [f"({units.labels[x]},{units.labels[y]})" for (x, y) in pairs])


def pair_groupoid(units: UnitSpace) -> FiniteGroupoid:
    """The full equivalence relation on the unit space."""
    return equivalence_groupoid(units, [list(range(len(units)))])


def disjoint_union(G1: FiniteGroupoid, G2: FiniteGroupoid,
                   mode: str = SIGMA_FINITE) -> FiniteGroupoid:
    units = UnitSpace(G1.units.weights + G2.units.weights, mode,
                      tuple(f"a.{l}" for l in G1.units.labels)
                      + tuple(f"b.{l}" for l in G2.units.labels))
    n1, p1 = G1.n_arrows, G1.n_points
    compose = dict(G1.compose_table)
    compose.update({(g + n1, h + n1): k + n1 for (g, h), k in G2.compose_table.items()})
    return FiniteGroupoid(
        units,
        G1.range_ + tuple(x + p1 for x in G2.range_),
        G1.source + tuple(x + p1 for x in G2.source),
        G1.inverse + tuple(g + n1 for g in G2.inverse),
        G1.unit_of + tuple(g + n1 for g in G2.unit_of),
        compose,
        G1.arrow_labels + G2.arrow_labels)
