"""Table-based finite groups and action groupoids for possibly unfaithful actions."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .core import FiniteGroupoid, InputError, UnitSpace


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]],
                 names: Optional[Sequence[str]] = None):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        n = len(self.table)
        for row in self.table:
            if len(row) != n or sorted(row) != list(range(n)):
                raise InputError("multiplication table rows must be permutations")
        identity = next((e for e in range(n)
                         if all(self.table[e][g] == g == self.table[g][e]
                                for g in range(n))), None)
        if identity is None:
            raise InputError("table has no two-sided identity element")
        self.identity = identity
        inverse = []
        for g in range(n):
            h = next((h for h in range(n)
                      if self.table[g][h] == identity == self.table[h][g]), None)
            if h is None:
                raise InputError(f"element {g} has no inverse")
            inverse.append(h)
        self.inverse = tuple(inverse)
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    if self.table[self.table[g][h]][k] != \
                       self.table[g][self.table[h][k]]:
                        raise InputError("table is not associative")
        self.names = tuple(names) if names else tuple(f"g{i}" for i in range(n))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def subgroup(self, gens: Sequence[int]) -> frozenset[int]:
        sub = {self.identity}
        frontier = [self.identity]
        gg = list(gens) + [self.inv(g) for g in gens]
        while frontier:
            new = []
            for cur in frontier:
                for g in gg:
                    nxt = self.mul(g, cur)
                    if nxt not in sub:
                        sub.add(nxt)
                        new.append(nxt)
            frontier = new
        return frozenset(sub)

    def is_subgroup(self, elems: frozenset[int]) -> bool:
        return self.identity in elems and all(
            self.mul(g, self.inv(h)) in elems for g in elems for h in elems)

    def center(self) -> frozenset[int]:
        return frozenset(g for g in range(self.order)
                         if all(self.mul(g, h) == self.mul(h, g)
                                for h in range(self.order)))

    def is_normal(self, sub: frozenset[int]) -> bool:
        return all(self.mul(self.mul(g, h), self.inv(g)) in sub
                   for g in range(self.order) for h in sub)


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)],
                       [f"+{i}" for i in range(n)])


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    n, m = a.order, b.order
    def idx(i, j):
        return i * m + j
    table = [[idx(a.mul(i1, i2), b.mul(j1, j2)) for i2 in range(n)
              for j2 in range(m)] for i1 in range(n) for j1 in range(m)]
    names = [f"({a.names[i]},{b.names[j]})" for i in range(n) for j in range(m)]
    return FiniteGroup(table, names)


def from_permutations(perms: Sequence[Sequence[int]],
                      names: Optional[Sequence[str]] = None) -> FiniteGroup:
    """The group formed by a closed list of permutations, composed left-to-right."""
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    if len(index) != len(perms):
        raise InputError("duplicate permutations")
    table = []
    for a in perms:
        row = []
        for b in perms:
            c = tuple(a[b[x]] for x in range(len(a)))
            if c not in index:
                raise InputError("permutation list is not closed")
            row.append(index[c])
        table.append(row)
    return FiniteGroup(table, names)


def symmetric3() -> FiniteGroup:
    import itertools
    perms = sorted(itertools.permutations(range(3)))
    return from_permutations(perms, ["".join(map(str, p)) for p in perms])


def action_groupoid(group: FiniteGroup, act: Sequence[Sequence[int]],
                    units: UnitSpace) -> FiniteGroupoid:
    """Translation groupoid of a table group acting on points (faithful or not).

    ``act[g]`` is the point permutation of group element g.  Arrow
    (x, g) runs from act[g^-1](x) to x; arrows with distinct group
    elements stay distinct even when the permutations coincide.
    """
    n = len(units)
    m = group.order
    for g in range(m):
        if sorted(act[g]) != list(range(n)):
            raise InputError(f"element {g} does not act by a permutation")
    for g in range(m):
        for h in range(m):
            gh = group.mul(g, h)
            for x in range(n):
                if act[g][act[h][x]] != act[gh][x]:
                    raise InputError("the table does not act: act(gh) != act(g)act(h)")
    rng, src, inv, labels = [], [], [], []
    for g in range(m):
        gi = group.inv(g)
        for x in range(n):
            rng.append(x)
            src.append(act[gi][x])
            inv.append(gi * n + act[gi][x])
            labels.append(f"({units.labels[x]},{group.names[g]})")
    compose = {}
    for g in range(m):
        gi = group.inv(g)
        for h in range(m):
            gh = group.mul(g, h)
            for x in range(n):
                compose[(g * n + x, h * n + act[gi][x])] = gh * n + x
    e = group.identity
    G = FiniteGroupoid(units, rng, src, inv, [e * n + x for x in range(n)],
                       compose, labels)
    G.group = group
    G.act = tuple(tuple(a) for a in act)
    return G


def product_groupoid(G1: FiniteGroupoid, G2: FiniteGroupoid) -> FiniteGroupoid:
    """Direct product: arrows are pairs, everything componentwise."""
    n1, n2 = G1.n_arrows, G2.n_arrows
    p2 = G2.n_points
    units = UnitSpace(
        [G1.weight(x) * G2.weight(y) for x in G1.points() for y in G2.points()],
        "sigma-finite",
        [f"({G1.units.labels[x]},{G2.units.labels[y]})"
         for x in G1.points() for y in G2.points()])

    def pt(x, y):
        return x * p2 + y

    def ar(g, h):
        return g * n2 + h

    rng = [pt(G1.range_[g], G2.range_[h]) for g in range(n1) for h in range(n2)]
    src = [pt(G1.source[g], G2.source[h]) for g in range(n1) for h in range(n2)]
    inv = [ar(G1.inverse[g], G2.inverse[h]) for g in range(n1) for h in range(n2)]
    unit_of = [ar(G1.unit_of[x], G2.unit_of[y])
               for x in G1.points() for y in G2.points()]
    compose = {}
    for (g1, h1), k1 in G1.compose_table.items():
        for (g2, h2), k2 in G2.compose_table.items():
            compose[(ar(g1, g2), ar(h1, h2))] = ar(k1, k2)
    labels = [f"({G1.arrow_labels[g]},{G2.arrow_labels[h]})"
              for g in range(n1) for h in range(n2)]
    return FiniteGroupoid(units, rng, src, inv, unit_of, compose, labels)
