"""Finite group actions by permutations and their translation groupoids."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .core import (FiniteGroupoid, InputError, ResourceBoundError, UnitSpace,
                   uniform_units)

Perm = tuple[int, ...]


def _compose_perm(a: Perm, b: Perm) -> Perm:
    """a after b: (a*b)(x) = a(b(x))."""
    return tuple(a[b[x]] for x in range(len(a)))


def _invert_perm(a: Perm) -> Perm:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


def _identity_perm(n: int) -> Perm:
    return tuple(range(n))


class FiniteGroupAction:
    """A group acting on the points of a unit space, given by generator permutations.

    The generated group is closed by breadth-first multiplication; the
    closure is refused (with a hard error, never a silent truncation)
    when it exceeds ``max_closure``.
    """

    def __init__(self, units: UnitSpace, generators: Sequence[tuple[str, Sequence[int]]],
                 max_closure: int = 20000):
        self.units = units
        n = len(units)
        self.generators: list[tuple[str, Perm]] = []
        for name, perm in generators:
            p = tuple(perm)
            if sorted(p) != list(range(n)):
                raise InputError(f"generator {name!r} is not a permutation of {n} points")
            self.generators.append((name, p))
        self.elements, self.names = self._close(max_closure)
        self.index = {p: i for i, p in enumerate(self.elements)}

    def _close(self, max_closure: int) -> tuple[list[Perm], list[str]]:
        n = len(self.units)
        e = _identity_perm(n)
        elements: dict[Perm, str] = {e: "e"}
        frontier = [e]
        gens = self.generators + [(f"{nm}^-1", _invert_perm(p))
                                  for nm, p in self.generators]
        while frontier:
            new: list[Perm] = []
            for cur in frontier:
                for nm, p in gens:
                    nxt = _compose_perm(p, cur)
                    if nxt not in elements:
                        elements[nxt] = (nm if elements[cur] == "e"
                                         else nm + "*" + elements[cur])
                        new.append(nxt)
                        if len(elements) > max_closure:
                            raise ResourceBoundError(
                                f"group closure exceeded {max_closure} elements")
            frontier = new
        ordered = sorted(elements)  # deterministic element order
        return ordered, [elements[p] for p in ordered]

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity_index(self) -> int:
        return self.index[_identity_perm(len(self.units))]

    def multiply(self, i: int, j: int) -> int:
        return self.index[_compose_perm(self.elements[i], self.elements[j])]

    def invert(self, i: int) -> int:
        return self.index[_invert_perm(self.elements[i])]

    def apply(self, i: int, x: int) -> int:
        return self.elements[i][x]

    def subgroup_closure(self, gen_indices: Sequence[int]) -> frozenset[int]:
        """Indices of the subgroup generated by the given element indices."""
        sub = {self.identity_index()}
        frontier = [self.identity_index()]
        gens = list(gen_indices) + [self.invert(i) for i in gen_indices]
        while frontier:
            new = []
            for cur in frontier:
                for gidx in gens:
                    nxt = self.multiply(gidx, cur)
                    if nxt not in sub:
                        sub.add(nxt)
                        new.append(nxt)
            frontier = new
        return frozenset(sub)

    def is_normal_subgroup(self, sub: frozenset[int]) -> bool:
        return all(self.multiply(self.multiply(g, h), self.invert(g)) in sub
                   for g in range(self.order) for h in sub)


class TranslationGroupoid(FiniteGroupoid):
    """Arrows are pairs (x, g); (x, g) goes from g^-1 x to x.

    Arrow index layout: arrow (x, g) has index g * n_points + x, so the
    subgroupoid of a subgroup is a simple index filter.
    """

    def __init__(self, action: FiniteGroupAction, max_arrows: int = 200000):
        n = len(action.units)
        m = action.order
        if n * m > max_arrows:
            raise ResourceBoundError(f"translation groupoid would have {n*m} arrows")
        rng, src, inv, labels = [], [], [], []
        for g in range(m):
            ginv = action.invert(g)
            for x in range(n):
                rng.append(x)
                src.append(action.elements[ginv][x])
                inv.append(ginv * n + action.elements[ginv][x])
                labels.append(f"({action.units.labels[x]},{action.names[g]})")
        compose = {}
        for g in range(m):
            for h in range(m):
                gh = action.multiply(g, h)
                ginv = action.invert(g)
                for x in range(n):
                    # (x, g) * (g^-1 x, h) = (x, gh)
                    y = action.elements[ginv][x]
                    compose[(g * n + x, h * n + y)] = gh * n + x
        e = action.identity_index()
        super().__init__(action.units, rng, src, inv,
                         [e * n + x for x in range(n)], compose, labels)
        self.action = action

    def arrow(self, x: int, g: int) -> int:
        return g * len(self.action.units) + x

    def arrow_parts(self, a: int) -> tuple[int, int]:
        n = len(self.action.units)
        return a % n, a // n

    def subgroup_arrows(self, sub: frozenset[int]) -> frozenset[int]:
        n = len(self.action.units)
        return frozenset(g * n + x for g in sub for x in range(n))


def translation_groupoid(action: FiniteGroupAction,
                         max_arrows: int = 200000) -> TranslationGroupoid:
    return TranslationGroupoid(action, max_arrows)


def cyclic_action(n_points: int, step: int = 1,
                  units: Optional[UnitSpace] = None) -> FiniteGroupAction:
    """Z/n acting on n points by rotation (a standard free test action)."""
    units = units or uniform_units(n_points)
    perm = tuple((x + step) % n_points for x in range(n_points))
    return FiniteGroupAction(units, [("a", perm)])
