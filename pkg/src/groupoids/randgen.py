"""Seeded random instances for the verification suites.

Everything here is driven by an explicit `random.Random`, so a seed
pins the exact instances a run sees.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .core import (SIGMA_FINITE, FiniteGroupoid, UnitSpace,
                   cyclic_group_groupoid, disjoint_union, equivalence_groupoid,
                   pair_groupoid, uniform_units)
from .actions import FiniteGroupAction, translation_groupoid
from .treeing import OrientedGraphing


def random_weights(rng: random.Random, n: int) -> UnitSpace:
    return UnitSpace([Fraction(rng.randint(1, 6), rng.randint(1, 6))
                      for _ in range(n)], SIGMA_FINITE)


def _random_component(rng: random.Random) -> FiniteGroupoid:
    kind = rng.randrange(4)
    if kind == 0:
        k = rng.randint(1, 5)
        blocks, cur = [], []
        for x in range(k):
            cur.append(x)
            if rng.random() < 0.5:
                blocks.append(cur)
                cur = []
        if cur:
            blocks.append(cur)
        return equivalence_groupoid(random_weights(rng, k), blocks)
    if kind == 1:
        return cyclic_group_groupoid(rng.randint(1, 6),
                                     Fraction(rng.randint(1, 4), rng.randint(1, 4)))
    if kind == 2:
        k = rng.randint(2, 5)
        act = FiniteGroupAction(random_weights(rng, k),
                                [("a", tuple((x + 1) % k for x in range(k)))])
        return translation_groupoid(act)
    k = rng.randint(2, 4)
    perm = list(range(k))
    rng.shuffle(perm)
    act = FiniteGroupAction(random_weights(rng, k), [("s", tuple(perm))])
    return translation_groupoid(act)


def random_groupoid(rng: random.Random, max_arrows: int = 200) -> FiniteGroupoid:
    G = _random_component(rng)
    while rng.random() < 0.6:
        nxt = _random_component(rng)
        if G.n_arrows + nxt.n_arrows > max_arrows:
            break
        G = disjoint_union(G, nxt)
    return G


def random_treed_instance(rng: random.Random, max_arrows: int = 200):
    """A measure-preserving groupoid with an oriented treeing and a target set.

    Components are either principal blocks carrying a random spanning
    tree or free cyclic translation components carrying a cut path;
    weights are constant on each component so the result preserves its
    measure.
    """
    parts = []
    total = 0
    while not parts or (rng.random() < 0.6 and total < max_arrows):
        w = Fraction(1, rng.randint(1, 5))
        if rng.random() < 0.5:
            k = rng.randint(2, 5)
            G = pair_groupoid(UnitSpace([w] * k, SIGMA_FINITE))
            tree_edges = []
            for i in range(1, k):
                a, b = rng.randrange(i), i
                if rng.random() < 0.5:
                    a, b = b, a
                tree_edges.append((a, b))
            psi_plus = [next(g for g in G.arrows()
                             if G.range_[g] == a and G.source[g] == b)
                        for a, b in tree_edges]
        else:
            n = rng.randint(2, 5)
            act = FiniteGroupAction(UnitSpace([w] * n, SIGMA_FINITE),
                                    [("a", tuple((x + 1) % n for x in range(n)))])
            G = translation_groupoid(act)
            step = next(i for i, nm in enumerate(act.names) if nm == "a")
            cut = rng.randrange(n)
            psi_plus = [G.arrow(x, step) for x in range(n) if x != cut]
        if total + G.n_arrows > max_arrows and parts:
            break
        y = sorted(rng.sample(range(G.n_points),
                              rng.randint(1, G.n_points)))
        parts.append((G, psi_plus, y))
        total += G.n_arrows
    G, psi_plus, y = parts[0]
    for H, hp, hy in parts[1:]:
        offset_pts, offset_arrows = G.n_points, G.n_arrows
        G = disjoint_union(G, H)
        psi_plus = list(psi_plus) + [g + offset_arrows for g in hp]
        y = list(y) + [x + offset_pts for x in hy]
    return G, OrientedGraphing(G, psi_plus), frozenset(y)
