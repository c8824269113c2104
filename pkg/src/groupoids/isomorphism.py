"""Bounded brute-force isomorphism search between finite groupoids."""

from __future__ import annotations

from typing import Optional

from .core import FiniteGroupoid, ResourceBoundError


def _point_signature(G: FiniteGroupoid, x: int):
    loops = sum(1 for g in G.fiber_r(x) if G.source[g] == x)
    return (G.weight(x), len(G.fiber_r(x)), len(G.fiber_s(x)), loops)


def find_isomorphism(G1: FiniteGroupoid, G2: FiniteGroupoid,
                     max_nodes: int = 2_000_000) -> Optional[dict[int, int]]:
    """An arrow bijection preserving all structure, or None if none exists.

    Backtracking with signature pruning; raises ResourceBoundError when
    the search tree exceeds ``max_nodes`` instead of answering wrongly.
    """
    if (G1.n_points != G2.n_points or G1.n_arrows != G2.n_arrows
            or sorted(G1.units.weights) != sorted(G2.units.weights)):
        return None
    sig1 = {x: _point_signature(G1, x) for x in G1.points()}
    sig2 = {x: _point_signature(G2, x) for x in G2.points()}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None
    budget = [max_nodes]

    def extend_points(pmap: dict[int, int]) -> Optional[dict[int, int]]:
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceBoundError("isomorphism search budget exhausted")
        if len(pmap) == G1.n_points:
            return match_arrows(pmap)
        x = next(x for x in G1.points() if x not in pmap)
        used = set(pmap.values())
        for y in G2.points():
            if y in used or sig1[x] != sig2[y]:
                continue
            pmap[x] = y
            found = extend_points(pmap)
            if found is not None:
                return found
            del pmap[x]
        return None

    def match_arrows(pmap: dict[int, int]) -> Optional[dict[int, int]]:
        amap: dict[int, int] = {G1.unit_of[x]: G2.unit_of[y]
                                for x, y in pmap.items()}
        used = set(amap.values())

        def consistent(g: int, h: int) -> bool:
            if G2.range_[h] != pmap[G1.range_[g]] or \
               G2.source[h] != pmap[G1.source[g]]:
                return False
            gi = G1.inverse[g]
            if gi in amap and amap[gi] != G2.inverse[h]:
                return False
            for a, b in list(amap.items()):
                k = G1.try_compose(g, a)
                if k is not None and k in amap and G2.compose(h, b) != amap[k]:
                    return False
                k = G1.try_compose(a, g)
                if k is not None and k in amap and G2.compose(b, h) != amap[k]:
                    return False
            return True

        def backtrack() -> Optional[dict[int, int]]:
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceBoundError("isomorphism search budget exhausted")
            g = next((g for g in G1.arrows() if g not in amap), None)
            if g is None:
                return dict(amap)
            for h in G2.arrows():
                if h in used or not consistent(g, h):
                    continue
                amap[g] = h
                used.add(h)
                found = backtrack()
                if found is not None:
                    return found
                del amap[g]
                used.discard(h)
            return None

        return backtrack()

    return extend_points({})
