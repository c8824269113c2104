"""Shipped example instances: builders, the quotient catalog, and file export."""

from __future__ import annotations

import os
from fractions import Fraction

from .actions import FiniteGroupAction, translation_groupoid
from .core import UnitSpace, pair_groupoid, uniform_units
from .groups import FiniteGroup, action_groupoid, cyclic
from .hnn_group import bs_presentation
from .hnn_model import single_class_descent
from .splitting import CentralExtensionInstance
from . import storage


def three_point_star():
    """Pair groupoid on three uniform points, star treeing, target {1, 2}."""
    G = pair_groupoid(uniform_units(3))

    def arrow(x, y):
        return next(g for g in G.arrows() if G.range_[g] == x and G.source[g] == y)

    return G, [arrow(0, 1), arrow(0, 2)], [1, 2]


def end_counterexample():
    """Four points, a split subgroupoid, and a section that conjugates out of it."""
    G = pair_groupoid(uniform_units(4))

    def arrow(x, y):
        return next(g for g in G.arrows() if G.range_[g] == x and G.source[g] == y)

    sub_gens = [arrow(0, 1), arrow(2, 3)]
    section = [arrow(0, 2), arrow(1, 1), arrow(2, 0), arrow(3, 3)]
    return G, sub_gens, section


def z4_splitting():
    h = cyclic(4)
    inst = CentralExtensionInstance(h, frozenset({0, 2}), uniform_units(2),
                                    ((0, 1), (1, 0), (0, 1), (1, 0)))
    inst.n = cyclic(4)
    inst.phi = (0, 1, 2, 3)
    inst.e_in_n = (0, 2)
    return inst


def noncentral_splitting():
    from .groups import symmetric3
    s3 = symmetric3()
    e = s3.subgroup([next(i for i, nm in enumerate(s3.names) if nm == "120")])
    act = tuple((0, 1) if g in e else (1, 0) for g in range(6))
    return CentralExtensionInstance(s3, e, uniform_units(2), act,
                                    n=s3, phi=tuple(range(6)),
                                    e_in_n=tuple(sorted(e)))


def _cycle(n):
    return tuple((x + 1) % n for x in range(n))


def _regular_action(group: FiniteGroup) -> FiniteGroupAction:
    """The group acting on itself by left translation."""
    units = uniform_units(group.order)
    gens = []
    for g in range(group.order):
        perm = tuple(group.mul(g, x) for x in range(group.order))
        gens.append((group.names[g], perm))
    return FiniteGroupAction(units, gens)


def quotient_catalog() -> list[tuple[str, FiniteGroupAction, list[tuple[int, ...]]]]:
    """Twenty translation-groupoid instances with a normal acting subgroup.

    Each entry is (name, action, generator permutations of the normal
    subgroup); the subgroup acts freely in every case, so the quotient
    has an independent model as a quotient-action groupoid.
    """
    out = []

    def add(name, units, gens, h_gens):
        act = FiniteGroupAction(units, gens)
        out.append((name, act, [tuple(p) for p in h_gens]))

    idn = lambda n: tuple(range(n))
    # cyclic regular actions
    add("z2-mod-trivial", uniform_units(2), [("a", _cycle(2))], [idn(2)])
    add("z2-mod-z2", uniform_units(2), [("a", _cycle(2))], [_cycle(2)])
    add("z4-mod-2z4", uniform_units(4), [("a", _cycle(4))],
        [tuple((x + 2) % 4 for x in range(4))])
    add("z4-mod-trivial", uniform_units(4), [("a", _cycle(4))], [idn(4)])
    add("z6-mod-2z6", uniform_units(6), [("a", _cycle(6))],
        [tuple((x + 2) % 6 for x in range(6))])
    add("z6-mod-3z6", uniform_units(6), [("a", _cycle(6))],
        [tuple((x + 3) % 6 for x in range(6))])
    # Klein four group, regular on 4
    ka, kb = (1, 0, 3, 2), (2, 3, 0, 1)
    add("klein-mod-a", uniform_units(4), [("a", ka), ("b", kb)], [ka])
    add("klein-mod-ab", uniform_units(4), [("a", ka), ("b", kb)],
        [tuple(ka[kb[x]] for x in range(4))])
    # symmetric group on three letters
    s, c = (1, 0, 2), (1, 2, 0)
    add("s3-natural-mod-a3", uniform_units(3), [("s", s), ("c", c)], [c])
    from .groups import symmetric3
    reg = _regular_action(symmetric3())
    three_cycle = next(p for (nm, p) in reg.generators if nm == "120")
    add("s3-regular-mod-a3", uniform_units(6),
        [(nm, p) for nm, p in reg.generators if nm in ("120", "102")],
        [three_cycle])
    # dihedral on the square
    r4, f4 = (1, 2, 3, 0), (0, 3, 2, 1)
    add("d4-mod-rotations", uniform_units(4), [("r", r4), ("f", f4)], [r4])
    add("d4-mod-center", uniform_units(4), [("r", r4), ("f", f4)],
        [tuple(r4[r4[x]] for x in range(4))])
    # larger cyclic
    add("z8-mod-2z8", uniform_units(8), [("a", _cycle(8))],
        [tuple((x + 2) % 8 for x in range(8))])
    add("z8-mod-4z8", uniform_units(8), [("a", _cycle(8))],
        [tuple((x + 4) % 8 for x in range(8))])
    # alternating group on four letters, natural action
    v1, c3 = (1, 0, 3, 2), (0, 2, 3, 1)
    add("a4-mod-klein", uniform_units(4), [("v", v1), ("c", c3)],
        [v1, (3, 2, 1, 0)])
    # dihedral on the hexagon
    r6, f6 = _cycle(6), (0, 5, 4, 3, 2, 1)
    add("d6-mod-rotations", uniform_units(6), [("r", r6), ("f", f6)], [r6])
    add("d6-mod-r2", uniform_units(6), [("r", r6), ("f", f6)],
        [tuple((x + 2) % 6 for x in range(6))])
    add("d6-mod-center", uniform_units(6), [("r", r6), ("f", f6)],
        [tuple((x + 3) % 6 for x in range(6))])
    # product action of s3 x z2 on 3 x 2 points
    def prod(p3, p2):
        return tuple(p3[x % 3] + 3 * p2[x // 3] for x in range(6))
    add("s3xz2-mod-a3", uniform_units(6),
        [("c", prod(c, idn(2))), ("s", prod(s, idn(2))),
         ("t", prod(idn(3), _cycle(2)))],
        [prod(c, idn(2))])
    # z2 x z4, regular on 8
    za = tuple((x + 4) % 8 for x in range(8))
    zb = tuple(4 * (x // 4) + (x + 1) % 4 for x in range(8))
    add("z2xz4-mod-z4", uniform_units(8), [("a", za), ("b", zb)], [zb])
    assert len(out) == 20
    return out


def quotient_action_model(act: FiniteGroupAction, sub: frozenset[int]):
    """Independent model of the quotient: the coset group acting on point classes."""
    order = act.order
    coset_key = {g: frozenset(act.multiply(g, h) for h in sub) for g in range(order)}
    cosets = sorted({coset_key[g] for g in range(order)}, key=min)
    coset_idx = {g: cosets.index(coset_key[g]) for g in range(order)}
    reps = [min(c) for c in cosets]
    table = [[coset_idx[act.multiply(a, b)] for b in reps] for a in reps]
    group = FiniteGroup(table, [act.names[r] for r in reps])
    n = len(act.units)
    orbit_of = {}
    orbits = []
    for x in range(n):
        if x in orbit_of:
            continue
        orb = sorted({act.apply(h, x) for h in sub})
        for y in orb:
            orbit_of[y] = len(orbits)
        orbits.append(orb)
    weights = [sum((act.units.weights[x] for x in orb), Fraction(0))
               for orb in orbits]
    units = UnitSpace(weights, act.units.mode,
                      ["{" + ",".join(act.units.labels[x] for x in orb) + "}"
                       for orb in orbits])
    model_act = [[orbit_of[act.apply(reps[a], orb[0])] for orb in orbits]
                 for a in range(len(reps))]
    return action_groupoid(group, model_act, units)


def write_all(directory: str) -> list[str]:
    """Write every shipped instance file; returns the paths written."""
    os.makedirs(directory, exist_ok=True)
    written = []

    def put(name, obj):
        path = os.path.join(directory, name)
        storage.save_file(path, obj)
        written.append(path)

    G, psi_plus, y = three_point_star()
    put("three_point_star.json", storage.treeing_instance_to_obj(G, psi_plus, y))
    put("bs23_descent.json", storage.descent_to_obj(single_class_descent(2, 3)))
    put("bs22_descent.json", storage.descent_to_obj(single_class_descent(2, 2)))
    put("bs23_presentation.json",
        storage.presentation_to_obj(bs_presentation(2, 3)))
    name, act, h_gens = quotient_catalog()[2]
    G = translation_groupoid(act)
    sub = act.subgroup_closure([act.index[p] for p in h_gens])
    put("z4_mod_2z4_quotient.json",
        storage.quotient_instance_to_obj(G, sorted(G.subgroup_arrows(sub))))
    put("splitting_z4.json", storage.splitting_instance_to_obj(z4_splitting()))
    put("splitting_noncentral.json",
        storage.splitting_instance_to_obj(noncentral_splitting()))
    return written
