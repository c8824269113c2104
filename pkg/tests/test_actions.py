import pytest

from groupoids import (InputError, ResourceBoundError, is_pmp, uniform_units,
                       validate_groupoid)
from groupoids.actions import FiniteGroupAction, cyclic_action, translation_groupoid


def test_trivial_group_on_one_point_is_unit_groupoid():
    act = FiniteGroupAction(uniform_units(1), [])
    G = translation_groupoid(act)
    assert G.n_arrows == 1 and G.n_points == 1
    assert validate_groupoid(G) == []


def test_z2_swap_on_two_points():
    act = FiniteGroupAction(uniform_units(2), [("s", (1, 0))])
    G = translation_groupoid(act)
    assert G.n_arrows == 4
    assert validate_groupoid(G) == []
    assert is_pmp(G)


def test_z4_cyclic_16_arrows_and_index_two_subgroup():
    act = cyclic_action(4)
    G = translation_groupoid(act)
    assert act.order == 4
    assert G.n_arrows == 16
    assert validate_groupoid(G) == []
    a = next(i for i, nm in enumerate(act.names) if nm == "a")
    sub = act.subgroup_closure([act.multiply(a, a)])
    assert len(sub) == 2
    # per-fiber coset count of the subgroupoid is the group index
    arrows = G.subgroup_arrows(sub)
    x = 0
    fiber = G.fiber_r(x)
    classes = set()
    for g in fiber:
        rep = min(h for h in fiber
                  if G.compose(G.inverse[h], g) in arrows)
        classes.add(rep)
    assert len(classes) == 2


def test_closure_bound_errors_loudly():
    units = uniform_units(7)
    with pytest.raises(ResourceBoundError):
        FiniteGroupAction(units, [("c", (1, 2, 3, 4, 5, 6, 0)),
                                  ("t", (1, 0, 2, 3, 4, 5, 6))],
                          max_closure=100)  # generates S_7


def test_non_permutation_rejected():
    with pytest.raises(InputError):
        FiniteGroupAction(uniform_units(2), [("bad", (0, 0))])
