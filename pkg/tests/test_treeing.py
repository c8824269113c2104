from fractions import Fraction

import pytest

from groupoids import InputError, pair_groupoid, uniform_units
from groupoids.treeing import (OrientedGraphing, cost, decompose_pieces,
                               fiber_graph, induce_treeing, is_graphing,
                               is_treeing, verify_induction)


def arrow_of(G, x, y):
    return next(g for g in G.arrows() if G.range_[g] == x and G.source[g] == y)


@pytest.fixture
def star3():
    """Pair groupoid on 3 uniform points with the star treeing at point 0."""
    G = pair_groupoid(uniform_units(3))
    psi_plus = [arrow_of(G, 0, 1), arrow_of(G, 0, 2)]
    return G, OrientedGraphing(G, psi_plus)


def test_star_is_treeing(star3):
    G, psi = star3
    assert is_graphing(G, psi)
    assert is_treeing(G, psi)


def test_triangle_is_graphing_not_treeing(star3):
    G, _ = star3
    tri = OrientedGraphing(G, [arrow_of(G, 0, 1), arrow_of(G, 0, 2),
                               arrow_of(G, 1, 2)])
    assert is_graphing(G, tri)
    assert not is_treeing(G, tri)


def test_empty_set_on_nonprincipal_not_graphing():
    from groupoids import cyclic_group_groupoid
    G = cyclic_group_groupoid(2)
    assert not is_graphing(G, OrientedGraphing(G, []))


def test_orientation_validation(star3):
    G, _ = star3
    with pytest.raises(InputError):
        OrientedGraphing(G, [arrow_of(G, 0, 1), arrow_of(G, 1, 0)])
    with pytest.raises(InputError):
        OrientedGraphing(G, [G.unit_of[0]])


def test_cost_values(star3):
    G, psi = star3
    assert cost(G, []) == 0
    assert cost(G, psi.psi) == Fraction(2, 3)
    with pytest.raises(InputError):
        cost(G, psi.psi_plus)  # not symmetric


def test_decompose_pieces_star(star3):
    G, psi = star3
    pieces = decompose_pieces(psi)
    expected = [{arrow_of(G, 0, 1)}, {arrow_of(G, 1, 0)},
                {arrow_of(G, 0, 2)}, {arrow_of(G, 2, 0)}]
    assert [set(p.members) for p in pieces] == expected


def test_decompose_single_bisection():
    G = pair_groupoid(uniform_units(3))
    psi = OrientedGraphing(G, [arrow_of(G, 0, 1), arrow_of(G, 1, 2)])
    assert len(decompose_pieces(psi)) == 2


def test_decompose_shared_range_forces_split(star3):
    G, psi = star3
    assert len(decompose_pieces(psi)) == 4


def test_worked_example_induction(star3):
    G, psi = star3
    state = induce_treeing(G, psi, [1, 2])
    assert state.psi0 == {arrow_of(G, 0, 1), arrow_of(G, 1, 0)}
    assert state.psi1 == {arrow_of(G, 0, 2), arrow_of(G, 2, 0)}
    assert state.theta == {arrow_of(G, 1, 2), arrow_of(G, 2, 1)}
    assert cost(G, state.theta) == cost(G, state.psi1) == Fraction(1, 3)
    rep = verify_induction(state)
    assert rep.ok, rep.render_text()


def test_induction_full_target_is_identity(star3):
    G, psi = star3
    state = induce_treeing(G, psi, [0, 1, 2])
    assert state.psi0 == frozenset()
    assert state.psi1 == psi.psi
    assert state.theta == psi.psi
    assert all(state.j_map[g] == g for g in state.psi1)
    assert cost(G, state.theta) == cost(G, psi.psi)
    assert verify_induction(state).ok


def test_induction_rejects_non_treeing(star3):
    G, _ = star3
    tri = OrientedGraphing(G, [arrow_of(G, 0, 1), arrow_of(G, 0, 2),
                               arrow_of(G, 1, 2)])
    with pytest.raises(InputError, match="not a treeing"):
        induce_treeing(G, tri, [1])
    with pytest.raises(InputError, match="empty"):
        induce_treeing(G, OrientedGraphing(G, [arrow_of(G, 0, 1),
                                               arrow_of(G, 0, 2)]), [])


def test_induction_partial_orbits():
    from groupoids import disjoint_union
    G1 = pair_groupoid(uniform_units(2))
    G2 = pair_groupoid(uniform_units(2))
    G = disjoint_union(G1, G2)
    psi = OrientedGraphing(G, [arrow_of(G, 0, 1), arrow_of(G, 2, 3)])
    with pytest.raises(InputError, match="allow_partial"):
        induce_treeing(G, psi, [0])
    state = induce_treeing(G, psi, [0], allow_partial=True)
    assert state.skipped_orbits == [(2, 3)]
    assert verify_induction(state).ok


def test_fiber_graphs_isomorphic_along_arrows(star3):
    G, psi = star3
    # left multiplication maps the fiber over source to the fiber over range
    for gamma in G.arrows():
        src_fg = fiber_graph(G, psi.psi, G.source[gamma])
        dst_fg = fiber_graph(G, psi.psi, G.range_[gamma])
        mapping = {g: G.compose(gamma, g) for g in src_fg.vertices}
        for g in src_fg.vertices:
            assert sorted(mapping[h] for h in src_fg.adjacency[g]) == \
                list(dst_fg.adjacency[mapping[g]])
