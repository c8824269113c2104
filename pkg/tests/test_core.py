from fractions import Fraction

import pytest

from groupoids import (ArrowSet, InputError, UnitSpace, bisection_product,
                       cyclic_group_groupoid, equivalence_groupoid, is_pmp,
                       mu_r, mu_s, pair_groupoid, radon_nikodym, restrict,
                       saturate, uniform_units, unit_section, validate_groupoid)
from groupoids.core import FiniteGroupoid


def test_unit_space_invariants():
    with pytest.raises(InputError):
        UnitSpace([Fraction(0), Fraction(1)])
    with pytest.raises(InputError):
        UnitSpace([Fraction(1, 2), Fraction(1, 3)])  # probability must sum to 1
    u = UnitSpace(["1/2", "1/2"])
    assert u.total() == 1


def test_z2_group_groupoid_valid():
    G = cyclic_group_groupoid(2)
    assert validate_groupoid(G) == []
    assert G.n_arrows == 2 and G.n_points == 1


def test_pair_groupoid_on_three_points_valid():
    G = pair_groupoid(uniform_units(3))
    assert validate_groupoid(G) == []
    assert G.n_arrows == 9


def test_bad_compose_entry_reported_with_witness():
    G = pair_groupoid(uniform_units(2))
    # force a compose entry on a non-composable pair: (0,1) has source 1,
    # (0,1) has range 0, so ((0,1),(0,1)) is not composable
    a01 = next(g for g in G.arrows() if G.range_[g] == 0 and G.source[g] == 1)
    bad = dict(G.compose_table)
    bad[(a01, a01)] = a01
    H = FiniteGroupoid(G.units, G.range_, G.source, G.inverse, G.unit_of, bad)
    violations = validate_groupoid(H)
    assert any(v.rule == "compose-domain" and v.witness == (a01, a01)
               for v in violations)


def pair3():
    return pair_groupoid(uniform_units(3))


def arrow_of(G, x, y):
    return next(g for g in G.arrows() if G.range_[g] == x and G.source[g] == y)


def test_mu_on_units_and_single_arrow():
    G = pair3()
    assert mu_r(G, unit_section(G)) == 1
    H = pair_groupoid(UnitSpace(["1/3", "2/3"]))
    a = arrow_of(H, 0, 1)
    assert mu_r(H, [a]) == Fraction(1, 3)
    assert mu_s(H, [a]) == Fraction(2, 3)
    assert radon_nikodym(H, a) == Fraction(1, 2)


def test_mu_r_of_three_point_star():
    # star at point 0: arrows (0,1),(1,0),(0,2),(2,0), uniform weights 1/3
    G = pair3()
    star = [arrow_of(G, 0, 1), arrow_of(G, 1, 0), arrow_of(G, 0, 2), arrow_of(G, 2, 0)]
    assert mu_r(G, star) == Fraction(4, 3)


def test_cocycle_identity_exhaustive():
    G = pair_groupoid(UnitSpace(["1/6", "1/3", "1/2"]))
    for (g, h), k in G.compose_table.items():
        assert radon_nikodym(G, k) == radon_nikodym(G, g) * radon_nikodym(G, h)
    for x in G.points():
        assert radon_nikodym(G, G.unit_of[x]) == 1


def test_is_pmp():
    assert is_pmp(pair_groupoid(uniform_units(2)))
    assert not is_pmp(pair_groupoid(UnitSpace(["1/3", "2/3"])))
    assert is_pmp(cyclic_group_groupoid(4))
    # pmp iff the density is identically 1
    G = pair_groupoid(UnitSpace(["1/3", "2/3"]))
    assert any(radon_nikodym(G, g) != 1 for g in G.arrows())


def test_bisection_product_identity():
    G = pair3()
    phi = ArrowSet(G, [arrow_of(G, 0, 1), arrow_of(G, 1, 2), arrow_of(G, 2, 0)])
    assert phi.kind == "bisection"
    psi = unit_section(G, sorted(phi.s_set()))
    assert bisection_product(G, phi, psi) == phi


def test_bisection_product_kind_tag():
    G = pair3()
    # two arrows with the same source -> r-section that is not a bisection
    phi = ArrowSet(G, [arrow_of(G, 0, 1), arrow_of(G, 2, 1)])
    assert phi.kind == "r-section"
    psi = ArrowSet(G, [arrow_of(G, 1, 0)])
    prod = bisection_product(G, phi, psi)
    assert prod.members == {arrow_of(G, 0, 0), arrow_of(G, 2, 0)}
    assert prod.kind == "r-section"


def test_saturate_single_orbit_and_idempotent():
    G = pair3()
    assert saturate(G, [0]) == frozenset({0, 1, 2})
    for A in ([0], [1, 2], []):
        assert saturate(G, saturate(G, A)) == saturate(G, A)


def test_restrict_pair_groupoid():
    G = pair3()
    H = restrict(G, [1, 2])
    assert validate_groupoid(H) == []
    assert H.n_points == 2 and H.n_arrows == 4
    assert H.units.mode == "sigma-finite"
    assert H.units.weights == (Fraction(1, 3), Fraction(1, 3))
    with pytest.raises(InputError):
        restrict(G, [])


def test_mu_of_bisection_equals_measure_of_range_and_source():
    G = pair_groupoid(UnitSpace(["1/6", "1/3", "1/2"]))
    phi = ArrowSet(G, [arrow_of(G, 0, 2), arrow_of(G, 1, 0)])
    assert mu_r(G, phi) == sum(G.weight(x) for x in phi.r_set())
    assert mu_s(G, phi) == sum(G.weight(x) for x in phi.s_set())
