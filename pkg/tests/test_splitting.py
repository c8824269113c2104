from fractions import Fraction

import pytest

from groupoids import InputError, uniform_units, validate_groupoid
from groupoids.groups import (FiniteGroup, action_groupoid, cyclic,
                              direct_product, product_groupoid, symmetric3)
from groupoids.splitting import (CentralExtensionInstance, build_section,
                                 product_decomposition)


def z4_on_two_points():
    """H = Z/4, E = {0,2} central, X = 2 points swapped by H/E."""
    h = cyclic(4)
    act = [(0, 1)[::1], (1, 0), (0, 1), (1, 0)]
    act = [tuple(a) for a in act]
    return CentralExtensionInstance(h, frozenset({0, 2}), uniform_units(2), tuple(act))


def test_group_table_validation():
    with pytest.raises(InputError):
        FiniteGroup([[0, 1], [0, 1]])
    s3 = symmetric3()
    assert s3.order == 6
    assert len(s3.center()) == 1


def test_action_groupoid_unfaithful_supported():
    h = cyclic(4)
    act = [(0, 1), (1, 0), (0, 1), (1, 0)]
    G = action_groupoid(h, act, uniform_units(2))
    assert G.n_arrows == 8
    assert validate_groupoid(G) == []


def test_product_groupoid_valid():
    from groupoids import cyclic_group_groupoid, pair_groupoid
    P = product_groupoid(cyclic_group_groupoid(2), pair_groupoid(uniform_units(2)))
    assert validate_groupoid(P) == []
    assert P.n_arrows == 8


def test_section_trivial_central_subgroup():
    h = cyclic(2)
    inst = CentralExtensionInstance(h, frozenset({0}), uniform_units(2),
                                    ((0, 1), (1, 0)))
    res = build_section(inst)
    assert res.report.ok, res.report.render_text()


def test_section_single_point():
    h = cyclic(4)
    inst = CentralExtensionInstance(h, frozenset(range(4)), uniform_units(1),
                                    ((0,),) * 4)
    res = build_section(inst)
    assert res.report.ok
    assert list(res.sigma) == [(0, 0)]


def test_section_z4_fixture():
    res = build_section(z4_on_two_points())
    assert res.report.ok, res.report.render_text()
    assert len(res.sigma) == 4  # all pairs of the single orbit


def test_section_rejects_nonfree():
    h = cyclic(2)
    inst = CentralExtensionInstance(h, frozenset({0}), uniform_units(2),
                                    ((0, 1), (0, 1)))
    with pytest.raises(InputError, match="not free"):
        build_section(inst)


def test_product_decomposition_z4_fixture():
    inst = z4_on_two_points()
    inst.n = cyclic(4)
    inst.phi = (0, 1, 2, 3)
    inst.e_in_n = (0, 2)
    res = product_decomposition(inst)
    assert res.report.ok, res.report.render_text()
    assert res.big.n_arrows == res.target.n_arrows == 16


def test_product_decomposition_pure_central():
    # N = H = E acting trivially on a point: everything collapses to Y x E
    h = cyclic(2)
    inst = CentralExtensionInstance(h, frozenset({0, 1}), uniform_units(1),
                                    ((0,), (0,)), n=h, phi=(0, 1), e_in_n=(0, 1))
    res = product_decomposition(inst)
    assert res.report.ok, res.report.render_text()
    assert res.target.n_points == 2  # one quotient class times two y-points


def test_product_decomposition_trivial_e():
    h = cyclic(2)
    inst = CentralExtensionInstance(h, frozenset({0}), uniform_units(2),
                                    ((0, 1), (1, 0)), n=cyclic(2), phi=(0, 1),
                                    e_in_n=(0,))
    res = product_decomposition(inst)
    assert res.report.ok, res.report.render_text()


def noncentral_instance():
    """H = N = S3, E = the 3-cycle subgroup: normal but not central."""
    s3 = symmetric3()
    e = s3.subgroup([next(i for i, nm in enumerate(s3.names) if nm == "120")])
    assert len(e) == 3 and s3.is_normal(e) and not e <= s3.center()
    # X = 2 points; H/E = Z/2 swaps them: elements of e fix both points
    act = tuple((0, 1) if g in e else (1, 0) for g in range(6))
    return CentralExtensionInstance(s3, e, uniform_units(2), act,
                                    n=s3, phi=tuple(range(6)),
                                    e_in_n=tuple(sorted(e)))


def test_noncentral_negative_control():
    inst = noncentral_instance()
    with pytest.raises(InputError, match="not central"):
        product_decomposition(inst)
    res = product_decomposition(inst, require_central=False)
    assert not res.report.ok
    failed = {l.tag for l in res.report.failures()}
    assert "splitting.product-action-law" in failed
