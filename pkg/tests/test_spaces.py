from __future__ import annotations

from fractions import Fraction

import pytest

from leafix.arith import Cyclotomic
from leafix.genera import chern_character, det_one_minus_h, genus_of_total_class, lambda_minus1_ch
from leafix.gring import Current, integrate, pair_current
from leafix.series import named_series
from leafix.spaces import (
    build_atiyah_Z,
    build_circle,
    build_cp,
    build_kp,
    build_point,
    build_sphere_circle,
    build_torus,
    build_torus_with_W,
    build_universal_example,
    product,
)


def test_cp_ring():
    M = build_cp(1)
    a = M.ring.var("alpha")
    assert a * a == 0 and integrate(a) == 1
    assert M.tangent.rank == 2 and M.dimension == 2
    with pytest.raises(ValueError):
        build_cp(0)


def test_kp_total_classes():
    M2 = build_kp(1)
    a = M2.ring.var("alpha")
    assert M2.tangent.total == 1
    M3 = build_kp(2)
    a = M3.ring.var("alpha")
    assert M3.tangent.total == (1 - 4 * a + 16 * a * a) * (1 + a) ** 6
    for qm1 in range(1, 6):
        M = build_kp(qm1)
        assert M.tangent.total.constant_term() == 1
        assert M.tangent.rank == 4 * qm1
        assert integrate(M.ring.var("alpha") ** qm1) == 1


@pytest.mark.parametrize("k", range(1, 6))
def test_torus_with_W(k):
    M = build_torus_with_W(k)
    R = M.ring
    closed = R.one()
    for i in range(1, k + 1):
        closed = closed * (1 + R.var(f"eta{i}") * R.var(f"beta{i}"))
    ch = chern_character(M.bundles["W"], at_h=False)
    assert ch == closed
    assert len(list(ch)) == 2 ** k
    assert max(ch.degrees()) == 2 * k


def test_universal_example_shape():
    for k in (1, 2, 3):
        comps = build_universal_example(k)
        assert len(comps) == 2
        for c in comps:
            assert c.is_strict
            assert len(c.currents) == 2 ** k
            assert det_one_minus_h(c.decomposition(), c.s1()) == 2
            assert lambda_minus1_ch(c.normal_complexified()) == 2
    with pytest.raises(ValueError):
        build_universal_example(0)


def test_atiyah_model():
    for s in (1, -2, Fraction(3, 7)):
        Z = build_atiyah_Z(s)
        A = genus_of_total_class(named_series("ahat", 4), Z.tangent)
        assert integrate(A) == -Fraction(s) / 24
    with pytest.raises(ValueError, match="Atiyah class must be nonzero"):
        build_atiyah_Z(0)


def test_product_with_point_and_circle():
    Z = build_atiyah_Z(2)
    assert product(Z, build_point()).ring == Z.ring
    Z1 = product(Z, build_circle())
    R = Z1.ring
    assert integrate(R.var("y") * R.var("x") * R.var("theta")) == 1
    assert R.fiber == frozenset({"y"})
    assert "dvol" in Z1.classes


def test_product_associative_on_integration():
    A, B, C = build_cp(1), build_torus(1), build_circle()
    left = product(product(A, B), C).ring
    right = product(A, product(B, C)).ring
    assert [v.name for v in left.variables] == [v.name for v in right.variables]
    top_l = left.element({left.volume_monomial(): 1})
    assert integrate(top_l) == integrate(top_l.rehome(right))


def test_sphere_circle_is_stably_trivial():
    for q in (1, 2, 3):
        M = build_sphere_circle(q)
        assert M.tangent.total == 1
        assert M.dimension == 2 * q


def test_component_validation():
    comps = build_universal_example(1)
    c = comps[0]
    with pytest.raises(ValueError):
        type(c)(c.name, c.ring, c.leaf_tangent, ((Fraction(0), c.normal_theta[0][1]),))
    with pytest.raises(ValueError):
        type(c)(c.name, c.ring, c.leaf_tangent, c.normal_theta, multiplicity=0)


def test_component_currents_pair():
    c = build_universal_example(2)[0]
    W = chern_character(c.twist)
    for C in c.currents:
        assert pair_current(W, c.current(C)) == 1
    assert pair_current(W, c.current("eta1*beta2")) == 0
    assert isinstance(c.current("fundamental"), Current)
