from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leafix.arith import Cyclotomic
from leafix.gring import (
    Current,
    GradedRing,
    GradedVariable,
    Poly,
    RingError,
    apply_series,
    fiber_integrate,
    integrate,
    pair_current,
    rational_identity_check,
    tensor_rings,
)
from leafix.ratfunc import evaluate_sum
from leafix.series import TruncatedSeries, named_series
from leafix.spaces import build_atiyah_Z, build_cp, build_torus

from conftest import small_fractions

MIXED = GradedRing(
    (GradedVariable("a", 1), GradedVariable("b", 1), GradedVariable("c", 3),
     GradedVariable("x", 2, 3), GradedVariable("y", 2, 2)),
)


@st.composite
def elements(draw, ring=MIXED):
    monos = list(ring.monomials())
    picked = draw(st.lists(st.sampled_from(monos), max_size=5))
    coeffs = draw(st.lists(small_fractions, min_size=len(picked), max_size=len(picked)))
    return ring.element(dict(zip(picked, coeffs)))


@st.composite
def homogeneous(draw, ring=MIXED):
    e = draw(elements(ring))
    degs = e.degrees() or [0]
    return e.homogeneous(draw(st.sampled_from(degs)))


def test_odd_variables_square_to_zero():
    v = GradedVariable("eta", 1)
    assert v.nilpotency == 2
    assert GradedVariable("eta", 1, 3).nilpotency == 2
    with pytest.raises(RingError):
        GradedVariable("x", 0)


def test_koszul_examples():
    T = build_torus(2).ring
    e1, b1, e2, b2 = (T.var(n) for n in ("eta1", "beta1", "eta2", "beta2"))
    assert str(e1 * b1) == "eta1*beta1"
    assert b1 * e1 == -(e1 * b1)
    prod = (1 + e1 * b1) * (1 + e2 * b2)
    assert prod == 1 + e1 * b1 + e2 * b2 + e1 * b1 * e2 * b2
    assert pair_current(prod, Current.dual(T, "eta1*beta1")) == 1
    assert pair_current(prod, Current.dual(T, "eta1*beta2")) == 0
    assert pair_current(prod + 5, Current.dual(T, "1")) == 6


def test_nilpotency_of_projective_class():
    for q in range(1, 6):
        R = build_cp(q).ring
        a = R.var("alpha")
        assert a ** q * a == 0
        assert integrate(a ** q) == 1
        assert integrate(R.one()) == 0


def test_cross_ring_product_rejected():
    with pytest.raises(RingError):
        build_cp(2).ring.var("alpha") * build_cp(3).ring.var("alpha")


@given(homogeneous(), homogeneous())
@settings(max_examples=80, deadline=None)
def test_graded_commutativity(p, q):
    if not p or not q:
        return
    sign = (-1) ** (p.degree() * q.degree())
    assert p * q - (q * p).scale(sign) == 0


@given(elements(), elements(), elements())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r


@given(elements())
@settings(max_examples=40, deadline=None)
def test_inverse_of_units(p):
    u = p + 1 - p.constant_term()
    assert u * u.inverse() == 1


def test_apply_series_examples():
    T = build_torus(1).ring
    x = T.var("eta1") * T.var("beta1")
    assert apply_series(named_series("exp", 4), x) == 1 + x
    R = build_cp(3).ring
    a = R.var("alpha")
    assert apply_series(named_series("ahat", 6), a) == 1 - a * a / 24
    assert apply_series(named_series("todd", 6), R.zero()) == R.one()


def test_apply_series_errors():
    T = build_torus(1).ring
    with pytest.raises(RingError):
        apply_series(named_series("exp", 4), T.var("eta1"))
    R = build_cp(2).ring
    with pytest.raises(RingError):
        apply_series(named_series("coth", 4), R.var("alpha"))
    with pytest.raises(RingError):
        apply_series(named_series("exp", 1), R.var("alpha"))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=30, deadline=None)
def test_exp_is_multiplicative(i, j, k):
    R = MIXED
    x = R.var("x") * i + R.var("a") * R.var("b") * j
    y = R.var("y") * k + R.var("x") * R.var("y")
    e = named_series("exp", 8)
    assert apply_series(e, x + y) == apply_series(e, x) * apply_series(e, y)


def test_atiyah_integral_of_d_squared():
    for s in (1, 3, Fraction(-2, 5)):
        Z = build_atiyah_Z(s)
        d = Z.classes["d"]
        assert integrate(d * d) == s


def test_fiber_integration():
    Z = build_atiyah_Z(2)
    R = Z.ring
    y, x = R.var("y"), R.var("x")
    base = R.base_ring()
    assert fiber_integrate(y * x * 3) == base.var("x") * 3
    assert fiber_integrate(x + 1) == 0
    strict = GradedRing(MIXED.variables, fiber=frozenset())
    e = strict.var("x") + strict.var("a") * strict.var("b")
    assert fiber_integrate(e) == e
    with pytest.raises(RingError):
        fiber_integrate(MIXED.var("x"))


@given(elements(GradedRing(MIXED.variables, fiber=frozenset({"a", "x"}))))
@settings(max_examples=60, deadline=None)
def test_fiber_then_base_equals_total(e):
    assert integrate(fiber_integrate(e)) == integrate(e)


def test_tensor_ring_integration():
    A, B = build_cp(2).ring, build_torus(1).ring
    R = tensor_rings(A, B)
    assert integrate(R.var("alpha") ** 2 * R.var("eta1") * R.var("beta1")) == 1
    assert integrate(R.var("beta1") * R.var("alpha") ** 2 * R.var("eta1")) == -1


def test_cyclotomic_coefficients():
    R = build_cp(2).ring
    z = Cyclotomic.zeta(4)
    e = R.var("alpha") * z + 1
    assert (e * e).coefficient(R.parse_monomial("alpha")[1]) == 2 * z
    assert (e * e.inverse()) == 1


def test_current_degree_reads_only_matching_part():
    T = build_torus(2).ring
    C = Current.dual(T, "eta2*beta2")
    assert C.degree == 2
    e = T.one() * 7 + T.var("eta2") * T.var("beta2") * 3 + T.var("eta1") * T.var("beta1")
    assert pair_current(e, C) == 3
    assert Current.fundamental(T).degree == 4


def test_parse_monomial_sign():
    T = build_torus(1).ring
    sign, m = T.parse_monomial("beta1*eta1")
    assert sign == -1 and T.monomial_str(m) == "eta1*beta1"


# rational-function identities

def test_rational_identity_examples():
    t0, t1 = Poly.gens(2)
    assert rational_identity_check([(t0 + t1, t0 - t1), (t1 + t0, t1 - t0)], 0)
    assert not rational_identity_check([(Poly.const(2, 1), t0 - t1), (Poly.const(2, 1), t1 - t0)], 1)
    # n = 2 coth identity with t_k = e^{2u_k}: coth(u1-u0) + coth(u0-u1) = 0 = (1 + 1)/2 - 1
    assert rational_identity_check([(t1 + t0, t1 - t0), (t0 + t1, t0 - t1)], 0)


def test_zero_denominator_rejected():
    t0, t1 = Poly.gens(2)
    with pytest.raises(ZeroDivisionError, match="zero denominator"):
        rational_identity_check([(t0, t0 - t0)], 0)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3),
       st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_identity_check_agrees_with_evaluation(coeffs, seed):
    t0, t1 = Poly.gens(2)
    fracs = []
    for a, b, c in coeffs:
        den = t0 * a + t1 * b + c
        if not den:
            den = t0 + 1
        fracs.append((t0 * t1 + a, den))
    rng = random.Random(seed)
    claim = rational_identity_check(fracs, 0)
    points = []
    while len(points) < 100:
        p = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2)]
        if all(d(p) != 0 for _, d in fracs):
            points.append(p)
    numeric = all(evaluate_sum(fracs, p) == 0 for p in points)
    assert claim == numeric
