from __future__ import annotations

import random
from fractions import Fraction

import pytest

from leafix.arith import Cyclotomic, is_cyclotomic_integer, root_of_unity
from leafix.genera import complex_bundle, real_bundle
from leafix.gring import Current, GradedRing, GradedVariable, pair_current
from leafix.lefschetz import (
    DE_RHAM,
    DOLBEAULT,
    EXPLICIT,
    SIGNATURE,
    SPIN,
    LefschetzError,
    SymbolDatum,
    bott_taubes_value,
    integrality_characteristic_number,
    lefschetz_basic3,
    lefschetz_general,
    lefschetz_strict,
    local_index_character,
    rigidity_obstruction,
)
from leafix.spaces import (
    FixedComponentModel,
    build_atiyah_Z,
    build_circle,
    build_sphere_circle,
    build_torus,
    build_universal_example,
    product,
)

i = Cyclotomic.zeta(4)
isqrt2 = Cyclotomic.zeta(8) + Cyclotomic.zeta(8, 3)
QUARTER = [Fraction(1, 4)]
SYMBOLS = [SymbolDatum(DE_RHAM), SymbolDatum(SIGNATURE), SymbolDatum(DOLBEAULT, j=0),
           SymbolDatum(DOLBEAULT, j=1), SymbolDatum(SPIN, lift=1), SymbolDatum(SPIN, lift=-1)]


def test_local_characters():
    assert local_index_character(DE_RHAM, QUARTER) == 2
    assert local_index_character(SIGNATURE, QUARTER) == -2 * i
    assert local_index_character(SPIN, QUARTER, lift=1) == isqrt2
    assert local_index_character(SPIN, QUARTER, lift=-1) == -isqrt2
    for j in (0, 1):
        assert local_index_character(DOLBEAULT, QUARTER, j=j) == i + 1 - 2 * j
    with pytest.raises(ValueError):
        local_index_character(DE_RHAM, [Fraction(0)])


def test_de_rham_character_is_the_determinant():
    for m in range(3, 13):
        for a in range(1, (m + 1) // 2):
            t = Fraction(a, m)
            if t >= Fraction(1, 2):
                continue
            w = root_of_unity(t)
            assert local_index_character(DE_RHAM, [t]) == (1 - w) * (1 - w.conj())


def test_universal_example_strict_values():
    comps = build_universal_example(1)
    C = comps[0].current("eta1*beta1")
    assert lefschetz_strict(comps, SymbolDatum(DE_RHAM), C).value == 2
    assert lefschetz_strict(comps, SymbolDatum(SIGNATURE), "1").value == -2 * i
    assert lefschetz_strict(comps, SymbolDatum(SPIN, lift=-1), C).value == -isqrt2


def test_report_records_factors():
    comps = build_universal_example(1)
    rep = lefschetz_basic3(comps, SymbolDatum(SIGNATURE), "1", kappa=8)
    assert rep.verdict is True
    assert len(rep.terms) == 2
    for t in rep.terms:
        assert pair_current(t.haefliger, t.current) * t.multiplicity == t.value
        assert t.factors["denominator"] == "2"
    js = rep.to_json()
    assert js["integrality"] == {"kappa": 8, "verdict": True}
    assert js["value"]["conductor"] == 4


def test_strict_route_rejects_leafwise_components():
    ring = GradedRing((GradedVariable("y", 2, 2), GradedVariable("x", 2, 2)), fiber=frozenset({"y"}))
    comp = FixedComponentModel("C", ring, real_bundle(ring, [ring.var("y")]),
                               ((Fraction(1, 4), complex_bundle(ring, [0], [i])),))
    with pytest.raises(LefschetzError):
        lefschetz_strict([comp], SymbolDatum(DE_RHAM), "fundamental")


# randomized fixtures

def _random_angle(rng):
    while True:
        m = rng.randint(3, 12)
        a = rng.randint(1, m - 1)
        t = Fraction(a, m)
        if 0 < t < Fraction(1, 2):
            return t


def _random_root(rng, ring):
    out = ring.zero()
    for v in ring.variables:
        if v.degree == 2 and v.name not in (ring.fiber or ()):
            out = out + ring.var(v.name) * Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return out


def strict_fixture(seed: int):
    rng = random.Random(seed)
    nvars = rng.randint(1, 3)
    ring = GradedRing(tuple(GradedVariable(f"x{j}", 2, rng.randint(2, 3)) for j in range(nvars)),
                      fiber=frozenset())
    normals = []
    used = set()
    for _ in range(rng.randint(1, 2)):
        t = _random_angle(rng)
        if t in used:
            continue
        used.add(t)
        rank = rng.randint(1, 2)
        normals.append((t, complex_bundle(ring, [_random_root(rng, ring) for _ in range(rank)],
                                          [root_of_unity(t)] * rank)))
    minus1 = None
    if rng.random() < 0.4:
        minus1 = real_bundle(ring, [_random_root(rng, ring)], [-1])
    tr = rng.randint(1, 2)
    twist = complex_bundle(ring, [_random_root(rng, ring) for _ in range(tr)],
                           [root_of_unity(Fraction(rng.randint(0, 11), 12)) for _ in range(tr)])
    comp = FixedComponentModel(f"F{seed}", ring, real_bundle(ring, []), tuple(normals), minus1, twist,
                               multiplicity=rng.randint(1, 3))
    monos = list(ring.monomials())
    C = Current.dual(ring, ring.monomial_str(rng.choice(monos)))
    symbol = rng.choice(SYMBOLS)
    return comp, symbol, C


@pytest.mark.parametrize("seed", range(50))
def test_route_agreement_on_random_strict_fixtures(seed):
    comp, symbol, C = strict_fixture(seed)
    strict = lefschetz_strict([comp], symbol, C).value
    general = lefschetz_general([comp], symbol, C).value
    basic3 = lefschetz_basic3([comp], symbol, C).value
    assert strict == general == basic3


@pytest.mark.parametrize("seed", range(20))
def test_conjugation_equivariance(seed):
    comp, symbol, C = strict_fixture(seed)
    v = lefschetz_general([comp], symbol, C).value
    vc = lefschetz_general([comp.conj()], symbol, C).value
    v = Cyclotomic.coerce(v)
    assert Cyclotomic.coerce(vc) == v.conj()


def leafwise_fixture(seed: int):
    rng = random.Random(1000 + seed)
    ring = GradedRing((GradedVariable("y", 2, 2), GradedVariable("x1", 2, 3), GradedVariable("x2", 2, 2)),
                      fiber=frozenset({"y"}))
    y = ring.var("y")
    leaf = real_bundle(ring, [y * rng.randint(1, 3) + _random_root(rng, ring)])
    t = _random_angle(rng)
    N = complex_bundle(ring, [_random_root(rng, ring)], [root_of_unity(t)])
    twist = complex_bundle(ring, [_random_root(rng, ring) + y * rng.randint(-2, 2)])
    comp = FixedComponentModel("L", ring, leaf, ((t, N),), None, twist)
    base = ring.base_ring()
    C = Current.dual(base, rng.choice(["1", "x1", "x2", "x1*x2", "x1^2"]))
    return comp, rng.choice(SYMBOLS), C


@pytest.mark.parametrize("seed", range(15))
def test_general_and_basic3_agree_with_leafwise_tangent(seed):
    comp, symbol, C = leafwise_fixture(seed)
    assert lefschetz_general([comp], symbol, C).value == lefschetz_basic3([comp], symbol, C).value


def test_basic3_with_minus_one_bundle_uses_four():
    ring = GradedRing((GradedVariable("x", 2, 2),), fiber=frozenset())
    comp = FixedComponentModel("M", ring, real_bundle(ring, []), (),
                               real_bundle(ring, [0], [-1]))
    rep = lefschetz_basic3([comp], SymbolDatum(DE_RHAM), "1")
    assert rep.terms[0].factors["denominator"] == "4"
    assert rep.terms[0].factors["R"] == "1"


# de Rham degeneracy

@pytest.mark.parametrize("k", [1, 2, 3])
def test_de_rham_degeneracy(k):
    comps = build_universal_example(k)
    sym = SymbolDatum(DE_RHAM, twisted=False)
    for C in comps[0].currents:
        v = lefschetz_general(comps, sym, C).value
        assert v == (2 if C.degree == 0 else 0)
    assert lefschetz_general(comps, sym, "fundamental").value == 0
    for mass in (1, Fraction(5, 2), 7):
        C = Current.dual(comps[0].base_ring, "1", weight=mass)
        v = lefschetz_general(comps, sym, C).value
        assert v == sum(c.multiplicity for c in comps) * mass


def test_linearity_in_current_and_numerator():
    comps = build_universal_example(2)
    ring = comps[0].ring
    sym = SymbolDatum(SIGNATURE)
    C1, C2 = comps[0].currents[1], comps[0].currents[2]
    v1 = lefschetz_general(comps, sym, C1).value
    v2 = lefschetz_general(comps, sym, C2).value
    assert v1 + v2 == 2 * v1
    a = ring.one() + ring.var("eta1") * ring.var("beta1")
    b = ring.one() * i
    va = lefschetz_general(comps, SymbolDatum(EXPLICIT, numerator=a), C1).value
    vb = lefschetz_general(comps, SymbolDatum(EXPLICIT, numerator=b), C1).value
    vab = lefschetz_general(comps, SymbolDatum(EXPLICIT, numerator=a * 3 + b), C1).value
    assert vab == 3 * va + vb


def test_integrality_number():
    comps = build_universal_example(1)
    assert integrality_characteristic_number(comps, SymbolDatum(DE_RHAM), None, 8) == (2, True)
    v, ok = integrality_characteristic_number(comps, SymbolDatum(SPIN, lift=1), None, 8)
    assert v == isqrt2 and ok
    v, ok = integrality_characteristic_number(comps, SymbolDatum(SPIN, lift=-1), None, 8)
    assert v == -isqrt2 and ok
    v, ok = integrality_characteristic_number(comps, SymbolDatum(SIGNATURE), None, 2)
    assert v == -2 * i and not ok


def test_rigidity():
    for s in (1, 3, -4, Fraction(1, 2)):
        M = product(build_atiyah_Z(s), build_circle())
        rep = rigidity_obstruction(M, "dvol")
        assert rep.value == -Fraction(s) / 24 and rep.verdict == "OBSTRUCTED"
    T = build_torus(2, fiber=True)
    ring = T.ring
    from leafix.genera import TotalClassBundle, REAL
    from leafix.spaces import SpaceModel
    M = SpaceModel("T4", ring, None, 4, leaf_tangent=TotalClassBundle(REAL, ring.one(), 4))
    assert rigidity_obstruction(M, "fundamental").value == 0
    S = build_sphere_circle(2)
    ring = S.ring.with_fiber(["sigma", "tau"])
    M = SpaceModel("S3xS1", ring, None, 4, leaf_tangent=TotalClassBundle(REAL, ring.one(), 4))
    assert rigidity_obstruction(M, "fundamental").verdict == "INCONCLUSIVE"


def test_rigidity_trivial_tf_positive_degree_current():
    ring = GradedRing((GradedVariable("y", 2, 2), GradedVariable("x", 2, 2)), fiber=frozenset({"y"}))
    from leafix.spaces import SpaceModel
    M = SpaceModel("triv", ring, None, 4, leaf_tangent=real_bundle(ring, [0]))
    assert rigidity_obstruction(M, Current.dual(ring.base_ring(), "x")).value == 0


def _trivial_leaf_model(rank):
    from leafix.spaces import SpaceModel
    ring = build_circle().ring
    return SpaceModel("t", ring, None, 1, leaf_tangent=real_bundle(ring, [0] * (rank // 2)),
                      classes={"dvol": ring.var("theta")})


def test_bott_taubes():
    M = _trivial_leaf_model(2)
    assert bott_taubes_value(M, 0, "dvol") == 1
    assert bott_taubes_value(M, 1, "dvol") == 4
    # the degree-zero dual current reads the constant term of the integrand
    assert bott_taubes_value(M, 0, Current.dual(M.ring, "1")) == 1
    Z = product(build_atiyah_Z(3), build_circle())
    # n = 0 is the L-class pairing itself
    from leafix.gring import fiber_integrate, pair_current
    from leafix.genera import genus_of_roots
    from leafix.series import named_series
    L = genus_of_roots(named_series("lgenus", Z.ring.degree_cap), Z.leaf_tangent)
    haef = fiber_integrate(L)
    expected = pair_current(haef, Current.of_form(Z.classes["dvol"].rehome(haef.ring)))
    assert bott_taubes_value(Z, 0, "dvol") == expected
    with pytest.raises(Exception):
        bott_taubes_value(M, 3, "dvol", Q=2)
