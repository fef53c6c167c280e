from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from leafix.arith import Cyclotomic, root_of_unity
from leafix.genera import (
    COMPLEX,
    REAL,
    BundleError,
    TotalClassBundle,
    R_class,
    S_theta_class,
    chern_character,
    check_normal_angle,
    complex_bundle,
    det_one_minus_h,
    euler_class,
    genus_of_roots,
    genus_of_total_class,
    invert_denominator,
    lambda_minus1_ch,
    lambda_t_ch,
    real_bundle,
    rigidity_R_coeff,
    rigidity_R_series,
    sym_t_ch,
    total_class,
)
from leafix.gring import GradedRing, GradedVariable, apply_series, integrate
from leafix.series import TruncatedSeries, named_series
from leafix.spaces import build_cp, build_kp, build_torus

i = Cyclotomic.zeta(4)
RING = GradedRing((GradedVariable("x", 2, 7), GradedVariable("y", 2, 7)), 12)
X, Y = RING.var("x"), RING.var("y")

roots_st = st.lists(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)).map(lambda ab: X * ab[0] + Y * ab[1]),
    min_size=0, max_size=4,
)


def test_ahat_single_half_root():
    f = named_series("ahat", 12)
    A = genus_of_roots(f, real_bundle(RING, [X]))
    assert A == apply_series(f, X)
    assert A.coefficient(RING.parse_monomial("x^2")[1]) == Fraction(-1, 24)
    assert A.coefficient(RING.parse_monomial("x^4")[1]) == Fraction(7, 5760)


def test_todd_of_trivial_line():
    assert genus_of_roots(named_series("todd", 4), complex_bundle(RING, [0])) == 1


def test_ahat_cp2_by_roots():
    M = build_cp(2)
    A = genus_of_roots(named_series("ahat", 4), M.bundles["stable_tangent"])
    a = M.ring.var("alpha")
    assert A == 1 - a * a / 8


def test_genus_requires_normalized_series():
    with pytest.raises(BundleError):
        genus_of_roots(named_series("sinh", 6), complex_bundle(RING, [X]))


def test_real_genus_requires_even_series():
    with pytest.raises(BundleError):
        genus_of_roots(named_series("todd", 6), real_bundle(RING, [X]))


def test_total_class_examples():
    f = named_series("ahat", 8)
    assert genus_of_total_class(f, TotalClassBundle(REAL, RING.one(), 4)) == 1
    kp1 = build_kp(1)
    assert genus_of_total_class(named_series("ahat", 4), kp1.tangent) == 1
    cp2 = build_cp(2)
    assert genus_of_total_class(named_series("ahat", 4), cp2.tangent) == \
        genus_of_roots(named_series("ahat", 4), cp2.bundles["stable_tangent"])


def test_malformed_total_class():
    with pytest.raises(BundleError, match="malformed total class"):
        TotalClassBundle(REAL, 1 + X, 2)
    with pytest.raises(BundleError, match="malformed total class"):
        TotalClassBundle(COMPLEX, 2 + X, 2)


@given(roots_st)
@settings(max_examples=60, deadline=None)
def test_total_class_route_matches_roots_real(roots):
    E = real_bundle(RING, roots)
    for name in ("ahat", "lgenus"):
        f = named_series(name, 12)
        assert genus_of_total_class(f, total_class(E)) == genus_of_roots(f, E)


@given(roots_st)
@settings(max_examples=60, deadline=None)
def test_total_class_route_matches_roots_complex(roots):
    E = complex_bundle(RING, roots)
    f = named_series("todd", 12)
    assert genus_of_total_class(f, total_class(E)) == genus_of_roots(f, E)


def test_ahat_cp_against_sympy_coefficient_extraction():
    a = sympy.Symbol("a")
    for q in range(1, 9):
        expr = ((a / 2) / sympy.sinh(a / 2)) ** (q + 1)
        oracle = sympy.series(expr, a, 0, q + 1).removeO().coeff(a, q)
        M = build_cp(q)
        value = integrate(genus_of_total_class(named_series("ahat", 2 * q), M.tangent))
        assert value == Fraction(str(oracle))


def test_chern_character_examples():
    T = build_torus(1).ring
    eb = T.var("eta1") * T.var("beta1")
    assert chern_character(complex_bundle(T, [eb])) == 1 + eb
    assert chern_character(complex_bundle(RING, [0], [i])) == i
    E = complex_bundle(RING, [X, -X], [i, -i])
    two_i_sinh = apply_series(named_series("sinh", 12), X).scale(2 * i)
    assert chern_character(E) == two_i_sinh
    with pytest.raises(BundleError):
        chern_character(real_bundle(RING, [X]))


@given(roots_st, roots_st)
@settings(max_examples=40, deadline=None)
def test_chern_character_additive(r1, r2):
    A, B = complex_bundle(RING, r1), complex_bundle(RING, r2)
    assert chern_character(A.direct_sum(B)) == chern_character(A) + chern_character(B)
    assert lambda_minus1_ch(A.direct_sum(B)) == lambda_minus1_ch(A) * lambda_minus1_ch(B)


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(0, 11), st.integers(0, 11))
@settings(max_examples=40, deadline=None)
def test_chern_character_multiplicative_on_lines(a, b, ka, kb):
    wa, wb = root_of_unity(Fraction(ka, 12)), root_of_unity(Fraction(kb, 12))
    A = complex_bundle(RING, [X * a], [wa])
    B = complex_bundle(RING, [Y * b], [wb])
    assert chern_character(A.tensor(B)) == chern_character(A) * chern_character(B)


def test_lambda_minus1_examples():
    assert lambda_minus1_ch(complex_bundle(RING, [0], [-1])) == 2
    assert lambda_minus1_ch(complex_bundle(RING, [0, 0], [i, -i])) == 2
    z3 = Cyclotomic.zeta(3)
    assert lambda_minus1_ch(complex_bundle(RING, [0, 0], [z3, z3 * z3])) == 3


def test_trivial_weight_not_invertible():
    d = lambda_minus1_ch(complex_bundle(RING, [X], [1]))
    with pytest.raises(BundleError, match="trivial weight"):
        invert_denominator(d)


def test_det_examples():
    assert det_one_minus_h([(Fraction(1, 4), 1)], 0) == 2
    assert det_one_minus_h([], 2) == 4
    assert det_one_minus_h([(Fraction(1, 6), 1)], 0) == 1
    with pytest.raises(BundleError, match="not normal direction"):
        det_one_minus_h([(Fraction(0), 1)], 0)


def test_angle_range():
    with pytest.raises(BundleError, match="not normal direction"):
        check_normal_angle(0)
    with pytest.raises(BundleError):
        check_normal_angle(Fraction(1, 2))


def test_S_and_R_normalizations():
    N = complex_bundle(RING, [0, 0], [i, i])
    assert S_theta_class(N) == 1
    assert R_class(real_bundle(RING, [0, 0], [-1, -1])) == 1


def test_S_first_order():
    # inverse of (1 - i e^y)(1 + i e^-y)/2 = 1 + i y - y^2 + O(y^3)
    R = GradedRing((GradedVariable("y", 2, 3),))
    y = R.var("y")
    S = S_theta_class(complex_bundle(R, [y], [i]))
    assert S == 1 + i * y - y * y


def _float_series_inverse(c, n):
    out = [1 / c[0]]
    for k in range(1, n):
        out.append(-sum(c[j] * out[k - j] for j in range(1, k + 1)) / c[0])
    return out


def test_S_oracle_numeric():
    # float Taylor expansion of the displayed factor at theta = pi/3
    n = 6
    R = GradedRing((GradedVariable("y", 2, n),))
    y = R.var("y")
    S = S_theta_class(complex_bundle(R, [y], [root_of_unity(Fraction(1, 6))]))
    w = cmath.exp(1j * cmath.pi / 3)
    wb = w.conjugate()
    ep = [1 / math.factorial(k) for k in range(n)]
    em = [(-1) ** k / math.factorial(k) for k in range(n)]
    f1 = [1 - w * ep[0]] + [-w * c for c in ep[1:]]
    f2 = [1 - wb * em[0]] + [-wb * c for c in em[1:]]
    prod = [sum(f1[j] * f2[k - j] for j in range(k + 1)) / ((1 - w) * (1 - wb)) for k in range(n)]
    want = _float_series_inverse(prod, n)
    for k in range(n):
        got = S.coefficient(R.parse_monomial(f"y^{k}")[1] if k else R.unit_monomial())
        got = got.to_complex() if isinstance(got, Cyclotomic) else complex(got)
        assert abs(got - want[k]) < 1e-12


@given(roots_st, roots_st)
@settings(max_examples=30, deadline=None)
def test_S_and_R_multiplicative(r1, r2):
    A, B = complex_bundle(RING, r1, [i] * len(r1)), complex_bundle(RING, r2, [i] * len(r2))
    assert S_theta_class(A.direct_sum(B)) == S_theta_class(A) * S_theta_class(B)
    P, Q = real_bundle(RING, r1, [-1] * len(r1)), real_bundle(RING, r2, [-1] * len(r2))
    assert R_class(P.direct_sum(Q)) == R_class(P) * R_class(Q)
    assert S_theta_class(A).constant_term() == 1 and R_class(P).constant_term() == 1


def test_euler_class():
    assert euler_class(real_bundle(RING, [X])) == X
    assert euler_class(real_bundle(RING, [])) == 1
    assert euler_class(real_bundle(RING, [X, Y])) == X * Y
    with pytest.raises(BundleError):
        euler_class(real_bundle(RING, [X], extra_line=1))


def test_lambda_t_and_sym_t_of_trivial_line():
    L = complex_bundle(RING, [0])
    assert lambda_t_ch(L, 4) == [1, 1, 0, 0, 0]
    assert sym_t_ch(L, 4) == [1, 1, 1, 1, 1]


def _truncated_product(factors, Q):
    # factors: (step, kind, rank) with kind "lam" for (1+q^step)^rank, "sym" for (1-q^step)^-rank
    out = [1] + [0] * Q
    for step, kind, rank in factors:
        if kind == "lam":
            f = [math.comb(rank, k) if k <= rank else 0 for k in range(Q // step + 1)]
        else:
            f = [math.comb(rank - 1 + k, k) for k in range(Q // step + 1)]
        new = [0] * (Q + 1)
        for i, a in enumerate(out):
            for k, c in enumerate(f):
                if i + k * step > Q:
                    break
                new[i + k * step] += a * c
        out = new
    return out


def test_rigidity_coefficients_against_product_expansion():
    Q = 5
    for rank in (1, 2, 3):
        F = complex_bundle(RING, [0] * rank)
        factors = [(n, kind, rank) for n in range(1, Q + 1) for kind in ("lam", "sym")]
        got = [c.constant_term() for c in rigidity_R_series(F, Q)]
        assert got == _truncated_product(factors, Q)
    assert rigidity_R_coeff(complex_bundle(RING, [0, 0]), 0, 3) == 1
    assert rigidity_R_coeff(complex_bundle(RING, [0, 0]), 1, 3) == 4
    with pytest.raises(BundleError):
        rigidity_R_coeff(complex_bundle(RING, [0, 0]), 4, 3)


def test_spin_variant_against_product_expansion():
    Q = 6
    F = complex_bundle(RING, [0, 0])
    factors = [(n, "lam" if n % 2 else "sym", 2) for n in range(1, Q + 1)]
    got = [c.constant_term() for c in rigidity_R_series(F, Q, spin=True)]
    assert got == _truncated_product(factors, Q)
    assert got[:4] == [1, 2, 3, 6]


def test_rigidity_R_with_nontrivial_roots():
    # rank-1 line with root x: coefficient of q^1 is e^x + e^x
    F = complex_bundle(RING, [X])
    e = apply_series(named_series("exp", 12), X)
    assert rigidity_R_coeff(F, 1, 2) == e + e
