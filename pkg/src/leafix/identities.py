"""Exact verifiers for the series and rational-function identities.

Every verifier accepts ``mutation=(index, delta)``, which adds ``delta`` to
one coefficient of the computed side before comparison.  A correct verifier
must then report a failing witness; the test suite relies on this.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .arith import bernoulli
from .genera import genus_of_total_class, chern_character
from .gring import integrate
from .ratfunc import Poly, identity_residual
from .series import binomial_series, named_series, sqrt_taylor_coeffs
from .spaces import build_cp, build_kp, build_torus_with_W

__all__ = [
    "IdentityResult",
    "VERIFIERS",
    "coth_cancellation_terms",
    "coth_sum_numeric",
    "verify_ahat_cp",
    "verify_ahat_kp",
    "verify_ch_W",
    "verify_coth_bernoulli",
    "verify_coth_cancellation",
    "verify_coth_numeric",
    "verify_sqrt_claim",
]

Mutation = tuple[int, Fraction] | None


@dataclass
class IdentityResult:
    name: str
    params: dict
    verdict: bool
    witness: dict | None = None
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.verdict != (self.witness is None):
            raise ValueError("verdict must be true exactly when there is no witness")

    def to_json(self) -> dict:
        # timing is left out so repeated runs give identical JSON
        return {"name": self.name, "params": self.params, "verdict": self.verdict,
                "witness": self.witness}


def _text(x) -> str:
    return str(Fraction(x)) if not isinstance(x, str) else x


def _mutate(values: list, mutation: Mutation) -> list:
    if mutation is None:
        return values
    index, delta = mutation
    out = list(values)
    out[index % len(out)] = out[index % len(out)] + Fraction(delta)
    return out


def _timed(fn: Callable[..., IdentityResult]) -> Callable[..., IdentityResult]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.elapsed = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# coth cancellation
# ---------------------------------------------------------------------------

def coth_cancellation_terms(n: int) -> list[tuple[Poly, list[Poly]]]:
    """sum_j prod_{k != j} coth(u_k - u_j) with t_k = e^{2 u_k}:
    coth(u_k - u_j) = (t_k + t_j) / (t_k - t_j)."""
    t = Poly.gens(n + 1)
    terms = []
    for j in range(n + 1):
        num = Poly.const(n + 1, 1)
        den = []
        for k in range(n + 1):
            if k != j:
                num = num * (t[k] + t[j])
                den.append(t[k] - t[j])
        terms.append((num, den))
    return terms


def coth_sum_numeric(us) -> complex:
    """Direct floating-point evaluation of sum_j prod_{k != j} coth(u_k - u_j)."""
    total = 0
    for j, uj in enumerate(us):
        p = 1
        for k, uk in enumerate(us):
            if k != j:
                p *= 1 / cmath.tanh(uk - uj)
        total += p
    return total


@_timed
def verify_coth_cancellation(n: int, mutation: Mutation = None) -> IdentityResult:
    """Exact check of sum_j prod_{k != j} coth(u_k - u_j) = (1 + (-1)^n) / 2."""
    if n < 1:
        raise ValueError("n must be at least 1")
    terms = coth_cancellation_terms(n)
    if mutation is not None:
        index, delta = mutation
        j = index % len(terms)
        num, den = terms[j]
        lead = max(num.terms)
        terms[j] = (num + Poly(num.nvars, {lead: Fraction(delta)}), den)
    rhs = Fraction(1 + (-1) ** n, 2)
    residual = identity_residual(terms, rhs)
    witness = None
    if residual:
        m = max(residual.terms)
        witness = {"monomial": list(m), "residual_coefficient": _text(residual.terms[m])}
    return IdentityResult("coth-cancellation", {"n": n, "rhs": _text(rhs)}, witness is None, witness)


def verify_coth_numeric(n: int, points: int = 100, seed: int = 0, tol: float = 1e-9,
                        angles: bool = False) -> IdentityResult:
    """Sampling oracle: direct coth sum and the t-substituted rational form both
    equal (1 + (-1)^n)/2 at random complex points.  With ``angles`` the points
    are z_k + i*alpha_k, the angle-decorated form."""
    rng = random.Random(seed)
    rhs = (1 + (-1) ** n) / 2
    terms = coth_cancellation_terms(n)
    worst = 0.0
    for _ in range(points):
        while True:
            us = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1) if angles else rng.uniform(-0.5, 0.5))
                  for _ in range(n + 1)]
            gaps = [abs(cmath.sinh(a - b)) for i, a in enumerate(us) for b in us[i + 1:]]
            if min(gaps) > 0.05:
                break
        direct = coth_sum_numeric(us)
        ts = [cmath.exp(2 * u) for u in us]
        rational = sum(num(ts) / math.prod(f(ts) for f in den) for num, den in terms)
        scale = max(1.0, abs(rhs))
        worst = max(worst, abs(direct - rhs) / scale, abs(rational - rhs) / scale)
    witness = None if worst < tol else {"max_relative_error": repr(worst)}
    return IdentityResult("coth-numeric", {"n": n, "points": points, "seed": seed}, witness is None, witness)


# ---------------------------------------------------------------------------
# coth and Bernoulli numbers
# ---------------------------------------------------------------------------

@_timed
def verify_coth_bernoulli(T: int, mutation: Mutation = None) -> IdentityResult:
    """coth(z) = 1/z + sum_l 2^(2l) b_(2l) z^(2l-1) / (2l)! through z^T, and
    b_n from the recurrence equals n! [z^n] x/(e^x - 1)."""
    if T < 1:
        raise ValueError("T must be at least 1")
    coth = named_series("coth", T)
    degrees = list(range(-1, T + 1))
    computed = _mutate([coth[d] for d in degrees], mutation)
    for d, c in zip(degrees, computed):
        if d == -1:
            expected = Fraction(1)
        elif d % 2 == 1:
            l = (d + 1) // 2
            expected = Fraction(2 ** (2 * l)) * bernoulli(2 * l) / math.factorial(2 * l)
        else:
            expected = Fraction(0)
        if c != expected:
            witness = {"part": "coth", "degree": d, "series": _text(c), "bernoulli": _text(expected)}
            return IdentityResult("coth-bernoulli", {"T": T}, False, witness)
    # x / (e^x - 1) = todd(-x)
    N = T + 1
    gen = named_series("todd", N)
    for n in range(N + 1):
        from_series = gen[n] * (-1) ** n * math.factorial(n)
        if from_series != bernoulli(n):
            witness = {"part": "bernoulli", "n": n, "series": _text(from_series), "recurrence": _text(bernoulli(n))}
            return IdentityResult("coth-bernoulli", {"T": T}, False, witness)
    return IdentityResult("coth-bernoulli", {"T": T}, True)


# ---------------------------------------------------------------------------
# sqrt(1 + u^2)
# ---------------------------------------------------------------------------

def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@_timed
def verify_sqrt_claim(N: int, mutation: Mutation = None) -> IdentityResult:
    """For sqrt(1 + u^2) = sum a_n u^(2n): a_0^2 = 1, 2 a_0 a_1 = 1,
    2 a_n + sum_{j=1}^{n-1} a_j a_(n-j) = 0 for n >= 2, a_j = (-1)^(j+1)|a_j| != 0,
    and every denominator is a power of 2."""
    if N < 2:
        raise ValueError("N must be at least 2")
    a = _mutate(sqrt_taylor_coeffs(N), mutation)
    params = {"N": N}

    def fail(check, n, detail):
        return IdentityResult("sqrt-claim", params, False, {"check": check, "n": n, "detail": detail})

    if a[0] * a[0] != 1:
        return fail("square", 0, f"a_0^2 = {_text(a[0] * a[0])}")
    if 2 * a[0] * a[1] != 1:
        return fail("square", 1, f"2 a_0 a_1 = {_text(2 * a[0] * a[1])}")
    for n in range(2, N + 1):
        r = 2 * a[n] + sum(a[j] * a[n - j] for j in range(1, n))
        if r:
            return fail("recurrence", n, f"2a_n + sum a_j a_(n-j) = {_text(r)}")
    for j in range(1, N + 1):
        if a[j] == 0 or (a[j] > 0) != (j % 2 == 1):
            return fail("sign", j, f"a_{j} = {_text(a[j])}")
        if not _is_power_of_two(Fraction(a[j]).denominator):
            return fail("denominator", j, f"a_{j} = {_text(a[j])}")
    return IdentityResult("sqrt-claim", params, True)


# ---------------------------------------------------------------------------
# A-hat genera of CP_q and KP_{q-1}
# ---------------------------------------------------------------------------

def ahat_cp_ring(q: int) -> Fraction:
    """integral of Ahat from the total Pontryagin class (1 + alpha^2)^(q+1)."""
    M = build_cp(q)
    return integrate(genus_of_total_class(named_series("ahat", 2 * q), M.tangent))


def ahat_cp_contour(q: int) -> Fraction:
    """2^-q times the u^q coefficient of (1 + u^2)^(-1/2)."""
    if q % 2:
        return Fraction(0)
    return binomial_series(Fraction(-1, 2), q // 2)[q // 2] / 2 ** q


def ahat_kp_ring(qm1: int) -> Fraction:
    M = build_kp(qm1)
    return integrate(genus_of_total_class(named_series("ahat", 2 * M.ring.degree_cap), M.tangent))


@_timed
def verify_ahat_cp(q_max: int, mutation: Mutation = None) -> IdentityResult:
    """Ring route = contour route for q = 1..q_max, and nonzero iff q even."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    qs = list(range(1, q_max + 1))
    ring_values = _mutate([ahat_cp_ring(q) for q in qs], mutation)
    params = {"q_max": q_max}
    for q, v in zip(qs, ring_values):
        c = ahat_cp_contour(q)
        if v != c:
            return IdentityResult("ahat-cp", params, False,
                                  {"check": "routes", "q": q, "ring": _text(v), "contour": _text(c)})
        if (v != 0) != (q % 2 == 0):
            return IdentityResult("ahat-cp", params, False, {"check": "parity", "q": q, "ring": _text(v)})
    return IdentityResult("ahat-cp", params, True)


@_timed
def verify_ahat_kp(q_max: int, mutation: Mutation = None) -> IdentityResult:
    """Ahat(KP_{q-1}) = 0 for q = 2..q_max."""
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    qs = list(range(2, q_max + 1))
    values = _mutate([ahat_kp_ring(q - 1) for q in qs], mutation)
    for q, v in zip(qs, values):
        if v != 0:
            return IdentityResult("ahat-kp", {"q_max": q_max}, False, {"q": q, "value": _text(v)})
    return IdentityResult("ahat-kp", {"q_max": q_max}, True)


# ---------------------------------------------------------------------------
# ch(W) on the torus
# ---------------------------------------------------------------------------

@_timed
def verify_ch_W(k_max: int, mutation: Mutation = None) -> IdentityResult:
    """ch of W = L_1 (x) ... (x) L_k, c1(L_i) = eta_i beta_i, equals prod (1 + eta_i beta_i)."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    rows = []  # (k, monomial, tensor-side coefficient, closed-form coefficient)
    for k in range(1, k_max + 1):
        M = build_torus_with_W(k)
        ring = M.ring
        via_tensor = chern_character(M.bundles["W"], at_h=False)
        closed = ring.one()
        for i in range(1, k + 1):
            closed = closed * (1 + ring.var(f"eta{i}") * ring.var(f"beta{i}"))
        monomials = sorted(set(via_tensor.terms) | set(closed.terms))
        for m in monomials:
            rows.append((k, ring.monomial_str(m), via_tensor.coefficient(m), closed.coefficient(m)))
    computed = _mutate([r[2] for r in rows], mutation)
    for (k, m, _, expected), got in zip(rows, computed):
        if got != expected:
            return IdentityResult("ch-W", {"k_max": k_max}, False,
                                  {"k": k, "monomial": m, "tensor": _text(got), "closed": _text(expected)})
    return IdentityResult("ch-W", {"k_max": k_max}, True)


VERIFIERS: dict[str, tuple[Callable[..., IdentityResult], str]] = {
    "coth-cancellation": (verify_coth_cancellation, "n"),
    "coth-bernoulli": (verify_coth_bernoulli, "T"),
    "sqrt-claim": (verify_sqrt_claim, "N"),
    "ahat-cp": (verify_ahat_cp, "q_max"),
    "ahat-kp": (verify_ahat_kp, "q_max"),
    "ch-W": (verify_ch_W, "k_max"),
}
