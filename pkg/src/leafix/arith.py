"""Exact scalars: rationals, cyclotomic field elements and Bernoulli numbers.

Rationals are plain :class:`fractions.Fraction` values.  A :class:`Cyclotomic`
is an element of Q(zeta_m) stored by its coordinates in the power basis
1, zeta, ..., zeta^(phi(m)-1), i.e. reduced modulo the m-th cyclotomic
polynomial.  Because Z[zeta_m] is the full ring of integers of Q(zeta_m),
an element is an algebraic integer exactly when those coordinates are
integers once it is written in the right field.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "Cyclotomic"]

__all__ = [
    "Cyclotomic",
    "Scalar",
    "bernoulli",
    "cyclotomic_polynomial",
    "euler_phi",
    "format_rational",
    "is_cyclotomic_integer",
    "parse_rational",
    "root_of_unity",
    "scalar_from_record",
    "scalar_to_record",
]


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------

def format_rational(r: int | Fraction) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            p, q = text.split("/")
            q_int = int(q)
            if q_int == 0:
                raise ValueError
            return Fraction(int(p), q_int)
        return Fraction(int(text))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be a positive integer")
    # x^m - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        num = _exact_divide(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]  # den is monic
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num), "non-exact cyclotomic division"
    return out


def _integral(poly: Sequence) -> tuple[list[int], int]:
    """Write ``poly`` as (integer coefficients, common denominator)."""
    fr = [c if type(c) is Fraction else Fraction(c) for c in poly]
    den = 1
    for c in fr:
        den = math.lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in fr], den


def _reduce(poly: Sequence, m: int) -> tuple[Fraction, ...]:
    """Remainder of ``poly`` modulo Phi_m, padded to length phi(m)."""
    work, den = _integral(poly)
    return _reduce_int(work, den, m)


def _reduce_int(work: list[int], den: int, m: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(m)
    n = len(phi) - 1
    support = [(j, phi[j]) for j in range(n) if phi[j]]
    for i in range(len(work) - 1, n - 1, -1):
        c = work[i]
        if c:
            work[i] = 0
            base = i - n
            for j, pj in support:
                work[base + j] -= c * pj
    work = work[:n] + [0] * (n - len(work))
    return tuple(Fraction(c, den) for c in work)


def _trim(p: list) -> list:
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _polymul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polysub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _polydivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    lead = b[-1]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _trim(q), _trim(a[:len(b) - 1] or [Fraction(0)])


def _solve(columns: list[tuple[Fraction, ...]], target: tuple[Fraction, ...]) -> list[Fraction] | None:
    """Solve sum_j x_j * columns[j] = target exactly; None if inconsistent."""
    rows = len(target)
    ncol = len(columns)
    mat = [[columns[j][i] for j in range(ncol)] + [target[i]] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, rows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(mat[i][ncol] for i in range(r, rows)):
        return None
    x = [Fraction(0)] * ncol
    for i, c in enumerate(pivots):
        x[c] = mat[i][ncol]
    return x


# ---------------------------------------------------------------------------
# cyclotomic field elements
# ---------------------------------------------------------------------------

class Cyclotomic:
    """Element sum_j coeffs[j] * zeta_m^j of Q(zeta_m), m = ``conductor``.

    Values are immutable.  Binary operations between different conductors
    first lift both operands to the lcm of the conductors.  Plain ints and
    Fractions are accepted wherever a Cyclotomic is.
    """

    __slots__ = ("conductor", "coeffs", "_canon")

    def __init__(self, conductor: int, coeffs: Iterable = ()):
        if conductor < 1:
            raise ValueError("conductor must be a positive integer")
        coeffs = _reduce(list(coeffs), conductor)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic values are immutable")

    @classmethod
    def _from_reduced(cls, conductor: int, coeffs: tuple) -> Cyclotomic:
        out = object.__new__(cls)
        object.__setattr__(out, "conductor", conductor)
        object.__setattr__(out, "coeffs", coeffs)
        object.__setattr__(out, "_canon", None)
        return out

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rational(cls, r: int | Fraction) -> Cyclotomic:
        return cls(1, [Fraction(r)])

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> Cyclotomic:
        """zeta_m ** k with zeta_m = exp(2 pi i / m)."""
        k %= m
        return cls(m, [0] * k + [1])

    @classmethod
    def coerce(cls, x: Scalar) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, _RationalABC)):
            return cls.from_rational(Fraction(x))
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")

    # -- field structure --------------------------------------------------

    def lift(self, m: int) -> Cyclotomic:
        """Same element written in Q(zeta_m); requires conductor | m."""
        if m % self.conductor:
            raise ValueError(f"conductor {self.conductor} does not divide {m}")
        if m == self.conductor:
            return self
        step = m // self.conductor
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for j, c in enumerate(self.coeffs):
            poly[j * step] = c
        return Cyclotomic(m, poly)

    def _pair(self, other) -> tuple[Cyclotomic, Cyclotomic] | None:
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return None
        m = math.lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            r = Fraction(other)
            return Cyclotomic(self.conductor, [c * r for c in self.coeffs])
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        xa, da = _integral(a.coeffs)
        xb, db = _integral(b.coeffs)
        prod = [0] * (len(xa) + len(xb) - 1)
        nb = [(j, y) for j, y in enumerate(xb) if y]
        for i, x in enumerate(xa):
            if x:
                for j, y in nb:
                    prod[i + j] += x * y
        return Cyclotomic._from_reduced(a.conductor, _reduce_int(prod, da * db, a.conductor))

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if not self:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        m = self.conductor
        # extended Euclid: s * self + t * Phi_m = 1
        r0, r1 = [Fraction(c) for c in cyclotomic_polynomial(m)], _trim(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_polysub(s0, _polymul(q, s1)))
        c = r1[0]
        return Cyclotomic(m, [v / c for v in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            r = Fraction(other)
            return Cyclotomic(self.conductor, [c / r for c in self.coeffs])
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Cyclotomic.from_rational(1)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> Cyclotomic:
        """Complex conjugate: zeta -> zeta^(m-1)."""
        m = self.conductor
        poly = [Fraction(0)] * m
        for j, c in enumerate(self.coeffs):
            poly[(-j) % m] += c
        return Cyclotomic(m, poly)

    # -- comparison / canonical form -------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0].coeffs == pair[1].coeffs

    def __hash__(self):
        c = self.canonical()
        if c.conductor == 1:
            return hash(c.coeffs[0])
        return hash((c.conductor, c.coeffs))

    def restrict(self, k: int) -> Cyclotomic | None:
        """The element written in Q(zeta_k), or None if it is not in that field."""
        L = math.lcm(self.conductor, k)
        target = self.lift(L).coeffs
        cols = [Cyclotomic.zeta(k, j).lift(L).coeffs for j in range(euler_phi(k))]
        x = _solve(cols, target)
        if x is None:
            return None
        return Cyclotomic(k, x)

    def galois(self, a: int) -> Cyclotomic:
        """Image under the automorphism zeta_m -> zeta_m ** a (gcd(a, m) = 1)."""
        m = self.conductor
        if math.gcd(a, m) != 1:
            raise ValueError(f"{a} is not a unit modulo {m}")
        xs, den = _integral(self.coeffs)
        poly = [0] * m
        for j, c in enumerate(xs):
            if c:
                poly[(a * j) % m] += c
        return Cyclotomic._from_reduced(m, _reduce_int(poly, den, m))

    def _in_subfield(self, d: int) -> bool:
        # fixed by Gal(Q(zeta_m)/Q(zeta_d)) = {a = 1 mod d}
        m = self.conductor
        for a in range(1 + d, m, d):
            if math.gcd(a, m) == 1 and self.galois(a).coeffs != self.coeffs:
                return False
        return True

    def canonical(self) -> Cyclotomic:
        """Same element in the smallest cyclotomic field containing it."""
        if self._canon is None:
            # Q(zeta_a) and Q(zeta_b) meet in Q(zeta_gcd), so dropping one
            # prime at a time reaches the smallest field
            d = self.conductor
            shrinking = True
            while shrinking and d > 1:
                shrinking = False
                for p in sorted({q for q in _divisors(d) if q > 1 and all(q % r for r in range(2, q))}):
                    if self._in_subfield(d // p):
                        d //= p
                        shrinking = True
                        break
            found = self if d == self.conductor else self.restrict(d)
            object.__setattr__(self, "_canon", found)
        return self._canon

    def is_rational(self) -> bool:
        return self.canonical().conductor == 1

    def rational(self) -> Fraction:
        c = self.canonical()
        if c.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return c.coeffs[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.conductor)
        return sum(float(c) * z**j for j, c in enumerate(self.coeffs))

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return f"Cyclotomic({self.conductor}, [{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        c = self.canonical()
        if c.conductor == 1:
            return _fmt_coeff(c.coeffs[0])
        terms = []
        for j, v in enumerate(c.coeffs):
            if not v:
                continue
            if j == 0:
                terms.append(_fmt_coeff(v))
                continue
            z = f"zeta{c.conductor}" + (f"^{j}" if j > 1 else "")
            if v == 1:
                terms.append(z)
            elif v == -1:
                terms.append("-" + z)
            else:
                terms.append(f"{_fmt_coeff(v)}*{z}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_record(self) -> dict:
        c = self.canonical()
        return {"conductor": c.conductor, "coeffs": [format_rational(v) for v in c.coeffs]}

    @classmethod
    def from_record(cls, record: dict) -> Cyclotomic:
        return cls(int(record["conductor"]), [parse_rational(s) for s in record["coeffs"]])


def _fmt_coeff(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def root_of_unity(turns: Fraction | int) -> Cyclotomic:
    """exp(2 pi i * turns) for a rational number of turns."""
    turns = Fraction(turns)
    return Cyclotomic.zeta(turns.denominator, turns.numerator)


def scalar_to_record(x: Scalar) -> dict:
    return Cyclotomic.coerce(x).to_record()


def scalar_from_record(record: dict) -> Cyclotomic:
    return Cyclotomic.from_record(record)


def is_cyclotomic_integer(a: Scalar, kappa: int) -> bool:
    """True iff ``a`` lies in Z[zeta_kappa]."""
    r = Cyclotomic.coerce(a).restrict(kappa)
    if r is None:
        return False
    return all(c.denominator == 1 for c in r.coeffs)


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """b_n from sum_{k<=n} C(n+1, k) b_k = 0, b_0 = 1.

    Convention: b_1 = -1/2 and b_n = 0 for odd n > 1.
    """
    if n < 0:
        raise ValueError("Bernoulli index must be non-negative")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        s = sum(math.comb(m + 1, k) * _BERNOULLI[k] for k in range(m))
        _BERNOULLI.append(-s / (m + 1))
    return _BERNOULLI[n]
