"""Sparse multivariate polynomials over Q and an exact test for

    sum_j N_j / D_j == c

where each D_j is given as a product of factors.  Denominators are cleared by
the product of the distinct factors (up to sign), so only polynomial
multiplication and equality are needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = ["Poly", "evaluate_sum", "identity_residual", "rational_identity_check"]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction] | None = None):
        self.nvars = nvars
        self.terms = {}
        for m, c in (terms or {}).items():
            if c:
                if len(m) != nvars:
                    raise ValueError("exponent tuple has the wrong length")
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                self.terms[tuple(m)] = c if isinstance(c, (int, Fraction)) else Fraction(c)

    @classmethod
    def const(cls, nvars: int, c) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> Poly:
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    @classmethod
    def gens(cls, nvars: int) -> list[Poly]:
        return [cls.var(nvars, i) for i in range(nvars)]

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.const(self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self._lift(other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __call__(self, point: Sequence):
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def leading(self) -> tuple[tuple, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"t{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "Poly(" + " + ".join(parts) + ")"


def _normalize(f: Poly) -> tuple[int, Poly]:
    """(sign, g) with f = sign*g and g's leading coefficient positive."""
    _, c = f.leading()
    return (1, f) if c > 0 else (-1, -f)


def _product(factors: Iterable[Poly], nvars: int) -> Poly:
    items = list(factors)
    if not items:
        return Poly.const(nvars, 1)
    # balanced multiplication keeps intermediate sizes down
    while len(items) > 1:
        nxt = [items[i] * items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def identity_residual(fractions: Sequence[tuple[Poly, Sequence[Poly] | Poly]], constant=0) -> Poly:
    """sum_j N_j * (D / D_j) - constant * D, where D clears all denominators."""
    if not fractions:
        raise ValueError("no terms given")
    nvars = fractions[0][0].nvars
    normalized = []  # per term: (numerator, sign, {factor: multiplicity})
    universe: dict[Poly, int] = {}
    for num, den in fractions:
        if isinstance(den, Poly):
            den = [den]
        sign = 1
        mult: dict[Poly, int] = {}
        for f in den:
            if not f:
                raise ZeroDivisionError("zero denominator polynomial")
            s, g = _normalize(f)
            sign *= s
            mult[g] = mult.get(g, 0) + 1
        for g, k in mult.items():
            universe[g] = max(universe.get(g, 0), k)
        normalized.append((num, sign, mult))

    common = _product([g for g, k in universe.items() for _ in range(k)], nvars)
    total = Poly(nvars)
    for num, sign, mult in normalized:
        cofactor = _product([g for g, k in universe.items() for _ in range(k - mult.get(g, 0))], nvars)
        term = num * cofactor
        total = total + (term if sign > 0 else -term)
    return total - common * Fraction(constant)


def rational_identity_check(fractions: Sequence[tuple[Poly, Sequence[Poly] | Poly]], constant=0) -> bool:
    """Exactly decide sum_j N_j / prod(D_j factors) == constant."""
    if not fractions:
        return constant == 0
    return not identity_residual(fractions, constant)


def evaluate_sum(fractions: Sequence[tuple[Poly, Sequence[Poly] | Poly]], point: Sequence):
    """Numeric value of sum_j N_j / D_j at a point (used for sampling checks)."""
    total = 0
    for num, den in fractions:
        if isinstance(den, Poly):
            den = [den]
        d = 1
        for f in den:
            d = d * f(point)
        total = total + num(point) / d
    return total
