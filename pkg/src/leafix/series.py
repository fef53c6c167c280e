"""Univariate truncated power and Laurent series with exact coefficients.

A :class:`TruncatedSeries` knows its coefficients in degrees ``low..order``;
everything above ``order`` is *unknown*, not zero.  ``order=None`` marks an
exact (Laurent) polynomial.  Arithmetic propagates the tightest order that is
still fully determined by the inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .arith import Scalar

__all__ = [
    "NAMED_SERIES",
    "TruncatedSeries",
    "binomial_series",
    "coefficient",
    "named_series",
    "sqrt_taylor_coeffs",
]

_ZERO = Fraction(0)


def _min_order(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    __slots__ = ("low", "coeffs", "order")

    def __init__(self, coeffs: Mapping[int, Scalar] | Iterable[Scalar], order: int | None, low: int = 0):
        """``coeffs`` is a degree -> coefficient map or a sequence starting at ``low``."""
        if isinstance(coeffs, Mapping):
            items = dict(coeffs)
        else:
            items = {low + i: c for i, c in enumerate(coeffs)}
        items = {d: c for d, c in items.items() if c and (order is None or d <= order)}
        if items:
            lo, hi = min(items), max(items)
            if order is not None:
                hi = order
            self.low = lo
            self.coeffs = tuple(items.get(d, _ZERO) for d in range(lo, hi + 1))
        else:
            self.low = 0 if order is None else order + 1
            self.coeffs = ()
        self.order = order

    # -- basic queries ----------------------------------------------------

    @property
    def valuation(self) -> int | None:
        """Lowest degree with a nonzero coefficient (None for a zero series)."""
        return self.low if self.coeffs else None

    @property
    def is_exact(self) -> bool:
        return self.order is None

    def is_power_series(self) -> bool:
        return not self.coeffs or self.low >= 0

    def __getitem__(self, q: int) -> Scalar:
        if self.order is not None and q > self.order:
            raise ValueError(f"coefficient of degree {q} is beyond truncation (order {self.order})")
        i = q - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return _ZERO

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.low + i, c

    def truncate(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(dict(self.items()), _min_order(self.order, order))

    def with_order(self, order: int) -> TruncatedSeries:
        return self.truncate(order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and dict(self.items()) == dict(other.items())

    def __hash__(self):
        return hash((self.order, tuple(self.items())))

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], None)
        out = dict(self.items())
        for d, c in other.items():
            out[d] = out.get(d, _ZERO) + c
        return TruncatedSeries(out, _min_order(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({d: -c for d, c in self.items()}, self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], None)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> TruncatedSeries:
        return TruncatedSeries({d: v * c for d, v in self.items()}, self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        order = _product_order(self, other)
        out: dict[int, Scalar] = {}
        for d1, c1 in self.items():
            for d2, c2 in other.items():
                d = d1 + d2
                if order is not None and d > order:
                    break
                out[d] = out.get(d, _ZERO) + c1 * c2
        return TruncatedSeries(out, order)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries([1], None)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> TruncatedSeries:
        """Multiplicative inverse; the leading coefficient must be invertible."""
        v = self.valuation
        if v is None:
            raise ZeroDivisionError("cannot invert a series with no known nonzero coefficient")
        lead = self.coeffs[0]
        if self.order is None:
            if len(self.coeffs) == 1:
                return TruncatedSeries({-v: Fraction(1) / lead}, None)
            raise ValueError("inverse of an exact polynomial needs a truncation order; call with_order first")
        prec = self.order - v  # relative precision
        a = self.coeffs
        inv_lead = Fraction(1) / lead
        b = [inv_lead]
        for n in range(1, prec + 1):
            s = _ZERO
            for k in range(1, min(n, len(a) - 1) + 1):
                if a[k]:
                    s = s + a[k] * b[n - k]
            b.append(-s * inv_lead)
        return TruncatedSeries(b, -v + prec, low=-v)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            if not other:
                raise ZeroDivisionError("division of a series by zero")
            return self.scale(Fraction(1) / other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse().scale(other)

    # -- calculus / composition -------------------------------------------

    def derivative(self) -> TruncatedSeries:
        order = None if self.order is None else self.order - 1
        return TruncatedSeries({d - 1: c * d for d, c in self.items() if d}, order)

    def integral(self) -> TruncatedSeries:
        """Antiderivative with zero constant term (no z^-1 term allowed)."""
        if (self.order is None or self.order >= -1) and self[-1]:
            raise ValueError("cannot integrate a z^-1 term")
        order = None if self.order is None else self.order + 1
        return TruncatedSeries({d + 1: c / (d + 1) for d, c in self.items()}, order)

    def compose(self, inner: TruncatedSeries) -> TruncatedSeries:
        """self(inner).  Needs inner(0) = 0 unless self is an exact polynomial."""
        if not self.is_power_series():
            raise ValueError("composition of a Laurent series is not supported")
        if not inner.is_power_series():
            raise ValueError("inner series of a composition must be a power series")
        if inner.order is not None and inner.order < 0:
            raise ValueError("inner series has no known constant term")
        if self.order is not None and inner[0]:
            raise ValueError("composition needs an inner series with zero constant term")
        top = self.low + len(self.coeffs) - 1 if self.coeffs else -1
        if self.order is None:
            order = None if top <= 0 else inner.order
        else:
            v = inner.valuation
            if v is None:
                v = None if inner.order is None else inner.order + 1
            order = None if v is None else _min_order((self.order + 1) * v - 1, inner.order)
        # Horner evaluation
        result = TruncatedSeries([], None)
        for d in range(top, -1, -1):
            result = result * inner + TruncatedSeries([self[d]], None)
            if order is not None:
                result = result.truncate(order)
        return TruncatedSeries(dict(result.items()), order)

    def exp(self) -> TruncatedSeries:
        """exp(self) for a series with zero constant term."""
        order = self.order if self.order is not None else None
        if order is None:
            raise ValueError("exp of an exact polynomial needs a truncation order")
        return named_series("exp", order).compose(self)

    def log(self) -> TruncatedSeries:
        """log(self) for a power series with constant term 1."""
        if self[0] != 1 or (self.coeffs and self.low < 0):
            raise ValueError("log needs a power series with constant term 1")
        return (self.derivative() / self).integral()

    # -- display ------------------------------------------------------------

    def to_str(self, var: str = "z") -> str:
        parts = []
        for d, c in self.items():
            cs = str(c)
            if d == 0:
                parts.append(cs)
                continue
            mono = var if d == 1 else f"{var}^{d}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif "+" in cs or " - " in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        if self.order is not None:
            parts.append(f"O({var}^{self.order + 1})")
        text = " + ".join(parts) if parts else "0"
        return text.replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"TruncatedSeries({self.to_str()})"


def _product_order(f: TruncatedSeries, g: TruncatedSeries) -> int | None:
    def bound(a, b):
        if a.order is None:
            return None
        vb = b.valuation
        if vb is None:
            return None if b.order is None else a.order + b.order + 1
        return a.order + vb

    fv, gv = f.valuation, g.valuation
    if (fv is None and f.order is None) or (gv is None and g.order is None):
        return None  # exact zero factor
    return _min_order(bound(f, g), bound(g, f))


def coefficient(f: TruncatedSeries, q: int) -> Scalar:
    """Exact coefficient of z^q; raises if q is beyond the truncation order."""
    return f[q]


# ---------------------------------------------------------------------------
# named series
# ---------------------------------------------------------------------------

def binomial_series(exponent: Fraction, order: int) -> TruncatedSeries:
    """(1 + u)^exponent up to u^order."""
    exponent = Fraction(exponent)
    coeffs = [Fraction(1)]
    for k in range(1, order + 1):
        coeffs.append(coeffs[-1] * (exponent - k + 1) / k)
    return TruncatedSeries(coeffs, order)


def _exp(T: int) -> TruncatedSeries:
    return TruncatedSeries([Fraction(1, math.factorial(k)) for k in range(T + 1)], T)


def _sinh(T: int) -> TruncatedSeries:
    return TruncatedSeries({k: Fraction(1, math.factorial(k)) for k in range(1, T + 1, 2)}, T)


def _cosh(T: int) -> TruncatedSeries:
    return TruncatedSeries({k: Fraction(1, math.factorial(k)) for k in range(0, T + 1, 2)}, T)


_X = TruncatedSeries({1: 1}, None)
_HALF_X = TruncatedSeries({1: Fraction(1, 2)}, None)


def _todd(T):
    # x / (1 - e^{-x})
    den = 1 - _exp(T + 2).compose(-_X)
    return _X / den


def _ahat(T):
    # (x/2) / sinh(x/2)
    return _HALF_X / _sinh(T + 2).compose(_HALF_X)


def _lgenus(T):
    # x / tanh(x) = x cosh(x) / sinh(x)
    return _X * _cosh(T + 2) / _sinh(T + 3)


def _coth(T):
    return _cosh(T + 3) / _sinh(T + 3)


NAMED_SERIES: dict[str, Callable[[int], TruncatedSeries]] = {
    "exp": _exp,
    "sinh": _sinh,
    "cosh": _cosh,
    "todd": _todd,
    "ahat": _ahat,
    "lgenus": _lgenus,
    "coth": _coth,
    "binomial": lambda T: binomial_series(Fraction(-1, 2), T),
    "sqrt_one_plus": lambda T: binomial_series(Fraction(1, 2), T),
    "geometric": lambda T: TruncatedSeries([1] * (T + 1), T),
}


def named_series(name: str, order: int) -> TruncatedSeries:
    """One of the catalogued series, known exactly through degree ``order``."""
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    try:
        build = NAMED_SERIES[name]
    except KeyError:
        raise ValueError(f"unknown series {name!r}; known: {', '.join(sorted(NAMED_SERIES))}") from None
    f = build(order).truncate(order)
    assert f.order == order, (name, f.order, order)
    return f


def sqrt_taylor_coeffs(N: int) -> list[Fraction]:
    """a_0..a_N with sqrt(1 + u^2) = sum a_n u^(2n)."""
    f = binomial_series(Fraction(1, 2), N)
    return [f[n] for n in range(N + 1)]
