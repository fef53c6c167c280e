"""Graded-commutative polynomial rings truncated by nilpotency and degree.

These model the cohomology rings of fixed-point sets.  Relations are only
``x**n == 0`` per variable plus a global degree cap, so monomials are already
normal forms and no Groebner machinery is needed.  Odd variables anticommute
and the Koszul sign is absorbed into the coefficient when a product is
sorted into the ring's variable order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .arith import Cyclotomic, Scalar
from .ratfunc import Poly, rational_identity_check
from .series import TruncatedSeries

__all__ = [
    "Current",
    "GradedRing",
    "GradedVariable",
    "Poly",
    "RingElement",
    "apply_series",
    "fiber_integrate",
    "integrate",
    "pair_current",
    "rational_identity_check",
    "tensor_rings",
]

Monomial = tuple  # exponent per variable, in ring order

_ZERO = Fraction(0)


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedVariable:
    name: str
    degree: int
    nilpotency: int | None = None

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise RingError(f"bad variable name {self.name!r}")
        if self.degree < 1:
            raise RingError(f"variable {self.name} needs a positive degree")
        if self.nilpotency is not None and self.nilpotency < 1:
            raise RingError(f"variable {self.name} has non-positive nilpotency")
        if self.degree % 2:
            # x^2 = -x^2 in characteristic 0
            n = 2 if self.nilpotency is None else min(self.nilpotency, 2)
            object.__setattr__(self, "nilpotency", n)

    @property
    def odd(self) -> bool:
        return bool(self.degree % 2)

    @property
    def top_power(self) -> int | None:
        return None if self.nilpotency is None else self.nilpotency - 1


@dataclass(frozen=True)
class GradedRing:
    """Q[variables] / (nilpotency, degree > cap), graded-commutative.

    ``integration`` maps monomials to the value of the fundamental-class
    pairing; by default it is 1 on the product of all variables raised to
    their top powers.  ``fiber`` names the variables integrated out by
    :func:`fiber_integrate`; ``fiber_integration`` gives the fiber pairing
    on fiber-only monomials (default: 1 on the top fiber monomial).
    """

    variables: tuple[GradedVariable, ...]
    degree_cap: int | None = None
    integration: tuple[tuple[Monomial, Fraction], ...] | None = None
    fiber: frozenset[str] | None = None
    fiber_integration: tuple[tuple[Monomial, Fraction], ...] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise RingError(f"duplicate variable names in {names}")
        if self.degree_cap is None:
            if any(v.nilpotency is None for v in self.variables):
                raise RingError("unbounded variables need an explicit degree cap")
            cap = sum(v.degree * v.top_power for v in self.variables)
            object.__setattr__(self, "degree_cap", cap)
        elif self.variables and self.degree_cap < max(v.degree for v in self.variables):
            raise RingError("degree cap is below a variable degree")
        if self.integration is not None:
            frozen = _freeze_functional(self.integration)
            if all(v.nilpotency is not None for v in self.variables):
                default = ((tuple(v.top_power for v in self.variables), Fraction(1)),)
                if frozen == default:
                    frozen = None
            object.__setattr__(self, "integration", frozen)
        if self.fiber is not None:
            fiber = frozenset(self.fiber)
            unknown = fiber - set(names)
            if unknown:
                raise RingError(f"unknown fiber variables {sorted(unknown)}")
            object.__setattr__(self, "fiber", fiber)
        if self.fiber_integration is not None:
            object.__setattr__(self, "fiber_integration", _freeze_functional(self.fiber_integration))

    # -- variables and monomials -----------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise RingError(f"unknown variable {name!r}")

    def has_variable(self, name: str) -> bool:
        return any(v.name == name for v in self.variables)

    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * v.degree for e, v in zip(m, self.variables))

    def valid_monomial(self, m: Monomial) -> bool:
        for e, v in zip(m, self.variables):
            if e < 0 or (v.nilpotency is not None and e >= v.nilpotency):
                return False
        return self.monomial_degree(m) <= self.degree_cap

    def multiply_monomials(self, m1: Monomial, m2: Monomial) -> tuple[int, Monomial] | None:
        """(sign, m1*m2) in canonical order, or None when the product vanishes."""
        out = tuple(a + b for a, b in zip(m1, m2))
        if not self.valid_monomial(out):
            return None
        # each odd variable of m2 moves left past the odd variables of m1 with larger index
        swaps = 0
        odd_after = 0
        for i in range(self.ngens - 1, -1, -1):
            if not self.variables[i].odd:
                continue
            if m2[i]:
                swaps += odd_after
            if m1[i]:
                odd_after += 1
        return (-1 if swaps % 2 else 1), out

    def monomial_str(self, m: Monomial) -> str:
        parts = []
        for e, v in zip(m, self.variables):
            if e == 1:
                parts.append(v.name)
            elif e > 1:
                parts.append(f"{v.name}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_monomial(self, text: str) -> tuple[int, Monomial]:
        """Parse ``a*b^2*c`` (any order) into (sign, canonical monomial)."""
        text = text.strip()
        if text == "1":
            return 1, self.unit_monomial()
        result = self.one()
        for factor in text.split("*"):
            factor = factor.strip()
            base, _, exp = factor.partition("^")
            k = int(exp) if exp else 1
            result = result * self.var(base.strip()) ** k
        if not result.terms:
            raise RingError(f"monomial {text!r} vanishes in this ring")
        (m, c), = result.terms.items()
        return int(c), m

    # -- elements ------------------------------------------------------------

    def element(self, terms: Mapping[Monomial, Scalar] | None = None) -> RingElement:
        return RingElement(self, terms or {})

    def zero(self) -> RingElement:
        return RingElement(self, {})

    def one(self) -> RingElement:
        return self.scalar(1)

    def scalar(self, c: Scalar) -> RingElement:
        return RingElement(self, {self.unit_monomial(): c})

    def var(self, name: str) -> RingElement:
        i = self.index(name)
        m = tuple(int(j == i) for j in range(self.ngens))
        return RingElement(self, {m: Fraction(1)})

    def gens(self) -> tuple[RingElement, ...]:
        return tuple(self.var(v.name) for v in self.variables)

    def __call__(self, x) -> RingElement:
        if isinstance(x, RingElement):
            if x.ring == self:
                return x
            return x.rehome(self)
        return self.scalar(x)

    def monomials(self, degree: int | None = None) -> Iterator[Monomial]:
        """All nonzero monomials (optionally of one degree), canonical order."""
        def rec(i, prefix, deg):
            if i == self.ngens:
                if degree is None or deg == degree:
                    yield tuple(prefix)
                return
            v = self.variables[i]
            e = 0
            while (v.nilpotency is None or e < v.nilpotency) and deg + e * v.degree <= self.degree_cap:
                yield from rec(i + 1, prefix + [e], deg + e * v.degree)
                e += 1

        yield from rec(0, [], 0)

    # -- integration -------------------------------------------------------

    def volume_monomial(self) -> Monomial:
        if any(v.nilpotency is None for v in self.variables):
            raise RingError("ring has unbounded variables and no volume monomial")
        return tuple(v.top_power for v in self.variables)

    def integration_functional(self) -> dict[Monomial, Fraction]:
        if self.integration is not None:
            return dict(self.integration)
        return {self.volume_monomial(): Fraction(1)}

    @property
    def dimension(self) -> int:
        return max(self.monomial_degree(m) for m in self.integration_functional())

    # -- fiber / base split ---------------------------------------------------

    def has_split(self) -> bool:
        return self.fiber is not None

    def _require_split(self):
        if self.fiber is None:
            raise RingError("ring has no fiber/base split declared")

    def fiber_indices(self) -> list[int]:
        self._require_split()
        return [i for i, v in enumerate(self.variables) if v.name in self.fiber]

    def base_indices(self) -> list[int]:
        self._require_split()
        return [i for i, v in enumerate(self.variables) if v.name not in self.fiber]

    def fiber_functional(self) -> dict[Monomial, Fraction]:
        """Fiber pairing keyed by the fiber-variable exponents only."""
        if self.fiber_integration is not None:
            return dict(self.fiber_integration)
        idx = self.fiber_indices()
        top = []
        for i in idx:
            v = self.variables[i]
            if v.nilpotency is None:
                raise RingError(f"fiber variable {v.name} is unbounded; give a fiber functional")
            top.append(v.top_power)
        return {tuple(top): Fraction(1)}

    def split_monomial(self, m: Monomial) -> tuple[int, Monomial, Monomial]:
        """m = sign * (fiber part)(base part)."""
        fi, bi = self.fiber_indices(), self.base_indices()
        fiber_set = set(fi)
        # count (base odd, fiber odd) pairs where the base variable comes first
        swaps = 0
        base_odd_seen = 0
        for i, v in enumerate(self.variables):
            if not (v.odd and m[i]):
                continue
            if i in fiber_set:
                swaps += base_odd_seen
            else:
                base_odd_seen += 1
        return (-1 if swaps % 2 else 1), tuple(m[i] for i in fi), tuple(m[i] for i in bi)

    def base_ring(self) -> GradedRing:
        self._require_split()
        if not self.fiber:
            return self
        bi = self.base_indices()
        fiber_f = self.fiber_functional()
        base_f: dict[Monomial, Fraction] = {}
        for m, val in self.integration_functional().items():
            sign, mf, mb = self.split_monomial(m)
            fv = fiber_f.get(mf)
            if fv:
                base_f[mb] = sign * Fraction(val) / fv
        variables = tuple(self.variables[i] for i in bi)
        cap = sum(v.degree * (v.top_power if v.top_power is not None else 0) for v in variables)
        cap = min(self.degree_cap, max(cap, max((v.degree for v in variables), default=0)))
        if any(v.nilpotency is None for v in variables):
            cap = self.degree_cap
        return GradedRing(variables, cap, base_f or None, name=f"{self.name}/fiber" if self.name else "")

    def with_fiber(self, fiber: Iterable[str], fiber_integration=None) -> GradedRing:
        return GradedRing(self.variables, self.degree_cap, self.integration, frozenset(fiber),
                          fiber_integration, self.name)

    def __str__(self):
        vs = ", ".join(f"{v.name}:{v.degree}" + (f":{v.nilpotency}" if v.nilpotency else "") for v in self.variables)
        return f"{self.name or 'ring'}[{vs}]"


def _freeze_functional(f) -> tuple[tuple[Monomial, Fraction], ...]:
    items = f.items() if isinstance(f, Mapping) else f
    return tuple(sorted((tuple(m), Fraction(v)) for m, v in items))


class RingElement:
    """Sparse element: canonical monomial -> nonzero scalar."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: Mapping[Monomial, Scalar]):
        self.ring = ring
        self.terms = {m: (Fraction(c) if isinstance(c, int) else c) for m, c in terms.items() if c}

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> RingElement | None:
        if isinstance(other, RingElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingError("elements belong to different rings")
            return other
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> RingElement:
        if not c:
            return self.ring.zero()
        return RingElement(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ring = self.ring
        out: dict[Monomial, Scalar] = {}
        mult = ring.multiply_monomials
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = mult(m1, m2)
                if r is None:
                    continue
                sign, m = r
                v = c1 * c2 if sign > 0 else -(c1 * c2)
                out[m] = out[m] + v if m in out else v
        return RingElement(ring, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(Fraction(1) / other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.ring(other) * self.inverse()

    def is_unit(self) -> bool:
        return bool(self.constant_term())

    def inverse(self) -> RingElement:
        """1/self = c^-1 * sum_k (-n/c)^k for self = c + n, n nilpotent."""
        c = self.constant_term()
        if not c:
            raise ZeroDivisionError("element with zero constant term is not invertible")
        inv_c = Fraction(1) / c
        n = (self - c).scale(inv_c)
        result = self.ring.one()
        power = self.ring.one()
        while True:
            power = -(power * n)
            if not power:
                break
            result = result + power
        return result.scale(inv_c)

    # -- comparison and queries ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = self.ring.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.ring != self.ring:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, m: Monomial) -> Scalar:
        return self.terms.get(tuple(m), _ZERO)

    def constant_term(self) -> Scalar:
        return self.terms.get(self.ring.unit_monomial(), _ZERO)

    def homogeneous(self, degree: int) -> RingElement:
        deg = self.ring.monomial_degree
        return RingElement(self.ring, {m: c for m, c in self.terms.items() if deg(m) == degree})

    def degrees(self) -> list[int]:
        return sorted({self.ring.monomial_degree(m) for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous element."""
        ds = self.degrees()
        if len(ds) != 1:
            raise RingError("element is zero or not homogeneous")
        return ds[0]

    def rehome(self, ring: GradedRing) -> RingElement:
        """Same element in a ring containing all our variables, by name.

        Monomials keep their sign only if the relative order of our odd
        variables is unchanged in the target ring, which holds for tensor
        products and base rings built here.
        """
        idx = [ring.index(v.name) if ring.has_variable(v.name) else None for v in self.ring.variables]
        odd_pos = [i for i, v in zip(idx, self.ring.variables) if v.odd and i is not None]
        if odd_pos != sorted(odd_pos):
            raise RingError("target ring reorders odd variables")
        out = {}
        for m, c in self.terms.items():
            nm = [0] * ring.ngens
            for i, e, v in zip(idx, m, self.ring.variables):
                if i is None:
                    if e:
                        raise RingError(f"variable {v.name!r} does not exist in the target ring")
                    continue
                nm[i] = e
            nm = tuple(nm)
            if ring.valid_monomial(nm):
                out[nm] = c
        return RingElement(ring, out)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda mc: (self.ring.monomial_degree(mc[0]), [-e for e in mc[0]])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            ms = self.ring.monomial_str(m)
            cs = str(c)
            if ms == "1":
                parts.append(cs if " " not in cs else f"({cs})")
            elif cs == "1":
                parts.append(ms)
            elif cs == "-1":
                parts.append("-" + ms)
            elif " " in cs:
                parts.append(f"({cs})*{ms}")
            else:
                parts.append(f"{cs}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"RingElement({self})"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def apply_series(f: TruncatedSeries, x: RingElement) -> RingElement:
    """sum_k f_k x^k for nilpotent x built from even-degree parts."""
    if not f.is_power_series():
        raise RingError("cannot substitute into a Laurent series")
    if x.constant_term():
        raise RingError("substituted class must have zero constant term")
    if any(d % 2 for d in x.degrees()):
        raise RingError("substituted class must have even degree")
    ring = x.ring
    result = ring.scalar(f[0]) if (f.order is None or f.order >= 0) else ring.zero()
    power = ring.one()
    k = 0
    while True:
        power = power * x
        k += 1
        if not power:
            break
        if f.order is not None and k > f.order:
            raise RingError(f"series known to order {f.order} but x^{k} != 0; raise the truncation")
        ck = f[k]
        if ck:
            result = result + power.scale(ck)
    return result


def integrate(a: RingElement) -> Scalar:
    """Fundamental-class pairing of the top-degree part."""
    total = _ZERO
    for m, val in a.ring.integration_functional().items():
        c = a.terms.get(m)
        if c:
            total = total + c * val
    return total


def fiber_integrate(a: RingElement) -> RingElement:
    """Integrate over the fiber variables; identity when the fiber is empty."""
    ring = a.ring
    ring._require_split()
    base = ring.base_ring()
    if not ring.fiber:
        return a if base is ring else a.rehome(base)
    ff = ring.fiber_functional()
    out: dict[Monomial, Scalar] = {}
    for m, c in a.terms.items():
        sign, mf, mb = ring.split_monomial(m)
        fv = ff.get(mf)
        if fv:
            v = c * (sign * fv)
            out[mb] = out[mb] + v if mb in out else v
    return RingElement(base, out)


@dataclass(frozen=True)
class Current:
    """A closed current on ``ring``: dual to a monomial, or the fundamental class.

    ``form`` turns it into the current of integration against a closed form,
    ``beta -> integral(beta * form)``.  ``weight`` scales the pairing, e.g.
    the mass of a transverse measure.
    """

    ring: GradedRing
    monomial: Monomial | None = None
    weight: Fraction = Fraction(1)
    form: RingElement | None = field(default=None, compare=False)
    name: str = ""

    @classmethod
    def dual(cls, ring: GradedRing, text: str, weight=1) -> Current:
        sign, m = ring.parse_monomial(text)
        return cls(ring, m, Fraction(weight) * sign, name=text)

    @classmethod
    def fundamental(cls, ring: GradedRing, weight=1) -> Current:
        return cls(ring, None, Fraction(weight), name="fundamental")

    @classmethod
    def of_form(cls, form: RingElement, name: str = "form") -> Current:
        return cls(form.ring, None, Fraction(1), form, name)

    @property
    def degree(self) -> int:
        if self.form is not None:
            return self.ring.dimension - self.form.degree()
        if self.monomial is None:
            return self.ring.dimension
        return self.ring.monomial_degree(self.monomial)

    def on(self, ring: GradedRing) -> Current:
        """The same current viewed on another ring with the same variable names."""
        if ring == self.ring:
            return self
        if self.form is not None:
            return Current.of_form(self.form.rehome(ring), self.name)
        if self.monomial is None:
            return Current(ring, None, self.weight, name=self.name)
        mono = self.ring.element({self.monomial: 1}).rehome(ring)
        (m, _), = mono.terms.items()
        return Current(ring, m, self.weight, name=self.name)


def pair_current(a: RingElement, C: Current) -> Scalar:
    if C.ring != a.ring:
        raise RingError("current and class live on different rings")
    if C.form is not None:
        return integrate(a * C.form) * C.weight
    if C.monomial is None:
        return integrate(a) * C.weight
    return a.coefficient(C.monomial) * C.weight


def tensor_rings(A: GradedRing, B: GradedRing, name: str = "") -> GradedRing:
    """A (x) B with A's variables first; integration and fiber tags multiply."""
    fa, fb = A.integration_functional(), B.integration_functional()
    integration = {ma + mb: va * vb for ma, va in fa.items() for mb, vb in fb.items()}
    fiber = None
    fiber_integration = None
    if A.fiber is not None or B.fiber is not None:
        fiber = (A.fiber or frozenset()) | (B.fiber or frozenset())
        if A.fiber_integration is not None or B.fiber_integration is not None:
            ffa = A.fiber_functional() if A.fiber is not None else {(): Fraction(1)}
            ffb = B.fiber_functional() if B.fiber is not None else {(): Fraction(1)}
            fiber_integration = {ma + mb: va * vb for ma, va in ffa.items() for mb, vb in ffb.items()}
    return GradedRing(A.variables + B.variables, A.degree_cap + B.degree_cap, integration,
                      fiber, fiber_integration, name or f"{A.name}x{B.name}")
