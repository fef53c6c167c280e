"""Fixed-point assembly of higher Lefschetz numbers.

Three routes compute the same pairing from a list of fixed components:

* ``strict``  for components with TF^h = 0: numerator over
  ch(lambda_{-1}(N (x) C))(h), times the twist character, paired directly;
* ``general`` numerator / ch(lambda_{-1}(N (x) C))(h) * Td(TF^h (x) C),
  integrated along F^h and then paired;
* ``basic3``  numerator / det(1 - h|N) * prod S^theta * R * Td, the same
  denominator split into its scalar part and the S and R sequences.

Classical numerators are written through the normal lines of the component:
every N(theta) line y of weight w = e^{i theta}, and every half-root x of
N(-1) as a line of weight -1.  With W = w e^y and Wb = conj(w) e^-y:

    de Rham      prod (1 - W)(1 - Wb)
    signature    prod (Wb - W)
    Dolbeault j  e_j(W) * prod (1 - Wb)
    spin (+-)    +- prod (W^1/2 - Wb^1/2)

The signature and Dolbeault orientation constant is fixed so that the
rotation by pi/2 gives -2i and i + 1 - 2j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import Cyclotomic, Scalar, is_cyclotomic_integer, root_of_unity, scalar_to_record
from .genera import (
    EquivariantBundle,
    R_class,
    S_theta_class,
    TotalClassBundle,
    check_normal_angle,
    chern_character,
    det_one_minus_h,
    euler_class,
    genus_of_roots,
    genus_of_total_class,
    invert_denominator,
    lambda_minus1_ch,
    product_over_roots,
    rigidity_R_coeff,
    todd_complexified,
)
from .gring import Current, GradedRing, RingElement, apply_series, fiber_integrate, integrate, pair_current
from .series import TruncatedSeries, named_series
from .spaces import FixedComponentModel, SpaceModel, rehome_bundle

__all__ = [
    "DE_RHAM",
    "DOLBEAULT",
    "SIGNATURE",
    "SPIN",
    "EXPLICIT",
    "ComponentTerm",
    "LefschetzReport",
    "RigidityReport",
    "SymbolDatum",
    "bott_taubes_value",
    "integrality_characteristic_number",
    "lefschetz_basic3",
    "lefschetz_general",
    "lefschetz_strict",
    "local_index_character",
    "rigidity_obstruction",
]

DE_RHAM = "de_rham"
SIGNATURE = "signature"
DOLBEAULT = "dolbeault"
SPIN = "spin"
EXPLICIT = "explicit"
CLASSICAL = (DE_RHAM, SIGNATURE, DOLBEAULT, SPIN)


class LefschetzError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolDatum:
    complex: str
    j: int = 0
    lift: int = 1
    numerator: RingElement | None = field(default=None, compare=False)
    twisted: bool = True

    def __post_init__(self):
        if self.complex not in CLASSICAL + (EXPLICIT,):
            raise LefschetzError(f"unknown complex {self.complex!r}")
        if self.complex == EXPLICIT and self.numerator is None:
            raise LefschetzError("explicit symbol needs a numerator class")
        if self.complex == SPIN and self.lift not in (1, -1):
            raise LefschetzError("spin lift must be +1 or -1")
        if self.complex == DOLBEAULT and self.j < 0:
            raise LefschetzError("Dolbeault degree must be non-negative")

    @property
    def label(self) -> str:
        if self.complex == DOLBEAULT:
            return f"dolbeault(j={self.j})"
        if self.complex == SPIN:
            return f"spin({'+' if self.lift > 0 else '-'})"
        return self.complex


# ---------------------------------------------------------------------------
# local characters
# ---------------------------------------------------------------------------

def _exp(x: RingElement) -> RingElement:
    if not x:
        return x.ring.one()
    return apply_series(named_series("exp", max(x.ring.degree_cap, 1)), x)


def _elementary(values: Sequence[RingElement], j: int, ring: GradedRing) -> RingElement:
    e = [ring.one()] + [ring.zero()] * j
    for v in values:
        for i in range(j, 0, -1):
            e[i] = e[i] + e[i - 1] * v
    return e[j]


def _normal_lines(component: FixedComponentModel):
    """(root y, weight w, square root of w) for every complex normal line."""
    lines = []
    for turns, N in component.normal_theta:
        half = root_of_unity(Fraction(turns) / 2)
        if component.conjugated:
            half = half.conj()
        for y, w in zip(N.roots, N.weights):
            lines.append((y, w, half))
    if component.normal_minus1 is not None:
        half = root_of_unity(Fraction(1, 4))
        if component.conjugated:
            half = half.conj()
        for x in component.normal_minus1.roots:
            lines.append((x, Fraction(-1), half))
    return lines


def _numerator_from_lines(symbol: SymbolDatum, lines, ring: GradedRing, odd_minus1: bool) -> RingElement:
    one = ring.one()
    if odd_minus1 and symbol.complex != DE_RHAM:
        raise LefschetzError(f"{symbol.label} needs an even-dimensional -1 eigenbundle")
    if symbol.complex == DE_RHAM:
        out = one
        for y, w, _ in lines:
            wb = w.conj() if isinstance(w, Cyclotomic) else w
            out = out * (1 - _exp(y) * w) * (1 - _exp(-y) * wb)
        if odd_minus1:
            out = out * 2
        return out
    W = [_exp(y) * w for y, w, _ in lines]
    Wb = [_exp(-y) * (w.conj() if isinstance(w, Cyclotomic) else w) for y, w, _ in lines]
    if symbol.complex == SIGNATURE:
        out = one
        for a, b in zip(W, Wb):
            out = out * (b - a)
        return out
    if symbol.complex == DOLBEAULT:
        out = _elementary(W, symbol.j, ring)
        for b in Wb:
            out = out * (1 - b)
        return out
    # spin: square roots of the line characters
    out = one * symbol.lift
    for y, w, half in lines:
        h = _exp(y * Fraction(1, 2))
        hb = _exp(-y * Fraction(1, 2))
        out = out * (h * half - hb * half.conj())
    return out


def local_index_character(symbol: SymbolDatum | str, thetas: Sequence, lift: int = 1, j: int = 0) -> Scalar:
    """Strict-transversal numerator at zero normal roots for angles in turns."""
    if isinstance(symbol, str):
        symbol = SymbolDatum(symbol, j=j, lift=lift)
    if symbol.complex == EXPLICIT:
        raise LefschetzError("explicit symbols have no classical character")
    if not thetas:
        raise LefschetzError("need at least one normal angle")
    ring = GradedRing((), 0)
    lines = []
    for t in thetas:
        t = check_normal_angle(t)
        lines.append((ring.zero(), root_of_unity(t), root_of_unity(t / 2)))
    return _numerator_from_lines(symbol, lines, ring, False).constant_term()


def _leafwise_factor(symbol: SymbolDatum, TF: EquivariantBundle) -> RingElement:
    """ch(sigma(E^h))(h) * Td(TF^h (x) C) for the classical complexes along F^h."""
    ring = TF.ring
    if TF.rank == 0:
        return ring.one()
    order = max(ring.degree_cap, 1)
    if symbol.complex == DE_RHAM:
        return euler_class(TF)
    if symbol.complex == SPIN:
        return genus_of_roots(named_series("ahat", order), TF)
    if symbol.complex == SIGNATURE:
        # x / tanh(x/2) = 2 * lgenus(x/2)
        half = TruncatedSeries({1: Fraction(1, 2)}, None)
        f = named_series("lgenus", order).compose(half).scale(2)
        return product_over_roots(f, TF.roots, ring)
    # Dolbeault: TF^h is taken with the complex structure whose roots are its half-roots
    duals = [_exp(-z) for z in TF.roots]
    return _elementary(duals, symbol.j, ring) * product_over_roots(named_series("todd", order), TF.roots, ring)


def _numerator(component: FixedComponentModel, symbol: SymbolDatum) -> RingElement:
    """ch(i^*[sigma])(h) as a class on V^h."""
    if symbol.complex == EXPLICIT:
        num = symbol.numerator
        if num.ring != component.ring:
            num = num.rehome(component.ring)
        return num
    odd = component.normal_minus1 is not None and component.normal_minus1.extra_line is not None
    normal = _numerator_from_lines(symbol, _normal_lines(component), component.ring, odd)
    if component.is_strict:
        return normal
    leaf = _leafwise_factor(symbol, component.leaf_tangent)
    return leaf * normal * todd_complexified(component.leaf_tangent).inverse()


def _twist(component: FixedComponentModel, symbol: SymbolDatum) -> RingElement:
    if component.twist is None or not symbol.twisted:
        return component.ring.one()
    return chern_character(component.twist, at_h=True)


def _leaf_integrate(a: RingElement) -> RingElement:
    if a.ring.fiber is None:
        return a
    return fiber_integrate(a)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class ComponentTerm:
    component: str
    multiplicity: int
    integrand: RingElement
    haefliger: RingElement
    current: Current
    value: Scalar
    factors: dict[str, str]


@dataclass
class LefschetzReport:
    route: str
    symbol: str
    terms: list[ComponentTerm]
    value: Scalar
    kappa: int | None = None
    verdict: bool | None = None

    def check_integrality(self, kappa: int) -> LefschetzReport:
        self.kappa = kappa
        self.verdict = is_cyclotomic_integer(self.value, kappa)
        return self

    def to_json(self) -> dict:
        out = {
            "route": self.route,
            "complex": self.symbol,
            "value": scalar_to_record(self.value),
            "value_text": _scalar_text(self.value),
            "components": [
                {
                    "component": t.component,
                    "multiplicity": t.multiplicity,
                    "current": t.current.name or "fundamental",
                    "haefliger_class": str(t.haefliger),
                    "value": scalar_to_record(t.value),
                    "factors": dict(sorted(t.factors.items())),
                }
                for t in self.terms
            ],
        }
        if self.kappa is not None:
            out["integrality"] = {"kappa": self.kappa, "verdict": self.verdict}
        return out


def _scalar_text(x: Scalar) -> str:
    if isinstance(x, Cyclotomic):
        return str(x.canonical())
    return str(Fraction(x))


def _as_list(components) -> list[FixedComponentModel]:
    if isinstance(components, FixedComponentModel):
        return [components]
    return list(components)


def _assemble(route: str, components, symbol: SymbolDatum, current, build, kappa: int | None) -> LefschetzReport:
    terms = []
    total: Scalar = Fraction(0)
    for comp in _as_list(components):
        integrand, factors = build(comp)
        haef = _leaf_integrate(integrand)
        C = comp.current(current)
        if C.ring != haef.ring:
            raise LefschetzError(f"current {C.name!r} does not live on the transverse ring of {comp.name}")
        value = pair_current(haef, C) * comp.multiplicity
        factors["current"] = C.name or "fundamental"
        factors["fiber_integral"] = str(haef)
        terms.append(ComponentTerm(comp.name, comp.multiplicity, integrand, haef, C, value, factors))
        total = total + value
    report = LefschetzReport(route, symbol.label, terms, total)
    if kappa is not None:
        report.check_integrality(kappa)
    return report


def lefschetz_strict(components, symbol: SymbolDatum, current, kappa: int | None = None) -> LefschetzReport:
    """Strict transversal: numerator / ch(lambda_{-1}(N (x) C))(h) * ch(twist)(h)."""

    def build(comp: FixedComponentModel):
        if not comp.is_strict:
            raise LefschetzError(f"component {comp.name} is not a strict transversal (TF^h != 0)")
        num = _numerator(comp, symbol)
        den = lambda_minus1_ch(comp.normal_complexified())
        try:
            inv = invert_denominator(den)
        except ValueError:
            raise LefschetzError("trivial normal weight: denominator not invertible") from None
        tw = _twist(comp, symbol)
        factors = {"numerator": str(num), "denominator": str(den), "todd": "1", "twist": str(tw)}
        return num * inv * tw, factors

    return _assemble("strict", components, symbol, current, build, kappa)


def lefschetz_general(components, symbol: SymbolDatum, current, kappa: int | None = None) -> LefschetzReport:
    """int_{F^h} numerator / ch(lambda_{-1}(N (x) C))(h) * Td(TF^h (x) C), paired with C."""

    def build(comp: FixedComponentModel):
        num = _numerator(comp, symbol)
        den = lambda_minus1_ch(comp.normal_complexified())
        inv = invert_denominator(den)
        td = todd_complexified(comp.leaf_tangent)
        tw = _twist(comp, symbol)
        factors = {"numerator": str(num), "denominator": str(den), "todd": str(td), "twist": str(tw)}
        return num * inv * td * tw, factors

    return _assemble("general", components, symbol, current, build, kappa)


def lefschetz_basic3(components, symbol: SymbolDatum, current, kappa: int | None = None) -> LefschetzReport:
    """numerator / det(1 - h|N) * prod_theta S^theta(N(theta)) * R(N(-1)) * Td(TF^h (x) C)."""

    def build(comp: FixedComponentModel):
        num = _numerator(comp, symbol)
        det = det_one_minus_h(comp.decomposition(), comp.s1())  # real, so h and h^-1 agree
        ring = comp.ring
        S = ring.one()
        for _, N in comp.normal_theta:
            S = S * S_theta_class(N)
        R = R_class(comp.normal_minus1) if comp.normal_minus1 is not None else ring.one()
        td = todd_complexified(comp.leaf_tangent)
        tw = _twist(comp, symbol)
        factors = {"numerator": str(num), "denominator": _scalar_text(det), "S": str(S), "R": str(R),
                   "todd": str(td), "twist": str(tw)}
        return num * S * R * td * tw / det, factors

    return _assemble("basic3", components, symbol, current, build, kappa)


def integrality_characteristic_number(components, symbol: SymbolDatum, E_hat: EquivariantBundle | None = None,
                                      kappa: int = 1) -> tuple[Scalar, bool]:
    """int_{V^h} num / ch(lambda_{-1}(N (x) C))(h) Td(TF^h (x) C) Ahat(nu^h) ch(E_hat)(h), summed."""
    total: Scalar = Fraction(0)
    for comp in _as_list(components):
        ring = comp.ring
        num = _numerator(comp, symbol)
        inv = invert_denominator(lambda_minus1_ch(comp.normal_complexified()))
        td = todd_complexified(comp.leaf_tangent)
        order = max(ring.degree_cap, 1)
        ahat = genus_of_roots(named_series("ahat", order), comp.transverse) if comp.transverse is not None else ring.one()
        ch_e = ring.one()
        if E_hat is not None:
            E = E_hat if E_hat.ring == ring else _rehome_bundle(E_hat, ring)
            ch_e = chern_character(E, at_h=True)
        integrand = num * inv * td * _twist(comp, symbol) * ahat * ch_e
        total = total + integrate(integrand) * comp.multiplicity
    return total, is_cyclotomic_integer(total, kappa)


def _rehome_bundle(E: EquivariantBundle, ring: GradedRing) -> EquivariantBundle:
    return rehome_bundle(E, ring)


# ---------------------------------------------------------------------------
# rigidity
# ---------------------------------------------------------------------------

OBSTRUCTED = "OBSTRUCTED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class RigidityReport:
    value: Scalar
    verdict: str
    haefliger: RingElement
    current: str

    def to_json(self) -> dict:
        return {"value": scalar_to_record(self.value), "value_text": _scalar_text(self.value),
                "verdict": self.verdict, "haefliger_class": str(self.haefliger), "current": self.current}


def _genus(f_name: str, E, ring: GradedRing) -> RingElement:
    f = named_series(f_name, max(ring.degree_cap, 1))
    if isinstance(E, TotalClassBundle):
        return genus_of_total_class(f, E)
    return genus_of_roots(f, E)


def _model_current(model: SpaceModel, current, base: GradedRing) -> Current:
    if isinstance(current, Current):
        return current.on(base)
    if isinstance(current, RingElement):
        return Current.of_form(current.rehome(base))
    if current == "fundamental":
        return Current.fundamental(base)
    if current in model.classes:
        return Current.of_form(model.classes[current].rehome(base), current)
    return Current.dual(base, current)


def rigidity_obstruction(model: SpaceModel, current) -> RigidityReport:
    """<int_F Ahat(TF), C>; nonzero means no nontrivial compact connected leaf-preserving action."""
    if model.ring.fiber is None:
        raise LefschetzError("rigidity needs a fiber/base split")
    TF = model.leaf_tangent
    ring = model.ring
    A = _genus("ahat", TF, ring) if TF is not None else ring.one()
    haef = fiber_integrate(A)
    C = _model_current(model, current, haef.ring)
    value = pair_current(haef, C)
    return RigidityReport(value, OBSTRUCTED if value else INCONCLUSIVE, haef, C.name or "fundamental")


def bott_taubes_value(model: SpaceModel, n: int, current, Q: int | None = None, spin: bool = False) -> Scalar:
    """<L(TF) ch(R_n), C>, or <Ahat(TF) ch(R'_n), C> when ``spin``."""
    Q = n if Q is None else Q
    TF = model.leaf_tangent
    ring = model.ring
    if TF is None:
        raise LefschetzError("model has no leafwise tangent bundle")
    if isinstance(TF, TotalClassBundle):
        raise LefschetzError("Bott-Taubes bundles need the leafwise tangent by roots")
    genus = _genus("ahat" if spin else "lgenus", TF, ring)
    integrand = genus * rigidity_R_coeff(TF, n, Q, spin=spin)  # already ch(R_n)
    haef = _leaf_integrate(integrand)
    C = _model_current(model, current, haef.ring)
    return pair_current(haef, C)
