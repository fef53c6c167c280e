"""Multiplicative sequences and equivariant characteristic classes.

Bundles are given by formal roots (splitting principle), each tagged with the
character value of the isometry h on that line.  Real bundles store half of
their roots: a real bundle with half-roots x_j complexifies to roots +-x_j
with weights (w, conj w), and its total Pontryagin class is prod(1 + x_j^2).
Angles are fractions of a full turn, so theta = pi/2 is ``Fraction(1, 4)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .arith import Cyclotomic, Scalar, root_of_unity
from .gring import GradedRing, RingElement, apply_series
from .series import TruncatedSeries, named_series

__all__ = [
    "COMPLEX",
    "REAL",
    "EquivariantBundle",
    "TotalClassBundle",
    "R_class",
    "S_theta_class",
    "check_normal_angle",
    "chern_character",
    "complex_bundle",
    "det_one_minus_h",
    "euler_class",
    "genus_of_roots",
    "genus_of_total_class",
    "invert_denominator",
    "lambda_minus1_ch",
    "lambda_t_ch",
    "product_over_roots",
    "real_bundle",
    "rigidity_R_coeff",
    "rigidity_R_series",
    "sym_t_ch",
    "todd_complexified",
    "total_class",
]

COMPLEX = "complex"
REAL = "real"

_ONE = Fraction(1)


class BundleError(ValueError):
    pass


def _conj(w: Scalar) -> Scalar:
    return w.conj() if isinstance(w, Cyclotomic) else w


def _is_one(w: Scalar) -> bool:
    return w == 1


def check_normal_angle(turns) -> Fraction:
    """Validate a normal rotation angle given as a fraction of a full turn."""
    t = Fraction(turns)
    if t % 1 == 0:
        raise BundleError("not normal direction: rotation angle is 0")
    if not 0 < t < Fraction(1, 2):
        raise BundleError("θ must lie in (0,π)")
    return t


@lru_cache(maxsize=None)
def _series(name: str, order: int) -> TruncatedSeries:
    return named_series(name, order)


def _class_series(name: str, x: RingElement) -> RingElement:
    """name-series evaluated at a nilpotent class, with enough terms."""
    return apply_series(_series(name, max(x.ring.degree_cap, 1)), x)


def _exp(x: RingElement) -> RingElement:
    if not x:
        return x.ring.one()
    return _class_series("exp", x)


# ---------------------------------------------------------------------------
# bundles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivariantBundle:
    kind: str
    ring: GradedRing
    roots: tuple[RingElement, ...]
    weights: tuple[Scalar, ...]
    name: str = ""
    extra_line: Scalar | None = None  # REAL only: odd rank, one trivial real line with this weight

    def __post_init__(self):
        if self.kind not in (COMPLEX, REAL):
            raise BundleError(f"unknown bundle kind {self.kind!r}")
        if len(self.roots) != len(self.weights):
            raise BundleError("roots and weights differ in length")
        for x in self.roots:
            if x.ring != self.ring:
                raise BundleError("root lives in a different ring")
            if x.constant_term():
                raise BundleError("roots must have zero constant term")
            if any(d % 2 for d in x.degrees()):
                raise BundleError("roots must have even degree")
        if self.extra_line is not None and self.kind != REAL:
            raise BundleError("only real bundles carry an extra real line")

    @property
    def rank(self) -> int:
        """Complex rank for COMPLEX, real rank for REAL."""
        if self.kind == COMPLEX:
            return len(self.roots)
        return 2 * len(self.roots) + (self.extra_line is not None)

    def complexify(self) -> EquivariantBundle:
        """E (x) C: roots +-x with weights (w, conj w)."""
        roots, weights = [], []
        for x, w in zip(self.roots, self.weights):
            roots += [x, -x]
            weights += [w, _conj(w)]
        if self.extra_line is not None:
            roots.append(self.ring.zero())
            weights.append(self.extra_line)
        return EquivariantBundle(COMPLEX, self.ring, tuple(roots), tuple(weights), f"{self.name}(x)C")

    def conj(self) -> EquivariantBundle:
        """The same bundle seen by h^-1."""
        extra = None if self.extra_line is None else _conj(self.extra_line)
        return EquivariantBundle(self.kind, self.ring, self.roots, tuple(_conj(w) for w in self.weights),
                                 self.name, extra)

    def direct_sum(self, other: EquivariantBundle) -> EquivariantBundle:
        if other.kind != self.kind or other.ring != self.ring:
            raise BundleError("direct sum needs bundles of the same kind on the same ring")
        if self.extra_line is not None and other.extra_line is not None:
            raise BundleError("direct sum of two odd real bundles is not representable with half-roots")
        extra = self.extra_line if self.extra_line is not None else other.extra_line
        return EquivariantBundle(self.kind, self.ring, self.roots + other.roots, self.weights + other.weights,
                                 f"{self.name}+{other.name}", extra)

    def tensor(self, other: EquivariantBundle) -> EquivariantBundle:
        if self.kind != COMPLEX or other.kind != COMPLEX or other.ring != self.ring:
            raise BundleError("tensor product is defined here for complex bundles on one ring")
        roots = tuple(x + y for x in self.roots for y in other.roots)
        weights = tuple(w * v for w in self.weights for v in other.weights)
        return EquivariantBundle(COMPLEX, self.ring, roots, weights, f"{self.name}*{other.name}")

    def with_weight(self, w: Scalar) -> EquivariantBundle:
        return EquivariantBundle(self.kind, self.ring, self.roots, (w,) * len(self.roots), self.name,
                                 self.extra_line)


def _as_class(ring: GradedRing, x) -> RingElement:
    return x if isinstance(x, RingElement) else ring.scalar(x)


def complex_bundle(ring: GradedRing, roots: Iterable, weights: Iterable | None = None, name: str = "") -> EquivariantBundle:
    roots = tuple(_as_class(ring, x) for x in roots)
    weights = tuple(weights) if weights is not None else (_ONE,) * len(roots)
    return EquivariantBundle(COMPLEX, ring, roots, weights, name)


def real_bundle(ring: GradedRing, half_roots: Iterable, weights: Iterable | None = None, name: str = "",
                extra_line: Scalar | None = None) -> EquivariantBundle:
    roots = tuple(_as_class(ring, x) for x in half_roots)
    weights = tuple(weights) if weights is not None else (_ONE,) * len(roots)
    return EquivariantBundle(REAL, ring, roots, weights, name, extra_line)


@dataclass(frozen=True)
class TotalClassBundle:
    """A bundle known only through its total Chern (COMPLEX) or Pontryagin (REAL) class."""

    kind: str
    total: RingElement
    rank: int
    name: str = ""

    def __post_init__(self):
        if self.kind not in (COMPLEX, REAL):
            raise BundleError(f"unknown bundle kind {self.kind!r}")
        if self.total.constant_term() != 1:
            raise BundleError("malformed total class: constant term must be 1")
        step = self.step
        bad = [d for d in self.total.degrees() if d % step]
        if bad:
            raise BundleError(f"malformed total class: components in degrees {bad} are not multiples of {step}")

    @property
    def step(self) -> int:
        return 4 if self.kind == REAL else 2

    @property
    def ring(self) -> GradedRing:
        return self.total.ring


def total_class(E: EquivariantBundle) -> TotalClassBundle:
    """prod(1 + x) (Chern) or prod(1 + x^2) (Pontryagin, half-roots)."""
    c = E.ring.one()
    for x in E.roots:
        c = c * (1 + (x * x if E.kind == REAL else x))
    return TotalClassBundle(E.kind, c, E.rank, E.name)


# ---------------------------------------------------------------------------
# genera
# ---------------------------------------------------------------------------

def product_over_roots(f: TruncatedSeries, roots: Sequence[RingElement], ring: GradedRing) -> RingElement:
    out = ring.one()
    for x in roots:
        out = out * apply_series(f, x)
    return out


def _check_normalized(f: TruncatedSeries):
    if not f.is_power_series() or f[0] != 1:
        raise BundleError("genus series must be a power series with f(0) = 1")


def _check_even(f: TruncatedSeries):
    top = f.low + len(f.coeffs) - 1 if f.coeffs else -1
    if any(f[k] for k in range(1, top + 1, 2)):
        raise BundleError("genus of a real bundle from half-roots needs an even series; complexify first")


def genus_of_roots(f: TruncatedSeries, E: EquivariantBundle) -> RingElement:
    """prod f(x_i) over the roots (half-roots for REAL, where f must be even)."""
    _check_normalized(f)
    if E.kind == REAL:
        _check_even(f)
    return product_over_roots(f, E.roots, E.ring)


def _enough(f: TruncatedSeries, need: int):
    if f.order is not None and f.order < need:
        raise BundleError(f"series known to order {f.order}; this ring needs order {need}")


def genus_of_total_class(f: TruncatedSeries, B: TotalClassBundle) -> RingElement:
    """Same value as genus_of_roots, from the total class alone.

    With log f(x) = sum l_k x^k and power sums P_k of the formal roots
    (obtained from the elementary classes by Newton's identities), the genus
    is exp(sum_k l_k P_k).  For REAL bundles the "roots" are the x_j^2.
    """
    _check_normalized(f)
    ring = B.ring
    step = B.step
    K = ring.degree_cap // step
    if K == 0:
        return ring.one()
    if B.kind == REAL:
        _check_even(f)
    _enough(f, K * step // 2)
    logf = f.truncate(K * step // 2).log()
    e = [ring.one()] + [B.total.homogeneous(step * i) for i in range(1, K + 1)]
    P: list[RingElement] = [ring.zero()]
    for k in range(1, K + 1):
        pk = e[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            pk = pk + (e[i] * P[k - i]) * ((-1) ** (i - 1))
        P.append(pk)
    S = ring.zero()
    for k in range(1, K + 1):
        lk = logf[2 * k] if B.kind == REAL else logf[k]
        if lk:
            S = S + P[k] * lk
    if not S:
        return ring.one()
    return apply_series(_series("exp", K), S)


def todd_complexified(E: EquivariantBundle) -> RingElement:
    """Td(E (x) C), ignoring the h-action (TF^h is fixed by h)."""
    EC = E.complexify() if E.kind == REAL else E
    return product_over_roots(_series("todd", max(E.ring.degree_cap, 1)), EC.roots, E.ring)


def euler_class(E: EquivariantBundle) -> RingElement:
    if E.kind == REAL and E.extra_line is not None:
        raise BundleError("Euler class needs an even-rank oriented bundle")
    out = E.ring.one()
    for x in E.roots:
        out = out * x
    return out


# ---------------------------------------------------------------------------
# equivariant characters
# ---------------------------------------------------------------------------

def _require_complex(E: EquivariantBundle):
    if E.kind != COMPLEX:
        raise BundleError("expected a complex bundle; complexify the real bundle first")


def chern_character(E: EquivariantBundle, at_h: bool = True) -> RingElement:
    """sum_i w_i exp(x_i) (or sum_i exp(x_i) when at_h is False)."""
    _require_complex(E)
    out = E.ring.zero()
    for x, w in zip(E.roots, E.weights):
        term = _exp(x)
        out = out + (term * w if at_h else term)
    return out


def lambda_minus1_ch(E: EquivariantBundle) -> RingElement:
    """ch(lambda_{-1}(E))(h) = prod (1 - w_i exp(x_i)); may be non-invertible."""
    _require_complex(E)
    out = E.ring.one()
    for x, w in zip(E.roots, E.weights):
        out = out * (1 - _exp(x) * w)
    return out


def invert_denominator(d: RingElement) -> RingElement:
    if not d.constant_term():
        raise BundleError("fixed-point datum has trivial weight: denominator is not invertible")
    return d.inverse()


def det_one_minus_h(decomp: Sequence[tuple[Fraction, int]], s1: int = 0) -> Scalar:
    """2^s1 * prod_theta ((1 - e^{i theta})(1 - e^{-i theta}))^s(theta)."""
    if s1 < 0:
        raise BundleError("negative dimension for the -1 eigenbundle")
    out: Scalar = Fraction(2) ** s1
    for turns, s in decomp:
        t = check_normal_angle(turns)
        w = root_of_unity(t)
        out = out * ((1 - w) * (1 - w.conj())) ** s
    return out


def S_theta_class(N: EquivariantBundle) -> RingElement:
    """[prod_j (1 - w e^{y_j})(1 - conj(w) e^{-y_j}) / ((1-w)(1-conj w))]^-1."""
    _require_complex(N)
    ring = N.ring
    if not N.roots:
        return ring.one()
    w = N.weights[0]
    if any(v != w for v in N.weights):
        raise BundleError("S-class needs a single common weight")
    if _is_one(w):
        raise BundleError("S-class needs a nontrivial weight e^{iθ} != 1")
    wb = _conj(w)
    norm = (1 - w) * (1 - wb)
    prod = ring.one()
    for y in N.roots:
        prod = prod * ((1 - _exp(y) * w) * (1 - _exp(-y) * wb)) / norm
    return prod.inverse()


def R_class(N: EquivariantBundle) -> RingElement:
    """[prod_j ((1 + e^{x_j})/2)((1 + e^{-x_j})/2)]^-1 for a real bundle."""
    if N.kind != REAL:
        raise BundleError("R-class needs a real bundle with half-roots")
    ring = N.ring
    prod = ring.one()
    half = Fraction(1, 2)
    for x in N.roots:
        prod = prod * ((1 + _exp(x)) * half) * ((1 + _exp(-x)) * half)
    return prod.inverse()


# ---------------------------------------------------------------------------
# lambda_t, S_t and the rigidity bundles, as polynomials in t mod t^(Q+1)
# ---------------------------------------------------------------------------

TPoly = list  # list of RingElement, index = power of t


def _tmul(a: TPoly, b: TPoly, Q: int) -> TPoly:
    ring = a[0].ring
    out = [ring.zero() for _ in range(Q + 1)]
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > Q:
                break
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def _tsubst(a: TPoly, p: int, Q: int) -> TPoly:
    """a(t^p) mod t^(Q+1)."""
    ring = a[0].ring
    out = [ring.zero() for _ in range(Q + 1)]
    for i, ai in enumerate(a):
        if i * p > Q:
            break
        out[i * p] = ai
    return out


def _line_classes(E: EquivariantBundle) -> list[RingElement]:
    EC = E.complexify() if E.kind == REAL else E
    return [_exp(x) * w for x, w in zip(EC.roots, EC.weights)]


def lambda_t_ch(E: EquivariantBundle, Q: int) -> TPoly:
    """Coefficients of t^0..t^Q in ch(Lambda_t E) = prod (1 + t w e^x)."""
    ring = E.ring
    out = [ring.one()] + [ring.zero() for _ in range(Q)]
    for L in _line_classes(E):
        out = _tmul(out, [ring.one(), L] + [ring.zero()] * (Q - 1) if Q >= 1 else [ring.one()], Q)
    return out


def sym_t_ch(E: EquivariantBundle, Q: int) -> TPoly:
    """Coefficients of t^0..t^Q in ch(S_t E) = prod (1 - t w e^x)^-1."""
    ring = E.ring
    out = [ring.one()] + [ring.zero() for _ in range(Q)]
    for L in _line_classes(E):
        powers = [ring.one()]
        for _ in range(Q):
            powers.append(powers[-1] * L)
        out = _tmul(out, powers, Q)
    return out


def rigidity_R_series(F: EquivariantBundle, Q: int, spin: bool = False) -> TPoly:
    """All coefficients R_0..R_Q (or R'_0..R'_Q when ``spin``).

    R:  prod_{n>=1} Lambda_{q^n}(F) prod_{m>=1} S_{q^m}(F), expanded in q.
    R': with t = q^{1/2}, Lambda at t^1, t^3, ... and S at t^2, t^4, ...;
        R'_n is the coefficient of t^n.
    """
    if Q < 0:
        raise BundleError("q-order must be non-negative")
    lam = lambda_t_ch(F, Q)
    sym = sym_t_ch(F, Q)
    ring = F.ring
    out = [ring.one()] + [ring.zero() for _ in range(Q)]
    if spin:
        for p in range(1, Q + 1, 2):
            out = _tmul(out, _tsubst(lam, p, Q), Q)
        for p in range(2, Q + 1, 2):
            out = _tmul(out, _tsubst(sym, p, Q), Q)
    else:
        for p in range(1, Q + 1):
            out = _tmul(out, _tsubst(lam, p, Q), Q)
            out = _tmul(out, _tsubst(sym, p, Q), Q)
    return out


def rigidity_R_coeff(F: EquivariantBundle, n: int, Q: int, spin: bool = False) -> RingElement:
    if n > Q:
        raise BundleError(f"R_{n} needs q-order at least {n}, got {Q}")
    if n < 0:
        raise BundleError("index must be non-negative")
    return rigidity_R_series(F, Q, spin)[n]
