"""Concrete cohomology models: projective spaces, tori, the Atiyah surface
bundle and the two-torus fixed set of the universal example."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from .arith import Scalar, root_of_unity
from .genera import (
    COMPLEX,
    REAL,
    EquivariantBundle,
    TotalClassBundle,
    check_normal_angle,
    complex_bundle,
    real_bundle,
)
from .gring import Current, GradedRing, GradedVariable, RingElement, tensor_rings

__all__ = [
    "FixedComponentModel",
    "SpaceModel",
    "build_atiyah_Z",
    "build_circle",
    "build_cp",
    "build_kp",
    "build_point",
    "build_sphere_circle",
    "build_torus",
    "build_torus_with_W",
    "build_universal_example",
    "product",
    "rehome_bundle",
]

Tangent = EquivariantBundle | TotalClassBundle


@dataclass(frozen=True)
class SpaceModel:
    name: str
    ring: GradedRing
    tangent: Tangent | None
    dimension: int
    leaf_tangent: Tangent | None = None
    classes: Mapping[str, RingElement] = field(default_factory=dict, compare=False)
    bundles: Mapping[str, EquivariantBundle] = field(default_factory=dict, compare=False)


def rehome_bundle(E: Tangent, ring: GradedRing) -> Tangent:
    if isinstance(E, TotalClassBundle):
        return TotalClassBundle(E.kind, E.total.rehome(ring), E.rank, E.name)
    return EquivariantBundle(E.kind, ring, tuple(x.rehome(ring) for x in E.roots), E.weights, E.name,
                             E.extra_line)


def _trivial_tangent(ring: GradedRing, rank: int) -> TotalClassBundle:
    return TotalClassBundle(REAL, ring.one(), rank, "trivial")


# ---------------------------------------------------------------------------
# manifolds
# ---------------------------------------------------------------------------

def build_point() -> SpaceModel:
    ring = GradedRing((), 0, name="pt")
    return SpaceModel("pt", ring, _trivial_tangent(ring, 0), 0)


def build_cp(q: int) -> SpaceModel:
    """CP_q: Q[alpha]/alpha^(q+1), deg alpha = 2, p = (1 + alpha^2)^(q+1)."""
    if q < 1:
        raise ValueError("CP_q needs q >= 1")
    ring = GradedRing((GradedVariable("alpha", 2, q + 1),), name=f"CP{q}")
    a = ring.var("alpha")
    tangent = TotalClassBundle(REAL, (1 + a * a) ** (q + 1), 2 * q, f"T CP{q}")
    # stably T + C = (q+1) copies of the hyperplane line, half-root alpha each
    stable = real_bundle(ring, [a] * (q + 1), name=f"T CP{q} + R^2")
    return SpaceModel(f"CP{q}", ring, tangent, 2 * q, classes={"alpha": a}, bundles={"stable_tangent": stable})


def build_kp(qm1: int) -> SpaceModel:
    """KP_{q-1}: Q[alpha]/alpha^q, deg alpha = 4, p = (1 + 4 alpha)^-1 (1 + alpha)^(2q)."""
    if qm1 < 1:
        raise ValueError("KP_{q-1} needs q >= 2")
    q = qm1 + 1
    ring = GradedRing((GradedVariable("alpha", 4, q),), name=f"KP{qm1}")
    a = ring.var("alpha")
    total = (1 + 4 * a).inverse() * (1 + a) ** (2 * q)
    tangent = TotalClassBundle(REAL, total, 4 * qm1, f"T KP{qm1}")
    return SpaceModel(f"KP{qm1}", ring, tangent, 4 * qm1, classes={"alpha": a})


def _torus_variables(k: int) -> tuple[GradedVariable, ...]:
    out = []
    for i in range(1, k + 1):
        out += [GradedVariable(f"eta{i}", 1), GradedVariable(f"beta{i}", 1)]
    return tuple(out)


def build_torus(k: int, fiber: bool = False) -> SpaceModel:
    """T^(2k) with generators eta_i, beta_i in degree 1; volume eta1*beta1*...*etak*betak."""
    if k < 1:
        raise ValueError("torus needs k >= 1")
    variables = _torus_variables(k)
    fib = frozenset(v.name for v in variables) if fiber else None
    ring = GradedRing(variables, fiber=fib, name=f"T{2 * k}")
    return SpaceModel(f"T{2 * k}", ring, _trivial_tangent(ring, 2 * k), 2 * k)


def build_torus_with_W(k: int) -> SpaceModel:
    """T^(2k) with W the tensor product of k line bundles, c1 of the i-th = eta_i*beta_i."""
    base = build_torus(k)
    ring = base.ring
    W = None
    for i in range(1, k + 1):
        L = complex_bundle(ring, [ring.var(f"eta{i}") * ring.var(f"beta{i}")], name=f"W{i}")
        W = L if W is None else W.tensor(L)
    W = replace(W, name="W")
    return replace(base, bundles={"W": W})


def build_circle(name: str = "theta") -> SpaceModel:
    """S^1 with its point foliation: everything is transverse."""
    ring = GradedRing((GradedVariable(name, 1),), fiber=frozenset(), name="S1")
    return SpaceModel("S1", ring, _trivial_tangent(ring, 1), 1, classes={"dvol": ring.var(name)})


def build_sphere_circle(q: int) -> SpaceModel:
    """S^(2q-1) x S^1, a leaf of the SL2 example; stably parallelizable."""
    if q < 1:
        raise ValueError("needs q >= 1")
    variables = (GradedVariable("sigma", 2 * q - 1), GradedVariable("tau", 1))
    ring = GradedRing(variables, name=f"S{2 * q - 1}xS1")
    return SpaceModel(ring.name, ring, _trivial_tangent(ring, 2 * q), 2 * q)


def build_atiyah_Z(s) -> SpaceModel:
    """Atiyah's surface bundle Z -> X with fiber Y, through the class d = c1(TF).

    Cohomology is modeled on y (fiber, deg 2) and x (base, deg 2) with
    y^2 = x^2 = 0 and integral(y*x) = 1.  Taking d = y + (s/2) x gives
    d^2 = s*y*x, d^3 = 0, so integral(d^2) = s, while fiber integration
    over Y is available.  TF is the real plane bundle with half-root d.
    """
    s = Fraction(s)
    if s == 0:
        raise ValueError("Atiyah class must be nonzero")
    ring = GradedRing((GradedVariable("y", 2, 2), GradedVariable("x", 2, 2)), fiber=frozenset({"y"}), name="Z")
    d = ring.var("y") + ring.var("x") * (s / 2)
    tangent = TotalClassBundle(REAL, 1 + d * d, 4, "T Z")
    leaf = real_bundle(ring, [d], name="TF")
    return SpaceModel("Z", ring, tangent, 4, leaf_tangent=leaf, classes={"d": d})


def product(A: SpaceModel, B: SpaceModel) -> SpaceModel:
    """A x B: tensor ring (A's variables first), tangent and leaf tangent add."""
    if not B.ring.variables:
        return A
    if not A.ring.variables:
        return B
    ring = tensor_rings(A.ring, B.ring, f"{A.ring.name}x{B.ring.name}")

    def total(E: Tangent | None) -> TotalClassBundle | None:
        if E is None:
            return None
        if isinstance(E, EquivariantBundle):
            from .genera import total_class
            E = total_class(E) if E.kind == REAL else None
            if E is None:
                return None
        return rehome_bundle(E, ring)

    def add(E1: Tangent | None, E2: Tangent | None) -> Tangent | None:
        if E1 is None and E2 is None:
            return None
        if isinstance(E1, EquivariantBundle) or isinstance(E2, EquivariantBundle):
            parts = [rehome_bundle(E, ring) for E in (E1, E2) if E is not None]
            if all(isinstance(p, EquivariantBundle) for p in parts):
                out = parts[0]
                for p in parts[1:]:
                    out = out.direct_sum(p)
                return out
        t1, t2 = total(E1), total(E2)
        if t1 is None:
            return t2
        if t2 is None:
            return t1
        return TotalClassBundle(REAL, t1.total * t2.total, t1.rank + t2.rank, f"{t1.name}+{t2.name}")

    tangent = add(A.tangent, B.tangent)
    leaf = A.leaf_tangent
    if A.leaf_tangent is not None:
        leaf = rehome_bundle(A.leaf_tangent, ring)
    if B.leaf_tangent is not None:
        leaf = add(A.leaf_tangent, B.leaf_tangent)
    classes = {k: v.rehome(ring) for k, v in {**B.classes, **A.classes}.items()}
    bundles = {k: rehome_bundle(v, ring) for k, v in {**B.bundles, **A.bundles}.items()}
    return SpaceModel(f"{A.name}x{B.name}", ring, tangent, A.dimension + B.dimension, leaf, classes, bundles)


# ---------------------------------------------------------------------------
# fixed-point components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedComponentModel:
    """One connected component of V^h with its normal data.

    ``normal_theta`` lists (angle in turns, complex bundle N(theta)) with the
    weights of N(theta) equal to e^{i theta}; ``normal_minus1`` is the real
    bundle on which h acts by -1.  ``conjugated`` marks the component as seen
    by h^-1 (all weights conjugated).  Currents live on the base ring.
    """

    name: str
    ring: GradedRing
    leaf_tangent: EquivariantBundle
    normal_theta: tuple[tuple[Fraction, EquivariantBundle], ...] = ()
    normal_minus1: EquivariantBundle | None = None
    twist: EquivariantBundle | None = None
    transverse: EquivariantBundle | None = None
    currents: tuple[Current, ...] = ()
    multiplicity: int = 1
    conjugated: bool = False

    def __post_init__(self):
        if self.leaf_tangent.kind != REAL:
            raise ValueError("leafwise tangent must be a real bundle")
        seen = set()
        for turns, N in self.normal_theta:
            t = check_normal_angle(turns)
            if t in seen:
                raise ValueError(f"angle {t} listed twice")
            seen.add(t)
            if N.kind != COMPLEX:
                raise ValueError("N(theta) must be complex")
            w = root_of_unity(t)
            expect = w.conj() if self.conjugated else w
            if any(v != expect for v in N.weights):
                raise ValueError(f"N(theta) weights must equal e^(i theta) for theta = {t} turns")
        if self.normal_minus1 is not None:
            if self.normal_minus1.kind != REAL:
                raise ValueError("N(-1) must be real")
            if any(v != -1 for v in self.normal_minus1.weights):
                raise ValueError("h acts by -1 on N(-1)")
            if self.normal_minus1.extra_line not in (None, -1):
                raise ValueError("h acts by -1 on N(-1)")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def is_strict(self) -> bool:
        return self.leaf_tangent.rank == 0

    @property
    def base_ring(self) -> GradedRing:
        return self.ring.base_ring() if self.ring.fiber is not None else self.ring

    def s1(self) -> int:
        return 0 if self.normal_minus1 is None else self.normal_minus1.rank

    def decomposition(self) -> list[tuple[Fraction, int]]:
        return [(Fraction(t), N.rank) for t, N in self.normal_theta]

    def normal_complexified(self) -> EquivariantBundle:
        """N (x) C with its h-weights."""
        out = complex_bundle(self.ring, [], name="N(x)C")
        for _, N in self.normal_theta:
            out = out.direct_sum(N.complexify())
        if self.normal_minus1 is not None:
            out = out.direct_sum(self.normal_minus1.complexify())
        return out

    def current(self, ref: Current | str) -> Current:
        if isinstance(ref, Current):
            return ref.on(self.base_ring)
        if ref == "fundamental":
            return Current.fundamental(self.base_ring)
        for C in self.currents:
            if C.name == ref:
                return C.on(self.base_ring)
        return Current.dual(self.base_ring, ref)

    def conj(self) -> FixedComponentModel:
        """The component as a fixed set of h^-1."""
        def c(E):
            return None if E is None else E.conj()
        return replace(self, normal_theta=tuple((t, N.conj()) for t, N in self.normal_theta),
                       normal_minus1=c(self.normal_minus1), twist=c(self.twist), conjugated=not self.conjugated)


def _square_free_currents(ring: GradedRing, k: int) -> tuple[Current, ...]:
    out = []
    for mask in range(1 << k):
        names = [f"eta{i}*beta{i}" for i in range(1, k + 1) if mask >> (i - 1) & 1]
        out.append(Current.dual(ring, "*".join(names) if names else "1"))
    out.sort(key=lambda C: (C.degree, C.name))
    return tuple(out)


def build_universal_example(k: int) -> list[FixedComponentModel]:
    """The two fixed tori T^(2k)_0, T^(2k)_1 of the rotation by pi/2.

    Each is a strict transversal: TF^h = 0, the normal bundle is the trivial
    plane TF|_{T} rotated by pi/2 (a complex line of weight i with zero
    root), the twist W has ch = prod(1 + eta_i beta_i) with trivial h-action,
    and the transverse bundle is flat (all half-roots zero).
    """
    if k < 1:
        raise ValueError("universal example needs k >= 1")
    torus = build_torus_with_W(k)
    ring = GradedRing(torus.ring.variables, fiber=frozenset(), name=torus.ring.name)
    W = rehome_bundle(torus.bundles["W"], ring)
    quarter = Fraction(1, 4)
    N = complex_bundle(ring, [0], [root_of_unity(quarter)], name="N(pi/2)")
    leaf = real_bundle(ring, [], name="TF^h")
    nu = real_bundle(ring, [0] * k, name="nu^h")
    currents = _square_free_currents(ring, k)
    return [
        FixedComponentModel(f"T{2 * k}_{j}", ring, leaf, ((quarter, N),), None, W, nu, currents)
        for j in (0, 1)
    ]
