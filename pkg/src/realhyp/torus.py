"""Elliptic curves as rational 2-tori and their affine (anti)holomorphic maps.

A curve is C / (Z + Z*tau).  In the lattice basis {1, tau} every holomorphic
or antiholomorphic affine self-map becomes

    x  |->  A * x + t     (A integral 2x2, t rational, everything mod Z^2)

with det A = +1 for holomorphic maps and det A = -1 for antiholomorphic ones.
Which matrices A can occur depends only on a coarse shape class of tau; the
seven shape classes are the TauFamily values below.  Each family carries the
matrices of its allowed conjugation maps plus a generic numeric sample of tau
used by float_check as a cross-check of the combinatorial encoding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .exactlin import (
    CongruenceSolution,
    IntMat2,
    RatVec2,
    ZERO_VEC,
    frac,
    mod1,
    normalize_int_direction,
    solve_affine_congruence,
)

HOLOMORPHIC = "holo"
ANTIHOLOMORPHIC = "anti"

# Linear parts that occur on the seven lattice shapes.
IDENT = IntMat2.identity()
DIAG_CONJ = IntMat2(1, 0, 0, -1)     # z -> conj(z) on rectangular lattices
SWAP_CONJ = IntMat2(0, 1, 1, 0)      # z -> tau * conj(z) on |tau| = 1 lattices
HALF_CONJ = IntMat2(1, -1, 0, -1)    # z -> conj(z) on Re(tau) = -1/2 lattices
HEX3_CONJ = IntMat2(-1, 0, -1, 1)    # z -> rho^2 * conj(z) on the hex lattice
MUL_I = IntMat2(0, -1, 1, 0)         # z -> i * z on the square lattice
MUL_RHO = IntMat2(0, -1, 1, -1)      # z -> rho * z on the hex lattice
MUL_RHO2 = MUL_RHO.mul(MUL_RHO)      # z -> rho^2 * z

_RHO = complex(-0.5, math.sqrt(3) / 2)


def _mul_closure(mats: Tuple[IntMat2, ...]) -> frozenset:
    """Closure of a finite matrix set under multiplication."""
    seen = set(mats)
    frontier = list(mats)
    while frontier:
        m = frontier.pop()
        for other in list(seen):
            for prod in (m.mul(other), other.mul(m)):
                if prod not in seen:
                    seen.add(prod)
                    frontier.append(prod)
    return frozenset(seen)


@dataclass(frozen=True)
class TauFamily:
    """One shape class of lattice parameter tau.

    allowed_antiholo lists the linear parts of the distinguished conjugation
    class defining the family; allowed_holo lists the lattice automorphisms.
    linear_closure is the multiplicative closure of both lists and is the set
    a valid CurveMap linear part must belong to.
    """

    label: str
    allowed_antiholo: Tuple[IntMat2, ...]
    allowed_holo: Tuple[IntMat2, ...]
    sample_tau: complex
    linear_closure: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        closure = _mul_closure(self.allowed_antiholo + self.allowed_holo)
        object.__setattr__(self, "linear_closure", closure)


IM_AXIS_GENERIC = TauFamily(
    label="ImAxisGeneric",
    allowed_antiholo=(DIAG_CONJ, -DIAG_CONJ),
    allowed_holo=(IDENT, -IDENT),
    sample_tau=1.5j,
)
SQUARE_I = TauFamily(
    label="SquareI",
    allowed_antiholo=(DIAG_CONJ, -DIAG_CONJ),
    allowed_holo=(IDENT, -IDENT, MUL_I, -MUL_I),
    sample_tau=1j,
)
SQUARE_I_ROT = TauFamily(
    label="SquareIRot",
    allowed_antiholo=(SWAP_CONJ, -SWAP_CONJ),
    allowed_holo=(IDENT, -IDENT, MUL_I, -MUL_I),
    sample_tau=1j,
)
UNIT_CIRCLE_GENERIC = TauFamily(
    label="UnitCircleGeneric",
    allowed_antiholo=(SWAP_CONJ, -SWAP_CONJ),
    allowed_holo=(IDENT, -IDENT),
    sample_tau=cmath.exp(1j * math.radians(100)),
)
HEX_RHO = TauFamily(
    label="HexRho",
    allowed_antiholo=(HALF_CONJ, SWAP_CONJ, HEX3_CONJ),
    allowed_holo=(IDENT, -IDENT, MUL_RHO, -MUL_RHO, MUL_RHO2, -MUL_RHO2),
    sample_tau=_RHO,
)
HEX_RHO_NEG = TauFamily(
    label="HexRhoNeg",
    allowed_antiholo=(-HALF_CONJ, -SWAP_CONJ, -HEX3_CONJ),
    allowed_holo=(IDENT, -IDENT, MUL_RHO, -MUL_RHO, MUL_RHO2, -MUL_RHO2),
    sample_tau=_RHO,
)
HALF_LINE = TauFamily(
    label="HalfLine",
    allowed_antiholo=(HALF_CONJ, -HALF_CONJ),
    allowed_holo=(IDENT, -IDENT),
    sample_tau=complex(-0.5, 1.2),
)

FAMILIES = {
    f.label: f
    for f in (
        IM_AXIS_GENERIC,
        SQUARE_I,
        SQUARE_I_ROT,
        UNIT_CIRCLE_GENERIC,
        HEX_RHO,
        HEX_RHO_NEG,
        HALF_LINE,
    )
}


def family_by_label(label: str) -> TauFamily:
    try:
        return FAMILIES[label]
    except KeyError:
        raise ValueError(f"unknown tau family {label!r}") from None


@dataclass(frozen=True)
class EllipticCurve:
    """A curve drawn from a TauFamily, in its role as base (E) or fibre (F)."""

    family: TauFamily
    role: str

    def __post_init__(self) -> None:
        if self.role not in ("E", "F"):
            raise ValueError(f"role must be 'E' or 'F', got {self.role!r}")


@dataclass(frozen=True)
class CurveMap:
    """An affine self-map of a curve in lattice coordinates.

    kind is derived from the determinant of the linear part: +1 means
    holomorphic, -1 antiholomorphic.  The translation is always stored
    reduced to [0,1)^2 so equality of maps is plain field equality.
    """

    linear: IntMat2
    trans: RatVec2
    kind: str = field(init=False)

    def __post_init__(self) -> None:
        det = self.linear.det()
        if det == 1:
            kind = HOLOMORPHIC
        elif det == -1:
            kind = ANTIHOLOMORPHIC
        else:
            raise ValueError(f"curve map linear part must be unimodular, det={det}")
        object.__setattr__(self, "trans", self.trans.mod1())
        object.__setattr__(self, "kind", kind)

    def is_holomorphic(self) -> bool:
        return self.kind == HOLOMORPHIC

    def is_antiholomorphic(self) -> bool:
        return self.kind == ANTIHOLOMORPHIC

    def is_identity(self) -> bool:
        return self.linear.is_identity() and self.trans.is_zero()

    def is_translation(self) -> bool:
        return self.linear.is_identity()

    def apply(self, point: RatVec2) -> RatVec2:
        return (self.linear.apply(point) + self.trans).mod1()

    def sort_key(self):
        return (self.kind, self.linear.entries(), self.trans.sort_key())


def curve_map(linear: IntMat2, trans: RatVec2 = ZERO_VEC) -> CurveMap:
    return CurveMap(linear=linear, trans=trans)


def identity_map() -> CurveMap:
    return CurveMap(linear=IDENT, trans=ZERO_VEC)


def translation_map(trans: RatVec2) -> CurveMap:
    return CurveMap(linear=IDENT, trans=trans)


def compose(f: CurveMap, g: CurveMap) -> CurveMap:
    """The map f after g: x |-> f.linear * (g.linear * x + g.trans) + f.trans."""
    return CurveMap(
        linear=f.linear.mul(g.linear),
        trans=(f.linear.apply(g.trans) + f.trans).mod1(),
    )


def inverse_map(f: CurveMap) -> CurveMap:
    inv = f.linear.inverse()
    return CurveMap(linear=inv, trans=(-inv.apply(f.trans)).mod1())


def map_allowed_on(f: CurveMap, curve: EllipticCurve) -> bool:
    """Whether f's linear part is compatible with the curve's lattice shape."""
    return f.linear in curve.family.linear_closure


@dataclass(frozen=True)
class FixedLocus:
    """The exact fixed-point set of a curve map.

    components holds (base_point, direction) pairs; direction is None for
    isolated fixed points and a primitive integer vector for circles.
    """

    empty: bool
    dimension: int
    components: Tuple[Tuple[RatVec2, Optional[Tuple[int, int]]], ...]

    @property
    def component_count(self) -> int:
        return len(self.components)


def fixed_locus(f: CurveMap) -> FixedLocus:
    """Fixed points of f, solving (linear - I) * x + trans in Z^2."""
    sol = solve_affine_congruence(f.linear - IDENT, f.trans)
    if not sol.solvable:
        return FixedLocus(empty=True, dimension=0, components=())
    direction = sol.direction if sol.dimension == 1 else None
    comps = tuple((p, direction) for p in sol.base_points)
    return FixedLocus(empty=False, dimension=sol.dimension, components=comps)


def is_involution(f: CurveMap) -> bool:
    return compose(f, f).is_identity()


def square_is_translation(f: CurveMap) -> Tuple[bool, Optional[RatVec2]]:
    """Check that f composed with itself is a pure translation.

    Returns (True, translation vector) when the square's linear part is the
    identity, else (False, None).
    """
    square = compose(f, f)
    if square.is_translation():
        return True, square.trans
    return False, None


def nu(f: CurveMap) -> int:
    """Number of circles fixed by an antiholomorphic involution: 0, 1 or 2."""
    if not f.is_antiholomorphic():
        raise ValueError("nu is defined for antiholomorphic maps only")
    if not is_involution(f):
        raise ValueError("nu is defined for involutions only")
    locus = fixed_locus(f)
    if locus.empty:
        return 0
    if locus.dimension != 1:
        raise AssertionError(
            "antiholomorphic involution with a fixed locus of dimension "
            f"{locus.dimension}"
        )
    return locus.component_count


def circle_count(f: CurveMap) -> int:
    """Circles in Fix(f) for any antiholomorphic map; 0 when the set is empty.

    A fixed point of f is fixed by f composed with itself, so a lift whose
    square is a nonzero translation has an empty fixed locus and counts 0.
    """
    if not f.is_antiholomorphic():
        raise ValueError("circle_count is defined for antiholomorphic maps only")
    locus = fixed_locus(f)
    if locus.empty:
        return 0
    if locus.dimension != 1:
        raise AssertionError("antiholomorphic fixed loci must be unions of circles")
    return locus.component_count


# --- circles on a torus -----------------------------------------------------

def circle_normal(direction: Tuple[int, int]) -> Tuple[int, int]:
    """A primitive normal vector to a primitive direction."""
    return (-direction[1], direction[0])


def circle_key(base: RatVec2, direction: Tuple[int, int]):
    """Canonical key identifying a circle {base + t*direction} on the torus.

    Two circles coincide exactly when their directions agree up to sign and
    the normal pairing of their base points differs by an integer, so the key
    is (normalized direction, residue of the normal pairing).
    """
    d = normalize_int_direction(direction)
    n = circle_normal(d)
    return (d, mod1(base.dot_int(n)))


def point_on_circle(p: RatVec2, base: RatVec2, direction: Tuple[int, int]) -> bool:
    n = circle_normal(normalize_int_direction(direction))
    return mod1((p - base).dot_int(n)) == 0


def map_circle(
    f: CurveMap, base: RatVec2, direction: Tuple[int, int]
) -> Tuple[RatVec2, Tuple[int, int]]:
    """Image of a circle under an affine map, as (base, direction)."""
    new_base = f.apply(base)
    dx, dy = direction
    new_dir = f.linear.apply_int((dx, dy))
    return new_base, normalize_int_direction(new_dir)


# --- torsion and normal forms ------------------------------------------------

def torsion_anti_invariants(
    curve: EllipticCurve, a_linear: IntMat2, q: int
) -> Tuple[Tuple[int, ...], Tuple[RatVec2, ...]]:
    """The q-torsion points c with a_linear * c + c = 0 on the torus.

    Returns the invariant factors of that kernel subgroup of (Z/q)^2 together
    with the points themselves (as torsion vectors with denominator q).
    """
    if q not in (2, 3, 4, 6):
        raise ValueError(f"torsion level must be one of 2, 3, 4, 6; got {q}")
    if a_linear not in curve.family.linear_closure:
        raise ValueError("linear part is not compatible with the curve family")
    M = a_linear + IDENT
    points = []
    for i in range(q):
        for j in range(q):
            v = RatVec2(Fraction(i, q), Fraction(j, q))
            if M.apply(v).mod1().is_zero():
                points.append(v)
    points.sort(key=RatVec2.sort_key)

    order = len(points)
    if order == 1:
        return (), tuple(points)

    def element_order(v: RatVec2) -> int:
        k, acc = 1, v
        while not acc.is_zero():
            acc = (acc + v).mod1()
            k += 1
        return k

    exponent = max(element_order(v) for v in points if not v.is_zero())
    if exponent == order:
        factors: Tuple[int, ...] = (order,)
    else:
        factors = (order // exponent, exponent)
    return factors, tuple(points)


def reduce_translation(f: CurveMap) -> Tuple[CurveMap, RatVec2]:
    """Canonical representative of f under change of origin.

    Replacing the origin by v turns the translation part c into
    c + (A - I) * v.  The residue class of c modulo Z^2 + im(A - I) is the
    only invariant; this returns the canonical representative of that class
    together with the shift v used to reach it.
    """
    if not f.is_antiholomorphic():
        raise ValueError("reduce_translation is defined for antiholomorphic maps")
    A = f.linear
    L = A - IDENT
    c = f.trans

    if L.det() != 0:
        # The image of (A - I) is everything: the translation part vanishes.
        target = ZERO_VEC
    else:
        # rank(A - I) = 1: the class of c is measured by a primitive normal n
        # of the image line, via s = n . c mod 1.  The canonical representative
        # is s * u for a fixed integer vector u with n . u = 1.
        cols = [RatVec2(L.a, L.c), RatVec2(L.b, L.d)]
        w = next(col for col in cols if not col.is_zero())
        wdir = normalize_int_direction((int(w.x), int(w.y)))
        n = circle_normal(wdir)
        s = mod1(c.dot_int(n))
        u = _vector_with_pairing_one(n)
        target = RatVec2(s * u[0], s * u[1]).mod1()

    # Solve (A - I) v = target - c modulo Z^2 for the shift; always solvable
    # because target was chosen in the same residue class.
    sol = solve_affine_congruence(L, c - target)
    if not sol.solvable:
        raise AssertionError("canonical residue must be reachable")
    shift = sol.base_points[0]
    return CurveMap(linear=A, trans=target), shift


def _vector_with_pairing_one(n: Tuple[int, int]) -> Tuple[int, int]:
    """An integer vector u with n . u = 1, for primitive n."""
    a, b = n
    if a == 0:
        return (0, 1 if b > 0 else -1)
    if b == 0:
        return (1 if a > 0 else -1, 0)
    g, x, y = _extended_gcd(a, b)
    assert g == 1
    return (x, y)


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def float_check(f: CurveMap, curve: EllipticCurve, tol: float = 1e-9) -> bool:
    """Numeric cross-check of the combinatorial (anti)holomorphy encoding.

    Lifts the linear part to C using the family's sample tau and tests that
    it is multiplication by a unit alpha (holomorphic) or the composition of
    conjugation with such a multiplication (antiholomorphic), matching the
    declared kind within tol.
    """
    tau = curve.family.sample_tau
    A = f.linear
    image_one = A.a + A.c * tau
    image_tau = A.b + A.d * tau
    alpha = image_one
    if abs(abs(alpha) - 1.0) > tol:
        return False
    if f.is_holomorphic():
        return abs(image_tau - alpha * tau) <= tol
    return abs(image_tau - alpha * tau.conjugate()) <= tol
