"""Product-quotient surfaces with a real structure, and their topology.

The objects handled here are quotients S = (E x F)/G of a product of two
elliptic curves by a finite group G acting on the first factor by
translations and on the second with a nontrivial cyclic rotation image,
together with a distinguished antiholomorphic lift of the real structure
of S.  The module validates the defining conditions, computes the real
point set as a disjoint union of tori and Klein bottles, and collects the
exact topological invariants that tell inequivalent real structures
apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from .exactlin import IntMat2, RatVec2, matrix_order
from .grp import (
    ClosureCapError,
    NamedGroup,
    ProductMap,
    TransformationGroup,
    closure,
    compose_product,
    conjugate_product,
    inverse_product,
    make_extended,
    validate_extended,
)
from .torus import (
    EllipticCurve,
    IDENT,
    circle_count,
    circle_key,
    fixed_locus,
    map_allowed_on,
    map_circle,
    normalize_int_direction,
)

ROTATION_ORDERS = (2, 3, 4, 6)


@dataclass(frozen=True)
class RealPartTopology:
    """The real point set as counts of torus and Klein bottle components."""

    tori: int
    klein: int

    @property
    def is_empty(self) -> bool:
        return self.tori == 0 and self.klein == 0

    @property
    def label(self) -> str:
        """Human-readable form such as '2T', 'K', 'T⊔2K' or '∅'."""
        parts = []
        if self.tori:
            parts.append("T" if self.tori == 1 else f"{self.tori}T")
        if self.klein:
            parts.append("K" if self.klein == 1 else f"{self.klein}K")
        return "⊔".join(parts) if parts else "∅"


@dataclass(frozen=True)
class H1Data:
    """First integral homology of the quotient surface: rank plus torsion."""

    rank: int
    torsion: Tuple[int, ...]


@dataclass(frozen=True)
class InvariantFingerprint:
    """Topological invariants of a real structure, packaged for comparison.

    nu_set_E and nu_set_F are the sorted multisets of fixed-circle counts
    of the antiholomorphic lifts restricted to each factor.  fix_g_action
    is the sorted multiset of affine-action labels of lifts on the fixed
    sets of maximal-order rotations.  eig_flags records, for each family
    of distinguished translation data, whether some lattice lift is a +1
    or -1 eigenvector of the relevant linear actions.
    """

    name_holo: NamedGroup
    name_full: NamedGroup
    split: bool
    real_part: RealPartTopology
    nu_set_E: Tuple[int, ...]
    nu_set_F: Tuple[int, ...]
    fix_g_action: Tuple[str, ...]
    eig_flags: Tuple[Tuple[str, Tuple[str, ...]], ...]


@dataclass(frozen=True)
class SurfaceDiagnostics:
    ok: bool
    failures: Tuple[str, ...]


@dataclass(frozen=True)
class RealHypSurface:
    """A quotient surface datum (E, F, generators of G, antiholomorphic lift)."""

    E: EllipticCurve
    F: EllipticCurve
    G_gens: Tuple[ProductMap, ...]
    sigma: ProductMap

    def __post_init__(self) -> None:
        object.__setattr__(self, "G_gens", tuple(self.G_gens))


def group_of(surface: RealHypSurface) -> TransformationGroup:
    """The finite group generated by the surface's holomorphic generators."""
    return closure(surface.G_gens)


def extended_group_of(surface: RealHypSurface) -> TransformationGroup:
    return closure(tuple(surface.G_gens) + (surface.sigma,))


# --- validation ---------------------------------------------------------------


def validate(surface: RealHypSurface) -> SurfaceDiagnostics:
    """Check every defining condition, returning diagnostics instead of raising."""
    failures: List[str] = []

    if surface.E.role != "E" or surface.F.role != "F":
        failures.append("roles: curves must carry roles E and F in that order")

    try:
        grp = closure(surface.G_gens)
    except ClosureCapError:
        return SurfaceDiagnostics(
            ok=False,
            failures=("closure: generators do not span a small finite group",),
        )

    if not all(e.is_holomorphic() for e in grp):
        failures.append("kinds: the group must consist of holomorphic maps")
    if not surface.sigma.is_antiholomorphic():
        failures.append("kinds: the distinguished lift must be antiholomorphic")

    if not all(e.on_E.is_translation() for e in grp):
        failures.append("translations: the group must act on E by translations")
    elif len({e.on_E.trans for e in grp}) != grp.order:
        failures.append("translations: the action on E must be faithful")

    f_linears = {e.on_F.linear for e in grp}
    orders = {matrix_order(m) for m in f_linears}
    if None in orders:
        failures.append("rotations: the F-linear parts must have finite order")
    elif len(f_linears) == 1:
        failures.append("rotations: some element must rotate F nontrivially")
    elif len(f_linears) not in ROTATION_ORDERS or len(f_linears) not in orders:
        failures.append(
            "rotations: the F-linear parts must form a cyclic group "
            f"of order 2, 3, 4 or 6, got {sorted(orders)} in size {len(f_linears)}"
        )

    for e in list(grp) + [surface.sigma]:
        if not map_allowed_on(e.on_E, surface.E):
            failures.append("lattice: a map is incompatible with the E lattice")
            break
        if not map_allowed_on(e.on_F, surface.F):
            failures.append("lattice: a map is incompatible with the F lattice")
            break

    if any(conjugate_product(surface.sigma, g) not in grp for g in grp):
        failures.append("normalization: the lift must normalize the group")

    square = compose_product(surface.sigma, surface.sigma)
    if square not in grp:
        failures.append("square: the lift's square must lie in the group")
    if not (square.on_E.is_translation() and square.on_F.is_translation()):
        failures.append("square: the lift's square must translate both factors")

    if not failures:
        try:
            ext = make_extended(extended_group_of(surface))
        except (ClosureCapError, ValueError) as err:
            failures.append(f"extension: {err}")
        else:
            diag = validate_extended(ext)
            failures.extend(f"extension: {msg}" for msg in diag.failures)

    return SurfaceDiagnostics(ok=not failures, failures=tuple(failures))


# --- lifts of the real structure -----------------------------------------------


def antiholomorphic_lifts(surface: RealHypSurface) -> List[ProductMap]:
    """All |G| antiholomorphic lifts, the coset of sigma, in a fixed order."""
    lifts = [compose_product(surface.sigma, g) for g in group_of(surface)]
    return sorted(lifts, key=ProductMap.sort_key)


def involutive_lift_classes(surface: RealHypSurface) -> List[ProductMap]:
    """One representative per conjugacy class of involutive lifts.

    Conjugation runs over the holomorphic group; the representative of
    each class is its lexicographically least element, and the classes
    are returned sorted by representative.
    """
    grp = group_of(surface)
    remaining = {
        lift
        for lift in antiholomorphic_lifts(surface)
        if compose_product(lift, lift).is_identity()
    }
    reps = []
    while remaining:
        seed = min(remaining, key=ProductMap.sort_key)
        orbit = {conjugate_product(h, seed) for h in grp}
        if not orbit <= remaining:
            raise AssertionError("conjugation left the involutive coset")
        remaining -= orbit
        reps.append(seed)
    return sorted(reps, key=ProductMap.sort_key)


# --- the real point set ----------------------------------------------------------


@dataclass(frozen=True)
class _ProductCircle:
    """A torus component C_E x C_F of a fixed locus, with canonical keys."""

    key_E: tuple
    key_F: tuple
    base_E: RatVec2
    dir_E: Tuple[int, int]
    base_F: RatVec2
    dir_F: Tuple[int, int]

    @property
    def key(self) -> tuple:
        return (self.key_E, self.key_F)


def _fixed_product_circles(rep: ProductMap) -> List[_ProductCircle]:
    locus_E = fixed_locus(rep.on_E)
    locus_F = fixed_locus(rep.on_F)
    if locus_E.empty or locus_F.empty:
        return []
    if locus_E.dimension != 1 or locus_F.dimension != 1:
        raise AssertionError("antiholomorphic fixed loci must be unions of circles")
    circles = []
    for base_e, dir_e in locus_E.components:
        for base_f, dir_f in locus_F.components:
            de = normalize_int_direction(dir_e)
            df = normalize_int_direction(dir_f)
            circles.append(
                _ProductCircle(
                    key_E=circle_key(base_e, de),
                    key_F=circle_key(base_f, df),
                    base_E=base_e,
                    dir_E=de,
                    base_F=base_f,
                    dir_F=df,
                )
            )
    return circles


def _image_key(g: ProductMap, comp: _ProductCircle) -> tuple:
    base_e, dir_e = map_circle(g.on_E, comp.base_E, comp.dir_E)
    base_f, dir_f = map_circle(g.on_F, comp.base_F, comp.dir_F)
    return (circle_key(base_e, dir_e), circle_key(base_f, dir_f))


def real_part(surface: RealHypSurface) -> RealPartTopology:
    """Topology of the real point set, computed from representative lifts.

    The components of the fixed loci of the involutive lift
    representatives are product circles.  Two components are identified
    when a group element carries one onto the other; each equivalence
    class contributes one surface component.  A class gives a Klein
    bottle exactly when some stabilizing element reverses the direction
    of the second-factor circle, and a torus otherwise.
    """
    grp = group_of(surface)
    components: List[_ProductCircle] = []
    for rep in involutive_lift_classes(surface):
        components.extend(_fixed_product_circles(rep))
    if not components:
        return RealPartTopology(tori=0, klein=0)

    components.sort(key=lambda c: c.key)
    index: Dict[tuple, int] = {c.key: i for i, c in enumerate(components)}
    parent = list(range(len(components)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i, comp in enumerate(components):
        for g in grp:
            j = index.get(_image_key(g, comp))
            if j is not None:
                union(i, j)

    tori = 0
    klein = 0
    for root in sorted({find(i) for i in range(len(components))}):
        w = components[root]
        stabilizer = [g for g in grp if _image_key(g, w) == w.key]
        negated = tuple(-x for x in w.dir_F)
        if any(h.on_F.linear.apply_int(w.dir_F) == negated for h in stabilizer):
            klein += 1
        else:
            tori += 1
    return RealPartTopology(tori=tori, klein=klein)


# --- invariant fingerprints ---------------------------------------------------


def _max_rotation_elements(grp: TransformationGroup) -> List[ProductMap]:
    """Group elements whose F-linear part has the maximal finite order."""
    orders = {}
    for e in grp:
        n = matrix_order(e.on_F.linear)
        if n is None:
            raise ValueError("rotation parts must have finite order")
        orders[e] = n
    top = max(orders.values())
    return [e for e in grp if orders[e] == top]


def _pure_translations(grp: TransformationGroup) -> List[ProductMap]:
    return [
        e
        for e in grp
        if e.on_E.is_translation() and e.on_F.is_translation() and not e.is_identity()
    ]


def _affine_action_label(lift_f, points: List[RatVec2]) -> Optional[str]:
    """Classify the action of a curve map on a finite fixed set.

    Returns None when the map does not preserve the set.  Otherwise the
    label records the linear action on the difference subgroup together
    with the existence of a fixed point, which is invariant under affine
    changes of base point.
    """
    point_set = set(points)
    if any(lift_f.apply(p) not in point_set for p in points):
        return None
    base = min(points, key=RatVec2.sort_key)
    diffs = [(p - base).mod1() for p in points]
    linear = lift_f.linear

    def acts_as(scale: int) -> bool:
        return all(
            (linear.apply(q) - q.scale(scale)).mod1().is_zero() for q in diffs
        )

    has_fixed_point = any(lift_f.apply(p) == p for p in points)
    if acts_as(1):
        return "identity" if has_fixed_point else "translation"
    if acts_as(-1):
        return "minus-id" if has_fixed_point else "other"
    nilpotent = linear - IDENT
    squared = nilpotent @ nilpotent
    if all(squared.apply(q).mod1().is_zero() for q in diffs):
        return "unipotent-linear" if has_fixed_point else "unipotent-affine"
    return "other"


def _fix_action_labels(surface: RealHypSurface) -> Tuple[str, ...]:
    grp = group_of(surface)
    labels = []
    for g in _max_rotation_elements(grp):
        locus = fixed_locus(g.on_F)
        if locus.empty or locus.dimension != 0:
            raise AssertionError("maximal rotations must fix finitely many points")
        points = [p for p, _ in locus.components]
        for lift in antiholomorphic_lifts(surface):
            label = _affine_action_label(lift.on_F, points)
            if label is not None:
                labels.append(label)
    return tuple(sorted(labels))


def _integer_lift_solves(n: IntMat2, d: RatVec2) -> bool:
    """Whether some integer vector L has n @ (d + L) = 0 exactly."""
    if n.det() != 0:
        return d.mod1().is_zero()
    if n.is_zero():
        return True
    rows = [r for r in n.rows() if r != (0, 0)]
    a, b = rows[0]
    c = -(a * d.x + b * d.y)
    if c.denominator != 1:
        return False
    return int(c) % gcd(a, b) == 0


def eigenvector_flag(d: RatVec2, m: IntMat2) -> str:
    """'plus' or 'minus' when a lattice lift of d is a +-1 eigenvector of m."""
    if _integer_lift_solves(m - IDENT, d):
        return "plus"
    if _integer_lift_solves(m + IDENT, d):
        return "minus"
    return "none"


def _eig_flag_entries(
    surface: RealHypSurface,
) -> Tuple[Tuple[str, Tuple[str, ...]], ...]:
    grp = group_of(surface)
    linear_E = surface.sigma.on_E.linear
    linears_F = sorted(
        {lift.on_F.linear for lift in antiholomorphic_lifts(surface)},
        key=IntMat2.entries,
    )
    eta_flags = sorted(
        eigenvector_flag(e.on_E.trans, linear_E)
        for e in _max_rotation_elements(grp)
    )
    translations = _pure_translations(grp)
    trans_e_flags = sorted(
        eigenvector_flag(t.on_E.trans, linear_E) for t in translations
    )
    trans_f_flags = sorted(
        eigenvector_flag(t.on_F.trans, m) for t in translations for m in linears_F
    )
    return (
        ("eta", tuple(eta_flags)),
        ("trans_E", tuple(trans_e_flags)),
        ("trans_F", tuple(trans_f_flags)),
    )


def fingerprint(surface: RealHypSurface) -> InvariantFingerprint:
    """The full invariant package of a validated surface."""
    ext = make_extended(extended_group_of(surface))
    lifts = antiholomorphic_lifts(surface)
    return InvariantFingerprint(
        name_holo=ext.name_holo,
        name_full=ext.name_full,
        split=ext.split,
        real_part=real_part(surface),
        nu_set_E=tuple(sorted(circle_count(lift.on_E) for lift in lifts)),
        nu_set_F=tuple(sorted(circle_count(lift.on_F) for lift in lifts)),
        fix_g_action=_fix_action_labels(surface),
        eig_flags=_eig_flag_entries(surface),
    )


# --- homology and the component-count bound ----------------------------------

_H1_TORSION: Dict[NamedGroup, Tuple[int, ...]] = {
    NamedGroup.Z2: (2, 2),
    NamedGroup.Z2xZ2: (2,),
    NamedGroup.Z4: (2,),
    NamedGroup.Z4xZ2: (),
    NamedGroup.Z3: (3,),
    NamedGroup.Z3xZ3: (),
    NamedGroup.Z6: (),
}


def h1_of(g_name: NamedGroup) -> H1Data:
    """First homology of the quotient surface for each translation group."""
    if g_name not in _H1_TORSION:
        raise ValueError(f"no quotient surface group named {g_name!r}")
    return H1Data(rank=2, torsion=_H1_TORSION[g_name])


def htk_bound(g_name: NamedGroup) -> int:
    """Upper bound on the number of real components, from mod 2 cohomology.

    The mod 2 Betti numbers follow from the homology list: b0 = b4 = 1,
    b1 = b3 = 2 + (number of even torsion factors), and b2 = 2*b1 - 2
    because the Euler characteristic vanishes.  The bound is a quarter of
    the total, rounded down.
    """
    torsion = h1_of(g_name).torsion
    b1 = 2 + sum(1 for f in torsion if f % 2 == 0)
    b2 = 2 * b1 - 2
    total = 2 * (1 + b1) + b2
    return total // 4
