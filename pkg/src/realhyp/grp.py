"""Finite groups of product maps on E x F and their two-step extensions.

The objects of interest sit in an exact sequence

    0 -> G -> Ghat -> Z/2 -> 1

where G is the holomorphic part and every element of Ghat outside G is
antiholomorphic.  This module provides group closure from generators, the
split test, the H^2(Z/2, G) computation for abstract abelian G, and brute
force isomorphism classification onto the short list of named groups that
can occur (orders are at most 18, so exhaustive search is instantaneous).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .torus import (
    ANTIHOLOMORPHIC,
    HOLOMORPHIC,
    CurveMap,
    compose,
    identity_map,
    inverse_map,
)


class NamedGroup(str, Enum):
    Z2 = "Z2"
    Z4 = "Z4"
    Z6 = "Z6"
    Z2xZ2 = "Z2xZ2"
    Z4xZ2 = "Z4xZ2"
    Z2cube = "Z2cube"
    Z3 = "Z3"
    Z3xZ3 = "Z3xZ3"
    D4 = "D4"
    D6 = "D6"
    S3 = "S3"
    S3xZ3 = "S3xZ3"
    Z2xD4 = "Z2xD4"
    G1 = "G1"


@dataclass(frozen=True)
class ProductMap:
    """A self-map of E x F acting as a curve map on each factor.

    Both factors must have the same kind; mixed products are not maps of the
    product complex manifold to itself or to its conjugate.
    """

    on_E: CurveMap
    on_F: CurveMap

    def __post_init__(self) -> None:
        if self.on_E.kind != self.on_F.kind:
            raise ValueError("factor kinds must agree on a product map")

    @property
    def kind(self) -> str:
        return self.on_E.kind

    def is_holomorphic(self) -> bool:
        return self.kind == HOLOMORPHIC

    def is_antiholomorphic(self) -> bool:
        return self.kind == ANTIHOLOMORPHIC

    def is_identity(self) -> bool:
        return self.on_E.is_identity() and self.on_F.is_identity()

    def sort_key(self):
        return (self.on_E.sort_key(), self.on_F.sort_key())


def compose_product(f: ProductMap, g: ProductMap) -> ProductMap:
    return ProductMap(on_E=compose(f.on_E, g.on_E), on_F=compose(f.on_F, g.on_F))


def inverse_product(f: ProductMap) -> ProductMap:
    return ProductMap(on_E=inverse_map(f.on_E), on_F=inverse_map(f.on_F))


def identity_product() -> ProductMap:
    return ProductMap(on_E=identity_map(), on_F=identity_map())


def conjugate_product(h: ProductMap, g: ProductMap) -> ProductMap:
    """h g h^-1."""
    return compose_product(compose_product(h, g), inverse_product(h))


class ClosureCapError(RuntimeError):
    """Raised when generating exceeds the cap: a sign of a non-torsion
    translation or an encoding error rather than a legitimate large group."""


@dataclass(frozen=True)
class TransformationGroup:
    elements: Tuple[ProductMap, ...]
    generators: Tuple[ProductMap, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item: ProductMap) -> bool:
        return item in set(self.elements)


def closure(gens: Sequence[ProductMap], cap: int = 64) -> TransformationGroup:
    """The group generated by gens, computed by breadth-first multiplication.

    Raises ClosureCapError("cap exceeded") if more than cap elements appear.
    A finite closed multiplication set containing the identity is a group,
    so no separate inverse step is needed.
    """
    elements = {identity_product()}
    frontier = [identity_product()]
    gens = tuple(gens)
    while frontier:
        current = frontier.pop()
        for g in gens:
            nxt = compose_product(current, g)
            if nxt not in elements:
                elements.add(nxt)
                if len(elements) > cap:
                    raise ClosureCapError("cap exceeded")
                frontier.append(nxt)
    ordered = tuple(sorted(elements, key=ProductMap.sort_key))
    return TransformationGroup(elements=ordered, generators=gens)


def holomorphic_subgroup(full: TransformationGroup) -> TransformationGroup:
    """The kind-holomorphic elements of full; must have index 1 or 2."""
    if full.order == 0:
        raise ValueError("empty group")
    holo = tuple(e for e in full if e.is_holomorphic())
    if full.order % len(holo) != 0 or full.order // len(holo) > 2:
        raise ValueError(
            f"holomorphic part has index {full.order / len(holo)}, expected 1 or 2"
        )
    return TransformationGroup(elements=holo, generators=holo)


@dataclass(frozen=True)
class ExtendedBdFGroup:
    """An extension Ghat of a Bagnera-de Franchis group G by Z/2."""

    full: TransformationGroup
    holo: TransformationGroup
    split: bool
    name_full: NamedGroup
    name_holo: NamedGroup


def make_extended(full: TransformationGroup) -> ExtendedBdFGroup:
    holo = holomorphic_subgroup(full)
    split = any(
        e.is_antiholomorphic() and compose_product(e, e).is_identity()
        for e in full
    )
    return ExtendedBdFGroup(
        full=full,
        holo=holo,
        split=split,
        name_full=iso_classify(full),
        name_holo=iso_classify(holo),
    )


def is_split(ext: ExtendedBdFGroup) -> bool:
    """Whether some antiholomorphic element of Ghat is an involution."""
    return any(
        e.is_antiholomorphic() and compose_product(e, e).is_identity()
        for e in ext.full
    )


# --- abstract finite groups for classification --------------------------------

class CayleyGroup:
    """A finite group given by elements and a multiplication function."""

    def __init__(self, elements: Sequence, mult: Callable):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.table = {
            (a, b): mult(a, b) for a in self.elements for b in self.elements
        }
        identity = None
        for e in self.elements:
            if all(self.table[(e, x)] == x and self.table[(x, e)] == x
                   for x in self.elements):
                identity = e
                break
        if identity is None:
            raise ValueError("no identity element; not a group")
        self.identity = identity
        self._orders: Dict = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    def element_order(self, e) -> int:
        if e not in self._orders:
            k, acc = 1, e
            while acc != self.identity:
                acc = self.mul(acc, e)
                k += 1
            self._orders[e] = k
        return self._orders[e]

    def order_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(self.element_order(e) for e in self.elements))

    def is_abelian(self) -> bool:
        return all(
            self.table[(a, b)] == self.table[(b, a)]
            for a, b in itertools.combinations(self.elements, 2)
        )

    def subgroup_closure(self, gens: Sequence) -> set:
        seen = {self.identity, *gens}
        frontier = list(seen)
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.mul(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    def minimal_generators(self) -> Tuple:
        """A small generating tuple, found greedily from high-order elements."""
        by_order = sorted(self.elements, key=self.element_order, reverse=True)
        gens: List = []
        span = {self.identity}
        for e in by_order:
            if e in span:
                continue
            gens.append(e)
            span = self.subgroup_closure(gens)
            if len(span) == self.order:
                return tuple(gens)
        return tuple(gens)


def product_group(gcal: CayleyGroup, hcal: CayleyGroup) -> CayleyGroup:
    elements = [(a, b) for a in gcal.elements for b in hcal.elements]
    return CayleyGroup(
        elements,
        lambda p, q: (gcal.mul(p[0], q[0]), hcal.mul(p[1], q[1])),
    )


def cyclic_group(n: int) -> CayleyGroup:
    return CayleyGroup(range(n), lambda a, b: (a + b) % n)


def dihedral_group(n: int) -> CayleyGroup:
    """Order 2n: pairs (rotation, flip) with flips inverting rotations."""
    elements = [(r, s) for s in (0, 1) for r in range(n)]
    def mult(p, q):
        r1, s1 = p
        r2, s2 = q
        return ((r1 + (r2 if s1 == 0 else -r2)) % n, (s1 + s2) % 2)
    return CayleyGroup(elements, mult)


def abelian_group(factors: Sequence[int]) -> CayleyGroup:
    factors = tuple(factors)
    elements = list(itertools.product(*(range(f) for f in factors)))
    def mult(a, b):
        return tuple((x + y) % f for x, y, f in zip(a, b, factors))
    return CayleyGroup(elements, mult)


def g1_group() -> CayleyGroup:
    """The order-16 group <s, g, t | s^2, g^4, t^2, t central, s g s = g^-1 t>.

    Modeled on triples (n, m, e) in Z/4 x Z/2 x Z/2 where g = (1,0,0),
    t = (0,1,0) and s = (0,0,1).
    """
    elements = list(itertools.product(range(4), range(2), range(2)))
    def mult(p, q):
        n, m, e = p
        n2, m2, e2 = q
        return (
            (n + (n2 if e == 0 else -n2)) % 4,
            (m + m2 + e * n2) % 2,
            (e + e2) % 2,
        )
    return CayleyGroup(elements, mult)


_ABELIAN_LABELS: Dict[Tuple[int, ...], NamedGroup] = {
    (2,): NamedGroup.Z2,
    (4,): NamedGroup.Z4,
    (6,): NamedGroup.Z6,
    (2, 2): NamedGroup.Z2xZ2,
    (2, 4): NamedGroup.Z4xZ2,
    (2, 2, 2): NamedGroup.Z2cube,
    (3,): NamedGroup.Z3,
    (3, 3): NamedGroup.Z3xZ3,
}


def _reference_groups() -> Dict[NamedGroup, CayleyGroup]:
    return {
        NamedGroup.D4: dihedral_group(4),
        NamedGroup.D6: dihedral_group(6),
        NamedGroup.S3: dihedral_group(3),
        NamedGroup.S3xZ3: product_group(dihedral_group(3), cyclic_group(3)),
        NamedGroup.Z2xD4: product_group(cyclic_group(2), dihedral_group(4)),
        NamedGroup.G1: g1_group(),
    }


_NONABELIAN_REFS: Optional[Dict[NamedGroup, CayleyGroup]] = None


def _nonabelian_refs() -> Dict[NamedGroup, CayleyGroup]:
    global _NONABELIAN_REFS
    if _NONABELIAN_REFS is None:
        _NONABELIAN_REFS = _reference_groups()
    return _NONABELIAN_REFS


def abelian_invariant_factors(gcal: CayleyGroup) -> Tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an abelian CayleyGroup.

    Determined by matching the counts of elements of each order against all
    divisor chains with the right product; for abelian groups those counts
    are a complete invariant.
    """
    n = gcal.order
    if n == 1:
        return ()
    actual = gcal.order_multiset()

    def chains(product: int, max_first: int) -> Iterable[Tuple[int, ...]]:
        for d in range(2, product + 1):
            if product % d or d > max_first:
                continue
            if d == product:
                yield (d,)
            for rest in chains(product // d, product // d):
                if rest[0] % d == 0:
                    yield (d,) + rest

    for chain in chains(n, n):
        model = abelian_group(chain)
        if model.order_multiset() == actual:
            return chain
    raise ValueError("order statistics match no abelian group; not abelian?")


def is_isomorphic(gcal: CayleyGroup, hcal: CayleyGroup) -> bool:
    """Brute-force isomorphism test via generator-image search."""
    if gcal.order != hcal.order:
        return False
    if gcal.order_multiset() != hcal.order_multiset():
        return False
    gens = gcal.minimal_generators()
    by_order: Dict[int, List] = {}
    for e in hcal.elements:
        by_order.setdefault(hcal.element_order(e), []).append(e)

    # Express every element of gcal as a fixed word in the generators once,
    # then each candidate image tuple is checked by evaluating those words.
    words: Dict = {gcal.identity: ()}
    frontier = [gcal.identity]
    while frontier:
        cur = frontier.pop(0)
        for i, g in enumerate(gens):
            nxt = gcal.mul(cur, g)
            if nxt not in words:
                words[nxt] = words[cur] + (i,)
                frontier.append(nxt)
    if len(words) != gcal.order:
        raise AssertionError("generators do not generate")

    candidate_lists = [by_order[gcal.element_order(g)] for g in gens]
    for images in itertools.product(*candidate_lists):
        phi = {}
        for elem, word in words.items():
            value = hcal.identity
            for i in word:
                value = hcal.mul(value, images[i])
            phi[elem] = value
        if len(set(phi.values())) != gcal.order:
            continue
        if all(
            phi[gcal.mul(a, b)] == hcal.mul(phi[a], phi[b])
            for a in gcal.elements
            for b in gcal.elements
        ):
            return True
    return False


def as_cayley(grp: TransformationGroup) -> CayleyGroup:
    return CayleyGroup(grp.elements, compose_product)


def iso_classify(grp: TransformationGroup) -> NamedGroup:
    """Identify the abstract isomorphism type among the named candidates."""
    gcal = as_cayley(grp)
    if gcal.is_abelian():
        factors = abelian_invariant_factors(gcal)
        label = _ABELIAN_LABELS.get(factors)
        if label is None:
            raise ValueError(f"unrecognized group: abelian with factors {factors}")
        return label
    for label, ref in _nonabelian_refs().items():
        if ref.order == gcal.order and is_isomorphic(ref, gcal):
            return label
    raise ValueError(f"unrecognized group of order {gcal.order}")


# --- group cohomology for the extension problem -------------------------------

def h2_z2(
    invariant_factors: Sequence[int], action: Sequence[Sequence[int]]
) -> Tuple[int, ...]:
    """H^2(Z/2, G) = ker(s - 1) / im(1 + s) for an involutive action s on G.

    G is the abelian group with the given invariant factors; action is an
    integer matrix describing s on the standard generators.  Returns the
    invariant factors of the quotient (empty tuple for the trivial group).
    """
    factors = tuple(invariant_factors)
    k = len(factors)
    A = [list(row) for row in action]
    if len(A) != k or any(len(row) != k for row in A):
        raise ValueError("action matrix shape does not match the factor count")

    def act(x: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(
            sum(A[i][j] * x[j] for j in range(k)) % factors[i] for i in range(k)
        )

    def add(x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple((a + b) % f for a, b, f in zip(x, y, factors))

    elements = list(itertools.product(*(range(f) for f in factors)))
    # The action must be a well-defined involution of G.
    for j in range(k):
        basis = tuple(1 if i == j else 0 for i in range(k))
        image = act(basis)
        for i in range(k):
            if (factors[j] * A[i][j]) % factors[i] != 0:
                raise ValueError("action is not a well-defined endomorphism")
        if act(image) != basis:
            raise ValueError("action is not involutive")

    kernel = [x for x in elements if act(x) == x]
    image = sorted({add(x, act(x)) for x in elements})
    image_set = set(image)

    # Quotient kernel / image, realized on canonical coset representatives.
    def coset_rep(x: Tuple[int, ...]) -> Tuple[int, ...]:
        return min(add(x, w) for w in image)

    reps = sorted({coset_rep(x) for x in kernel})
    if any(rep not in set(kernel) for rep in reps):
        raise AssertionError("image must sit inside the kernel")
    quotient = CayleyGroup(reps, lambda a, b: coset_rep(add(a, b)))
    if quotient.order == 1:
        return ()
    return abelian_invariant_factors(quotient)


# --- extension validation ------------------------------------------------------

ALLOWED_EXTENSION_CASES = frozenset(
    {
        (NamedGroup.Z2, NamedGroup.Z2xZ2, True),
        (NamedGroup.Z2xZ2, NamedGroup.Z2cube, True),
        (NamedGroup.Z2xZ2, NamedGroup.D4, True),
        (NamedGroup.Z2xZ2, NamedGroup.Z4xZ2, False),
        (NamedGroup.Z4, NamedGroup.D4, True),
        (NamedGroup.Z4xZ2, NamedGroup.Z2xD4, True),
        (NamedGroup.Z4xZ2, NamedGroup.G1, True),
        (NamedGroup.Z3, NamedGroup.S3, True),
        (NamedGroup.Z3xZ3, NamedGroup.S3xZ3, True),
        (NamedGroup.Z6, NamedGroup.D6, True),
    }
)


@dataclass(frozen=True)
class ExtensionDiagnostics:
    ok: bool
    failures: Tuple[str, ...]


def validate_extended(ext: ExtendedBdFGroup) -> ExtensionDiagnostics:
    """Check the structural conditions on an extended group.

    Verifies normality of the holomorphic part, that every antiholomorphic
    element squares to a pure translation on both factors, and that the
    named (G, Ghat, split) combination is one of the admissible cases.
    """
    failures: List[str] = []

    holo_set = set(ext.holo.elements)
    if ext.full.order != 2 * ext.holo.order:
        failures.append("index: holomorphic part does not have index 2")
    for h in ext.full:
        for g in ext.holo:
            if conjugate_product(h, g) not in holo_set:
                failures.append("normality: holomorphic part is not normal")
                break
        else:
            continue
        break

    for e in ext.full:
        if e in holo_set:
            continue
        if not e.is_antiholomorphic():
            failures.append("kinds: non-holomorphic coset contains holomorphic maps")
            break
        square = compose_product(e, e)
        if not (square.on_E.is_translation() and square.on_F.is_translation()):
            failures.append("squares: an antiholomorphic square is not a translation")
            break

    case = (ext.name_holo, ext.name_full, ext.split)
    if case not in ALLOWED_EXTENSION_CASES:
        failures.append(
            "case: (%s, %s, split=%s) is not an admissible extension"
            % (ext.name_holo.value, ext.name_full.value, ext.split)
        )

    return ExtensionDiagnostics(ok=not failures, failures=tuple(failures))
