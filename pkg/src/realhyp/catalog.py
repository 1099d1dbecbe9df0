"""The built-in classification catalog and its verification pipeline.

Each slot records one topological type of real structure: the lattice
shapes of the two curves, the generator data of the group, the
antiholomorphic lift, and the expected topology of the real point set.
Alternative readings of a slot ("or"-variants, including variants living
on different lattice shapes) are stored side by side; they must produce
identical invariant fingerprints.

The verifier rebuilds every slot as a concrete surface, recomputes the
real part and the fingerprint, and aggregates the global counts: total
slots, distinct fingerprints, distinct topologies, component-count bound
attainment, and the extension cases that occur.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exactlin import IntMat2, RatVec2
from .grp import NamedGroup, ProductMap
from .surface import (
    InvariantFingerprint,
    RealHypSurface,
    RealPartTopology,
    fingerprint,
    htk_bound,
    real_part,
    validate,
)
from .torus import (
    DIAG_CONJ,
    HALF_CONJ,
    IDENT,
    MUL_I,
    MUL_RHO,
    SWAP_CONJ,
    EllipticCurve,
    curve_map,
    family_by_label,
    translation_map,
)

# Lattice family shorthands used by the slot tables.
IM = "ImAxisGeneric"
SQ = "SquareI"
UC = "UnitCircleGeneric"
HL = "HalfLine"
HX = "HexRho"

# Symbolic linear parts, resolved against a lattice family.
_PLAIN_CONJ: Dict[str, IntMat2] = {IM: DIAG_CONJ, SQ: DIAG_CONJ, HL: HALF_CONJ, HX: HALF_CONJ}
_TAU_CONJ: Dict[str, IntMat2] = {UC: SWAP_CONJ, "SquareIRot": SWAP_CONJ, HX: SWAP_CONJ}

ROTATION_SYMBOLS: Dict[str, IntMat2] = {
    "neg": -IDENT,
    "i": MUL_I,
    "rho": MUL_RHO,
    "-rho": -MUL_RHO,
}

SECTION_ROTATION: Dict[str, str] = {
    "Z2/Z2xZ2": "neg",
    "Z4/D4": "i",
    "Z4xZ2/G1": "i",
    "Z4xZ2/Z2xD4": "i",
    "Z3/S3": "rho",
    "Z3xZ3/S3xZ3": "rho",
    "Z6/D6": "-rho",
    "Z2xZ2/Z2cube": "neg",
    "Z2xZ2/D4": "neg",
    "nonsplit": "neg",
}

SECTION_GROUPS: Dict[str, Tuple[NamedGroup, NamedGroup, bool]] = {
    "Z2/Z2xZ2": (NamedGroup.Z2, NamedGroup.Z2xZ2, True),
    "Z4/D4": (NamedGroup.Z4, NamedGroup.D4, True),
    "Z4xZ2/G1": (NamedGroup.Z4xZ2, NamedGroup.G1, True),
    "Z4xZ2/Z2xD4": (NamedGroup.Z4xZ2, NamedGroup.Z2xD4, True),
    "Z3/S3": (NamedGroup.Z3, NamedGroup.S3, True),
    "Z3xZ3/S3xZ3": (NamedGroup.Z3xZ3, NamedGroup.S3xZ3, True),
    "Z6/D6": (NamedGroup.Z6, NamedGroup.D6, True),
    "Z2xZ2/Z2cube": (NamedGroup.Z2xZ2, NamedGroup.Z2cube, True),
    "Z2xZ2/D4": (NamedGroup.Z2xZ2, NamedGroup.D4, True),
    "nonsplit": (NamedGroup.Z2xZ2, NamedGroup.Z4xZ2, False),
}


def linear_for(symbol: str, family_label: str) -> IntMat2:
    """Resolve a symbolic antiholomorphic linear part on a lattice family."""
    if symbol in ("conj", "-conj"):
        base = _PLAIN_CONJ.get(family_label)
    elif symbol in ("tau*conj", "-tau*conj"):
        base = _TAU_CONJ.get(family_label)
    else:
        raise ValueError(f"unknown linear symbol {symbol!r}")
    if base is None:
        raise ValueError(f"{symbol!r} is not a lattice map on {family_label}")
    return -base if symbol.startswith("-") else base


# --- slot data model -----------------------------------------------------------


@dataclass(frozen=True)
class AffineData:
    """A symbolic linear part together with its translation."""

    a: str
    b: RatVec2


@dataclass(frozen=True)
class SlotVariant:
    """One concrete reading of a slot's generator columns."""

    tau1: str
    tau2: str
    sigma1: AffineData
    sigma2: AffineData
    eta: RatVec2
    eps1: Optional[RatVec2] = None
    eps2: Optional[RatVec2] = None
    extra_gens: Tuple = ()


@dataclass(frozen=True)
class CatalogSlot:
    id: str
    section: str
    tau1: Tuple[str, ...]
    tau2: Tuple[str, ...]
    variants: Tuple[SlotVariant, ...]
    expected_real_part: RealPartTopology
    split: bool
    flagged: bool = False


@dataclass(frozen=True)
class _FirstFactor:
    """One reading of the first-curve columns: lift, eta and optional eps1."""

    tau1: str
    sigma1: AffineData
    eta: RatVec2
    eps1: Optional[RatVec2] = None


@dataclass(frozen=True)
class _SecondFactor:
    """One reading of the second-curve columns: lift and optional eps2."""

    tau2: str
    sigma2: AffineData
    eps2: Optional[RatVec2] = None


def _vec(x, y) -> RatVec2:
    return RatVec2(Fraction(x), Fraction(y))


def _first(tau1, a, bx, by, ex, ey, epsx=None, epsy=None) -> _FirstFactor:
    eps = _vec(epsx, epsy) if epsx is not None else None
    return _FirstFactor(tau1, AffineData(a, _vec(bx, by)), _vec(ex, ey), eps)


def _second(tau2, a, bx, by, epsx=None, epsy=None) -> _SecondFactor:
    eps = _vec(epsx, epsy) if epsx is not None else None
    return _SecondFactor(tau2, AffineData(a, _vec(bx, by)), eps)


def _slot(
    slot_id: str,
    section: str,
    firsts: Sequence[_FirstFactor],
    seconds: Sequence[_SecondFactor],
    expected: str,
    split: bool = True,
    flagged: bool = False,
) -> CatalogSlot:
    variants = tuple(
        SlotVariant(
            tau1=f.tau1,
            tau2=s.tau2,
            sigma1=f.sigma1,
            sigma2=s.sigma2,
            eta=f.eta,
            eps1=f.eps1,
            eps2=s.eps2,
        )
        for f in firsts
        for s in seconds
    )
    return CatalogSlot(
        id=slot_id,
        section=section,
        tau1=tuple(dict.fromkeys(f.tau1 for f in firsts)),
        tau2=tuple(dict.fromkeys(s.tau2 for s in seconds)),
        variants=variants,
        expected_real_part=parse_topology(expected),
        split=split,
        flagged=flagged,
    )


# --- the expected-topology grammar ----------------------------------------------

_PART_RE = re.compile(r"^(\d*)([TK])$")


def parse_topology(label: str) -> RealPartTopology:
    """Parse labels such as '2T', 'K', 'T⊔2K', '2K⊔T' or '∅'."""
    text = label.strip()
    if text in ("∅", "0", "empty"):
        return RealPartTopology(0, 0)
    tori = klein = 0
    for part in text.split("⊔"):
        m = _PART_RE.match(part.strip())
        if not m:
            raise ValueError(f"cannot parse real-part label {label!r}")
        count = int(m.group(1) or "1")
        if m.group(2) == "T":
            tori += count
        else:
            klein += count
    return RealPartTopology(tori, klein)


# --- the built-in catalog ---------------------------------------------------------

HALF = Fraction(1, 2)


def _z2_slots() -> List[CatalogSlot]:
    sec = "Z2/Z2xZ2"
    plain = [_first(IM, "conj", 0, 0, HALF, 0), _first(IM, "-conj", 0, 0, 0, HALF)]
    swapped = [_first(IM, "conj", 0, 0, 0, HALF), _first(IM, "-conj", 0, 0, HALF, 0)]
    diagonal = [
        _first(IM, "conj", 0, 0, HALF, HALF),
        _first(IM, "-conj", 0, 0, HALF, HALF),
    ]
    mixed = [
        _first(UC, "tau*conj", 0, 0, HALF, HALF),
        _first(UC, "-tau*conj", 0, 0, HALF, HALF),
        _first(HL, "conj", 0, 0, HALF, 0),
        _first(HL, "-conj", 0, 0, HALF, 0),
    ]
    shifted = [
        _first(IM, "conj", HALF, 0, 0, HALF),
        _first(IM, "-conj", 0, HALF, HALF, 0),
    ]
    conj_f = [_second(IM, "conj", 0, 0)]
    conj_half_tau = [_second(IM, "conj", 0, HALF)]
    conj_half = [_second(IM, "conj", HALF, 0)]
    conj_both = [_second(IM, "conj", HALF, HALF)]
    mixed_f = [_second(UC, "tau*conj", 0, 0), _second(HL, "conj", 0, 0)]
    rows = [
        ("Z2-01", plain, conj_f, "4K"),
        ("Z2-02", mixed, conj_f, "4K"),
        ("Z2-03", plain, conj_half_tau, "2T"),
        ("Z2-04", swapped, conj_half_tau, "2T"),
        ("Z2-05", swapped, mixed_f, "2T"),
        ("Z2-06", diagonal, conj_f, "2T"),
        ("Z2-07", diagonal, conj_half_tau, "2T"),
        ("Z2-08", plain, conj_half, "∅"),
        ("Z2-09", plain, conj_both, "∅"),
        ("Z2-10", swapped, conj_both, "∅"),
        ("Z2-11", diagonal, conj_half, "∅"),
        ("Z2-12", diagonal, conj_both, "∅"),
        ("Z2-13", mixed, conj_both, "∅"),
        ("Z2-14", shifted, conj_f, "∅"),
        ("Z2-15", shifted, conj_half_tau, "∅"),
        ("Z2-16", shifted, conj_both, "∅"),
        ("Z2-17", shifted, mixed_f, "∅"),
        ("Z2-18", plain, mixed_f, "2K"),
        ("Z2-19", mixed, mixed_f, "2K"),
        ("Z2-20", swapped, conj_f, "4T"),
        ("Z2-21", diagonal, mixed_f, "T"),
        ("Z2-22", mixed, conj_half_tau, "T"),
    ]
    return [_slot(i, sec, f, s, e) for i, f, s, e in rows]


def _z4_slots() -> List[CatalogSlot]:
    sec = "Z4/D4"
    q = Fraction(1, 4)
    deep = [
        _first(IM, "conj", 0, 0, HALF, q),
        _first(IM, "-conj", 0, 0, q, HALF),
    ]
    deep_shifted = [
        _first(IM, "conj", HALF, 0, HALF, q),
        _first(IM, "-conj", 0, HALF, q, HALF),
    ]
    shallow = [
        _first(IM, "conj", 0, 0, 0, q),
        _first(IM, "-conj", 0, 0, q, 0),
    ]
    shallow_shifted = [
        _first(IM, "conj", HALF, 0, 0, q),
        _first(IM, "-conj", 0, HALF, q, 0),
    ]
    mixed = [
        _first(UC, "tau*conj", 0, 0, q, Fraction(3, 4)),
        _first(UC, "-tau*conj", 0, 0, q, q),
        _first(HL, "conj", 0, 0, q, HALF),
        _first(HL, "-conj", 0, 0, q, 0),
    ]
    conj_f = [_second(SQ, "conj", 0, 0)]
    conj_center = [_second(SQ, "conj", HALF, HALF)]
    rows = [
        ("Z4-01", deep, conj_f, "2T"),
        ("Z4-02", deep_shifted, conj_f, "T"),
        ("Z4-03", shallow, conj_center, "T"),
        ("Z4-04", deep_shifted, conj_center, "T"),
        ("Z4-05", deep, conj_center, "∅"),
        ("Z4-06", shallow_shifted, conj_f, "∅"),
        ("Z4-07", shallow_shifted, conj_center, "∅"),
        ("Z4-08", shallow, conj_f, "3T"),
        ("Z4-09", mixed, conj_f, "3K"),
        ("Z4-10", mixed, conj_center, "K"),
    ]
    return [_slot(i, sec, f, s, e) for i, f, s, e in rows]


def _z4xz2_slots() -> List[CatalogSlot]:
    q = Fraction(1, 4)
    tq = Fraction(3, 4)
    g1_sec = "Z4xZ2/G1"
    g1_second = [_second(SQ, "conj", HALF, 0, HALF, HALF)]
    g1_rows = [
        (
            "Z4xZ2-G1-01",
            [
                _first(IM, "conj", 0, 0, q, q, HALF, 0),
                _first(IM, "-conj", 0, 0, tq, q, 0, HALF),
            ],
            "∅",
        ),
        (
            "Z4xZ2-G1-02",
            [
                _first(IM, "conj", HALF, 0, q, q, HALF, 0),
                _first(IM, "-conj", 0, HALF, tq, q, 0, HALF),
            ],
            "T",
        ),
    ]
    d4_sec = "Z4xZ2/Z2xD4"
    d4_second = [_second(SQ, "conj", 0, 0, HALF, HALF)]
    d4_rows = [
        (
            "Z4xZ2-Z2xD4-01",
            [
                _first(IM, "conj", 0, 0, 0, q, HALF, 0),
                _first(IM, "-conj", 0, 0, q, 0, 0, HALF),
            ],
            "2T",
        ),
        (
            "Z4xZ2-Z2xD4-02",
            [
                _first(IM, "conj", 0, 0, 0, q, HALF, HALF),
                _first(IM, "-conj", 0, 0, q, 0, HALF, HALF),
            ],
            "T⊔K",
        ),
        (
            "Z4xZ2-Z2xD4-03",
            [
                _first(IM, "conj", HALF, 0, 0, q, HALF, 0),
                _first(IM, "-conj", 0, HALF, q, 0, 0, HALF),
            ],
            "T",
        ),
        (
            "Z4xZ2-Z2xD4-04",
            [
                _first(IM, "conj", HALF, 0, 0, q, HALF, HALF),
                _first(IM, "-conj", 0, HALF, q, 0, HALF, HALF),
            ],
            "K",
        ),
    ]
    slots = [_slot(i, g1_sec, f, g1_second, e) for i, f, e in g1_rows]
    slots += [_slot(i, d4_sec, f, d4_second, e) for i, f, e in d4_rows]
    return slots


def _z3_slots() -> List[CatalogSlot]:
    sec = "Z3/S3"
    t = Fraction(1, 3)
    tt = Fraction(2, 3)
    plain = [_first(IM, "conj", 0, 0, 0, t), _first(IM, "-conj", 0, 0, t, 0)]
    shifted = [
        _first(IM, "conj", HALF, 0, 0, t),
        _first(IM, "-conj", 0, HALF, t, 0),
    ]
    mixed = [
        _first(UC, "tau*conj", 0, 0, t, tt),
        _first(UC, "-tau*conj", 0, 0, t, t),
        _first(HL, "conj", 0, 0, t, tt),
        _first(HL, "-conj", 0, 0, t, 0),
    ]
    conj_f = [_second(HX, "conj", 0, 0)]
    neg_conj_f = [_second(HX, "-conj", 0, 0)]
    rows = [
        ("Z3-01", plain, conj_f, "2T"),
        ("Z3-02", plain, neg_conj_f, "2T"),
        ("Z3-03", shifted, conj_f, "∅"),
        ("Z3-04", shifted, neg_conj_f, "∅"),
        ("Z3-05", mixed, conj_f, "T"),
        ("Z3-06", mixed, neg_conj_f, "T"),
    ]
    return [_slot(i, sec, f, s, e) for i, f, s, e in rows]


def _z3xz3_slots() -> List[CatalogSlot]:
    sec = "Z3xZ3/S3xZ3"
    t = Fraction(1, 3)
    tt = Fraction(2, 3)
    second = [_second(HX, "-conj", 0, 0, t, tt)]
    rows = [
        (
            "Z3xZ3-01",
            [
                _first(IM, "conj", 0, 0, 0, t, t, 0),
                _first(IM, "-conj", 0, 0, t, 0, 0, t),
            ],
            "2T",
        ),
        (
            "Z3xZ3-02",
            [
                _first(IM, "conj", HALF, 0, 0, t, t, 0),
                _first(IM, "-conj", 0, HALF, t, 0, 0, t),
            ],
            "∅",
        ),
        (
            "Z3xZ3-03",
            [
                _first(UC, "tau*conj", 0, 0, t, tt, t, t),
                _first(UC, "-tau*conj", 0, 0, t, t, t, tt),
                _first(HL, "conj", 0, 0, t, tt, t, 0),
                _first(HL, "-conj", 0, 0, t, 0, t, tt),
            ],
            "T",
        ),
    ]
    return [_slot(i, sec, f, second, e) for i, f, e in rows]


def _z6_slots() -> List[CatalogSlot]:
    sec = "Z6/D6"
    s = Fraction(1, 6)
    conj_f = [_second(HX, "conj", 0, 0)]
    rows = [
        (
            "Z6-01",
            [_first(IM, "conj", 0, 0, 0, s), _first(IM, "-conj", 0, 0, s, 0)],
            "2T",
        ),
        (
            "Z6-02",
            [
                _first(IM, "conj", 0, 0, HALF, s),
                _first(IM, "-conj", 0, 0, s, HALF),
            ],
            "T",
        ),
        (
            "Z6-03",
            [
                _first(IM, "conj", HALF, 0, 0, s),
                _first(IM, "-conj", 0, HALF, s, 0),
            ],
            "∅",
        ),
        (
            "Z6-04",
            [
                _first(UC, "tau*conj", 0, 0, s, Fraction(5, 6)),
                _first(UC, "-tau*conj", 0, 0, s, s),
                _first(HL, "conj", 0, 0, s, Fraction(1, 3)),
                _first(HL, "-conj", 0, 0, s, 0),
            ],
            "2K",
        ),
    ]
    return [_slot(i, sec, f, conj_f, e) for i, f, e in rows]


def _klein_cover_slots() -> List[CatalogSlot]:
    sec = "Z2xZ2/Z2cube"
    block_a = [
        _first(IM, "conj", 0, 0, HALF, 0, 0, HALF),
        _first(IM, "-conj", 0, 0, 0, HALF, HALF, 0),
    ]
    block_b = [
        _first(IM, "conj", 0, 0, HALF, 0, HALF, HALF),
        _first(IM, "-conj", 0, 0, 0, HALF, HALF, HALF),
    ]
    block_c = [
        _first(IM, "conj", 0, 0, HALF, HALF, HALF, 0),
        _first(IM, "-conj", 0, 0, HALF, HALF, 0, HALF),
    ]
    block_d = [
        _first(IM, "conj", 0, 0, HALF, HALF, 0, HALF),
        _first(IM, "-conj", 0, 0, HALF, HALF, HALF, 0),
    ]
    block_e = [
        _first(IM, "conj", HALF, 0, 0, HALF, HALF, HALF),
        _first(IM, "-conj", 0, HALF, HALF, 0, HALF, HALF),
    ]
    block_f = [
        _first(IM, "conj", HALF, 0, 0, HALF, HALF, 0),
        _first(IM, "-conj", 0, HALF, HALF, 0, 0, HALF),
    ]
    block_g = [
        _first(IM, "conj", 0, 0, 0, HALF, HALF, 0),
        _first(IM, "-conj", 0, 0, HALF, 0, 0, HALF),
    ]
    block_h = [
        _first(IM, "conj", 0, 0, 0, HALF, HALF, HALF),
        _first(IM, "-conj", 0, 0, HALF, 0, HALF, HALF),
    ]
    def conj0(ex, ey):
        return [_second(IM, "conj", 0, 0, ex, ey)]

    def mixed():
        return [
            _second(UC, "tau*conj", 0, 0, HALF, HALF),
            _second(HL, "conj", 0, 0, HALF, 0),
        ]

    rows = [
        ("Z2sq-Z2cube-01", block_a, conj0(HALF, HALF), "2K"),
        ("Z2sq-Z2cube-02", block_a, conj0(HALF, 0), "2K"),
        ("Z2sq-Z2cube-03", block_a, mixed(), "2K"),
        ("Z2sq-Z2cube-04", block_b, conj0(0, HALF), "2K"),
        ("Z2sq-Z2cube-05", block_b, conj0(HALF, HALF), "2K"),
        ("Z2sq-Z2cube-06", block_b, mixed(), "2K"),
        ("Z2sq-Z2cube-07", block_a, [_second(IM, "conj", 0, HALF, HALF, 0)], "T"),
        ("Z2sq-Z2cube-08", block_b, [_second(IM, "conj", 0, HALF, HALF, 0)], "T"),
        ("Z2sq-Z2cube-09", block_c, conj0(0, HALF), "T"),
        ("Z2sq-Z2cube-10", block_c, conj0(HALF, HALF), "T"),
        ("Z2sq-Z2cube-11", block_d, conj0(HALF, HALF), "T"),
        ("Z2sq-Z2cube-12", block_a, [_second(IM, "conj", HALF, 0, 0, HALF)], "∅"),
        ("Z2sq-Z2cube-13", block_b, [_second(IM, "conj", HALF, 0, 0, HALF)], "∅"),
        ("Z2sq-Z2cube-14", block_c, [_second(IM, "conj", HALF, 0, 0, HALF)], "∅"),
        ("Z2sq-Z2cube-15", block_e, conj0(HALF, HALF), "∅"),
        ("Z2sq-Z2cube-16", block_f, conj0(HALF, HALF), "∅"),
        ("Z2sq-Z2cube-17", block_g, conj0(0, HALF), "3T"),
        ("Z2sq-Z2cube-18", block_g, conj0(HALF, HALF), "2T"),
        ("Z2sq-Z2cube-19", block_g, [_second(IM, "conj", 0, HALF, HALF, 0)], "2T"),
        ("Z2sq-Z2cube-20", block_g, mixed(), "2T"),
        ("Z2sq-Z2cube-21", block_h, conj0(HALF, HALF), "2T"),
        ("Z2sq-Z2cube-22", block_a, conj0(0, HALF), "T⊔2K"),
        ("Z2sq-Z2cube-23", block_b, conj0(HALF, 0), "T⊔2K"),
    ]
    return [_slot(i, sec, f, s, e) for i, f, s, e in rows]


def _dihedral_cover_slots() -> List[CatalogSlot]:
    sec = "Z2xZ2/D4"
    q = Fraction(1, 4)
    tq = Fraction(3, 4)
    firsts = [
        _first(UC, "tau*conj", 0, 0, HALF, 0, HALF, HALF),
        _first(UC, "-tau*conj", 0, 0, 0, HALF, HALF, HALF),
        _first(HL, "conj", 0, 0, 0, HALF, HALF, 0),
        _first(HL, "-conj", 0, 0, 0, HALF, HALF, 0),
    ]
    rows = [
        (
            "Z2sq-D4-01",
            [
                _second(IM, "conj", 0, q, 0, HALF),
                _second(IM, "-conj", tq, 0, HALF, 0),
            ],
            "2T",
            True,
        ),
        (
            "Z2sq-D4-02",
            [
                _second(UC, "tau*conj", q, tq, HALF, HALF),
                _second(UC, "-tau*conj", q, q, HALF, HALF),
                _second(HL, "conj", q, HALF, HALF, 0),
                _second(HL, "-conj", tq, 0, HALF, 0),
            ],
            "2T",
            True,
        ),
        (
            "Z2sq-D4-03",
            [
                _second(IM, "conj", HALF, q, 0, HALF),
                _second(IM, "-conj", tq, HALF, HALF, 0),
            ],
            "∅",
            False,
        ),
    ]
    return [
        _slot(i, sec, firsts, s, e, flagged=flag) for i, s, e, flag in rows
    ]


def _nonsplit_slots() -> List[CatalogSlot]:
    q = Fraction(1, 4)
    firsts = [
        _first(IM, "conj", q, 0, HALF, HALF, HALF, 0),
        _first(IM, "-conj", 0, q, HALF, HALF, 0, HALF),
    ]
    seconds = [
        _second(UC, "tau*conj", HALF, 0, HALF, HALF),
        _second(HL, "conj", 0, HALF, HALF, 0),
    ]
    return [_slot("nonsplit-01", "nonsplit", firsts, seconds, "∅", split=False)]


def builtin_catalog() -> List[CatalogSlot]:
    """All classification slots, in section order."""
    slots: List[CatalogSlot] = []
    slots += _z2_slots()
    slots += _z4_slots()
    slots += _z4xz2_slots()
    slots += _z3_slots()
    slots += _z3xz3_slots()
    slots += _z6_slots()
    slots += _klein_cover_slots()
    slots += _dihedral_cover_slots()
    slots += _nonsplit_slots()
    return slots


def slot_by_id(slot_id: str, catalog: Optional[Sequence[CatalogSlot]] = None) -> CatalogSlot:
    for slot in catalog if catalog is not None else builtin_catalog():
        if slot.id == slot_id:
            return slot
    raise KeyError(f"no catalog slot named {slot_id!r}")


# --- building surfaces from slots -------------------------------------------------


def build_surface(slot: CatalogSlot, variant_index: int = 0) -> RealHypSurface:
    """Instantiate one variant of a slot as a fully concrete surface."""
    try:
        variant = slot.variants[variant_index]
    except IndexError:
        raise ValueError(
            f"slot {slot.id} has {len(slot.variants)} variants, "
            f"index {variant_index} does not exist"
        ) from None
    rotation = ROTATION_SYMBOLS[SECTION_ROTATION[slot.section]]
    E = EllipticCurve(family_by_label(variant.tau1), "E")
    F = EllipticCurve(family_by_label(variant.tau2), "F")
    gens = [
        ProductMap(
            on_E=translation_map(variant.eta),
            on_F=curve_map(rotation, _vec(0, 0)),
        )
    ]
    if variant.eps1 is not None or variant.eps2 is not None:
        if variant.eps1 is None or variant.eps2 is None:
            raise ValueError(f"slot {slot.id} has a partial translation generator")
        gens.append(
            ProductMap(
                on_E=translation_map(variant.eps1),
                on_F=translation_map(variant.eps2),
            )
        )
    sigma = ProductMap(
        on_E=curve_map(linear_for(variant.sigma1.a, variant.tau1), variant.sigma1.b),
        on_F=curve_map(linear_for(variant.sigma2.a, variant.tau2), variant.sigma2.b),
    )
    return RealHypSurface(E=E, F=F, G_gens=tuple(gens), sigma=sigma)


# --- verification ------------------------------------------------------------------


@dataclass(frozen=True)
class SlotReport:
    slot_id: str
    section: str
    name_holo: str
    name_full: str
    split: bool
    expected: RealPartTopology
    computed: Optional[RealPartTopology]
    validation_ok: bool
    variants_agree: bool
    real_part_matches: bool
    passed: bool
    flagged: bool
    failures: Tuple[str, ...]
    fingerprint: Optional[InvariantFingerprint]


@dataclass(frozen=True)
class VerificationReport:
    slots: Tuple[SlotReport, ...]
    slot_count: int
    all_pass: bool
    mismatched_ids: Tuple[str, ...]
    flagged_ids: Tuple[str, ...]
    fingerprint_count: int
    topology_labels: Tuple[str, ...]
    htk_attainment: Tuple[Tuple[str, int, int], ...]
    bound_violations: Tuple[str, ...]
    extension_cases: Tuple[Tuple[str, str, bool], ...]


def verify_slot(slot: CatalogSlot) -> SlotReport:
    """Rebuild every variant of a slot and compare against its record."""
    failures: List[str] = []
    fingerprints: List[InvariantFingerprint] = []
    for index in range(len(slot.variants)):
        surface = build_surface(slot, index)
        diag = validate(surface)
        if not diag.ok:
            failures.extend(f"variant {index}: {msg}" for msg in diag.failures)
            continue
        fingerprints.append(fingerprint(surface))
    validation_ok = not failures and len(fingerprints) == len(slot.variants)
    variants_agree = len(set(fingerprints)) == 1 if fingerprints else False
    if not variants_agree and len(set(fingerprints)) > 1:
        failures.append("variants: fingerprints disagree across variants")

    expected_names = SECTION_GROUPS[slot.section]
    names_ok = True
    for fp in fingerprints:
        if (fp.name_holo, fp.name_full, fp.split) != expected_names:
            names_ok = False
            failures.append(
                "groups: computed (%s, %s, split=%s) does not match the section"
                % (fp.name_holo.value, fp.name_full.value, fp.split)
            )
            break

    computed = fingerprints[0].real_part if fingerprints else None
    real_part_matches = computed == slot.expected_real_part
    if not real_part_matches and computed is not None:
        failures.append(
            f"real part: computed {computed.label}, recorded {slot.expected_real_part.label}"
        )
    passed = validation_ok and variants_agree and real_part_matches and names_ok
    common = fingerprints[0] if variants_agree and fingerprints else None
    return SlotReport(
        slot_id=slot.id,
        section=slot.section,
        name_holo=expected_names[0].value,
        name_full=expected_names[1].value,
        split=slot.split,
        expected=slot.expected_real_part,
        computed=computed,
        validation_ok=validation_ok,
        variants_agree=variants_agree,
        real_part_matches=real_part_matches,
        passed=passed,
        flagged=slot.flagged,
        failures=tuple(failures),
        fingerprint=common,
    )


def verify_all(
    catalog: Optional[Sequence[CatalogSlot]] = None, parallel: bool = False
) -> VerificationReport:
    """Verify every slot and aggregate the global counts deterministically."""
    slots = list(catalog if catalog is not None else builtin_catalog())
    if parallel:
        with ThreadPoolExecutor() as pool:
            reports = list(pool.map(verify_slot, slots))
    else:
        reports = [verify_slot(s) for s in slots]
    reports.sort(key=lambda r: r.slot_id)

    computed = [r for r in reports if r.computed is not None]
    fingerprints = {r.fingerprint for r in reports if r.fingerprint is not None}
    topologies = sorted(
        {(r.computed.tori, r.computed.klein) for r in computed}
    )
    by_group: Dict[str, List[SlotReport]] = {}
    for r in computed:
        by_group.setdefault(r.name_holo, []).append(r)
    attainment = []
    violations: List[str] = []
    for name in sorted(by_group):
        bound = htk_bound(NamedGroup(name))
        best = max(r.computed.tori + r.computed.klein for r in by_group[name])
        attainment.append((name, bound, best))
        violations.extend(
            r.slot_id
            for r in by_group[name]
            if r.computed.tori + r.computed.klein > bound
        )
    cases = sorted(
        {(r.name_holo, r.name_full, r.split) for r in reports}
    )
    return VerificationReport(
        slots=tuple(reports),
        slot_count=len(reports),
        all_pass=all(r.passed for r in reports),
        mismatched_ids=tuple(
            r.slot_id for r in reports if not r.real_part_matches
        ),
        flagged_ids=tuple(r.slot_id for r in reports if r.flagged),
        fingerprint_count=len(fingerprints),
        topology_labels=tuple(
            RealPartTopology(t, k).label for t, k in topologies
        ),
        htk_attainment=tuple(attainment),
        bound_violations=tuple(sorted(violations)),
        extension_cases=tuple(cases),
    )


# --- serialization -----------------------------------------------------------------


def _vec_json(v: Optional[RatVec2]):
    if v is None:
        return None
    return [str(v.x), str(v.y)]


def _vec_parse(data) -> Optional[RatVec2]:
    if data is None:
        return None
    return RatVec2(Fraction(data[0]), Fraction(data[1]))


def _variant_json(v: SlotVariant) -> dict:
    return {
        "tau1": v.tau1,
        "tau2": v.tau2,
        "sigma1": {"a": v.sigma1.a, "b": _vec_json(v.sigma1.b)},
        "sigma2": {"a": v.sigma2.a, "b": _vec_json(v.sigma2.b)},
        "eta": _vec_json(v.eta),
        "eps1": _vec_json(v.eps1),
        "eps2": _vec_json(v.eps2),
        "extra_gens": list(v.extra_gens),
    }


def _variant_parse(data: dict) -> SlotVariant:
    return SlotVariant(
        tau1=data["tau1"],
        tau2=data["tau2"],
        sigma1=AffineData(data["sigma1"]["a"], _vec_parse(data["sigma1"]["b"])),
        sigma2=AffineData(data["sigma2"]["a"], _vec_parse(data["sigma2"]["b"])),
        eta=_vec_parse(data["eta"]),
        eps1=_vec_parse(data["eps1"]),
        eps2=_vec_parse(data["eps2"]),
        extra_gens=tuple(data.get("extra_gens", ())),
    )


def catalog_to_json(catalog: Sequence[CatalogSlot]) -> str:
    payload = [
        {
            "id": slot.id,
            "section": slot.section,
            "tau1": list(slot.tau1),
            "tau2": list(slot.tau2),
            "split": slot.split,
            "flagged": slot.flagged,
            "expected": {
                "tori": slot.expected_real_part.tori,
                "klein": slot.expected_real_part.klein,
            },
            "variants": [_variant_json(v) for v in slot.variants],
        }
        for slot in catalog
    ]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def catalog_from_json(text: str) -> List[CatalogSlot]:
    slots = []
    for data in json.loads(text):
        slots.append(
            CatalogSlot(
                id=data["id"],
                section=data["section"],
                tau1=tuple(data["tau1"]),
                tau2=tuple(data["tau2"]),
                variants=tuple(_variant_parse(v) for v in data["variants"]),
                expected_real_part=RealPartTopology(
                    data["expected"]["tori"], data["expected"]["klein"]
                ),
                split=data["split"],
                flagged=data.get("flagged", False),
            )
        )
    return slots


def report_to_json(report: VerificationReport) -> str:
    payload = {
        "slot_count": report.slot_count,
        "all_pass": report.all_pass,
        "mismatched_ids": list(report.mismatched_ids),
        "flagged_ids": list(report.flagged_ids),
        "fingerprint_count": report.fingerprint_count,
        "topology_labels": list(report.topology_labels),
        "htk_attainment": [
            {"group": g, "bound": b, "attained": a}
            for g, b, a in report.htk_attainment
        ],
        "bound_violations": list(report.bound_violations),
        "extension_cases": [
            {"holo": h, "full": f, "split": s}
            for h, f, s in report.extension_cases
        ],
        "slots": [
            {
                "id": r.slot_id,
                "section": r.section,
                "G": r.name_holo,
                "Ghat": r.name_full,
                "split": r.split,
                "expected": r.expected.label,
                "computed": r.computed.label if r.computed else None,
                "pass": r.passed,
                "flagged": r.flagged,
                "failures": list(r.failures),
            }
            for r in report.slots
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def report_to_csv(report: VerificationReport) -> str:
    lines = ["id,G,Ghat,split,expected,computed,pass"]
    for r in report.slots:
        computed = r.computed.label if r.computed else "-"
        lines.append(
            f"{r.slot_id},{r.name_holo},{r.name_full},{r.split},"
            f"{r.expected.label},{computed},{r.passed}"
        )
    return "\n".join(lines) + "\n"


def report_to_markdown(report: VerificationReport) -> str:
    out = ["# Catalog verification", ""]
    out.append(f"- slots: {report.slot_count}")
    out.append(f"- distinct fingerprints: {report.fingerprint_count}")
    out.append(f"- topologies: {', '.join(report.topology_labels)}")
    out.append(f"- all pass: {report.all_pass}")
    if report.mismatched_ids:
        out.append(f"- mismatches: {', '.join(report.mismatched_ids)}")
    out.append("")
    sections: Dict[str, List[SlotReport]] = {}
    for r in report.slots:
        sections.setdefault(r.section, []).append(r)
    for section in sorted(sections):
        out.append(f"## {section}")
        out.append("")
        out.append("| id | expected | computed | pass | note |")
        out.append("| --- | --- | --- | --- | --- |")
        for r in sections[section]:
            computed = r.computed.label if r.computed else "-"
            note = "ambiguous cell pairing, most local reading" if r.flagged else ""
            out.append(
                f"| {r.slot_id} | {r.expected.label} | {computed} "
                f"| {'yes' if r.passed else 'no'} | {note} |"
            )
        out.append("")
    return "\n".join(out)


def export(
    obj: Union[Sequence[CatalogSlot], VerificationReport],
    format: str,
    destination: Union[str, Path],
) -> Path:
    """Serialize a catalog or a report to json, csv or markdown."""
    path = Path(destination)
    if isinstance(obj, VerificationReport):
        renderers = {
            "json": report_to_json,
            "csv": report_to_csv,
            "markdown": report_to_markdown,
            "md": report_to_markdown,
        }
        if format not in renderers:
            raise ValueError(f"unsupported report format {format!r}")
        text = renderers[format](obj)
    else:
        if format != "json":
            raise ValueError(f"unsupported catalog format {format!r}")
        text = catalog_to_json(obj)
    path.write_text(text, encoding="utf-8", newline="")
    return path
