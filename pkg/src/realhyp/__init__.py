"""Exact classification machinery for real structures on bielliptic surfaces."""

__version__ = "0.1.0"

from .exactlin import (
    CongruenceSolution,
    IntMat2,
    RatVec2,
    matrix_order,
    solve_affine_congruence,
)
from .torus import (
    CurveMap,
    EllipticCurve,
    FixedLocus,
    TauFamily,
    circle_count,
    curve_map,
    family_by_label,
    fixed_locus,
    nu,
    translation_map,
)
from .grp import (
    ExtendedBdFGroup,
    NamedGroup,
    ProductMap,
    TransformationGroup,
    closure,
    is_split,
    iso_classify,
    make_extended,
)
from .surface import (
    InvariantFingerprint,
    RealHypSurface,
    RealPartTopology,
    antiholomorphic_lifts,
    fingerprint,
    htk_bound,
    involutive_lift_classes,
    real_part,
    validate,
)
from .catalog import (
    CatalogSlot,
    VerificationReport,
    build_surface,
    builtin_catalog,
    export,
    slot_by_id,
    verify_all,
    verify_slot,
)
from .moduli import (
    SolutionFamily,
    SqrtValue,
    ZetaBCase,
    case_summary,
    elliptic_demo,
    enumerate_zeta_b,
    solve_j,
    verify_family,
)

__all__ = [
    "__version__",
    "CongruenceSolution",
    "IntMat2",
    "RatVec2",
    "matrix_order",
    "solve_affine_congruence",
    "CurveMap",
    "EllipticCurve",
    "FixedLocus",
    "TauFamily",
    "circle_count",
    "curve_map",
    "family_by_label",
    "fixed_locus",
    "nu",
    "translation_map",
    "ExtendedBdFGroup",
    "NamedGroup",
    "ProductMap",
    "TransformationGroup",
    "closure",
    "is_split",
    "iso_classify",
    "make_extended",
    "InvariantFingerprint",
    "RealHypSurface",
    "RealPartTopology",
    "antiholomorphic_lifts",
    "fingerprint",
    "htk_bound",
    "involutive_lift_classes",
    "real_part",
    "validate",
    "CatalogSlot",
    "VerificationReport",
    "build_surface",
    "builtin_catalog",
    "export",
    "slot_by_id",
    "verify_all",
    "verify_slot",
    "SolutionFamily",
    "SqrtValue",
    "ZetaBCase",
    "case_summary",
    "elliptic_demo",
    "enumerate_zeta_b",
    "solve_j",
    "verify_family",
]
