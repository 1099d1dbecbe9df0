"""HTTP service exposing the catalog, moduli and group-case reports.

The command line client drives this application through an in-memory
transport, and the same application can be served over a real socket.
Every response is assembled from the library's own report structures, so
all output formats share one source of truth.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Literal, Optional, Tuple

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from . import __version__
from .catalog import (
    SECTION_GROUPS,
    VerificationReport,
    build_surface,
    builtin_catalog,
    catalog_to_json,
    report_to_csv,
    report_to_json,
    report_to_markdown,
    slot_by_id,
    verify_all,
    verify_slot,
)
from .exactlin import IntMat2, matrix_order
from .grp import NamedGroup, iso_classify
from .moduli import (
    COMMUTE,
    ZETA_SWAP,
    SolutionFamily,
    ZetaBCase,
    case_summary,
    elliptic_demo,
    enumerate_zeta_b,
    family_residual,
    solve_j,
    verify_family,
)
from .surface import (
    antiholomorphic_lifts,
    fingerprint,
    group_of,
    involutive_lift_classes,
)

app = FastAPI(title="realhyp", version=__version__)

REPORT_RENDERERS = {
    "json": report_to_json,
    "csv": report_to_csv,
    "md": report_to_markdown,
}


@lru_cache(maxsize=2)
def _cached_report(parallel: bool) -> VerificationReport:
    return verify_all(parallel=parallel)


@lru_cache(maxsize=1)
def _solved_cases() -> Tuple[Tuple[ZetaBCase, SolutionFamily], ...]:
    return tuple((case, solve_j(case)) for case in enumerate_zeta_b())


class CheckResult(BaseModel):
    name: str
    ok: bool
    detail: str


class VerifyRequest(BaseModel):
    parallel: bool = False
    format: Literal["text", "json", "csv", "md"] = "text"


class VerifyResponse(BaseModel):
    ok: bool
    slot_count: int
    passed: int
    mismatched_ids: List[str]
    flagged_ids: List[str]
    fingerprint_count: int
    topology_labels: List[str]
    checks: List[CheckResult]
    format: str
    content: str


class SlotSummary(BaseModel):
    id: str
    section: str
    g: str
    g_hat: str
    split: bool
    flagged: bool
    expected: str
    variant_count: int


class SlotDetail(SlotSummary):
    computed: Optional[str]
    passed: bool
    variants_agree: bool
    failures: List[str]
    lift_count: int
    involutive_classes: int
    nu_e: List[int]
    nu_f: List[int]
    fix_g_action: List[str]
    eig_flags: List[Tuple[str, List[str]]]


def global_checks(report: VerificationReport) -> List[CheckResult]:
    """The named assertions behind the verification exit code."""
    catalog = builtin_catalog()
    expected_topologies = {slot.expected_real_part.label for slot in catalog}
    allowed_cases = sorted(
        {(g.value, f.value, s) for g, f, s in SECTION_GROUPS.values()}
    )
    passed = sum(1 for r in report.slots if r.passed)
    checks = []

    def add(name: str, ok: bool, detail: str) -> None:
        checks.append(CheckResult(name=name, ok=bool(ok), detail=detail))

    detail = f"{passed}/{report.slot_count} slots reproduce their records"
    if report.mismatched_ids:
        detail += "; failing: " + ", ".join(report.mismatched_ids)
    add(
        "slot reproduction",
        report.all_pass and report.slot_count == len(catalog),
        detail,
    )
    add(
        "fingerprint separation",
        report.fingerprint_count == report.slot_count,
        f"{report.fingerprint_count} distinct fingerprints "
        f"across {report.slot_count} slots",
    )
    add(
        "topology inventory",
        set(report.topology_labels) == expected_topologies,
        f"{len(report.topology_labels)} computed topologies: "
        + ", ".join(report.topology_labels),
    )
    add(
        "bound attainment",
        all(best == bound for _, bound, best in report.htk_attainment)
        and not report.bound_violations,
        "; ".join(
            f"{name}: {best}/{bound}" for name, bound, best in report.htk_attainment
        ),
    )
    add(
        "extension cases",
        sorted(report.extension_cases) == allowed_cases,
        f"{len(report.extension_cases)} extension cases realized",
    )
    return checks


def render_text(report: VerificationReport, checks: List[CheckResult]) -> str:
    lines = [f"catalog verification: {report.slot_count} slots"]
    for check in checks:
        mark = "ok  " if check.ok else "FAIL"
        lines.append(f"{mark} {check.name}: {check.detail}")
    for r in report.slots:
        if not r.passed:
            note = " [flagged]" if r.flagged else ""
            lines.append(f"slot {r.slot_id}{note}: " + "; ".join(r.failures))
    overall = all(c.ok for c in checks)
    lines.append(f"overall: {'PASS' if overall else 'FAIL'}")
    return "\n".join(lines) + "\n"


@app.get("/health")
def health() -> Dict[str, object]:
    return {
        "status": "ok",
        "version": __version__,
        "slot_count": len(builtin_catalog()),
    }


@app.get("/slots", response_model=List[SlotSummary])
def list_slots() -> List[SlotSummary]:
    out = []
    for slot in builtin_catalog():
        holo, full, _ = SECTION_GROUPS[slot.section]
        out.append(
            SlotSummary(
                id=slot.id,
                section=slot.section,
                g=holo.value,
                g_hat=full.value,
                split=slot.split,
                flagged=slot.flagged,
                expected=slot.expected_real_part.label,
                variant_count=len(slot.variants),
            )
        )
    return out


@app.get("/slots/{slot_id}", response_model=SlotDetail)
def slot_detail(slot_id: str) -> SlotDetail:
    try:
        slot = slot_by_id(slot_id)
    except KeyError:
        raise HTTPException(status_code=404, detail=f"unknown slot {slot_id!r}")
    report = verify_slot(slot)
    surface = build_surface(slot, 0)
    fp = report.fingerprint or fingerprint(surface)
    holo, full, _ = SECTION_GROUPS[slot.section]
    return SlotDetail(
        id=slot.id,
        section=slot.section,
        g=holo.value,
        g_hat=full.value,
        split=slot.split,
        flagged=slot.flagged,
        expected=slot.expected_real_part.label,
        variant_count=len(slot.variants),
        computed=report.computed.label if report.computed else None,
        passed=report.passed,
        variants_agree=report.variants_agree,
        failures=list(report.failures),
        lift_count=len(antiholomorphic_lifts(surface)),
        involutive_classes=len(involutive_lift_classes(surface)),
        nu_e=list(fp.nu_set_E),
        nu_f=list(fp.nu_set_F),
        fix_g_action=list(fp.fix_g_action),
        eig_flags=[(kind, list(flags)) for kind, flags in fp.eig_flags],
    )


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> VerifyResponse:
    report = _cached_report(request.parallel)
    checks = global_checks(report)
    if request.format == "text":
        content = render_text(report, checks)
    else:
        content = REPORT_RENDERERS[request.format](report)
    return VerifyResponse(
        ok=all(c.ok for c in checks),
        slot_count=report.slot_count,
        passed=sum(1 for r in report.slots if r.passed),
        mismatched_ids=list(report.mismatched_ids),
        flagged_ids=list(report.flagged_ids),
        fingerprint_count=report.fingerprint_count,
        topology_labels=list(report.topology_labels),
        checks=checks,
        format=request.format,
        content=content,
    )


@app.get("/catalog/export")
def catalog_export(format: str = Query("json")) -> Dict[str, str]:
    if format == "catalog":
        return {"format": format, "content": catalog_to_json(builtin_catalog())}
    if format not in REPORT_RENDERERS:
        raise HTTPException(status_code=422, detail=f"unsupported format {format!r}")
    report = _cached_report(False)
    return {"format": format, "content": REPORT_RENDERERS[format](report)}


@app.get("/moduli")
def moduli_report(
    tol: float = Query(1e-12, gt=0), samples: int = Query(100, ge=1)
) -> Dict[str, object]:
    summaries = [
        case_summary(case, n_samples=samples, tol=tol, family=family)
        for case, family in _solved_cases()
    ]
    demo = elliptic_demo()
    demo_case = ZetaBCase(
        zeta=ZETA_SWAP, b_mat=-IntMat2.identity(), relation=COMMUTE
    )
    demo_data = {
        "kind": demo.kind,
        "shape": demo.parametrization.shape,
        "note": demo.note,
        "residual": family_residual(demo, demo_case),
        "verified": verify_family(demo, demo_case, n_samples=samples, tol=tol),
    }
    return {
        "cases": summaries,
        "demo": demo_data,
        "all_verified": all(s["verified"] for s in summaries)
        and bool(demo_data["verified"]),
    }


BDF_CASE_ORDER = (
    NamedGroup.Z2,
    NamedGroup.Z2xZ2,
    NamedGroup.Z4,
    NamedGroup.Z4xZ2,
    NamedGroup.Z3,
    NamedGroup.Z3xZ3,
    NamedGroup.Z6,
)

BDF_EXPECTED_ORDER = {
    NamedGroup.Z2: 2,
    NamedGroup.Z2xZ2: 4,
    NamedGroup.Z4: 4,
    NamedGroup.Z4xZ2: 8,
    NamedGroup.Z3: 3,
    NamedGroup.Z3xZ3: 9,
    NamedGroup.Z6: 6,
}

BDF_EXPECTED_ROTATION = {
    NamedGroup.Z2: 2,
    NamedGroup.Z2xZ2: 2,
    NamedGroup.Z4: 4,
    NamedGroup.Z4xZ2: 4,
    NamedGroup.Z3: 3,
    NamedGroup.Z3xZ3: 3,
    NamedGroup.Z6: 6,
}


def bdf_case_data() -> List[Dict[str, object]]:
    """Instantiate and validate each of the seven holomorphic group cases."""
    catalog = builtin_catalog()
    out: List[Dict[str, object]] = []
    for index, name in enumerate(BDF_CASE_ORDER, start=1):
        slot = next(s for s in catalog if SECTION_GROUPS[s.section][0] == name)
        group = group_of(build_surface(slot, 0))
        rotation = max(matrix_order(e.on_F.linear) for e in group)
        checks = {
            "order_matches": group.order == BDF_EXPECTED_ORDER[name],
            "translations_on_first_curve": all(
                e.on_E.is_translation() for e in group
            ),
            "faithful_on_first_curve": len({e.on_E.trans for e in group})
            == group.order,
            "rotation_gives_rational_quotient": any(
                not e.on_F.linear.is_identity() for e in group
            ),
            "rotation_order_matches": rotation == BDF_EXPECTED_ROTATION[name],
            "isomorphism_class_matches": iso_classify(group) == name,
        }
        out.append(
            {
                "case": index,
                "group": name.value,
                "order": group.order,
                "rotation_order": rotation,
                "example_slot": slot.id,
                "checks": checks,
                "ok": all(checks.values()),
            }
        )
    return out


@app.get("/bdf")
def bdf_report() -> Dict[str, object]:
    cases = bdf_case_data()
    return {"cases": cases, "all_ok": all(c["ok"] for c in cases)}
