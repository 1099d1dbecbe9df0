"""Tests for the built-in catalog and its verification pipeline."""

import json

import pytest

from realhyp.catalog import (
    CatalogSlot,
    build_surface,
    builtin_catalog,
    catalog_from_json,
    catalog_to_json,
    export,
    parse_topology,
    report_to_csv,
    report_to_json,
    report_to_markdown,
    slot_by_id,
    verify_all,
    verify_slot,
)
from realhyp.surface import RealPartTopology, fingerprint, real_part, validate

EXPECTED_SECTION_COUNTS = {
    "Z2/Z2xZ2": 22,
    "Z4/D4": 10,
    "Z4xZ2/G1": 2,
    "Z4xZ2/Z2xD4": 4,
    "Z3/S3": 6,
    "Z3xZ3/S3xZ3": 3,
    "Z6/D6": 4,
    "Z2xZ2/Z2cube": 23,
    "Z2xZ2/D4": 3,
    "nonsplit": 1,
}

ALLOWED_CASES = {
    ("Z2", "Z2xZ2", True),
    ("Z2xZ2", "Z2cube", True),
    ("Z2xZ2", "D4", True),
    ("Z2xZ2", "Z4xZ2", False),
    ("Z4", "D4", True),
    ("Z4xZ2", "Z2xD4", True),
    ("Z4xZ2", "G1", True),
    ("Z3", "S3", True),
    ("Z3xZ3", "S3xZ3", True),
    ("Z6", "D6", True),
}


@pytest.fixture(scope="module")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="module")
def report(catalog):
    return verify_all(catalog)


def test_catalog_has_expected_size(catalog):
    assert len(catalog) == 78
    counts = {}
    for slot in catalog:
        counts[slot.section] = counts.get(slot.section, 0) + 1
    assert counts == EXPECTED_SECTION_COUNTS


def test_slot_ids_are_unique(catalog):
    ids = [slot.id for slot in catalog]
    assert len(set(ids)) == len(ids)


def test_only_the_nonsplit_slot_is_nonsplit(catalog):
    nonsplit = [slot.id for slot in catalog if not slot.split]
    assert nonsplit == ["nonsplit-01"]


def test_every_variant_builds_a_valid_surface(catalog):
    for slot in catalog:
        for index in range(len(slot.variants)):
            surface = build_surface(slot, index)
            diag = validate(surface)
            assert diag.ok, (slot.id, index, diag.failures)


def test_build_surface_rejects_bad_variant_index(catalog):
    with pytest.raises(ValueError, match="variants"):
        build_surface(catalog[0], 99)


def test_slot_by_id_lookup(catalog):
    assert slot_by_id("Z4-08", catalog).expected_real_part == RealPartTopology(3, 0)
    with pytest.raises(KeyError):
        slot_by_id("Z9-99", catalog)


def test_variant_expansion_covers_alternative_lattices(catalog):
    # Alternative lift readings multiply out with alternative lattice shapes.
    assert len(slot_by_id("Z2-01", catalog).variants) == 2
    assert len(slot_by_id("Z2-02", catalog).variants) == 4
    assert len(slot_by_id("Z2-19", catalog).variants) == 8
    assert len(slot_by_id("Z2sq-D4-02", catalog).variants) == 16
    assert len(slot_by_id("nonsplit-01", catalog).variants) == 4


def test_four_torus_slot_verifies(catalog):
    result = verify_slot(slot_by_id("Z2-20", catalog))
    assert result.passed
    assert result.computed == RealPartTopology(4, 0)


def test_two_klein_slot_verifies(catalog):
    result = verify_slot(slot_by_id("Z6-04", catalog))
    assert result.passed
    assert result.computed == RealPartTopology(0, 2)


def test_order_nine_torus_slot_verifies(catalog):
    result = verify_slot(slot_by_id("Z3xZ3-03", catalog))
    assert result.passed
    assert result.computed == RealPartTopology(1, 0)


def test_nonsplit_slot_has_empty_real_part(catalog):
    result = verify_slot(slot_by_id("nonsplit-01", catalog))
    assert result.passed
    assert result.computed == RealPartTopology(0, 0)
    surface = build_surface(slot_by_id("nonsplit-01", catalog), 0)
    assert real_part(surface) == RealPartTopology(0, 0)


def test_report_counts(report):
    assert report.slot_count == 78
    assert report.fingerprint_count == 78
    assert len(report.topology_labels) == 11
    assert set(report.topology_labels) == {
        "∅", "T", "2T", "3T", "4T", "K", "2K", "3K", "4K", "T⊔K", "T⊔2K",
    }


def test_component_bounds_are_attained_and_respected(report):
    assert report.bound_violations == ()
    expected_bounds = {
        "Z2": 4, "Z2xZ2": 3, "Z4": 3, "Z4xZ2": 2,
        "Z3": 2, "Z3xZ3": 2, "Z6": 2,
    }
    seen = {}
    for name, bound, attained in report.htk_attainment:
        assert bound == expected_bounds[name]
        assert attained == bound
        seen[name] = attained
    assert set(seen) == set(expected_bounds)


def test_extension_cases_match_the_allowed_list(report):
    assert set(report.extension_cases) == ALLOWED_CASES


def test_mismatches_are_confined_to_the_flagged_slots(report):
    assert report.flagged_ids == ("Z2sq-D4-01", "Z2sq-D4-02")
    assert report.mismatched_ids == report.flagged_ids
    assert not report.all_pass
    by_id = {r.slot_id: r for r in report.slots}
    for slot_id in report.flagged_ids:
        r = by_id[slot_id]
        assert r.validation_ok
        assert r.variants_agree
        assert r.computed == RealPartTopology(1, 0)
        assert r.expected == RealPartTopology(2, 0)
    passing = [r for r in report.slots if r.passed]
    assert len(passing) == 76


def test_variant_fingerprints_agree_within_each_slot(report):
    for r in report.slots:
        assert r.variants_agree, r.slot_id


def test_verification_is_deterministic_and_parallel_safe(catalog):
    serial = verify_all(catalog)
    threaded = verify_all(catalog, parallel=True)
    assert serial == threaded


def test_catalog_json_round_trip(catalog):
    text = catalog_to_json(catalog)
    restored = catalog_from_json(text)
    assert restored == catalog
    assert catalog_to_json(restored) == text


def test_catalog_json_uses_fraction_strings(catalog):
    payload = json.loads(catalog_to_json(catalog))
    assert len(payload) == 78
    first = payload[0]["variants"][0]
    assert first["eta"] == ["1/2", "0"]
    assert first["sigma1"]["b"] == ["0", "0"]


def test_report_csv_shape(report):
    text = report_to_csv(report)
    lines = text.splitlines()
    assert lines[0] == "id,G,Ghat,split,expected,computed,pass"
    assert len(lines) == 79
    assert "\r" not in text
    row = next(line for line in lines if line.startswith("Z2-20,"))
    assert row == "Z2-20,Z2,Z2xZ2,True,4T,4T,True"


def test_report_markdown_groups_by_section(report):
    text = report_to_markdown(report)
    for section in EXPECTED_SECTION_COUNTS:
        assert f"## {section}" in text
    assert "most local reading" in text


def test_report_json_is_loadable(report):
    payload = json.loads(report_to_json(report))
    assert payload["slot_count"] == 78
    assert payload["mismatched_ids"] == ["Z2sq-D4-01", "Z2sq-D4-02"]


def test_export_dispatch(tmp_path, catalog, report):
    cat_path = export(catalog, "json", tmp_path / "catalog.json")
    assert catalog_from_json(cat_path.read_text(encoding="utf-8")) == catalog
    csv_path = export(report, "csv", tmp_path / "report.csv")
    assert csv_path.read_text(encoding="utf-8").startswith("id,G,Ghat")
    md_path = export(report, "markdown", tmp_path / "report.md")
    assert md_path.read_text(encoding="utf-8").startswith("# Catalog verification")
    with pytest.raises(ValueError, match="unsupported"):
        export(catalog, "csv", tmp_path / "bad.csv")


def test_parse_topology_grammar():
    assert parse_topology("∅") == RealPartTopology(0, 0)
    assert parse_topology("3T") == RealPartTopology(3, 0)
    assert parse_topology("K") == RealPartTopology(0, 1)
    assert parse_topology("T⊔2K") == RealPartTopology(1, 2)
    assert parse_topology("2K⊔T") == RealPartTopology(1, 2)
    with pytest.raises(ValueError):
        parse_topology("2X")


def test_topology_labels_round_trip():
    for tori in range(5):
        for klein in range(5):
            topo = RealPartTopology(tori, klein)
            assert parse_topology(topo.label) == topo


def test_fingerprint_distinguishes_all_slots(catalog):
    prints = {fingerprint(build_surface(slot, 0)) for slot in catalog}
    assert len(prints) == 78
