"""Renderer contracts: canonical JSON, CSV fidelity, summary shape."""

import csv
import io
import json

from a11y_audit.config import Config
from a11y_audit.model import SourceFile
from a11y_audit.report import (
    CSV_COLUMNS,
    canonical_json_bytes,
    render_csv,
    render_diff_csv,
    render_diff_summary,
    render_json,
    render_summary,
)
from a11y_audit.snapshot import diff, make_snapshot
from a11y_audit.taxonomy import Issue

CFG = Config()
TS = "2026-03-01T10:00:00Z"

EXPECTED_HEADER = (
    "fingerprint,rule,severity,platform,course_element,format,reference,"
    "context_purpose,issue_description,instructional_necessity,fix_suggestion,trivial_fix"
)


def _issue(fp, message="plain message", reference="a.html", **extra):
    defaults = dict(
        fingerprint=fp,
        rule_id="alt-missing",
        severity="error",
        file_path="a.html",
        locator="/p",
        source_line=3,
        snippet="<img>",
        message=message,
        fix_hint="fix",
        machine_decidable=True,
        platform="ed",
        course_element="reading",
        format="image",
        reference=reference,
        fix_suggestion="fix",
    )
    defaults.update(extra)
    return Issue(**defaults)


def _snap(issues, n_resources=1):
    resources = [
        SourceFile(f"file{i:03d}.html", "html", 10, "hash") for i in range(n_resources)
    ]
    return make_snapshot(issues, resources, CFG, created_at=TS)


def test_csv_header_is_exactly_the_contract():
    assert ",".join(CSV_COLUMNS) == EXPECTED_HEADER
    payload = render_csv(_snap([])).decode("utf-8")
    assert payload.splitlines() == [EXPECTED_HEADER]


def test_csv_quotes_commas_rfc4180():
    snap = _snap([_issue("f1", message='needs "quotes", and commas')])
    payload = render_csv(snap).decode("utf-8")
    rows = list(csv.reader(io.StringIO(payload)))
    assert len(rows) == 2
    assert rows[1][8] == 'needs "quotes", and commas'


def test_csv_reference_cell_holds_lecture_pattern_verbatim():
    snap = _snap([_issue("f1", reference="lecture 7, slide 18")])
    rows = list(csv.reader(io.StringIO(render_csv(snap).decode("utf-8"))))
    assert rows[1][6] == "lecture 7, slide 18"


def test_csv_reparses_to_issue_count():
    snap = _snap([_issue(f"f{i}", locator=f"/p[{i}]") for i in range(7)])
    rows = list(csv.reader(io.StringIO(render_csv(snap).decode("utf-8"))))
    assert len(rows) - 1 == len(snap.issues) == 7
    assert all(len(row) == len(CSV_COLUMNS) for row in rows)


def test_csv_boolean_and_none_cells():
    snap = _snap([_issue("f1", trivial_fix=True), _issue("f2", locator="/q")])
    rows = list(csv.reader(io.StringIO(render_csv(snap).decode("utf-8"))))
    trivial_cells = {row[0]: row[11] for row in rows[1:]}
    assert trivial_cells == {"f1": "true", "f2": ""}


def test_canonical_json_shape():
    payload = canonical_json_bytes({"b": 1, "a": [2, 1]})
    assert payload.endswith(b"\n")
    assert payload.index(b'"a"') < payload.index(b'"b"')
    assert b"\r" not in payload


def test_render_json_round_trips_diff_report():
    old = _snap([_issue("f1"), _issue("f2", locator="/q")])
    new = _snap([_issue("f2", locator="/q"), _issue("f3", locator="/r")])
    report = diff(old, new)
    parsed = json.loads(render_json(report))
    assert {i["fingerprint"] for i in parsed["new_issues"]} == {"f3"}
    assert {i["fingerprint"] for i in parsed["resolved_issues"]} == {"f1"}
    assert parsed["per_rule_delta"]["alt-missing"] == {"old_count": 2, "new_count": 2}


def test_summary_reports_exact_totals():
    snap = _snap([_issue(f"f{i}", locator=f"/p[{i}]") for i in range(4)], n_resources=9)
    text = render_summary(snap).decode("utf-8")
    assert "| Unique resources | 9 |" in text
    assert "| Issues identified | 4 |" in text
    assert "| Severity: error | 4 |" in text
    assert "| Rule: alt-missing | 4 |" in text
    assert "| Platform: ed | 4 |" in text


def test_summary_empty_snapshot_is_all_zeros():
    text = render_summary(_snap([], n_resources=0)).decode("utf-8")
    assert "| Unique resources | 0 |" in text
    assert "| Issues identified | 0 |" in text


def test_pair_summary_of_identical_snapshots_has_zero_deltas():
    snap = _snap([_issue("f1")])
    text = render_summary(snap, other=snap).decode("utf-8")
    for line in text.splitlines()[2:]:
        assert line.rstrip("|").strip().endswith("+0")


def test_renderers_agree_on_totals():
    snap = _snap([_issue(f"f{i}", locator=f"/p[{i}]") for i in range(5)], n_resources=3)
    json_count = len(json.loads(render_json(snap).decode("utf-8"))["issues"])
    csv_rows = list(csv.reader(io.StringIO(render_csv(snap).decode("utf-8"))))
    summary = render_summary(snap).decode("utf-8")
    assert json_count == 5
    assert len(csv_rows) - 1 == 5
    assert "| Issues identified | 5 |" in summary


def test_diff_csv_has_change_column():
    old = _snap([_issue("f1")])
    new = _snap([_issue("f2", locator="/q")])
    rows = list(csv.reader(io.StringIO(render_diff_csv(diff(old, new)).decode("utf-8"))))
    assert rows[0][0] == "change"
    changes = {row[0] for row in rows[1:]}
    assert changes == {"new", "resolved"}


def test_diff_summary_mentions_counts():
    old = _snap([_issue("f1")])
    report = diff(old, old)
    text = render_diff_summary(report).decode("utf-8")
    assert "0 new, 0 resolved, 1 persisting" in text
