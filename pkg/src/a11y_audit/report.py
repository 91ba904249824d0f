"""Renderers: canonical JSON, audit-template CSV, and Markdown summaries.

The CSV column set mirrors the audit template staff already use, so rows
paste straight into it. All renderers agree on totals by construction: they
read the same snapshot.
"""

from __future__ import annotations

import csv
import io

from .snapshot import AuditSnapshot, DiffReport
from .taxonomy import Issue
from .errors import AuditError

CSV_COLUMNS = [
    "fingerprint",
    "rule",
    "severity",
    "platform",
    "course_element",
    "format",
    "reference",
    "context_purpose",
    "issue_description",
    "instructional_necessity",
    "fix_suggestion",
    "trivial_fix",
]

_SEVERITY_ORDER = ["error", "warning", "needs-human-review"]


def canonical_json_bytes(obj) -> bytes:
    """Canonical JSON: sorted keys, two-space indent, UTF-8, LF, trailing
    newline. Stable across platforms and repeated calls."""
    import json

    text = json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
    return (text + "\n").encode("utf-8")


def render_json(obj: AuditSnapshot | DiffReport) -> bytes:
    return canonical_json_bytes(obj.to_dict())


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _issue_row(issue: Issue) -> list[str]:
    return [
        issue.fingerprint,
        issue.rule_id,
        issue.severity,
        issue.platform,
        issue.course_element,
        issue.format,
        issue.reference,
        _csv_cell(issue.context_purpose),
        issue.message,
        _csv_cell(issue.instructional_necessity),
        issue.fix_suggestion,
        _csv_cell(issue.trivial_fix),
    ]


def render_csv(snapshot: AuditSnapshot) -> bytes:
    """One RFC-4180-quoted row per issue, in snapshot order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for issue in snapshot.issues:
        writer.writerow(_issue_row(issue))
    return buf.getvalue().encode("utf-8")


def render_diff_csv(report: DiffReport) -> bytes:
    """Diff as CSV: a leading change column, then the issue columns."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["change"] + CSV_COLUMNS)
    for change, issues in (
        ("new", report.new_issues),
        ("resolved", report.resolved_issues),
        ("persisting", report.persisting_issues),
    ):
        for issue in issues:
            writer.writerow([change] + _issue_row(issue))
    return buf.getvalue().encode("utf-8")


def _summary_counts(snapshot: AuditSnapshot) -> list[tuple[str, int]]:
    rows: list[tuple[str, int]] = [
        ("Unique resources", len(snapshot.resources)),
        ("Issues identified", len(snapshot.issues)),
    ]
    for severity in _SEVERITY_ORDER:
        rows.append(
            (f"Severity: {severity}", sum(1 for i in snapshot.issues if i.severity == severity))
        )
    for rule_id in sorted({i.rule_id for i in snapshot.issues}):
        rows.append(
            (f"Rule: {rule_id}", sum(1 for i in snapshot.issues if i.rule_id == rule_id))
        )
    for platform in sorted({i.platform for i in snapshot.issues}):
        rows.append(
            (f"Platform: {platform}", sum(1 for i in snapshot.issues if i.platform == platform))
        )
    return rows


def render_summary(
    snapshot: AuditSnapshot,
    other: AuditSnapshot | None = None,
    format: str = "markdown",
) -> bytes:
    """Two-column audit summary; with ``other`` (an older snapshot) it grows
    old/delta columns for side-by-side comparison."""
    rows = _summary_counts(snapshot)
    if other is None:
        if format == "markdown":
            lines = ["| Metric | Value |", "| --- | --- |"]
            lines += [f"| {name} | {value} |" for name, value in rows]
            return ("\n".join(lines) + "\n").encode("utf-8")
        if format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["metric", "value"])
            writer.writerows(rows)
            return buf.getvalue().encode("utf-8")
        if format == "json":
            return canonical_json_bytes({name: value for name, value in rows})
        raise AuditError(f"unknown summary format {format!r}")

    old_rows = dict(_summary_counts(other))
    new_rows = dict(rows)
    names = list(dict.fromkeys(list(old_rows) + list(new_rows)))
    merged = [
        (name, old_rows.get(name, 0), new_rows.get(name, 0)) for name in names
    ]
    if format == "markdown":
        lines = ["| Metric | Old | New | Delta |", "| --- | --- | --- | --- |"]
        lines += [
            f"| {name} | {old} | {new} | {new - old:+d} |" for name, old, new in merged
        ]
        return ("\n".join(lines) + "\n").encode("utf-8")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "old", "new", "delta"])
        for name, old, new in merged:
            writer.writerow([name, old, new, new - old])
        return buf.getvalue().encode("utf-8")
    if format == "json":
        return canonical_json_bytes(
            {name: {"old": old, "new": new, "delta": new - old} for name, old, new in merged}
        )
    raise AuditError(f"unknown summary format {format!r}")


def render_diff_summary(report: DiffReport) -> bytes:
    """Human-readable diff: headline counts plus a per-rule delta table."""
    lines = [
        f"Diff: {report.old_ref} -> {report.new_ref}",
        "",
        f"{len(report.new_issues)} new, {len(report.resolved_issues)} resolved, "
        f"{len(report.persisting_issues)} persisting",
        "",
        "| Rule | Old | New | Delta |",
        "| --- | --- | --- | --- |",
    ]
    for rule_id, counts in sorted(report.per_rule_delta.items()):
        old_n, new_n = counts["old_count"], counts["new_count"]
        lines.append(f"| {rule_id} | {old_n} | {new_n} | {new_n - old_n:+d} |")
    for warning in report.warnings:
        lines.append(f"\nwarning: {warning}")
    return ("\n".join(lines) + "\n").encode("utf-8")
