"""Issue classification: findings plus audit dimensions and stable identity.

Fingerprints digest (rule id, file path, offending-node content) and
deliberately exclude structural position and line numbers: edits elsewhere
in a file must not churn issue identity, or longitudinal diffs drown in
false churn. Identical content colliding within one snapshot gets a stable
ordinal suffix assigned in document order.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .config import Config, glob_match
from .errors import AuditError
from .rules import Finding

ISSUE_STATUSES = ("open", "wontfix", "false-positive")
INSTRUCTIONAL_NECESSITY = ("required", "not-necessary")
ISSUE_FORMATS = (
    "video", "text", "image", "animated-gif", "drawing", "shapes-objects", "code",
)


@dataclass
class Issue:
    """A classified finding carrying the audit-template dimensions.

    ``context_purpose``, ``instructional_necessity``, ``trivial_fix``, and
    ``status`` are human judgments supplied via the annotation overlay;
    ``fix_suggestion`` starts as the rule's fix hint and may be refined by
    annotation. Everything else is machine-derived and annotation-proof.
    """

    fingerprint: str
    rule_id: str
    severity: str
    file_path: str
    locator: str
    source_line: int | None
    snippet: str
    message: str
    fix_hint: str
    machine_decidable: bool
    platform: str
    course_element: str
    format: str
    reference: str
    fix_suggestion: str
    context_purpose: str | None = None
    instructional_necessity: str | None = None
    trivial_fix: bool | None = None
    status: str = "open"

    def to_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint,
            "rule_id": self.rule_id,
            "severity": self.severity,
            "file_path": self.file_path,
            "locator": self.locator,
            "source_line": self.source_line,
            "snippet": self.snippet,
            "message": self.message,
            "fix_hint": self.fix_hint,
            "machine_decidable": self.machine_decidable,
            "platform": self.platform,
            "course_element": self.course_element,
            "format": self.format,
            "reference": self.reference,
            "fix_suggestion": self.fix_suggestion,
            "context_purpose": self.context_purpose,
            "instructional_necessity": self.instructional_necessity,
            "trivial_fix": self.trivial_fix,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Issue":
        try:
            return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})
        except TypeError as exc:
            raise AuditError(f"malformed issue record: {exc}") from exc


def fingerprint_base(finding: Finding) -> str:
    """Content-addressed identity: rule id, file path, and a hash of the
    offending node's content (never its position)."""
    content_hash = hashlib.sha256(finding.content_key.encode("utf-8")).hexdigest()
    preimage = "\x1f".join((finding.rule_id, finding.file_path, content_hash))
    return hashlib.sha256(preimage.encode("utf-8")).hexdigest()[:24]


def fingerprint(finding: Finding) -> str:
    """Fingerprint of a finding considered alone (no collision ordinal)."""
    return fingerprint_base(finding)


_GIF_SRC = re.compile(r"\.gif(\?.*)?\Z", re.IGNORECASE)
_LECTURE_NAME = re.compile(r"lecture[-_ ]?0*(\d+)", re.IGNORECASE)
_SLIDE_LOCATOR = re.compile(r"slide\[(\d+)\]")


def _derive_format(finding: Finding) -> str:
    el = finding.subject_element
    if el == "img":
        return "animated-gif" if _GIF_SRC.search(finding.subject_src or "") else "image"
    if el == "video":
        return "video"
    if el in ("pre", "code"):
        return "code"
    if el in ("slide-shape", "slide-group"):
        return "shapes-objects"
    if el == "slide-image":
        return "image"
    return "text"


def _derive_reference(finding: Finding) -> str:
    m = _SLIDE_LOCATOR.match(finding.locator)
    if m:
        slide_no = m.group(1)
        name = finding.file_path.rsplit("/", 1)[-1]
        lecture = _LECTURE_NAME.search(name)
        if lecture:
            return f"lecture {int(lecture.group(1))}, slide {slide_no}"
        return f"{finding.file_path}, slide {slide_no}"
    if finding.locator:
        return f"{finding.file_path}, {finding.locator}"
    return finding.file_path


def _first_glob_label(mapping: list[tuple[str, str]], path: str) -> str:
    for pattern, label in mapping:
        if glob_match(pattern, path):
            return label
    return "unclassified"


def classify(finding: Finding, config: Config, fp: str | None = None) -> Issue:
    """Build an Issue from a Finding using the config's path mappings."""
    return Issue(
        fingerprint=fp if fp is not None else fingerprint(finding),
        rule_id=finding.rule_id,
        severity=finding.severity,
        file_path=finding.file_path,
        locator=finding.locator,
        source_line=finding.source_line,
        snippet=finding.snippet,
        message=finding.message,
        fix_hint=finding.fix_hint,
        machine_decidable=finding.machine_decidable,
        platform=_first_glob_label(config.platform_map, finding.file_path),
        course_element=_first_glob_label(config.course_element_map, finding.file_path),
        format=_derive_format(finding),
        reference=_derive_reference(finding),
        fix_suggestion=finding.fix_hint,
    )


def classify_findings(findings: list[Finding], config: Config) -> list[Issue]:
    """Classify all findings, disambiguating fingerprint collisions with
    ordinal suffixes assigned in document order."""
    by_base: dict[str, list[Finding]] = {}
    for finding in findings:
        by_base.setdefault(fingerprint_base(finding), []).append(finding)

    fps: dict[int, str] = {}
    for base, group in by_base.items():
        group_sorted = sorted(group, key=lambda f: (f.file_path, f.order_key))
        for i, finding in enumerate(group_sorted):
            fps[id(finding)] = base if i == 0 else f"{base}-{i + 1}"

    issues = [classify(f, config, fp=fps[id(f)]) for f in findings]
    issues.sort(key=lambda i: (i.file_path, i.locator, i.rule_id, i.fingerprint))
    return issues


_OVERLAY_FIELDS = {
    "context_purpose",
    "instructional_necessity",
    "fix_suggestion",
    "trivial_fix",
    "status",
}


def load_overlay(path: Path) -> dict:
    """Read and validate an annotation overlay file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8-sig"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise AuditError(f"cannot read annotation overlay {path}: {exc}") from exc
    validate_overlay(data)
    return data


def validate_overlay(data) -> None:
    if not isinstance(data, dict):
        raise AuditError("annotation overlay: top level must be an object keyed by fingerprint")
    for fp, entry in data.items():
        if not isinstance(entry, dict):
            raise AuditError(f"annotation overlay: {fp}: entry must be an object")
        unknown = set(entry) - _OVERLAY_FIELDS
        if unknown:
            raise AuditError(
                f"annotation overlay: {fp}: unknown field {sorted(unknown)[0]!r}"
            )
        necessity = entry.get("instructional_necessity")
        if necessity is not None and necessity not in INSTRUCTIONAL_NECESSITY:
            raise AuditError(
                f"annotation overlay: {fp}: instructional_necessity must be one of "
                f"{', '.join(INSTRUCTIONAL_NECESSITY)}"
            )
        status = entry.get("status")
        if status is not None and status not in ISSUE_STATUSES:
            raise AuditError(
                f"annotation overlay: {fp}: status must be one of {', '.join(ISSUE_STATUSES)}"
            )
        for key in ("context_purpose", "fix_suggestion"):
            if entry.get(key) is not None and not isinstance(entry[key], str):
                raise AuditError(f"annotation overlay: {fp}: {key} must be a string")
        if entry.get("trivial_fix") is not None and not isinstance(entry["trivial_fix"], bool):
            raise AuditError(f"annotation overlay: {fp}: trivial_fix must be a boolean")


def apply_annotations(
    issues: list[Issue], overlay: dict
) -> tuple[list[Issue], list[str]]:
    """Merge human annotations onto issues by fingerprint.

    Returns the issues plus warnings for overlay entries whose fingerprint
    no longer occurs (stale annotations). Only the human-judgment fields can
    be set; machine-derived fields are untouched.
    """
    validate_overlay(overlay)
    warnings: list[str] = []
    by_fp = {issue.fingerprint: issue for issue in issues}
    for fp in sorted(overlay):
        entry = overlay[fp]
        issue = by_fp.get(fp)
        if issue is None:
            warnings.append(f"stale annotation: fingerprint {fp} matches no current issue")
            continue
        if entry.get("context_purpose") is not None:
            issue.context_purpose = entry["context_purpose"]
        if entry.get("instructional_necessity") is not None:
            issue.instructional_necessity = entry["instructional_necessity"]
        if entry.get("fix_suggestion") is not None:
            issue.fix_suggestion = entry["fix_suggestion"]
        if entry.get("trivial_fix") is not None:
            issue.trivial_fix = entry["trivial_fix"]
        if entry.get("status") is not None:
            issue.status = entry["status"]
    return issues, warnings


def skeleton_overlay(issues: list[Issue]) -> dict:
    """Blank overlay for every needs-human-review issue, ready to fill in."""
    return {
        issue.fingerprint: {
            "context_purpose": None,
            "instructional_necessity": None,
            "fix_suggestion": None,
            "trivial_fix": None,
            "status": None,
        }
        for issue in issues
        if issue.severity == "needs-human-review"
    }
