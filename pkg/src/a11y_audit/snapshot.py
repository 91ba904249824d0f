"""Audit snapshots, longitudinal diffs, and the baseline ratchet.

Snapshots are canonical JSON (sorted keys, LF, trailing newline) so
serialize -> parse -> serialize is byte-identical, and golden tests stay
stable. Timestamps are injected (argument or A11Y_AUDIT_TIMESTAMP) rather
than read from the clock in core logic.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import Config
from .errors import AuditError
from .model import SourceFile
from .taxonomy import Issue

TIMESTAMP_ENV = "A11Y_AUDIT_TIMESTAMP"

_ISO_8601 = re.compile(
    r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})\Z"
)


def resolve_timestamp(created_at: str | None = None) -> str:
    """Explicit argument, then the environment override, then the clock."""
    value = created_at or os.environ.get(TIMESTAMP_ENV)
    if value:
        if not _ISO_8601.match(value):
            raise AuditError(
                f"invalid ISO-8601 timestamp {value!r} (expected e.g. 2026-01-15T12:00:00Z)"
            )
        return value
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class AuditSnapshot:
    created_at: str
    tool_version: str
    config_hash: str
    resources: list[dict]
    issues: list[Issue]

    def countable_issues(self) -> list[Issue]:
        """Issues that participate in gating and diffing: everything not
        annotated as a false positive."""
        return [i for i in self.issues if i.status != "false-positive"]

    def to_dict(self) -> dict:
        return {
            "created_at": self.created_at,
            "tool_version": self.tool_version,
            "config_hash": self.config_hash,
            "resources": self.resources,
            "issues": [issue.to_dict() for issue in self.issues],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuditSnapshot":
        if not isinstance(data, dict):
            raise AuditError("snapshot: top level must be an object")
        missing = {"created_at", "tool_version", "config_hash", "resources", "issues"} - set(data)
        if missing:
            raise AuditError(f"snapshot: missing field(s): {', '.join(sorted(missing))}")
        if not isinstance(data["resources"], list) or not isinstance(data["issues"], list):
            raise AuditError("snapshot: resources and issues must be lists")
        return cls(
            created_at=data["created_at"],
            tool_version=data["tool_version"],
            config_hash=data["config_hash"],
            resources=data["resources"],
            issues=[Issue.from_dict(i) for i in data["issues"]],
        )


def make_snapshot(
    issues: list[Issue],
    resources: list[SourceFile],
    config: Config,
    created_at: str | None = None,
    tool_version: str = __version__,
) -> AuditSnapshot:
    resource_rows = sorted(
        (
            {"path": r.path, "content_hash": r.content_hash, "media_kind": r.media_kind}
            for r in resources
        ),
        key=lambda r: r["path"],
    )
    sorted_issues = sorted(
        issues, key=lambda i: (i.file_path, i.locator, i.rule_id, i.fingerprint)
    )
    return AuditSnapshot(
        created_at=resolve_timestamp(created_at),
        tool_version=tool_version,
        config_hash=config.config_hash(),
        resources=resource_rows,
        issues=sorted_issues,
    )


def load_snapshot(path: Path) -> AuditSnapshot:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8-sig"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise AuditError(f"cannot read snapshot {path}: {exc}") from exc
    return AuditSnapshot.from_dict(data)


@dataclass
class DiffReport:
    old_ref: str
    new_ref: str
    new_issues: list[Issue]
    resolved_issues: list[Issue]
    persisting_issues: list[Issue]
    per_rule_delta: dict[str, dict[str, int]]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "old_ref": self.old_ref,
            "new_ref": self.new_ref,
            "new_issues": [i.to_dict() for i in self.new_issues],
            "resolved_issues": [i.to_dict() for i in self.resolved_issues],
            "persisting_issues": [i.to_dict() for i in self.persisting_issues],
            "per_rule_delta": self.per_rule_delta,
            "warnings": self.warnings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DiffReport":
        return cls(
            old_ref=data["old_ref"],
            new_ref=data["new_ref"],
            new_issues=[Issue.from_dict(i) for i in data["new_issues"]],
            resolved_issues=[Issue.from_dict(i) for i in data["resolved_issues"]],
            persisting_issues=[Issue.from_dict(i) for i in data["persisting_issues"]],
            per_rule_delta=data["per_rule_delta"],
            warnings=list(data.get("warnings", [])),
        )


def diff(
    old: AuditSnapshot,
    new: AuditSnapshot,
    old_ref: str | None = None,
    new_ref: str | None = None,
) -> DiffReport:
    """Fingerprint set difference between two snapshots.

    False-positive issues are excluded from all three sets. Renamed files
    change fingerprints, so a rename shows up as resolved + new; cross-term
    identity under heavy restructuring is out of scope.
    """
    old_issues = old.countable_issues()
    new_issues_all = new.countable_issues()
    old_fps = {i.fingerprint for i in old_issues}
    new_fps = {i.fingerprint for i in new_issues_all}

    added = [i for i in new_issues_all if i.fingerprint not in old_fps]
    resolved = [i for i in old_issues if i.fingerprint not in new_fps]
    persisting = [i for i in new_issues_all if i.fingerprint in old_fps]

    rule_ids = sorted(
        {i.rule_id for i in old_issues} | {i.rule_id for i in new_issues_all}
    )
    per_rule = {
        rid: {
            "old_count": sum(1 for i in old_issues if i.rule_id == rid),
            "new_count": sum(1 for i in new_issues_all if i.rule_id == rid),
        }
        for rid in rule_ids
    }

    warnings = []
    if old.tool_version != new.tool_version:
        warnings.append(
            f"version skew: old snapshot from tool {old.tool_version}, "
            f"new from {new.tool_version}"
        )

    return DiffReport(
        old_ref=old_ref or old.created_at,
        new_ref=new_ref or new.created_at,
        new_issues=added,
        resolved_issues=resolved,
        persisting_issues=persisting,
        per_rule_delta=per_rule,
        warnings=warnings,
    )


@dataclass
class GateReport:
    """Result of filtering a snapshot through a baseline ratchet."""

    active_issues: list[Issue]
    suppressed_issues: list[Issue]
    ratchet_progress: list[str]  # baseline fingerprints that no longer occur


def load_baseline(path: Path) -> list[str]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8-sig"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise AuditError(f"cannot read baseline {path}: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise AuditError(f"baseline {path}: must be a JSON list of fingerprint strings")
    return data


def apply_baseline(snapshot: AuditSnapshot, baseline: list[str]) -> GateReport:
    """Split countable issues into active vs. baseline-suppressed, and report
    baseline entries that no longer match anything (ratchet progress)."""
    baseline_set = set(baseline)
    active: list[Issue] = []
    suppressed: list[Issue] = []
    for issue in snapshot.countable_issues():
        (suppressed if issue.fingerprint in baseline_set else active).append(issue)
    present = {i.fingerprint for i in snapshot.countable_issues()}
    progress = sorted(baseline_set - present)
    return GateReport(
        active_issues=active, suppressed_issues=suppressed, ratchet_progress=progress
    )


_GATE_RANK = {"error": 2, "warning": 1}


def gate_count(issues: list[Issue], fail_on: str = "error") -> int:
    """Issues that block the gate: severity at or above ``fail_on``.
    needs-human-review findings never count."""
    minimum = _GATE_RANK[fail_on]
    return sum(1 for i in issues if _GATE_RANK.get(i.severity, 0) >= minimum)
