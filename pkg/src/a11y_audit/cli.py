"""Command-line interface.

Commands:
    audit <root>          run the pipeline, write a snapshot, print a summary
    gate <root>           audit + baseline + severity threshold; exit 1 on hits
    diff <old> <new>      compare two snapshot files
    rules                 print the machine-readable rule catalog
    annotate init <snap>  write a skeleton annotation overlay

Exit codes: 0 success (for gate: nothing blocking), 1 gate failure,
2 execution error or bad usage. ``audit`` itself never fails the build;
observation and enforcement are separate commands.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .config import Config, load_config
from .errors import AuditError
from .pipeline import run_audit
from .report import (
    canonical_json_bytes,
    render_csv,
    render_diff_csv,
    render_diff_summary,
    render_json,
    render_summary,
)
from .rules import RULES, rule_catalog_dict
from .snapshot import apply_baseline, diff, gate_count, load_baseline, load_snapshot
from .taxonomy import skeleton_overlay

FORMATS = ("json", "csv", "markdown")


def _styled(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="a11y-audit",
        description="Static accessibility auditor for course-material corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_audit_flags(p: argparse.ArgumentParser, default_out: str | None) -> None:
        p.add_argument("root", help="corpus root directory")
        p.add_argument("--config", metavar="P", help="config file (default: <root>/a11y.config.json)")
        p.add_argument("--styles", metavar="P", help="corpus-level computed-style JSON file")
        p.add_argument("--overlay", metavar="P", help="annotation overlay JSON file")
        p.add_argument("--format", choices=FORMATS, default="json", help="artifact format")
        p.add_argument("--out", metavar="P", default=default_out, help="artifact output path")

    p_audit = sub.add_parser("audit", help="audit a corpus and write a snapshot")
    add_audit_flags(p_audit, "a11y-audit.json")

    p_gate = sub.add_parser("gate", help="audit and fail when blocking issues remain")
    add_audit_flags(p_gate, None)
    p_gate.add_argument("--baseline", metavar="P", help="JSON list of suppressed fingerprints")
    p_gate.add_argument(
        "--fail-on", choices=("error", "warning"), default=None,
        help="minimum severity that blocks (default: config fail_on)",
    )

    p_diff = sub.add_parser("diff", help="compare two snapshot files")
    p_diff.add_argument("old", help="older snapshot JSON")
    p_diff.add_argument("new", help="newer snapshot JSON")
    p_diff.add_argument("--format", choices=FORMATS, default="markdown")

    sub.add_parser("rules", help="print the rule catalog as JSON")

    p_annotate = sub.add_parser("annotate", help="annotation helpers")
    annotate_sub = p_annotate.add_subparsers(dest="annotate_command", required=True)
    p_init = annotate_sub.add_parser(
        "init", help="write a blank overlay for all needs-human-review issues"
    )
    p_init.add_argument("snapshot", help="snapshot JSON to read")
    p_init.add_argument("--out", metavar="P", default="a11y-annotations.json")

    return parser


def _load_config_for(args) -> Config:
    explicit = Path(args.config) if args.config else None
    cfg = load_config(explicit, root=Path(args.root), rule_catalog=RULES)
    if getattr(args, "fail_on", None):
        cfg.fail_on = args.fail_on
    return cfg


def _run_audit_for(args, cfg: Config):
    result = run_audit(
        Path(args.root),
        cfg,
        styles_path=Path(args.styles) if args.styles else None,
        overlay_path=Path(args.overlay) if args.overlay else None,
    )
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return result


def _write_artifact(args, snapshot) -> None:
    if not args.out:
        return
    if args.format == "json":
        payload = render_json(snapshot)
    elif args.format == "csv":
        payload = render_csv(snapshot)
    else:
        payload = render_summary(snapshot)
    Path(args.out).write_bytes(payload)
    print(f"wrote {args.format} artifact to {args.out}", file=sys.stderr)


def cmd_audit(args) -> int:
    cfg = _load_config_for(args)
    result = _run_audit_for(args, cfg)
    _write_artifact(args, result.snapshot)
    sys.stdout.write(render_summary(result.snapshot).decode("utf-8"))
    return 0


def cmd_gate(args) -> int:
    cfg = _load_config_for(args)
    result = _run_audit_for(args, cfg)
    _write_artifact(args, result.snapshot)

    baseline = load_baseline(Path(args.baseline)) if args.baseline else []
    gate_report = apply_baseline(result.snapshot, baseline)
    blocking = [
        i
        for i in gate_report.active_issues
        if gate_count([i], cfg.fail_on) > 0
    ]
    count = len(blocking)

    severity_word = _styled(f"{count} blocking issue(s)", "31" if count else "32")
    print(f"gate: {severity_word} at fail_on={cfg.fail_on}")
    if blocking:
        by_rule: dict[str, int] = {}
        for issue in blocking:
            by_rule[issue.rule_id] = by_rule.get(issue.rule_id, 0) + 1
        print("top offenders:")
        ranked = sorted(by_rule.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
        for rule_id, n in ranked:
            print(f"  {n:4d}  {rule_id}")
        for issue in blocking[:5]:
            print(f"  - {issue.reference}: {issue.message}")
    if gate_report.suppressed_issues:
        print(f"baseline suppressed {len(gate_report.suppressed_issues)} issue(s)")
    if gate_report.ratchet_progress:
        print(
            f"ratchet progress: {len(gate_report.ratchet_progress)} baseline "
            "fingerprint(s) no longer occur; remove them from the baseline"
        )
    return 1 if count else 0


def cmd_diff(args) -> int:
    old = load_snapshot(Path(args.old))
    new = load_snapshot(Path(args.new))
    report = diff(old, new, old_ref=str(args.old), new_ref=str(args.new))
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.format == "json":
        sys.stdout.buffer.write(render_json(report))
    elif args.format == "csv":
        sys.stdout.buffer.write(render_diff_csv(report))
    else:
        sys.stdout.buffer.write(render_diff_summary(report))
    return 0


def cmd_rules(_args) -> int:
    sys.stdout.buffer.write(canonical_json_bytes(rule_catalog_dict()))
    return 0


def cmd_annotate_init(args) -> int:
    snapshot = load_snapshot(Path(args.snapshot))
    overlay = skeleton_overlay(snapshot.issues)
    Path(args.out).write_bytes(canonical_json_bytes(overlay))
    print(
        f"wrote overlay skeleton with {len(overlay)} entr"
        f"{'y' if len(overlay) == 1 else 'ies'} to {args.out}",
        file=sys.stderr,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "audit":
            return cmd_audit(args)
        if args.command == "gate":
            return cmd_gate(args)
        if args.command == "diff":
            return cmd_diff(args)
        if args.command == "rules":
            return cmd_rules(args)
        if args.command == "annotate":
            return cmd_annotate_init(args)
    except AuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
