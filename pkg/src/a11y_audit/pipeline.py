"""Full audit pipeline: discover -> parse -> rules -> classify -> snapshot.

Parsing and rule evaluation are pure per file, so files are processed on a
thread pool; every aggregation step sorts, so parallelism can never change
the output.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import Config
from .discover import discover
from .errors import AuditError
from .html_parser import parse_html
from .markdown_parser import parse_markdown
from .model import Document, SlideDeck, SourceFile
from .rules import Finding, run_rules
from .slides import parse_slide_manifest
from .snapshot import AuditSnapshot, make_snapshot
from .styles import resolve_styles, validate_sidecar
from .taxonomy import apply_annotations, classify_findings, load_overlay

DEFAULT_MAX_WORKERS = 8


@dataclass
class AuditResult:
    snapshot: AuditSnapshot
    documents: list[Document] = field(default_factory=list)
    decks: list[SlideDeck] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def load_corpus_styles(path: Path) -> dict[str, dict]:
    """Corpus-level computed-style file: file path -> per-document sidecar."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8-sig"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise AuditError(f"cannot read styles file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise AuditError(f"styles file {path}: top level must map file paths to sidecar objects")
    for file_path, sidecar in data.items():
        if not isinstance(file_path, str):
            raise AuditError(f"styles file {path}: keys must be corpus-relative file paths")
        validate_sidecar(sidecar)
    return data


def _strip_media_extension(path: str, config: Config) -> str:
    lower = path.lower()
    best = ""
    for ext in config.media_kinds:
        if lower.endswith(ext) and len(ext) > len(best):
            best = ext
    return path[: len(path) - len(best)] if best else path


def _pair_sidecars(
    files: list[SourceFile],
    root: Path,
    config: Config,
    warnings: list[str],
) -> dict[str, dict]:
    """Match discovered ``X.styles.json`` sidecars to the documents they
    describe: any html/markdown file sharing the stem ``X``."""
    paired: dict[str, dict] = {}
    sidecars = [f for f in files if f.media_kind == "style-sidecar"]
    if not sidecars:
        return paired
    stems: dict[str, list[SourceFile]] = {}
    for f in files:
        if f.media_kind in ("html", "markdown"):
            stems.setdefault(_strip_media_extension(f.path, config), []).append(f)
    for sidecar_file in sidecars:
        stem = sidecar_file.path[: -len(".styles.json")]
        targets = stems.get(stem)
        if not targets:
            warnings.append(f"style sidecar {sidecar_file.path} matches no document; ignored")
            continue
        try:
            data = json.loads((root / sidecar_file.path).read_text(encoding="utf-8-sig"))
            validate_sidecar(data)
        except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise AuditError(f"cannot read style sidecar {sidecar_file.path}: {exc}") from exc
        for target in targets:
            paired[target.path] = data
    return paired


def run_audit(
    root: Path,
    config: Config,
    styles_path: Path | None = None,
    overlay_path: Path | None = None,
    created_at: str | None = None,
    max_workers: int | None = None,
) -> AuditResult:
    """Audit a corpus directory and return the snapshot plus parse products.

    Per-file failures (undecodable bytes, invalid manifests) become warnings
    and the file stays in the resource inventory; only corpus-level problems
    (unreadable root, malformed config/styles/overlay) abort the audit.
    """
    root = Path(root)
    warnings: list[str] = []
    files = discover(root, config, diagnostics=warnings)

    corpus_styles = load_corpus_styles(styles_path) if styles_path else {}
    overlay = load_overlay(overlay_path) if overlay_path else None
    sidecar_by_doc = _pair_sidecars(files, root, config, warnings)

    def parse_one(
        source: SourceFile,
    ) -> tuple[str, Document | SlideDeck | None, str | None]:
        try:
            data = (root / source.path).read_bytes()
        except OSError as exc:
            return (source.path, None, f"unreadable file skipped: {source.path} ({exc})")
        try:
            if source.media_kind == "html":
                doc = parse_html(source, data)
            elif source.media_kind == "markdown":
                doc = parse_markdown(source, data)
            elif source.media_kind == "slide-manifest":
                return (source.path, parse_slide_manifest(source, data), None)
            else:
                return (source.path, None, None)
        except AuditError as exc:
            return (source.path, None, f"file skipped: {exc}")

        sidecar = dict(sidecar_by_doc.get(source.path, {}))
        sidecar.update(corpus_styles.get(source.path, {}))
        try:
            resolve_styles(doc, sidecar or None)
        except AuditError as exc:
            return (source.path, None, f"file skipped: {exc}")
        return (source.path, doc, None)

    workers = max_workers or min(DEFAULT_MAX_WORKERS, max(1, len(files)))
    if files:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parsed = list(pool.map(parse_one, files))
    else:
        parsed = []
    parsed.sort(key=lambda item: item[0])

    documents: list[Document] = []
    decks: list[SlideDeck] = []
    for _, product, warning in parsed:
        if warning:
            warnings.append(warning)
        if isinstance(product, Document):
            documents.append(product)
        elif isinstance(product, SlideDeck):
            decks.append(product)

    findings = run_rules(documents, decks, config)
    issues = classify_findings(findings, config)
    if overlay is not None:
        issues, stale = apply_annotations(issues, overlay)
        warnings.extend(stale)

    snapshot = make_snapshot(issues, files, config, created_at=created_at)
    return AuditResult(
        snapshot=snapshot,
        documents=documents,
        decks=decks,
        findings=findings,
        warnings=warnings,
    )
