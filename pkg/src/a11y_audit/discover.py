"""Corpus walking: find auditable files and classify them by media kind."""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

from .config import Config, glob_match
from .errors import AuditError
from .model import SourceFile


def media_kind_for(path: str, config: Config) -> str:
    """Media kind from the file name's (possibly double) extension.

    Longer extensions win, so ``deck.slides.json`` is a slide manifest, not
    a generic ``.json`` file. Config ``media_kinds`` entries extend or
    override the defaults.
    """
    name = path.rsplit("/", 1)[-1].lower()
    best = ""
    kind = "other"
    for ext, mapped in config.media_kinds.items():
        if name.endswith(ext) and len(ext) > len(best):
            best = ext
            kind = mapped
    return kind


def discover(
    root: Path,
    config: Config,
    diagnostics: list[str] | None = None,
) -> list[SourceFile]:
    """Walk ``root`` and return all non-ignored files, path-sorted.

    Unreadable individual files or subdirectories are skipped and noted in
    ``diagnostics``; an unreadable or missing root is an execution error.
    """
    root = Path(root)
    try:
        if not root.is_dir():
            raise AuditError(f"audit root is not a directory: {root}")
        os.listdir(root)
    except OSError as exc:
        raise AuditError(f"audit root is not readable: {root} ({exc})") from exc

    def note(message: str) -> None:
        if diagnostics is not None:
            diagnostics.append(message)

    found: list[SourceFile] = []
    for dirpath, dirnames, filenames in os.walk(
        root, onerror=lambda exc: note(f"unreadable directory skipped: {exc}")
    ):
        rel_dir = Path(dirpath).relative_to(root).as_posix()
        prefix = "" if rel_dir == "." else f"{rel_dir}/"
        # Prune ignored directories so their contents are never visited.
        dirnames[:] = sorted(
            d
            for d in dirnames
            if not any(glob_match(g, f"{prefix}{d}/") for g in config.ignore_globs)
        )
        for filename in sorted(filenames):
            rel = f"{prefix}{filename}"
            if any(glob_match(g, rel) for g in config.ignore_globs):
                continue
            full = Path(dirpath) / filename
            try:
                data = full.read_bytes()
            except OSError as exc:
                note(f"unreadable file skipped: {rel} ({exc})")
                continue
            found.append(
                SourceFile(
                    path=rel,
                    media_kind=media_kind_for(rel, config),
                    byte_size=len(data),
                    content_hash=hashlib.sha256(data).hexdigest(),
                )
            )

    found.sort(key=lambda f: f.path)
    return found
