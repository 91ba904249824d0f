"""Shared fixtures: corpus paths, parse helpers, and the planted-issue table."""

from __future__ import annotations

import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from a11y_audit.html_parser import parse_html
from a11y_audit.markdown_parser import parse_markdown
from a11y_audit.model import SourceFile

CORPORA = Path(__file__).parent / "corpora"
CLEAN_CORPUS = CORPORA / "clean"
PLANTED_CORPUS = CORPORA / "planted"

# Ground truth for the planted corpus: every (rule_id, file, locator) triple
# the audit must report, each exactly once.
PLANTED_ISSUES = [
    ("alt-suspicious", "html/alt-suspicious.html", "/html/body/main/img[1]"),
    ("alt-suspicious", "html/alt-suspicious.html", "/html/body/main/img[2]"),
    ("alt-missing", "html/alt.html", "/html/body/main/img[1]"),
    ("alt-length", "html/alt.html", "/html/body/main/img[2]"),
    ("ascii-diagram", "html/ascii.html", "/html/body/main/pre"),
    ("contrast-minimum", "html/contrast.html", "/html/body/main/p[1]"),
    ("heading-structure", "html/headings.html", "/html/body/main/h3"),
    ("image-of-text", "html/image-of-text.html", "/html/body/main/img"),
    ("link-text", "html/link-dup.html", "/html/body/main/p[2]/a"),
    ("link-text", "html/links.html", "/html/body/main/p[1]/a"),
    ("link-text", "html/links.html", "/html/body/main/p[2]/a"),
    ("html-parse", "html/parse.html", ""),
    ("heading-structure", "html/two-h1.html", "/html/body/main/h1[2]"),
    ("doc-lang", "html/validity.html", "/html"),
    ("landmark-main", "html/validity.html", ""),
    ("duplicate-id", "html/validity.html", "/html/body/div/p[2]"),
    ("table-headers", "html/validity.html", "/html/body/div/table"),
    ("video-captions", "html/video.html", "/html/body/main/video"),
    ("visual-language", "html/visual-language.html", "/html/body/main/p[1]"),
    ("heading-structure", "md/noheadings.md", ""),
    ("heading-structure", "md/plain.md", "/h3"),
    ("link-text", "md/plain.md", "/p[1]/a"),
    ("slide-reading-order", "slides/lecture03.slides.json", "slide[1]/element[body1]"),
    ("slide-invisible-in-order", "slides/lecture03.slides.json", "slide[2]/element[leftover]"),
    ("slide-offcanvas", "slides/lecture03.slides.json", "slide[2]/element[offstage]"),
    ("slide-group-alt", "slides/lecture03.slides.json", "slide[3]/element[stack3]"),
    ("slide-reading-order", "slides/recitation02.slides.json", "slide[1]"),
]


def html_doc(markup: str, path: str = "test.html"):
    file = SourceFile(path=path, media_kind="html", byte_size=len(markup), content_hash="x")
    return parse_html(file, markup.encode("utf-8"))


def md_doc(markup: str, path: str = "test.md"):
    file = SourceFile(path=path, media_kind="markdown", byte_size=len(markup), content_hash="x")
    return parse_markdown(file, markup.encode("utf-8"))


@pytest.fixture
def clean_corpus() -> Path:
    return CLEAN_CORPUS


@pytest.fixture
def planted_corpus() -> Path:
    return PLANTED_CORPUS


def make_edited_planted(dst: Path) -> None:
    """Copy the planted corpus and apply the longitudinal edit: three plants
    removed (one by deleting a file, two by fixing content) and two added
    (one in an existing file, one new file)."""
    shutil.copytree(PLANTED_CORPUS, dst)

    (dst / "html/two-h1.html").unlink()  # removes the second-h1 plant

    headings = dst / "html/headings.html"
    headings.write_text(
        headings.read_text(encoding="utf-8").replace(
            "<h3>Local variables</h3>", "<h2>Local variables</h2>"
        ),
        encoding="utf-8",
    )

    alt = dst / "html/alt.html"
    alt.write_text(
        alt.read_text(encoding="utf-8").replace(
            '<img src="media/pipeline.png">',
            '<img src="media/pipeline.png" alt="Pipeline stages: scan, parse, evaluate">',
        ),
        encoding="utf-8",
    )

    links = dst / "html/links.html"
    links.write_text(
        links.read_text(encoding="utf-8").replace(
            "</main>", '<img src="media/new-figure.png">\n  </main>'
        ),
        encoding="utf-8",
    )

    (dst / "md/extra.md").write_text(
        "# Extra Practice\n\n"
        "Grab the rubric: [click here](https://courses.example.edu/rubric).\n",
        encoding="utf-8",
    )


def run_cli(*args: str, env: dict | None = None, cwd: Path | None = None):
    """Run the CLI in a subprocess; returns CompletedProcess with text output.

    Prepends src/ to PYTHONPATH so the suite also runs from a fresh checkout
    without an installed package.
    """
    import os

    src = str(Path(__file__).resolve().parents[1] / "src")
    full_env = dict(os.environ)
    existing = full_env.get("PYTHONPATH")
    full_env["PYTHONPATH"] = f"{src}{os.pathsep}{existing}" if existing else src
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "a11y_audit", *args],
        capture_output=True,
        text=True,
        env=full_env,
        cwd=cwd,
    )
