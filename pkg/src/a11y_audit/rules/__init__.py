"""Rule catalog and engine.

Every rule is a pure function of parsed input plus config, so evaluation
order never changes results; ``run_rules`` sorts its output and is
byte-stable across runs. Severities:

* ``error`` / ``warning`` findings are machine-decidable and may gate CI;
* ``needs-human-review`` findings come from heuristics (visual-language
  phrasing, image-of-text tokens, ASCII-diagram shape, suspicious alt text,
  geometric reading order) and never gate. A human confirms or rejects
  them through the annotation overlay.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..config import Config
from ..model import Document, SlideDeck

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"
SEVERITY_HUMAN = "needs-human-review"


@dataclass(frozen=True)
class Rule:
    id: str
    title: str
    default_severity: str
    wcag_ref: str | None
    applies_to: str  # document | deck
    machine_decidable: bool
    fix_hint: str


@dataclass
class Finding:
    """One rule hit at one location.

    ``locator`` is a structural path for documents or a ``slide[N]`` /
    ``slide[N]/element[id]`` locator for decks. ``content_key`` and
    ``order_key`` are internal plumbing for fingerprinting (content
    identity and in-document collision ordering); they are not serialized.
    """

    rule_id: str
    severity: str
    file_path: str
    locator: str
    message: str
    fix_hint: str
    machine_decidable: bool
    snippet: str = ""
    source_line: int | None = None
    subject_element: str = ""
    subject_src: str = ""
    content_key: str = ""
    order_key: tuple = field(default=(), compare=False)


def _rule(
    rule_id: str,
    title: str,
    severity: str,
    wcag_ref: str | None,
    applies_to: str,
    fix_hint: str,
) -> Rule:
    return Rule(
        id=rule_id,
        title=title,
        default_severity=severity,
        wcag_ref=wcag_ref,
        applies_to=applies_to,
        machine_decidable=severity != SEVERITY_HUMAN,
        fix_hint=fix_hint,
    )


_RULE_LIST = [
    _rule(
        "heading-structure", "Headings form a proper outline", SEVERITY_ERROR, "1.3.1",
        "document", "Use heading levels in order without skipping and keep a single h1.",
    ),
    _rule(
        "link-text", "Links have descriptive text", SEVERITY_ERROR, "2.4.4",
        "document", "Rewrite the link text to describe its destination and purpose.",
    ),
    _rule(
        "alt-missing", "Images have alt text", SEVERITY_ERROR, "1.1.1",
        "document", 'Add a concise alt describing the image, or alt="" if purely decorative.',
    ),
    _rule(
        "alt-length", "Alt text is concise", SEVERITY_WARNING, None,
        "document", "Move long descriptions into nearby text or a caption; keep alt brief.",
    ),
    _rule(
        "alt-suspicious", "Alt text is not autogenerated", SEVERITY_HUMAN, "1.1.1",
        "document", "Replace the autogenerated identifier with a meaningful description.",
    ),
    _rule(
        "contrast-minimum", "Text meets minimum contrast", SEVERITY_ERROR, "1.4.3",
        "document", "Adjust foreground or background color to reach the required ratio.",
    ),
    _rule(
        "visual-language", "Language does not assume sight", SEVERITY_HUMAN, "1.3.3",
        "document", "Reword so the sentence works without seeing the page (name the thing).",
    ),
    _rule(
        "image-of-text", "No images of text", SEVERITY_HUMAN, "1.4.5",
        "document", "Provide the underlying text directly instead of a picture of it.",
    ),
    _rule(
        "ascii-diagram", "No ASCII-art figures", SEVERITY_HUMAN, None,
        "document", "Provide a structured alternative (list or table) or a described image.",
    ),
    _rule(
        "doc-lang", "Document declares a language", SEVERITY_ERROR, "3.1.1",
        "document", 'Add a lang attribute to the html element (e.g. lang="en").',
    ),
    _rule(
        "landmark-main", "Exactly one main landmark", SEVERITY_ERROR, None,
        "document", "Wrap the primary content in exactly one main landmark.",
    ),
    _rule(
        "duplicate-id", "Element ids are unique", SEVERITY_ERROR, "4.1.1",
        "document", "Make id values unique within the page.",
    ),
    _rule(
        "table-headers", "Data tables have header cells", SEVERITY_ERROR, "1.3.1",
        "document", "Mark header cells with th so the table is navigable non-visually.",
    ),
    _rule(
        "video-captions", "Videos have caption tracks", SEVERITY_ERROR, "1.2.2",
        "document", 'Add a captions track (<track kind="captions" src=...>) to the video.',
    ),
    _rule(
        "html-parse", "Markup parses cleanly", SEVERITY_WARNING, None,
        "document", "Fix the markup so the document parses without recovery.",
    ),
    _rule(
        "slide-reading-order", "Slide reading order matches layout", SEVERITY_HUMAN, "1.3.2",
        "deck", "Reorder elements so assistive tech announces the slide in visual order.",
    ),
    _rule(
        "slide-offcanvas", "No off-slide elements", SEVERITY_ERROR, None,
        "deck", "Delete the off-slide element or move it back onto the slide.",
    ),
    _rule(
        "slide-invisible-in-order", "No hidden elements in reading order", SEVERITY_ERROR, None,
        "deck", "Remove hidden elements from the reading order, or make them visible.",
    ),
    _rule(
        "slide-group-alt", "Groups of graphics have alt text", SEVERITY_HUMAN, "1.1.1",
        "deck", "Add alt text to the group describing what the grouped graphics convey.",
    ),
]

RULES: dict[str, Rule] = {rule.id: rule for rule in _RULE_LIST}

HEURISTIC_RULE_IDS = frozenset(r.id for r in _RULE_LIST if not r.machine_decidable)


def rule_catalog_dict() -> list[dict]:
    """Machine-readable catalog, as the CLI ``rules`` command emits it."""
    return [
        {
            "id": rule.id,
            "title": rule.title,
            "default_severity": rule.default_severity,
            "wcag_ref": rule.wcag_ref,
            "applies_to": rule.applies_to,
        }
        for rule in _RULE_LIST
    ]


def run_rules(
    documents: list[Document],
    decks: list[SlideDeck],
    config: Config,
) -> list[Finding]:
    """Evaluate all enabled rules over all inputs, deterministically.

    Config severity overrides apply to machine-decidable findings only
    (validation rejects overrides on human-review rules). Output is sorted
    by (file_path, locator, rule_id) and is identical across repeated runs,
    whatever order the inputs arrive in.
    """
    from . import deck as deck_rules
    from . import document as document_rules

    findings: list[Finding] = []
    for doc in documents:
        findings.extend(document_rules.check_document(doc, config))
    for deck_obj in decks:
        findings.extend(deck_rules.check_deck(deck_obj, config))

    out: list[Finding] = []
    for finding in findings:
        settings = config.rule_settings(finding.rule_id)
        if not settings.enabled:
            continue
        if settings.severity_override is not None and finding.machine_decidable:
            finding = replace(finding, severity=settings.severity_override)
        out.append(finding)

    out.sort(key=lambda f: (f.file_path, f.locator, f.rule_id, f.message, f.snippet))
    return out
