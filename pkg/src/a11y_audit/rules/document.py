"""Document rules: machine-decidable checks plus human-review heuristics
over parsed HTML/Markdown trees."""

from __future__ import annotations

import re

from ..color import contrast_ratio
from ..config import Config
from ..model import (
    BLOCK_ELEMENTS,
    ContentNode,
    Document,
    normalize_ws,
    own_block_text,
    visible_text,
)
from . import RULES, SEVERITY_WARNING, Finding

_HEADINGS = ("h1", "h2", "h3", "h4", "h5", "h6")

_URL_TEXT = re.compile(r"(?:[a-z][a-z0-9+.-]*://|www\.)\S+", re.IGNORECASE)

# Autogenerated-identifier shape: long unbroken mixed-case alphanumerics.
_AUTOGEN_ID = re.compile(r"[A-Za-z0-9]{16,}")
_IMAGE_FILENAME = re.compile(
    r".+\.(?:png|jpe?g|gif|webp|svg|bmp|tiff?)", re.IGNORECASE
)

_DIAGRAM_CHARS = set("|+-/\\_<>")


def _is_diagram_char(c: str) -> bool:
    return c in _DIAGRAM_CHARS or 0x2500 <= ord(c) <= 0x257F


def _subtree_text(node: ContentNode) -> str:
    return "".join(n.text for n in node.walk() if n.element == "#text")


def _node_content_key(node: ContentNode) -> str:
    attrs = ";".join(f"{k}={v}" for k, v in sorted(node.attributes.items()))
    return f"{node.element}|{attrs}|{normalize_ws(_subtree_text(node))}"


def _snippet(node: ContentNode, limit: int = 200) -> str:
    if node.element == "#text":
        text = normalize_ws(node.text)
    elif node.element == "#root":
        text = "(document)"
    else:
        attrs = "".join(f' {k}="{v}"' for k, v in node.attributes.items())
        text = f"<{node.element}{attrs}>"
        inner = normalize_ws(visible_text(node))
        if inner:
            text += inner
    return text if len(text) <= limit else text[: limit - 1] + "…"


class _DocChecker:
    """Shared context for one document: parent links and document order."""

    def __init__(self, doc: Document):
        self.doc = doc
        self.order: dict[int, int] = {}
        self.parent: dict[int, ContentNode | None] = {id(doc.root): None}
        for i, node in enumerate(doc.root.walk()):
            self.order[id(node)] = i
            for child in node.children:
                self.parent[id(child)] = node

    def finding(
        self,
        rule_id: str,
        node: ContentNode,
        message: str,
        *,
        severity: str | None = None,
        content_key: str | None = None,
        fix_hint: str | None = None,
    ) -> Finding:
        rule = RULES[rule_id]
        sev = severity or rule.default_severity
        return Finding(
            rule_id=rule_id,
            severity=sev,
            file_path=self.doc.file.path,
            locator=node.structural_path,
            message=message,
            fix_hint=fix_hint or rule.fix_hint,
            machine_decidable=sev != "needs-human-review",
            snippet=_snippet(node),
            source_line=node.source_line,
            subject_element=node.element if node.element != "#root" else "#document",
            subject_src=node.attributes.get("src", ""),
            content_key=(
                content_key if content_key is not None else _node_content_key(node)
            ),
            order_key=(self.order[id(node)],),
        )

    def document_finding(
        self,
        rule_id: str,
        message: str,
        *,
        severity: str | None = None,
        content_key: str = "#document",
        source_line: int | None = None,
    ) -> Finding:
        rule = RULES[rule_id]
        sev = severity or rule.default_severity
        return Finding(
            rule_id=rule_id,
            severity=sev,
            file_path=self.doc.file.path,
            locator="",
            message=message,
            fix_hint=rule.fix_hint,
            machine_decidable=sev != "needs-human-review",
            snippet="(document)",
            source_line=source_line,
            subject_element="#document",
            content_key=content_key,
            order_key=(-1,),
        )


def check_headings(doc: Document, config: Config | None = None) -> list[Finding]:
    """Flag level skips, extra h1s, empty headings, and heading-free prose."""
    ctx = _DocChecker(doc)
    findings: list[Finding] = []
    headings = [n for n in doc.root.walk() if n.element in _HEADINGS]

    prev_level: int | None = None
    h1_seen = 0
    for h in headings:
        level = int(h.element[1])
        if prev_level is not None and level > prev_level + 1:
            findings.append(
                ctx.finding(
                    "heading-structure",
                    h,
                    f"heading level skips from h{prev_level} to h{level}",
                )
            )
        prev_level = level
        if level == 1:
            h1_seen += 1
            if h1_seen > 1:
                findings.append(
                    ctx.finding("heading-structure", h, "more than one h1 on the page")
                )
        if not normalize_ws(visible_text(h)):
            findings.append(ctx.finding("heading-structure", h, f"empty {h.element} heading"))

    if not headings:
        paragraphs = [
            n
            for n in doc.root.walk()
            if n.element == "p" and normalize_ws(visible_text(n))
        ]
        if len(paragraphs) > 1:
            findings.append(
                ctx.document_finding(
                    "heading-structure",
                    "document has paragraphs but no headings",
                    severity=SEVERITY_WARNING,
                    content_key="#document|no-headings",
                )
            )
    return findings


def check_links(doc: Document, config: Config | None = None) -> list[Finding]:
    """Flag ambiguous, raw-URL, or empty link text; warn on same text with
    different destinations."""
    cfg = config or Config()
    ctx = _DocChecker(doc)
    ambiguous = {normalize_ws(p).casefold() for p in cfg.ambiguous_link_text}
    findings: list[Finding] = []

    described: list[tuple[str, str, ContentNode]] = []
    for node in doc.root.walk():
        if node.element != "a" or "href" not in node.attributes:
            continue
        text = normalize_ws(visible_text(node))
        href = node.attributes.get("href", "").strip()
        folded = text.casefold()
        if not text:
            findings.append(
                ctx.finding(
                    "link-text", node, "link has no discernible text (no text or image alt)"
                )
            )
        elif folded in ambiguous:
            findings.append(
                ctx.finding("link-text", node, f'ambiguous link text "{text}"')
            )
        elif folded == href.casefold() or _URL_TEXT.fullmatch(text):
            findings.append(
                ctx.finding("link-text", node, "link text is a raw URL")
            )
        else:
            described.append((folded, href, node))

    first_href: dict[str, tuple[str, str]] = {}
    flagged_texts: set[str] = set()
    for folded, href, node in described:
        if folded not in first_href:
            first_href[folded] = (href, normalize_ws(visible_text(node)))
            continue
        href0, original_text = first_href[folded]
        if href != href0 and folded not in flagged_texts:
            flagged_texts.add(folded)
            findings.append(
                ctx.finding(
                    "link-text",
                    node,
                    f'link text "{original_text}" points to different destinations on this page',
                    severity=SEVERITY_WARNING,
                )
            )
    return findings


def check_alt_text(doc: Document, config: Config | None = None) -> list[Finding]:
    """Missing alt is an error; alt="" is explicit decorative marking and
    passes; very long alt draws a warning."""
    cfg = config or Config()
    ctx = _DocChecker(doc)
    findings: list[Finding] = []
    for node in doc.root.walk():
        if node.element != "img":
            continue
        if "alt" not in node.attributes:
            findings.append(ctx.finding("alt-missing", node, "image has no alt attribute"))
            continue
        alt = node.attributes["alt"]
        if len(alt) > cfg.thresholds.alt_length:
            findings.append(
                ctx.finding(
                    "alt-length",
                    node,
                    f"alt text is {len(alt)} characters "
                    f"(over the {cfg.thresholds.alt_length}-character guideline)",
                )
            )
    return findings


def check_suspicious_alt(doc: Document, config: Config | None = None) -> list[Finding]:
    """Heuristic: alt text that looks autogenerated (identifier soup, file
    names, or an echo of the src)."""
    ctx = _DocChecker(doc)
    findings: list[Finding] = []
    for node in doc.root.walk():
        if node.element != "img":
            continue
        alt = node.attributes.get("alt", "")
        if not alt:
            continue
        basename = node.attributes.get("src", "").rsplit("/", 1)[-1]
        message = None
        if (
            _AUTOGEN_ID.fullmatch(alt)
            and any(c.isupper() for c in alt)
            and any(c.islower() for c in alt)
        ):
            message = "alt text looks like an autogenerated identifier"
        elif _IMAGE_FILENAME.fullmatch(alt.strip()):
            message = f'alt text is a file name ("{alt.strip()}")'
        elif basename and alt.strip().casefold() == basename.casefold():
            message = "alt text merely repeats the image file name"
        if message:
            findings.append(ctx.finding("alt-suspicious", node, message))
    return findings


def check_contrast(doc: Document, config: Config | None = None) -> list[Finding]:
    """Compare resolved text colors against the minimum contrast ratios.

    Only nodes with resolved styles participate; unknown-style nodes are
    skipped outright rather than guessed at.
    """
    cfg = config or Config()
    ctx = _DocChecker(doc)
    th = cfg.thresholds
    findings: list[Finding] = []
    for node in doc.root.walk():
        style = doc.styles.get(node.structural_path)
        if style is None or style.confidence == "unknown":
            continue
        if not any(c.element == "#text" and c.text.strip() for c in node.children):
            continue
        large = style.font_size_pt >= th.large_pt or (
            style.font_size_pt >= th.large_bold_pt and style.bold
        )
        required = th.contrast_large if large else th.contrast_normal
        ratio = contrast_ratio(style.foreground, style.background)
        if ratio < required:
            size_desc = f"{style.font_size_pt:g}pt{' bold' if style.bold else ''}"
            findings.append(
                ctx.finding(
                    "contrast-minimum",
                    node,
                    f"contrast ratio {ratio:.2f} is below the required "
                    f"{required:g}:1 for {size_desc} text",
                )
            )
    return findings


def check_visual_language(doc: Document, config: Config | None = None) -> list[Finding]:
    """Heuristic: phrasing that assumes the reader can see the page."""
    cfg = config or Config()
    ctx = _DocChecker(doc)
    phrases = sorted(cfg.visual_language_phrases)
    findings: list[Finding] = []
    for node in doc.root.walk():
        if node.element not in BLOCK_ELEMENTS:
            continue
        text = normalize_ws(own_block_text(node)).casefold()
        if not text:
            continue
        for phrase in phrases:
            if phrase.casefold() in text:
                findings.append(
                    ctx.finding(
                        "visual-language",
                        node,
                        f'phrase "{phrase}" assumes the reader can see the page',
                    )
                )
                break
    return findings


def check_images_of_text(doc: Document, config: Config | None = None) -> list[Finding]:
    """Heuristic: image file names or alt text suggesting a picture of text."""
    cfg = config or Config()
    ctx = _DocChecker(doc)
    tokens = [t.casefold() for t in cfg.image_of_text_tokens]
    findings: list[Finding] = []
    for node in doc.root.walk():
        if node.element != "img":
            continue
        basename = node.attributes.get("src", "").rsplit("/", 1)[-1].casefold()
        alt = node.attributes.get("alt", "").casefold()
        for token in tokens:
            if token in basename or token in alt:
                findings.append(
                    ctx.finding(
                        "image-of-text",
                        node,
                        f'image looks like a picture of text ("{token}" in its name or alt)',
                    )
                )
                break
    return findings


def check_ascii_diagrams(doc: Document, config: Config | None = None) -> list[Finding]:
    """Heuristic: multi-line pre/code blocks that draw boxes and arrows."""
    cfg = config or Config()
    ctx = _DocChecker(doc)
    density_threshold = cfg.thresholds.ascii_density
    findings: list[Finding] = []
    for node in doc.root.walk():
        if node.element == "pre":
            pass
        elif node.element == "code":
            parent = ctx.parent.get(id(node))
            if parent is not None and parent.element == "pre":
                continue
        else:
            continue
        text = _subtree_text(node)
        lines = text.rstrip("\n").split("\n")
        if len(lines) < 3:
            continue
        non_ws = [c for c in text if not c.isspace()]
        if not non_ws:
            continue
        density = sum(1 for c in non_ws if _is_diagram_char(c)) / len(non_ws)
        if density <= density_threshold:
            continue
        # Require vertical alignment: a bar or box-drawing char repeating in
        # the same column across lines, the signature of a drawn figure.
        column_hits: dict[int, int] = {}
        for line in lines:
            for i, c in enumerate(line):
                if c == "|" or 0x2500 <= ord(c) <= 0x257F:
                    column_hits[i] = column_hits.get(i, 0) + 1
        if not any(count >= 2 for count in column_hits.values()):
            continue
        findings.append(
            ctx.finding(
                "ascii-diagram",
                node,
                f"code block looks like an ASCII diagram "
                f"({density:.0%} drawing characters over {len(lines)} lines)",
            )
        )
    return findings


def check_document_validity(doc: Document, config: Config | None = None) -> list[Finding]:
    """HTML validity class: lang, unique ids, exactly one main landmark,
    headed data tables, and recovered parse errors."""
    if doc.file.media_kind != "html":
        return []
    ctx = _DocChecker(doc)
    findings: list[Finding] = []

    html_nodes = [n for n in doc.root.walk() if n.element == "html"]
    if not html_nodes:
        findings.append(
            ctx.document_finding(
                "doc-lang", "document has no html element declaring a language"
            )
        )
    elif not html_nodes[0].attributes.get("lang", "").strip():
        findings.append(
            ctx.finding(
                "doc-lang",
                html_nodes[0],
                "html element has no lang attribute",
                content_key="html|lang-missing",
            )
        )

    seen_ids: dict[str, ContentNode] = {}
    for node in doc.root.walk():
        value = node.attributes.get("id")
        if not value:
            continue
        if value in seen_ids:
            findings.append(
                ctx.finding("duplicate-id", node, f'duplicate id "{value}"')
            )
        else:
            seen_ids[value] = node

    mains = [
        n
        for n in doc.root.walk()
        if n.element == "main" or n.attributes.get("role", "").strip().lower() == "main"
    ]
    if not mains:
        findings.append(
            ctx.document_finding(
                "landmark-main",
                "page has no main landmark",
                content_key="#document|no-main",
            )
        )
    else:
        for extra in mains[1:]:
            findings.append(
                ctx.finding("landmark-main", extra, "page has more than one main landmark")
            )

    for table in doc.root.walk():
        if table.element != "table":
            continue
        rows: list[ContentNode] = []
        has_th = False

        def scan(n: ContentNode) -> None:
            nonlocal has_th
            for child in n.children:
                if child.element == "table":
                    continue  # nested tables are audited on their own
                if child.element == "tr":
                    rows.append(child)
                if child.element == "th":
                    has_th = True
                scan(child)

        scan(table)
        max_cols = max(
            (
                sum(1 for c in row.children if c.element in ("td", "th"))
                for row in rows
            ),
            default=0,
        )
        if len(rows) > 1 and max_cols > 1 and not has_th:
            findings.append(
                ctx.finding(
                    "table-headers",
                    table,
                    f"data table ({len(rows)} rows x {max_cols} columns) has no header cells",
                )
            )

    for diag in doc.parse_diagnostics:
        findings.append(
            ctx.document_finding(
                "html-parse",
                f"recovered parse error: {diag.message}",
                content_key=f"#diagnostic|{diag.message}",
                source_line=diag.source_line,
            )
        )
    return findings


def check_video_captions(doc: Document, config: Config | None = None) -> list[Finding]:
    """Videos must carry a captions/subtitles track; accuracy is a human call."""
    ctx = _DocChecker(doc)
    findings: list[Finding] = []
    for node in doc.root.walk():
        if node.element != "video":
            continue
        has_captions = any(
            child.element == "track"
            # A kind-less track defaults to subtitles.
            and child.attributes.get("kind", "subtitles").strip().lower()
            in ("captions", "subtitles")
            for child in node.children
        )
        if not has_captions:
            findings.append(
                ctx.finding("video-captions", node, "video has no captions track")
            )
    return findings


ALL_DOCUMENT_CHECKS = [
    check_headings,
    check_links,
    check_alt_text,
    check_suspicious_alt,
    check_contrast,
    check_visual_language,
    check_images_of_text,
    check_ascii_diagrams,
    check_document_validity,
    check_video_captions,
]


def check_document(doc: Document, config: Config) -> list[Finding]:
    findings: list[Finding] = []
    for check in ALL_DOCUMENT_CHECKS:
        findings.extend(check(doc, config))
    return findings
