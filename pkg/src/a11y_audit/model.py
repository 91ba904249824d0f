"""Core data model: source files, parsed content trees, and slide decks.

One uniform ``ContentNode`` tree serves both HTML and Markdown so a single
rule engine can audit either. Slide decks keep their own small geometry
model since slides are positioned, not flowed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

MEDIA_KINDS = ("html", "markdown", "slide-manifest", "style-sidecar", "other")


@dataclass(frozen=True)
class SourceFile:
    """One discovered corpus file, identified by its normalized relative path."""

    path: str
    media_kind: str
    byte_size: int
    content_hash: str


@dataclass
class ContentNode:
    """Element or text node in the uniform parsed tree.

    ``element`` is a lowercase tag name or a pseudo-name (``#root``,
    ``#text``). Text nodes carry ``text`` and never have attributes or
    children. ``structural_path`` looks like ``/html/body/p[3]/img`` with
    1-based ordinals appended only when same-named siblings exist.
    """

    element: str
    attributes: dict[str, str] = field(default_factory=dict)
    text: str = ""
    children: list["ContentNode"] = field(default_factory=list)
    structural_path: str = ""
    source_line: int | None = None

    def walk(self) -> Iterator["ContentNode"]:
        """Yield this node and all descendants in document (preorder) order."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class ParseDiagnostic:
    message: str
    source_line: int | None = None


@dataclass(frozen=True)
class StyleInfo:
    """Resolved text colors and sizing for one node.

    ``confidence`` is "static" for values read out of inline styles or
    same-document style blocks, "computed" when a computed-style sidecar
    supplied them. Nodes with no resolvable style simply have no entry in
    ``Document.styles`` (confidence "unknown"); the contrast rule skips them.
    """

    foreground: tuple[int, int, int]
    background: tuple[int, int, int]
    font_size_pt: float
    bold: bool
    confidence: str


@dataclass
class Document:
    """A parsed HTML or Markdown file plus per-node style information."""

    file: SourceFile
    root: ContentNode
    title: str | None = None
    lang: str | None = None
    parse_diagnostics: list[ParseDiagnostic] = field(default_factory=list)
    styles: dict[str, StyleInfo] = field(default_factory=dict)

    def style_for(self, structural_path: str) -> StyleInfo | None:
        return self.styles.get(structural_path)


@dataclass(frozen=True)
class BBox:
    x: float
    y: float
    w: float
    h: float


@dataclass
class SlideElement:
    id: str
    kind: str  # text | image | shape | group
    bbox: BBox
    visible: bool = True
    alt: str | None = None
    text: str | None = None
    children: list[str] = field(default_factory=list)


@dataclass
class Slide:
    index: int
    elements: list[SlideElement]
    reading_order: list[str] | None = None

    def element_by_id(self, element_id: str) -> SlideElement:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise KeyError(element_id)

    def top_level_ids(self) -> list[str]:
        """Ids of elements that are not a child of any group, in manifest order."""
        child_ids = {cid for el in self.elements for cid in el.children}
        return [el.id for el in self.elements if el.id not in child_ids]


@dataclass
class SlideDeck:
    source: SourceFile
    slide_width: float
    slide_height: float
    slides: list[Slide]


def assign_structural_paths(root: ContentNode) -> None:
    """Fill in structural_path for every node under (and including) root.

    The root path is empty; each child extends its parent by one ``/name``
    segment, with ``[n]`` appended only when the parent has more than one
    same-named child.
    """
    root.structural_path = ""

    def visit(node: ContentNode) -> None:
        counts = Counter(child.element for child in node.children)
        seen: dict[str, int] = {}
        for child in node.children:
            n = seen.get(child.element, 0) + 1
            seen[child.element] = n
            segment = child.element if counts[child.element] == 1 else f"{child.element}[{n}]"
            child.structural_path = f"{node.structural_path}/{segment}"
            visit(child)

    visit(root)


# Subtrees whose text a reader never hears.
_INVISIBLE_ELEMENTS = {"script", "style", "template", "head"}


def visible_text(node: ContentNode) -> str:
    """Concatenated text a screen reader would announce under ``node``.

    Image alt text participates (it is announced in place of the image);
    script/style/head subtrees do not.
    """
    parts: list[str] = []

    def visit(n: ContentNode) -> None:
        if n.element in _INVISIBLE_ELEMENTS:
            return
        if n.element == "#text":
            parts.append(n.text)
            return
        if n.element == "img":
            alt = n.attributes.get("alt")
            if alt:
                parts.append(f" {alt} ")
            return
        for child in n.children:
            visit(child)

    visit(node)
    return "".join(parts)


def normalize_ws(text: str) -> str:
    """Collapse all runs of whitespace to single spaces and trim."""
    return " ".join(text.split())


BLOCK_ELEMENTS = {
    "p", "h1", "h2", "h3", "h4", "h5", "h6", "li", "td", "th",
    "blockquote", "figcaption", "caption", "dt", "dd", "pre",
}


def own_block_text(node: ContentNode) -> str:
    """Visible text of a block element, excluding nested block elements.

    Keeps per-block phrase matching from double-reporting text that a
    nested block (e.g. a ``p`` inside an ``li``) will be checked for itself.
    """
    parts: list[str] = []

    def visit(n: ContentNode, top: bool) -> None:
        if not top and (n.element in BLOCK_ELEMENTS or n.element in _INVISIBLE_ELEMENTS):
            return
        if n.element == "#text":
            parts.append(n.text)
            return
        if n.element == "img":
            alt = n.attributes.get("alt")
            if alt:
                parts.append(f" {alt} ")
            return
        for child in n.children:
            visit(child, False)

    visit(node, True)
    return "".join(parts)
