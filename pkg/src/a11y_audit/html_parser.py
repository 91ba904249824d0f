"""Tolerant HTML parsing into the uniform ContentNode tree.

Built on ``html.parser`` with error recovery in the tree builder: unclosed
elements are implicitly closed (silently for elements HTML itself allows to
be left open, with a diagnostic otherwise), stray end tags and duplicate
attributes are recorded as diagnostics, and a root is always produced. No
html/head/body skeleton is synthesized; the tree mirrors what the file says.
"""

from __future__ import annotations

from html.parser import HTMLParser

from .errors import AuditError
from .model import (
    ContentNode,
    Document,
    ParseDiagnostic,
    SourceFile,
    assign_structural_paths,
    normalize_ws,
    visible_text,
)

VOID_ELEMENTS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}

# Elements the HTML standard lets authors leave unclosed; closing them
# implicitly is recovery, not an error.
_OPTIONAL_END = {
    "p", "li", "dt", "dd", "td", "th", "tr", "thead", "tbody", "tfoot",
    "option", "optgroup", "caption", "colgroup", "html", "head", "body",
}

_BLOCK_STARTS_CLOSING_P = {
    "address", "article", "aside", "blockquote", "details", "div", "dl",
    "fieldset", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hr", "main", "nav", "ol", "p", "pre", "section",
    "table", "ul",
}


_TABLE_SECTIONS = ("thead", "tbody", "tfoot")


def _implicitly_closed_by(open_tag: str, incoming: str) -> bool:
    """True when a start tag for ``incoming`` implies the end of ``open_tag``."""
    if open_tag == "p":
        return incoming in _BLOCK_STARTS_CLOSING_P
    if open_tag == "li":
        return incoming == "li"
    if open_tag in ("dt", "dd"):
        return incoming in ("dt", "dd")
    if open_tag in ("td", "th"):
        return incoming in ("td", "th", "tr") or incoming in _TABLE_SECTIONS
    if open_tag == "tr":
        return incoming == "tr" or incoming in _TABLE_SECTIONS
    if open_tag in _TABLE_SECTIONS:
        return incoming in _TABLE_SECTIONS
    if open_tag in ("caption", "colgroup"):
        return incoming in ("caption", "colgroup", "tr", "td", "th") or incoming in _TABLE_SECTIONS
    if open_tag == "option":
        return incoming in ("option", "optgroup")
    return False


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = ContentNode(element="#root")
        self.stack: list[ContentNode] = [self.root]
        self.diagnostics: list[ParseDiagnostic] = []
        self._text_buffer: list[str] = []
        self._text_line: int | None = None

    # -- text buffering -----------------------------------------------------

    def _flush_text(self) -> None:
        if not self._text_buffer:
            return
        text = "".join(self._text_buffer)
        self._text_buffer = []
        node = ContentNode(element="#text", text=text, source_line=self._text_line)
        self.stack[-1].children.append(node)
        self._text_line = None

    def handle_data(self, data: str) -> None:
        if not data:
            return
        if not self._text_buffer:
            self._text_line = self.getpos()[0]
        self._text_buffer.append(data)

    # -- tags ----------------------------------------------------------------

    def _diag(self, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(message=message, source_line=self.getpos()[0]))

    def _make_attrs(self, tag: str, attrs: list[tuple[str, str | None]]) -> dict[str, str]:
        out: dict[str, str] = {}
        for name, value in attrs:
            if name in out:
                self._diag(f"duplicate attribute {name!r} on <{tag}>; first value kept")
                continue
            out[name] = "" if value is None else value
        return out

    def _open(self, tag: str, attrs: list[tuple[str, str | None]], push: bool) -> None:
        self._flush_text()
        while len(self.stack) > 1 and _implicitly_closed_by(self.stack[-1].element, tag):
            self.stack.pop()
        node = ContentNode(
            element=tag,
            attributes=self._make_attrs(tag, attrs),
            source_line=self.getpos()[0],
        )
        self.stack[-1].children.append(node)
        if push:
            self.stack.append(node)

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        self._open(tag, attrs, push=tag not in VOID_ELEMENTS)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        self._open(tag, attrs, push=False)

    def handle_endtag(self, tag: str) -> None:
        self._flush_text()
        if tag in VOID_ELEMENTS:
            return
        open_tags = [node.element for node in self.stack[1:]]
        if tag not in open_tags:
            self._diag(f"unmatched closing tag </{tag}>")
            return
        while self.stack[-1].element != tag:
            dangling = self.stack.pop()
            if dangling.element not in _OPTIONAL_END:
                self._diag(f"unclosed <{dangling.element}> implicitly closed by </{tag}>")
        self.stack.pop()

    def finish(self) -> None:
        self.close()
        self._flush_text()
        while len(self.stack) > 1:
            dangling = self.stack.pop()
            if dangling.element not in _OPTIONAL_END:
                self.diagnostics.append(
                    ParseDiagnostic(
                        message=f"unclosed <{dangling.element}> at end of document",
                        source_line=dangling.source_line,
                    )
                )

    # Comments, doctype, processing instructions: not part of the audit model.
    def handle_comment(self, data: str) -> None:
        pass

    def handle_decl(self, decl: str) -> None:
        pass

    def handle_pi(self, data: str) -> None:
        pass


def decode_utf8(file_path: str, data: bytes) -> str:
    """UTF-8 decode with BOM tolerance; anything else is an execution error."""
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise AuditError(f"{file_path}: file is not valid UTF-8 ({exc})") from exc


def parse_html(file: SourceFile, data: bytes) -> Document:
    """Parse HTML bytes into a Document, recovering from malformed markup."""
    text = decode_utf8(file.path, data)
    builder = _TreeBuilder()
    builder.feed(text)
    builder.finish()
    root = builder.root
    assign_structural_paths(root)

    lang: str | None = None
    title: str | None = None
    for node in root.walk():
        if lang is None and node.element == "html":
            value = node.attributes.get("lang", "").strip()
            lang = value or None
        if title is None and node.element == "title":
            text_value = normalize_ws(visible_text(node))
            title = text_value or None
        if lang is not None and title is not None:
            break

    return Document(
        file=file,
        root=root,
        title=title,
        lang=lang,
        parse_diagnostics=builder.diagnostics,
    )
