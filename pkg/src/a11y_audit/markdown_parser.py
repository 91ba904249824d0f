"""Markdown parsing into the same ContentNode tree the HTML parser builds.

CommonMark (plus tables) via markdown-it-py, mapped onto HTML-equivalent
elements: headings to h1-h6, links to a[href], images to img[src][alt],
fenced/indented code to pre/code, tables to table/tr/th/td. Markdown images
always carry an alt attribute; ``![](x.png)`` yields alt="" (an explicit
decorative marker), never a missing attribute.

Raw HTML embedded in Markdown is outside this model and is skipped.
"""

from __future__ import annotations

from markdown_it import MarkdownIt
from markdown_it.token import Token

from .model import (
    ContentNode,
    Document,
    SourceFile,
    assign_structural_paths,
    normalize_ws,
    visible_text,
)
from .html_parser import decode_utf8

_SKIPPED_TOKENS = {"html_block", "html_inline"}


def _parser() -> MarkdownIt:
    return MarkdownIt("commonmark").enable("table")


def _line_of(token: Token, fallback: int | None) -> int | None:
    if token.map:
        return token.map[0] + 1
    return fallback


def _flatten_alt(token: Token) -> str:
    """Alt text of an image token: the flattened text of its inline children."""
    if not token.children:
        return token.content or ""
    parts: list[str] = []

    def visit(tokens: list[Token]) -> None:
        for t in tokens:
            if t.type in ("text", "code_inline"):
                parts.append(t.content)
            elif t.type in ("softbreak", "hardbreak"):
                parts.append(" ")
            if t.children:
                visit(t.children)

    visit(token.children)
    return "".join(parts)


def _append_inline(parent: ContentNode, tokens: list[Token], line: int | None) -> None:
    stack = [parent]
    for token in tokens:
        current = stack[-1]
        t_line = _line_of(token, line)
        if token.type == "text":
            if token.content:
                current.children.append(
                    ContentNode(element="#text", text=token.content, source_line=t_line)
                )
        elif token.type == "softbreak":
            current.children.append(ContentNode(element="#text", text="\n", source_line=t_line))
        elif token.type == "hardbreak":
            current.children.append(ContentNode(element="br", source_line=t_line))
        elif token.type == "code_inline":
            code = ContentNode(element="code", source_line=t_line)
            code.children.append(ContentNode(element="#text", text=token.content, source_line=t_line))
            current.children.append(code)
        elif token.type == "image":
            attrs = {"src": str(token.attrGet("src") or ""), "alt": _flatten_alt(token)}
            title = token.attrGet("title")
            if title:
                attrs["title"] = str(title)
            current.children.append(
                ContentNode(element="img", attributes=attrs, source_line=t_line)
            )
        elif token.type == "link_open":
            attrs = {"href": str(token.attrGet("href") or "")}
            title = token.attrGet("title")
            if title:
                attrs["title"] = str(title)
            node = ContentNode(element="a", attributes=attrs, source_line=t_line)
            current.children.append(node)
            stack.append(node)
        elif token.type == "link_close":
            if len(stack) > 1:
                stack.pop()
        elif token.type.endswith("_open"):
            node = ContentNode(element=token.tag or token.type[:-5], source_line=t_line)
            current.children.append(node)
            stack.append(node)
        elif token.type.endswith("_close"):
            if len(stack) > 1:
                stack.pop()
        elif token.type in _SKIPPED_TOKENS:
            continue
        # Unknown leaf inline tokens contribute their text, if any.
        elif token.content:
            current.children.append(
                ContentNode(element="#text", text=token.content, source_line=t_line)
            )


def parse_markdown(file: SourceFile, data: bytes) -> Document:
    """Parse Markdown bytes into a Document. Markdown always parses; the
    only possible failure is undecodable bytes."""
    text = decode_utf8(file.path, data)
    tokens = _parser().parse(text)

    root = ContentNode(element="#root")
    stack = [root]
    for token in tokens:
        current = stack[-1]
        line = _line_of(token, None)
        if token.type == "inline":
            _append_inline(current, token.children or [], line)
        elif token.type in ("fence", "code_block"):
            pre = ContentNode(element="pre", source_line=line)
            code_attrs: dict[str, str] = {}
            info = (token.info or "").strip()
            if info:
                code_attrs["class"] = f"language-{info.split()[0]}"
            code = ContentNode(element="code", attributes=code_attrs, source_line=line)
            code.children.append(ContentNode(element="#text", text=token.content, source_line=line))
            pre.children.append(code)
            current.children.append(pre)
        elif token.type == "hr":
            current.children.append(ContentNode(element="hr", source_line=line))
        elif token.type in _SKIPPED_TOKENS:
            continue
        elif token.type.endswith("_open"):
            if token.hidden:
                # Tight-list paragraphs: children attach to the list item.
                stack.append(current)
                continue
            node = ContentNode(element=token.tag or token.type[:-5], source_line=line)
            current.children.append(node)
            stack.append(node)
        elif token.type.endswith("_close"):
            if len(stack) > 1:
                stack.pop()

    assign_structural_paths(root)

    title: str | None = None
    for node in root.walk():
        if node.element == "h1":
            value = normalize_ws(visible_text(node))
            if value:
                title = value
                break

    return Document(file=file, root=root, title=title, lang=None)
