"""Best-effort static style resolution for the contrast rule.

Deliberately shallow: inline ``style`` attributes, same-document ``<style>``
blocks restricted to single element/class selectors, and an optional
computed-style sidecar. There is no layout engine here, so anything not
resolvable from those sources stays unknown and the contrast rule skips it;
a skipped node is better than a guessed color.

Sidecar format (one document): ``{"<structural_path>": {"foreground":
[r,g,b], "background": [r,g,b], "font_size_pt": 12, "bold": false}}``.
Sidecar values override static ones field by field and mark the node
confidence "computed".
"""

from __future__ import annotations

import re

from .color import RGB, parse_css_color
from .errors import AuditError
from .model import ContentNode, Document, StyleInfo

DEFAULT_FONT_SIZE_PT = 12.0  # browser default 16px == 12pt

_BOLD_ELEMENTS = {"b", "strong", "th"}
_SKIP_TEXT_ELEMENTS = {"script", "style", "template", "head", "title"}

_COMMENT = re.compile(r"/\*.*?\*/", re.DOTALL)
_SIMPLE_ELEMENT = re.compile(r"[a-zA-Z][a-zA-Z0-9-]*\Z")
_SIMPLE_CLASS = re.compile(r"\.[a-zA-Z_][a-zA-Z0-9_-]*\Z")


class _Decls:
    """Subset of CSS declarations this resolver understands."""

    __slots__ = ("color", "background", "font_size_pt", "bold")

    def __init__(self) -> None:
        self.color: RGB | None = None
        self.background: RGB | None = None
        self.font_size_pt: float | None = None
        self.bold: bool | None = None

    def merge_from(self, other: "_Decls") -> None:
        if other.color is not None:
            self.color = other.color
        if other.background is not None:
            self.background = other.background
        if other.font_size_pt is not None:
            self.font_size_pt = other.font_size_pt
        if other.bold is not None:
            self.bold = other.bold


def _parse_font_size(value: str) -> float | None:
    v = value.strip().lower()
    m = re.fullmatch(r"([0-9]+(?:\.[0-9]+)?)\s*(pt|px)", v)
    if not m:
        return None
    size = float(m.group(1))
    return size * 0.75 if m.group(2) == "px" else size


def _parse_declarations(text: str) -> _Decls:
    decls = _Decls()
    for part in text.split(";"):
        if ":" not in part:
            continue
        prop, _, value = part.partition(":")
        prop = prop.strip().lower()
        value = value.strip()
        if prop == "color":
            parsed = parse_css_color(value)
            if parsed is not None:
                decls.color = parsed
        elif prop in ("background-color", "background"):
            parsed = parse_css_color(value)
            if parsed is not None:
                decls.background = parsed
        elif prop == "font-size":
            size = _parse_font_size(value)
            if size is not None:
                decls.font_size_pt = size
        elif prop == "font-weight":
            v = value.lower()
            if v in ("bold", "bolder"):
                decls.bold = True
            elif v == "normal":
                decls.bold = False
            elif v.isdigit():
                decls.bold = int(v) >= 600
    return decls


def _parse_style_blocks(root: ContentNode) -> list[tuple[str, str, _Decls]]:
    """Extract (selector_kind, key, decls) rules from <style> elements.

    Only bare element selectors and single class selectors participate;
    anything fancier is ignored rather than half-applied.
    """
    rules: list[tuple[str, str, _Decls]] = []
    for node in root.walk():
        if node.element != "style":
            continue
        css = _COMMENT.sub(" ", "".join(c.text for c in node.children if c.element == "#text"))
        for block in css.split("}"):
            selector_part, _, body = block.partition("{")
            if not body.strip():
                continue
            decls = _parse_declarations(body)
            for selector in selector_part.split(","):
                selector = selector.strip()
                if _SIMPLE_ELEMENT.fullmatch(selector):
                    rules.append(("element", selector.lower(), decls))
                elif _SIMPLE_CLASS.fullmatch(selector):
                    rules.append(("class", selector[1:], decls))
    return rules


def _own_decls(node: ContentNode, sheet_rules: list[tuple[str, str, _Decls]]) -> _Decls:
    own = _Decls()
    for kind, key, decls in sheet_rules:
        if kind == "element" and node.element == key:
            own.merge_from(decls)
        elif kind == "class" and key in node.attributes.get("class", "").split():
            own.merge_from(decls)
    inline = node.attributes.get("style")
    if inline:
        own.merge_from(_parse_declarations(inline))
    if node.element in _BOLD_ELEMENTS and own.bold is None:
        own.bold = True
    return own


def _has_direct_text(node: ContentNode) -> bool:
    return any(c.element == "#text" and c.text.strip() for c in node.children)


def _validate_rgb(value, where: str) -> RGB:
    if (
        not isinstance(value, list)
        or len(value) != 3
        or not all(isinstance(c, int) and not isinstance(c, bool) and 0 <= c <= 255 for c in value)
    ):
        raise AuditError(f"style sidecar: {where} must be a list of three 0-255 integers")
    return (value[0], value[1], value[2])


_SIDECAR_ENTRY_KEYS = {"foreground", "background", "font_size_pt", "bold"}


def validate_sidecar(sidecar: dict) -> None:
    """Structural validation of a per-document sidecar map; raises AuditError."""
    if not isinstance(sidecar, dict):
        raise AuditError("style sidecar: top level must be an object")
    for path, entry in sidecar.items():
        if not isinstance(path, str):
            raise AuditError("style sidecar: keys must be structural paths")
        if not isinstance(entry, dict):
            raise AuditError(f"style sidecar: {path}: entry must be an object")
        unknown = set(entry) - _SIDECAR_ENTRY_KEYS
        if unknown:
            raise AuditError(f"style sidecar: {path}: unknown field {sorted(unknown)[0]!r}")
        if "foreground" in entry:
            _validate_rgb(entry["foreground"], f"{path}.foreground")
        if "background" in entry:
            _validate_rgb(entry["background"], f"{path}.background")
        if "font_size_pt" in entry:
            size = entry["font_size_pt"]
            if isinstance(size, bool) or not isinstance(size, (int, float)) or size <= 0:
                raise AuditError(f"style sidecar: {path}.font_size_pt must be a positive number")
        if "bold" in entry and not isinstance(entry["bold"], bool):
            raise AuditError(f"style sidecar: {path}.bold must be a boolean")


def resolve_styles(doc: Document, sidecar: dict | None = None) -> Document:
    """Populate ``doc.styles`` for text-bearing nodes.

    Static resolution first (inline styles, simple style-block selectors,
    nearest styled ancestor for unset values), then sidecar overrides with
    confidence "computed". Nodes where no foreground/background pair can be
    established get no entry at all and are skipped by the contrast rule.
    """
    if sidecar is not None:
        validate_sidecar(sidecar)

    sheet_rules = _parse_style_blocks(doc.root)
    styles: dict[str, StyleInfo] = {}

    def visit(node: ContentNode, inherited: _Decls) -> None:
        if node.element in _SKIP_TEXT_ELEMENTS or node.element == "#text":
            return
        effective = _Decls()
        effective.merge_from(inherited)
        effective.merge_from(_own_decls(node, sheet_rules))
        if (
            effective.color is not None
            and effective.background is not None
            and _has_direct_text(node)
        ):
            styles[node.structural_path] = StyleInfo(
                foreground=effective.color,
                background=effective.background,
                font_size_pt=effective.font_size_pt or DEFAULT_FONT_SIZE_PT,
                bold=bool(effective.bold),
                confidence="static",
            )
        for child in node.children:
            visit(child, effective)

    for child in doc.root.children:
        visit(child, _Decls())

    if sidecar:
        known_paths = {node.structural_path for node in doc.root.walk()}
        for path, entry in sidecar.items():
            if path not in known_paths:
                continue  # stale sidecar entry; never guess a node for it
            base = styles.get(path)
            foreground = (
                tuple(entry["foreground"]) if "foreground" in entry
                else (base.foreground if base else None)
            )
            background = (
                tuple(entry["background"]) if "background" in entry
                else (base.background if base else None)
            )
            if foreground is None or background is None:
                continue
            font_size = entry.get(
                "font_size_pt", base.font_size_pt if base else DEFAULT_FONT_SIZE_PT
            )
            bold = entry.get("bold", base.bold if base else False)
            styles[path] = StyleInfo(
                foreground=foreground,  # type: ignore[arg-type]
                background=background,  # type: ignore[arg-type]
                font_size_pt=float(font_size),
                bold=bool(bold),
                confidence="computed",
            )

    doc.styles = styles
    return doc
