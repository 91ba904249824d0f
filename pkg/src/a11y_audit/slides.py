"""Slide manifest ingestion.

The manifest is a neutral JSON interchange format for presentation decks:

    {
      "version": 1,
      "slide_width": 960,
      "slide_height": 540,
      "slides": [
        {
          "index": 1,
          "elements": [
            {"id": "title1", "kind": "text", "bbox": {"x": 0, "y": 0, "w": 960, "h": 80},
             "visible": true, "alt": null, "text": "Welcome", "children": []}
          ],
          "reading_order": ["title1"]
        }
      ]
    }

Validation is strict and reports the JSON path of the first violation, e.g.
``slides[0].reading_order``. Geometry units are abstract; only ratios to
slide_width/slide_height matter.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import AuditError
from .html_parser import decode_utf8
from .model import BBox, Slide, SlideDeck, SlideElement, SourceFile

ELEMENT_KINDS = ("text", "image", "shape", "group")

_TOP_KEYS = {"version", "slide_width", "slide_height", "slides"}
_SLIDE_KEYS = {"index", "elements", "reading_order"}
_ELEMENT_KEYS = {"id", "kind", "bbox", "visible", "alt", "text", "children"}
_BBOX_KEYS = {"x", "y", "w", "h"}


def _fail(path: str, problem: str) -> AuditError:
    return AuditError(f"slide manifest: {path}: {problem}")


def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise _fail(f"{path}.{key}" if path else key, "missing required field")
    return obj[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(path, "must be a number")
    return float(value)


def _check_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise _fail(f"{path}.{sorted(unknown)[0]}" if path else sorted(unknown)[0], "unknown field")


def _parse_bbox(value: Any, path: str) -> BBox:
    if not isinstance(value, dict):
        raise _fail(path, "must be an object with x, y, w, h")
    _check_unknown(value, _BBOX_KEYS, path)
    for key in ("x", "y", "w", "h"):
        if key not in value:
            raise _fail(f"{path}.{key}", "missing required field")
    w = _number(value["w"], f"{path}.w")
    h = _number(value["h"], f"{path}.h")
    if w < 0:
        raise _fail(f"{path}.w", "must be >= 0")
    if h < 0:
        raise _fail(f"{path}.h", "must be >= 0")
    return BBox(x=_number(value["x"], f"{path}.x"), y=_number(value["y"], f"{path}.y"), w=w, h=h)


def _parse_element(value: Any, path: str) -> SlideElement:
    if not isinstance(value, dict):
        raise _fail(path, "must be an object")
    _check_unknown(value, _ELEMENT_KEYS, path)

    element_id = _require(value, "id", path)
    if not isinstance(element_id, str) or not element_id:
        raise _fail(f"{path}.id", "must be a non-empty string")

    kind = _require(value, "kind", path)
    if kind not in ELEMENT_KINDS:
        raise _fail(f"{path}.kind", f"must be one of {', '.join(ELEMENT_KINDS)}")

    bbox = _parse_bbox(_require(value, "bbox", path), f"{path}.bbox")

    visible = value.get("visible", True)
    if not isinstance(visible, bool):
        raise _fail(f"{path}.visible", "must be a boolean")

    alt = value.get("alt")
    if alt is not None and not isinstance(alt, str):
        raise _fail(f"{path}.alt", "must be a string or null")
    text = value.get("text")
    if text is not None and not isinstance(text, str):
        raise _fail(f"{path}.text", "must be a string or null")

    children = value.get("children", [])
    if not isinstance(children, list) or not all(isinstance(c, str) for c in children):
        raise _fail(f"{path}.children", "must be a list of element ids")
    if children and kind != "group":
        raise _fail(f"{path}.children", "only group elements may have children")

    return SlideElement(
        id=element_id,
        kind=kind,
        bbox=bbox,
        visible=visible,
        alt=alt,
        text=text,
        children=list(children),
    )


def _validate_groups(slide: Slide, path: str) -> None:
    ids = {el.id for el in slide.elements}
    parent_of: dict[str, str] = {}
    for el in slide.elements:
        for child_id in el.children:
            if child_id not in ids:
                raise _fail(f"{path}", f"group {el.id!r} references unknown element {child_id!r}")
            if child_id in parent_of:
                raise _fail(
                    f"{path}",
                    f"element {child_id!r} belongs to two groups "
                    f"({parent_of[child_id]!r} and {el.id!r})",
                )
            parent_of[child_id] = el.id

    # Cycle detection over the parent chain; a forest has none.
    for start in parent_of:
        seen = {start}
        current = start
        while current in parent_of:
            current = parent_of[current]
            if current in seen:
                raise _fail(f"{path}", "group membership cycle")
            seen.add(current)


def _parse_slide(value: Any, path: str) -> Slide:
    if not isinstance(value, dict):
        raise _fail(path, "must be an object")
    _check_unknown(value, _SLIDE_KEYS, path)

    index = _require(value, "index", path)
    if isinstance(index, bool) or not isinstance(index, int) or index < 1:
        raise _fail(f"{path}.index", "must be an integer >= 1")

    raw_elements = _require(value, "elements", path)
    if not isinstance(raw_elements, list):
        raise _fail(f"{path}.elements", "must be a list")
    elements = [
        _parse_element(el, f"{path}.elements[{i}]") for i, el in enumerate(raw_elements)
    ]
    seen_ids: set[str] = set()
    for i, el in enumerate(elements):
        if el.id in seen_ids:
            raise _fail(f"{path}.elements[{i}].id", f"duplicate element id {el.id!r}")
        seen_ids.add(el.id)

    reading_order = value.get("reading_order")
    if reading_order is not None:
        if not isinstance(reading_order, list) or not all(
            isinstance(x, str) for x in reading_order
        ):
            raise _fail(f"{path}.reading_order", "must be a list of element ids")

    slide = Slide(index=index, elements=elements, reading_order=reading_order)
    _validate_groups(slide, path)

    if reading_order is not None:
        top_level = slide.top_level_ids()
        if sorted(reading_order) != sorted(set(reading_order)):
            raise _fail(f"{path}.reading_order", "contains a duplicate element id")
        missing = sorted(set(top_level) - set(reading_order))
        extra = sorted(set(reading_order) - set(top_level))
        if missing:
            raise _fail(
                f"{path}.reading_order", f"missing top-level element id(s): {', '.join(missing)}"
            )
        if extra:
            raise _fail(
                f"{path}.reading_order",
                f"contains id(s) that are not top-level elements: {', '.join(extra)}",
            )
    return slide


def parse_slide_manifest(file: SourceFile, data: bytes) -> SlideDeck:
    """Parse and fully validate a slide manifest; any schema violation is an
    execution error naming the JSON path of the first problem."""
    text = decode_utf8(file.path, data)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AuditError(f"slide manifest: {file.path}: invalid JSON ({exc})") from exc

    if not isinstance(raw, dict):
        raise _fail("$", "top level must be an object")
    _check_unknown(raw, _TOP_KEYS, "")

    version = _require(raw, "version", "")
    if version != 1:
        raise _fail("version", "unsupported manifest version (expected 1)")

    slide_width = _number(_require(raw, "slide_width", ""), "slide_width")
    slide_height = _number(_require(raw, "slide_height", ""), "slide_height")
    if slide_width <= 0:
        raise _fail("slide_width", "must be > 0")
    if slide_height <= 0:
        raise _fail("slide_height", "must be > 0")

    raw_slides = _require(raw, "slides", "")
    if not isinstance(raw_slides, list):
        raise _fail("slides", "must be a list")
    slides = [_parse_slide(s, f"slides[{i}]") for i, s in enumerate(raw_slides)]

    seen_indexes: set[int] = set()
    for i, slide in enumerate(slides):
        if slide.index in seen_indexes:
            raise _fail(f"slides[{i}].index", f"duplicate slide index {slide.index}")
        seen_indexes.add(slide.index)

    return SlideDeck(
        source=file, slide_width=slide_width, slide_height=slide_height, slides=slides
    )
