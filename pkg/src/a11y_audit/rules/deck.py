"""Slide deck rules: reading order vs. geometry, off-slide and hidden
elements, and unlabeled graphic groups."""

from __future__ import annotations

from ..config import Config
from ..model import Slide, SlideDeck, SlideElement
from . import RULES, SEVERITY_WARNING, Finding


def _on_canvas(el: SlideElement, width: float, height: float) -> bool:
    """False only when the bbox lies entirely outside the slide."""
    b = el.bbox
    return not (b.x >= width or b.y >= height or b.x + b.w <= 0 or b.y + b.h <= 0)


def geometric_order(
    slide: Slide,
    slide_width: float,
    slide_height: float,
    band_tolerance: float = 0.05,
) -> list[str]:
    """Expected reading order from geometry: visible, on-canvas, top-level
    elements grouped into row bands (top edges within ``band_tolerance`` of
    slide height join a band), bands top to bottom, left to right within a
    band. Ties break on element id so the order is total.
    """
    by_id = {el.id: el for el in slide.elements}
    candidates = [
        by_id[i]
        for i in slide.top_level_ids()
        if by_id[i].visible and _on_canvas(by_id[i], slide_width, slide_height)
    ]
    candidates.sort(key=lambda e: (e.bbox.y, e.bbox.x, e.id))

    tolerance = band_tolerance * slide_height
    bands: list[list[SlideElement]] = []
    band_top: float | None = None
    for el in candidates:
        if band_top is None or el.bbox.y - band_top > tolerance:
            bands.append([el])
            band_top = el.bbox.y
        else:
            bands[-1].append(el)

    ordered: list[str] = []
    for band in bands:
        band.sort(key=lambda e: (e.bbox.x, e.id))
        ordered.extend(e.id for e in band)
    return ordered


def _element_content_key(el: SlideElement) -> str:
    children = ",".join(sorted(el.children))
    return f"el|{el.id}|{el.kind}|{el.alt or ''}|{el.text or ''}|{children}"


def _finding(
    deck: SlideDeck,
    rule_id: str,
    slide: Slide,
    message: str,
    *,
    element: SlideElement | None = None,
    severity: str | None = None,
    content_key: str | None = None,
    order_key: tuple = (),
) -> Finding:
    rule = RULES[rule_id]
    sev = severity or rule.default_severity
    if element is not None:
        locator = f"slide[{slide.index}]/element[{element.id}]"
        snippet = f'{element.kind} element "{element.id}"'
        subject = f"slide-{element.kind}"
        key = content_key or _element_content_key(element)
    else:
        locator = f"slide[{slide.index}]"
        snippet = f"slide {slide.index}"
        subject = "slide"
        key = content_key or f"slide|{slide.index}"
    return Finding(
        rule_id=rule_id,
        severity=sev,
        file_path=deck.source.path,
        locator=locator,
        message=message,
        fix_hint=rule.fix_hint,
        machine_decidable=sev != "needs-human-review",
        snippet=snippet,
        source_line=None,
        subject_element=subject,
        content_key=key,
        order_key=order_key,
    )


def check_reading_order(deck: SlideDeck, config: Config | None = None) -> list[Finding]:
    """Missing reading order is a (machine-decidable) warning; an order that
    disagrees with geometry goes to a human, since geometry is a heuristic."""
    cfg = config or Config()
    tolerance = cfg.thresholds.band_tolerance
    findings: list[Finding] = []
    for s_idx, slide in enumerate(deck.slides):
        if slide.reading_order is None:
            findings.append(
                _finding(
                    deck,
                    "slide-reading-order",
                    slide,
                    "slide has no explicit reading order",
                    severity=SEVERITY_WARNING,
                    content_key=f"slide|{slide.index}|reading-order-missing",
                    order_key=(s_idx, -1),
                )
            )
            continue
        by_id = {el.id: el for el in slide.elements}
        actual = [
            eid
            for eid in slide.reading_order
            if by_id[eid].visible and _on_canvas(by_id[eid], deck.slide_width, deck.slide_height)
        ]
        expected = geometric_order(slide, deck.slide_width, deck.slide_height, tolerance)
        if actual != expected:
            out_of_place = next(
                (a for a, e in zip(actual, expected) if a != e),
                actual[-1] if actual else "",
            )
            findings.append(
                _finding(
                    deck,
                    "slide-reading-order",
                    slide,
                    f'reading order diverges from the visual layout at "{out_of_place}"',
                    element=by_id[out_of_place],
                    content_key=f"slide|{slide.index}|reading-order|{out_of_place}",
                    order_key=(s_idx, -1),
                )
            )
    return findings


def check_offslide_invisible(deck: SlideDeck, config: Config | None = None) -> list[Finding]:
    """Entirely off-slide elements, and hidden elements still announced by
    the reading order, are machine-decidable errors."""
    findings: list[Finding] = []
    for s_idx, slide in enumerate(deck.slides):
        for e_idx, el in enumerate(slide.elements):
            if not _on_canvas(el, deck.slide_width, deck.slide_height):
                findings.append(
                    _finding(
                        deck,
                        "slide-offcanvas",
                        slide,
                        f'element "{el.id}" lies entirely outside the slide canvas',
                        element=el,
                        order_key=(s_idx, e_idx),
                    )
                )
        for eid in slide.reading_order or []:
            el = slide.element_by_id(eid)
            if not el.visible:
                findings.append(
                    _finding(
                        deck,
                        "slide-invisible-in-order",
                        slide,
                        f'hidden element "{el.id}" appears in the reading order',
                        element=el,
                        order_key=(s_idx, slide.elements.index(el)),
                    )
                )
    return findings


def check_group_alt(deck: SlideDeck, config: Config | None = None) -> list[Finding]:
    """Groups made purely of images/shapes with no text need alt text;
    whether the group conveys meaning is a human call."""
    findings: list[Finding] = []
    for s_idx, slide in enumerate(deck.slides):
        by_id = {el.id: el for el in slide.elements}
        parent_of: dict[str, str] = {}
        for el in slide.elements:
            for child in el.children:
                parent_of[child] = el.id

        def leaves(group: SlideElement) -> list[SlideElement]:
            out: list[SlideElement] = []
            for child_id in group.children:
                child = by_id[child_id]
                if child.kind == "group":
                    out.extend(leaves(child))
                else:
                    out.append(child)
            return out

        def qualifies(el: SlideElement) -> bool:
            if el.kind != "group" or (el.alt or "").strip():
                return False
            leaf_elements = leaves(el)
            return bool(leaf_elements) and all(
                leaf.kind in ("image", "shape") and not (leaf.text or "").strip()
                for leaf in leaf_elements
            )

        for e_idx, el in enumerate(slide.elements):
            if not qualifies(el):
                continue
            parent_id = parent_of.get(el.id)
            if parent_id is not None and qualifies(by_id[parent_id]):
                continue  # report the outermost unlabeled group only
            findings.append(
                _finding(
                    deck,
                    "slide-group-alt",
                    slide,
                    f'group "{el.id}" of {len(leaves(el))} graphic element(s) has no alt text',
                    element=el,
                    order_key=(s_idx, e_idx),
                )
            )
    return findings


ALL_DECK_CHECKS = [check_reading_order, check_offslide_invisible, check_group_alt]


def check_deck(deck: SlideDeck, config: Config) -> list[Finding]:
    findings: list[Finding] = []
    for check in ALL_DECK_CHECKS:
        findings.extend(check(deck, config))
    return findings
