"""WCAG 2.1 color math: relative luminance and contrast ratio.

Formulas follow the WCAG 2.1 definitions: sRGB channels are linearized
(c/12.92 below the 0.03928 knee, else ((c+0.055)/1.055)^2.4) and weighted
0.2126 R + 0.7152 G + 0.0722 B; the contrast ratio of two colors is
(L_lighter + 0.05) / (L_darker + 0.05), which spans [1, 21].
"""

from __future__ import annotations

import re

RGB = tuple[int, int, int]


def _linearize(channel: int) -> float:
    s = channel / 255.0
    return s / 12.92 if s <= 0.03928 else ((s + 0.055) / 1.055) ** 2.4


def relative_luminance(color: RGB) -> float:
    """Relative luminance in [0, 1] of an 8-bit-per-channel sRGB color."""
    r, g, b = color
    return 0.2126 * _linearize(r) + 0.7152 * _linearize(g) + 0.0722 * _linearize(b)


def contrast_ratio(a: RGB, b: RGB) -> float:
    """Contrast ratio between two colors, symmetric, in [1, 21]."""
    la = relative_luminance(a)
    lb = relative_luminance(b)
    lighter, darker = max(la, lb), min(la, lb)
    return (lighter + 0.05) / (darker + 0.05)


# CSS basic color keywords (plus orange and the grey spelling); enough for
# hand-written course styles. Unknown keywords resolve to None, never to a guess.
_NAMED_COLORS: dict[str, RGB] = {
    "black": (0, 0, 0),
    "silver": (192, 192, 192),
    "gray": (128, 128, 128),
    "grey": (128, 128, 128),
    "white": (255, 255, 255),
    "maroon": (128, 0, 0),
    "red": (255, 0, 0),
    "purple": (128, 0, 128),
    "fuchsia": (255, 0, 255),
    "green": (0, 128, 0),
    "lime": (0, 255, 0),
    "olive": (128, 128, 0),
    "yellow": (255, 255, 0),
    "navy": (0, 0, 128),
    "blue": (0, 0, 255),
    "teal": (0, 128, 128),
    "aqua": (0, 255, 255),
    "orange": (255, 165, 0),
}

_RGB_FUNC = re.compile(
    r"rgba?\(\s*(\d{1,3})\s*,\s*(\d{1,3})\s*,\s*(\d{1,3})\s*(?:,\s*([0-9.]+)\s*)?\)",
    re.IGNORECASE,
)


def parse_css_color(value: str) -> RGB | None:
    """Parse a CSS color literal to an RGB triple, or None if unsupported.

    Handles #rgb, #rrggbb, rgb(r,g,b), fully opaque rgba(), and basic
    keywords. Translucent colors return None: their effective color depends
    on what is behind them, which static analysis cannot know.
    """
    v = value.strip().lower()
    if not v:
        return None
    if v in _NAMED_COLORS:
        return _NAMED_COLORS[v]
    if v.startswith("#"):
        hexpart = v[1:]
        if len(hexpart) == 3 and all(c in "0123456789abcdef" for c in hexpart):
            return tuple(int(c * 2, 16) for c in hexpart)  # type: ignore[return-value]
        if len(hexpart) == 6 and all(c in "0123456789abcdef" for c in hexpart):
            return (int(hexpart[0:2], 16), int(hexpart[2:4], 16), int(hexpart[4:6], 16))
        return None
    m = _RGB_FUNC.fullmatch(v)
    if m:
        if m.group(4) is not None and float(m.group(4)) < 1.0:
            return None
        channels = tuple(min(255, int(m.group(i))) for i in (1, 2, 3))
        return channels  # type: ignore[return-value]
    return None
