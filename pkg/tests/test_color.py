"""Contrast math against the WCAG formula, frozen oracle values, and
property checks."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from a11y_audit.color import contrast_ratio, parse_css_color, relative_luminance

# Frozen from a one-off independent evaluation of the WCAG 2.1 formula
# (linearize channels at the 0.03928 knee, weight 0.2126/0.7152/0.0722):
#   L(118,118,118) = 0.18116424424986022
#   (L_white + 0.05) / (L_118 + 0.05) = 4.542224959605253
L_GRAY_118 = 0.1812
CR_GRAY_118_WHITE = 4.5422

channels = st.integers(min_value=0, max_value=255)
colors = st.tuples(channels, channels, channels)


def test_luminance_black_is_zero():
    assert relative_luminance((0, 0, 0)) == 0.0


def test_luminance_white_is_one():
    assert abs(relative_luminance((255, 255, 255)) - 1.0) < 1e-9


def test_luminance_minimal_passing_gray():
    assert relative_luminance((118, 118, 118)) == pytest.approx(L_GRAY_118, abs=5e-5)


def test_contrast_black_white_is_21():
    assert abs(contrast_ratio((0, 0, 0), (255, 255, 255)) - 21.0) < 1e-9


def test_contrast_gray_118_on_white():
    assert contrast_ratio((118, 118, 118), (255, 255, 255)) == pytest.approx(
        CR_GRAY_118_WHITE, abs=0.01
    )


@given(colors, colors)
def test_contrast_symmetric_and_in_range(a, b):
    r1 = contrast_ratio(a, b)
    r2 = contrast_ratio(b, a)
    assert math.isclose(r1, r2)
    assert 1.0 <= r1 <= 21.0 + 1e-9


@given(colors)
def test_contrast_identity(c):
    assert contrast_ratio(c, c) == pytest.approx(1.0)


@given(colors, st.integers(min_value=0, max_value=2), st.integers(min_value=1, max_value=255))
def test_luminance_monotone_per_channel(color, channel, bump):
    raised = list(color)
    raised[channel] = min(255, raised[channel] + bump)
    if tuple(raised) == color:
        return
    assert relative_luminance(tuple(raised)) > relative_luminance(color)


@pytest.mark.parametrize(
    "value,expected",
    [
        ("#000", (0, 0, 0)),
        ("#ffffff", (255, 255, 255)),
        ("#1A2b3C", (26, 43, 60)),
        ("rgb(1, 2, 3)", (1, 2, 3)),
        ("rgba(10, 20, 30, 1)", (10, 20, 30)),
        ("white", (255, 255, 255)),
        ("Gray", (128, 128, 128)),
        ("rebeccapurple", None),        # not in the supported keyword set
        ("rgba(1, 2, 3, 0.5)", None),   # translucent: effective color unknown
        ("#12345", None),
        ("url(x.png)", None),
        ("", None),
    ],
)
def test_parse_css_color(value, expected):
    assert parse_css_color(value) == expected
