"""Static style resolution and sidecar overrides."""

import pytest

from a11y_audit.errors import AuditError
from a11y_audit.styles import resolve_styles

from conftest import html_doc


def _path_of(doc, element):
    return next(n for n in doc.root.walk() if n.element == element).structural_path


def test_inline_style_resolves_statically():
    doc = html_doc('<p style="color:#000;background-color:#fff">text</p>')
    resolve_styles(doc)
    style = doc.styles[_path_of(doc, "p")]
    assert style.foreground == (0, 0, 0)
    assert style.background == (255, 255, 255)
    assert style.confidence == "static"


def test_unstyled_node_has_no_entry():
    doc = html_doc("<p>plain text</p>")
    resolve_styles(doc)
    assert doc.styles == {}
    assert doc.style_for(_path_of(doc, "p")) is None


def test_class_selector_from_style_block():
    doc = html_doc(
        "<style>.dim { color: #888888; background-color: white; }</style>"
        '<p class="dim">text</p>'
    )
    resolve_styles(doc)
    style = doc.styles[_path_of(doc, "p")]
    assert style.foreground == (136, 136, 136)
    assert style.background == (255, 255, 255)


def test_element_selector_from_style_block():
    doc = html_doc(
        "<style>p { color: black; background-color: #eee; font-size: 16px; }</style>"
        "<p>text</p>"
    )
    resolve_styles(doc)
    style = doc.styles[_path_of(doc, "p")]
    assert style.font_size_pt == pytest.approx(12.0)  # 16px -> 12pt
    assert style.background == (238, 238, 238)


def test_complex_selectors_are_ignored():
    doc = html_doc(
        "<style>main > p.special:first-child { color: #111; background: #fff; }</style>"
        "<p>text</p>"
    )
    resolve_styles(doc)
    assert doc.styles == {}


def test_background_inherits_from_nearest_styled_ancestor():
    doc = html_doc(
        '<div style="background-color:#ffffff"><p style="color:#888888">text</p></div>'
    )
    resolve_styles(doc)
    style = doc.styles[_path_of(doc, "p")]
    assert style.background == (255, 255, 255)
    assert style.foreground == (136, 136, 136)


def test_bold_elements_and_font_weight():
    doc = html_doc(
        '<p style="color:#000;background-color:#fff">plain '
        "<b>bolded text</b></p>"
    )
    resolve_styles(doc)
    assert doc.styles[_path_of(doc, "p")].bold is False
    assert doc.styles[_path_of(doc, "b")].bold is True


def test_inline_style_wins_over_style_block():
    doc = html_doc(
        "<style>p { color: #888888; background-color: white; }</style>"
        '<p style="color:#000000">text</p>'
    )
    resolve_styles(doc)
    assert doc.styles[_path_of(doc, "p")].foreground == (0, 0, 0)


def test_sidecar_overrides_static_and_marks_computed():
    doc = html_doc('<p style="color:#000;background-color:#fff">text</p>')
    path = _path_of(doc, "p")
    sidecar = {path: {"foreground": [118, 118, 118]}}
    resolve_styles(doc, sidecar)
    style = doc.styles[path]
    assert style.foreground == (118, 118, 118)
    assert style.background == (255, 255, 255)  # static value kept
    assert style.confidence == "computed"


def test_sidecar_supplies_full_entry_for_unstyled_node():
    doc = html_doc("<p>text</p>")
    path = _path_of(doc, "p")
    sidecar = {
        path: {"foreground": [0, 0, 0], "background": [255, 255, 255],
               "font_size_pt": 18, "bold": True}
    }
    resolve_styles(doc, sidecar)
    style = doc.styles[path]
    assert style.font_size_pt == 18
    assert style.bold is True
    assert style.confidence == "computed"


def test_sidecar_unknown_path_is_ignored():
    doc = html_doc("<p>text</p>")
    resolve_styles(doc, {"/html/body/div[9]": {"foreground": [0, 0, 0], "background": [1, 1, 1]}})
    assert doc.styles == {}


def test_malformed_sidecar_is_execution_error():
    doc = html_doc("<p>text</p>")
    with pytest.raises(AuditError, match="style sidecar"):
        resolve_styles(doc, {"/p": {"foreground": [0, 0]}})
    with pytest.raises(AuditError, match="style sidecar"):
        resolve_styles(doc, {"/p": {"foreground": [0, 0, 999], "background": [0, 0, 0]}})
    with pytest.raises(AuditError, match="style sidecar"):
        resolve_styles(doc, {"/p": {"shade": "dark"}})


def test_styles_keys_always_resolve_to_reachable_nodes():
    doc = html_doc(
        "<style>p { color: #222; background-color: #fff; }</style>"
        "<div><p>one</p><p>two</p></div>"
    )
    resolve_styles(doc, {"/div/p[1]": {"foreground": [1, 2, 3]}})
    known = {n.structural_path for n in doc.root.walk()}
    assert set(doc.styles) <= known
