"""Markdown parsing into the uniform tree, and Markdown/HTML equivalence."""

from a11y_audit.config import Config
from a11y_audit.rules import run_rules

from conftest import html_doc, md_doc


def test_atx_heading():
    doc = md_doc("# Title\n")
    h1 = next(n for n in doc.root.walk() if n.element == "h1")
    assert h1.children[0].text == "Title"
    assert doc.title == "Title"


def test_setext_heading_is_h1():
    doc = md_doc("Deep Topic\n==========\n")
    assert [n.element for n in doc.root.children] == ["h1"]


def test_link_href_and_text():
    doc = md_doc("[click here](https://x.test)\n")
    a = next(n for n in doc.root.walk() if n.element == "a")
    assert a.attributes["href"] == "https://x.test"
    assert a.children[0].text == "click here"


def test_empty_image_alt_is_empty_string_not_absent():
    # Golden: the Markdown image syntax always defines alt; ![](x) pins alt="".
    doc = md_doc("![](diagram.png)\n")
    img = next(n for n in doc.root.walk() if n.element == "img")
    assert img.attributes["src"] == "diagram.png"
    assert "alt" in img.attributes
    assert img.attributes["alt"] == ""


def test_image_alt_text_flattened():
    doc = md_doc("![A binary *tree* with root 5](tree.png)\n")
    img = next(n for n in doc.root.walk() if n.element == "img")
    assert img.attributes["alt"] == "A binary tree with root 5"


def test_fenced_code_becomes_pre_code():
    doc = md_doc("```java\nint x = 1;\n```\n")
    pre = next(n for n in doc.root.walk() if n.element == "pre")
    code = pre.children[0]
    assert code.element == "code"
    assert code.attributes.get("class") == "language-java"
    assert code.children[0].text == "int x = 1;\n"


def test_table_maps_to_html_elements():
    doc = md_doc("| a | b |\n|---|---|\n| 1 | 2 |\n")
    elements = [n.element for n in doc.root.walk()]
    for expected in ("table", "thead", "tbody", "tr", "th", "td"):
        assert expected in elements


def test_tight_list_items():
    doc = md_doc("- one\n- two\n")
    ul = next(n for n in doc.root.walk() if n.element == "ul")
    assert [c.element for c in ul.children] == ["li", "li"]


def test_source_lines_recorded():
    doc = md_doc("# A\n\ntext here\n\n## B\n")
    h2 = next(n for n in doc.root.walk() if n.element == "h2")
    assert h2.source_line == 5


def test_raw_html_is_skipped():
    doc = md_doc("before\n\n<div onclick='x'>raw</div>\n\nafter\n")
    assert all(n.element != "div" for n in doc.root.walk())


def _findings_signature(doc):
    cfg = Config()
    return sorted(
        (f.rule_id, f.severity, f.message) for f in run_rules([doc], [], cfg)
    )


def _wrap_page(body: str) -> str:
    """Clean page shell so document-level validity rules stay quiet and only
    the construct under test can differ."""
    return (
        '<html lang="en"><head><title>t</title></head>'
        f"<body><main>{body}</main></body></html>"
    )


def test_markdown_html_equivalent_findings():
    """The same construct written in Markdown or HTML must produce identical
    rule findings (ignoring file paths and locators)."""
    pairs = [
        # heading skip
        ("# A\n\n### B\n", "<h1>A</h1><h3>B</h3>"),
        # ambiguous link
        ("[click here](https://x.test)\n", '<p><a href="https://x.test">click here</a></p>'),
        # decorative image: no findings either way
        ("![](d.png)\n", '<p><img src="d.png" alt=""></p>'),
        # labeled image: no findings either way
        ("![A tree](t.png)\n", '<p><img src="t.png" alt="A tree"></p>'),
        # table with headers: no findings either way
        (
            "| a | b |\n|---|---|\n| 1 | 2 |\n",
            "<table><thead><tr><th>a</th><th>b</th></tr></thead>"
            "<tbody><tr><td>1</td><td>2</td></tr></tbody></table>",
        ),
    ]
    for md_src, html_src in pairs:
        md_sig = _findings_signature(md_doc(md_src))
        html_sig = _findings_signature(html_doc(_wrap_page(html_src)))
        assert md_sig == html_sig, f"divergence for {md_src!r}"
