from hypothesis import given
from hypothesis import strategies as st

from corsica.cssrules import (
    LONGHAND_WHITELIST,
    canonical_value,
    extract_directives,
)


def directives(css: str):
    return extract_directives(css.encode("utf-8"))


def test_id_selector_hex_color_example():
    # hex -> decimal oracle: 0x19=25, 0x82=130, 0xD1=209
    assert (0x19, 0x82, 0xD1) == (25, 130, 209)
    out = directives("#wp-members { color: #1982D1 }")
    assert len(out) == 1
    d = out[0]
    assert (d.selector_kind, d.selector_name) == ("id", "wp-members")
    assert d.element_type == "div"
    assert d.property == "color"
    assert d.value == "rgb(25, 130, 209)"


def test_pseudo_and_compound_selectors_excluded():
    assert directives("a:hover { color: red }") == []
    assert directives("div.box { color: red }") == []
    assert directives("p a { color: red }") == []
    assert directives("h1, h2 { color: red }") == []


def test_shorthand_excluded_longhand_kept():
    out = directives("p { margin-top: 4px; margin: 0 }")
    assert [d.property for d in out] == ["margin-top"]
    assert out[0].value == "4px"
    assert out[0].element_type == "p"


def test_type_selector_uses_own_tag():
    out = directives("h1 { display: block }")
    assert out[0].selector_kind == "type"
    assert out[0].element_type == "h1"


def test_named_and_functional_colors():
    assert directives("p { color: red }")[0].value == "rgb(255, 0, 0)"
    assert directives("p { color: RGB(1, 2, 3) }")[0].value == "rgb(1, 2, 3)"
    assert directives("p { color: rgba(1,2,3,0.5) }")[0].value == "rgba(1, 2, 3, 0.5)"
    assert directives("p { color: rgba(1,2,3,1) }")[0].value == "rgb(1, 2, 3)"
    assert directives("p { color: transparent }")[0].value == "rgba(0, 0, 0, 0)"
    assert directives("p { color: #abc }")[0].value == "rgb(170, 187, 204)"


def test_non_px_lengths_excluded():
    assert directives("p { margin-top: 1em }") == []
    assert directives("p { width: 50% }") == []
    assert directives("p { width: 0 }")[0].value == "0px"
    assert directives("p { width: auto }")[0].value == "auto"


def test_number_properties():
    assert directives("p { opacity: 0.50 }")[0].value == "0.5"
    assert directives("p { z-index: 007 }")[0].value == "7"


def test_important_stripped():
    assert directives("p { color: #fff !important }")[0].value == "rgb(255, 255, 255)"


def test_malformed_rules_skipped_rest_kept():
    css = "?? ! { color: red } p { display: none } .x { ;;;: } h1 { color }"
    out = directives(css)
    assert [(d.selector_kind, d.property) for d in out] == [("type", "display")]


def test_zero_usable_rules():
    assert directives("") == []
    assert directives("@media print { p { color: red } }") == []


def test_comments_ignored():
    out = directives("/* hi */ p { /* x */ color: /* y */ #000 }")
    assert out[0].value == "rgb(0, 0, 0)"


def test_at_rules_skipped():
    css = """
    @charset "utf-8";
    @import url(other.css);
    @media screen { h1 { color: red } }
    p { float: LEFT }
    """
    out = directives(css)
    assert len(out) == 1
    assert out[0].property == "float"
    assert out[0].value == "left"


def test_later_declaration_wins():
    out = directives("p { color: #000 } p { color: #fff }")
    assert len(out) == 1
    assert out[0].value == "rgb(255, 255, 255)"


def test_unknown_properties_ignored():
    assert directives("p { border-radius: 3px }") == []


@given(st.sampled_from(sorted(LONGHAND_WHITELIST)), st.text(max_size=40))
def test_canonicalization_idempotent(prop, raw):
    value = canonical_value(prop, raw)
    if value is not None:
        assert canonical_value(prop, value) == value


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_hex_color_conversion_matches_int_oracle(r, g, b):
    css = f"p {{ color: #{r:02x}{g:02x}{b:02x} }}"
    out = directives(css)
    assert out[0].value == f"rgb({r}, {g}, {b})"


@given(st.integers(0, 10_000))
def test_px_lengths_kept(px):
    out = directives(f"p {{ width: {px}px }}")
    assert out[0].value == f"{px}px"
