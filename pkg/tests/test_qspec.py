import pytest

from qtilt.builtin import builtin_spec_text
from qtilt.qspec import (
    PathExpr,
    Quiver,
    SpecError,
    Word,
    parse_algebra_spec,
    parse_element,
    print_expr,
)


@pytest.fixture(scope="module")
def spec():
    return parse_algebra_spec(builtin_spec_text())


def test_builtin_spec_shape(spec):
    assert spec.p == 2
    assert spec.quiver.num_vertices == 3
    assert len(spec.quiver.arrows) == 4
    assert len(spec.relations) == 6
    assert [m.name for m in spec.modules] == ["M1", "M2", "M3", "M4"]


def test_builtin_relators_are_homogeneous(spec):
    for rel in spec.relations:
        st = {(w.source, w.target) for w in rel.words()}
        assert len(st) == 1


def test_builtin_module_vertices(spec):
    assert [m.vertex for m in spec.modules] == [2, 2, 2, 1]


def test_single_vertex_no_arrows():
    spec = parse_algebra_spec("field 5\nquiver 1\nrelations\n")
    assert spec.p == 5
    assert spec.quiver.num_vertices == 1
    assert spec.relations == ()


def test_noncomposable_word_rejected(spec):
    # b ends at vertex 2 while n starts at vertex 3
    with pytest.raises(SpecError, match="non-composable"):
        parse_element("b*n", spec.quiver, 2)


def test_parse_element_long_word(spec):
    e = parse_element("n*y*b*d*n*y", spec.quiver, 2)
    assert len(e.terms) == 1
    c, w = e.terms[0]
    assert c == 1
    assert (w.source, w.target, len(w)) == (2, 0, 6)


def test_parse_idempotent(spec):
    e = parse_element("e_3", spec.quiver, 2)
    assert e.terms == ((1, Word(2, 2, ())),)


def test_parse_two_term_sum(spec):
    e = parse_element("b*y*b - b*d*n*y*b*d*n", spec.quiver, 2)
    assert len(e.terms) == 2
    assert all((w.source, w.target) == (0, 1) for _, w in e.terms)


def test_signs_coincide_mod_2(spec):
    plus = parse_element("b*y*b + b*d*n*y*b*d*n", spec.quiver, 2)
    minus = parse_element("b*y*b - b*d*n*y*b*d*n", spec.quiver, 2)
    assert plus == minus


def test_coefficients_reduced_mod_p(spec):
    assert parse_element("2*b", spec.quiver, 2).is_zero()
    e = parse_element("3*b", spec.quiver, 5)
    assert e.terms[0][0] == 3


def test_exponent_sugar(spec):
    e = parse_element("(b*d*n*y)^1*b*d*n", spec.quiver, 2)
    f = parse_element("b*d*n*y*b*d*n", spec.quiver, 2)
    assert e == f
    g = parse_element("(b*y)^2", spec.quiver, 2)
    assert g == parse_element("b*y*b*y", spec.quiver, 2)


def test_print_parse_roundtrip(spec):
    exprs = [
        "b*y*b - b*d*n*y*b*d*n",
        "e_1",
        "n*y",
        "(b*y)^2 + e_1",
    ]
    for text in exprs:
        e = parse_element(text, spec.quiver, 2)
        printed = print_expr(e, spec.quiver)
        assert parse_element(printed, spec.quiver, 2) == e


def test_builtin_relators_roundtrip(spec):
    for rel in spec.relations:
        assert parse_element(print_expr(rel, spec.quiver), spec.quiver, 2) == rel


def test_error_locations():
    bad = "field 2\nquiver 2\narrow a 1 2\nrelations\na*q\n"
    with pytest.raises(SpecError) as exc:
        parse_algebra_spec(bad)
    assert exc.value.line == 5


def test_unknown_label(spec):
    with pytest.raises(SpecError, match="unknown arrow label"):
        parse_element("zz", spec.quiver, 2)


def test_vertex_out_of_range(spec):
    with pytest.raises(SpecError, match="out of range"):
        parse_element("e_9", spec.quiver, 2)


def test_nonprime_characteristic_rejected():
    with pytest.raises(SpecError, match="not prime"):
        parse_algebra_spec("field 6\nquiver 1\nrelations\n")


def test_inhomogeneous_relation_rejected():
    bad = "field 2\nquiver 2\narrow a 1 2\narrow c 1 1\nrelations\na + c\n"
    with pytest.raises(SpecError, match="source or target"):
        parse_algebra_spec(bad)


def test_quiver_connectivity():
    q = Quiver(2, ())
    assert not q.is_connected()
    spec = parse_algebra_spec(builtin_spec_text())
    assert spec.quiver.is_connected()
