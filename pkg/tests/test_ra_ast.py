import pytest
from hypothesis import given, settings

from polyra.ra_ast import (
    Attr, Comparison, Join, Literal, ParseError, Predicate, Project,
    RelVarRef, Rename, Select, Union_, named_attrs, parse_expr, relvars,
    render_expr, specattrs, subexpressions,
)

from conftest import expressions


def test_single_relvar():
    assert parse_expr("r") == RelVarRef("r")


def test_running_example_tree():
    e = parse_expr("select[B=C]((rename[A/B](r) union s) join u)")
    expected = Select(
        Predicate((Comparison(Attr("B"), "=", Attr("C")),)),
        Join(Union_(Rename("A", "B", RelVarRef("r")), RelVarRef("s")), RelVarRef("u")),
    )
    assert e == expected


def test_render_shapes():
    assert render_expr(Union_(RelVarRef("r"), RelVarRef("s"))) == "(r union s)"
    assert render_expr(Project(("A",), RelVarRef("r"))) == "project[A](r)"
    assert render_expr(Project((), RelVarRef("r"))) == "project[](r)"


def test_literals():
    e = parse_expr('select[A<5 & B="x y"](r)')
    assert e.pred.literals() == {"5", "x y"}
    assert e.pred.args == ("A", "B")


@pytest.mark.parametrize("text", ["project[A,A](r)", "rename[A/A](r)", "r union", "(r union s union u)",
                                  "select[](r)", 'select["a"="b"](r)', "union", "r s", "project[a](r)"])
def test_rejects(text):
    with pytest.raises(ParseError):
        parse_expr(text)


def test_error_position():
    with pytest.raises(ParseError) as info:
        parse_expr("(r union )")
    assert info.value.pos == 9


def test_spans_are_byte_offsets():
    text = "(project[A](r) union project[B](s))"
    e = parse_expr(text)
    assert (e.span.start, e.span.end) == (0, len(text))
    left = e.left
    assert text[left.span.start:left.span.end] == "project[A](r)"


def test_relvars_and_specattrs():
    assert relvars(parse_expr("(r join r)")) == {"r"}
    assert specattrs(parse_expr("(r times s)")) == frozenset()
    assert specattrs(parse_expr("rename[A/B](r)")) == {"A", "B"}
    assert named_attrs(parse_expr("projout[C](r)")) == ("C",)


def test_subexpressions_post_order():
    e = parse_expr("projout[A]((r join s))")
    kinds = [type(x).__name__ for x in subexpressions(e)]
    assert kinds == ["RelVarRef", "RelVarRef", "Join", "ProjectOut"]


def test_ast_equality_ignores_spans():
    assert parse_expr("r") == parse_expr("  r ")
    assert parse_expr("((r))") == RelVarRef("r")


def test_literal_quoting_round_trip():
    e = Select(Predicate((Comparison(Attr("A"), "=", Literal('a"b')),)), RelVarRef("r"))
    assert parse_expr(render_expr(e)) == e


@settings(max_examples=500, deadline=None)
@given(expressions())
def test_round_trip(e):
    assert parse_expr(render_expr(e)) == e
    assert render_expr(parse_expr(render_expr(e))) == render_expr(e)
