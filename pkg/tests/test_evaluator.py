import pytest
from hypothesis import given, settings, strategies as st

from polyra.evaluator import (
    Database, Relation, compare, evaluate, load_database, render_database,
    render_relation, row,
)
from polyra.ra_ast import Difference, Join, Select, Union_, parse_expr, relvars
from polyra.typing_rules import TypeCheckError, typecheck

from conftest import databases, expressions, generic_predicates

PROOF_DB = """
relation r (A, B)
x, y
u, v

relation s (B, C)
y, z
"""


def test_join_of_proof_database():
    db = load_database(PROOF_DB)
    out = evaluate(db, parse_expr("(r join s)"))
    assert out == Relation({"A", "B", "C"}, {row(A="x", B="y", C="z")})


def test_project_out():
    db = load_database(PROOF_DB)
    assert evaluate(db, parse_expr("projout[A](r)")).rows == {row(B="y"), row(B="v")}


def test_project_empty_relation():
    db = Database({"r": Relation({"A", "B"})})
    assert evaluate(db, parse_expr("project[A](r)")) == Relation({"A"})


def test_nullary_projection():
    db = load_database(PROOF_DB)
    assert evaluate(db, parse_expr("project[](r)")).rows == {frozenset()}


def test_select_and_rename():
    db = load_database("relation r (A, B)\n3, 3\n7, 3\n")
    assert evaluate(db, parse_expr("select[A<5](r)")).rows == {row(A="3", B="3")}
    assert evaluate(db, parse_expr("select[A=B](r)")).rows == {row(A="3", B="3")}
    assert evaluate(db, parse_expr("rename[A/C](r)")).rel_type == {"B", "C"}


def test_product_and_difference():
    db = load_database("relation r (A)\n1\n2\nrelation s (B)\n1\n")
    assert len(evaluate(db, parse_expr("(r times s)")).rows) == 2
    db = load_database("relation r (A)\n1\n2\nrelation s (A)\n1\n")
    assert evaluate(db, parse_expr("(r minus s)")).rows == {row(A="2")}


def test_compare():
    assert compare("10", ">", "9")
    assert compare("b", ">", "a")
    assert compare("10", "<", "9a")
    assert compare("x", "!=", "y")


def test_type_error_surfaces():
    db = load_database(PROOF_DB)
    with pytest.raises(TypeCheckError):
        evaluate(db, parse_expr("(r union s)"))


@pytest.mark.parametrize("text", [
    "relation r (A, B)\nx\n",
    "relation r (A)\nrelation r (A)\n",
    "relation r (A, A)\n",
    "x, y\n",
    "relation r A\n",
])
def test_load_errors(text):
    with pytest.raises(ValueError):
        load_database(text)


def test_nullary_relation_format():
    db = load_database("relation t ()\n()\nrelation e ()\n")
    assert db.contents["t"].rows == {frozenset()}
    assert db.contents["e"].rows == frozenset()
    assert load_database(render_database(db)) == db


def test_render_round_trip():
    db = load_database(PROOF_DB)
    assert render_relation("s", db.contents["s"]) == "relation s (B, C)\ny, z\n"
    assert load_database(render_database(db)) == db


SCHEMA = {"r": frozenset("AB"), "s": frozenset("AB"), "u": frozenset("BC")}


@settings(max_examples=100, deadline=None)
@given(expressions(max_leaves=4), st.data())
def test_result_type_is_output_type(e, data):
    schema = {r: SCHEMA[r] for r in relvars(e)}
    try:
        tau = typecheck(schema, e)
    except TypeCheckError:
        return
    db = data.draw(databases(schema))
    assert evaluate(db, e).rel_type == tau


@settings(max_examples=100, deadline=None)
@given(databases(SCHEMA), generic_predicates.filter(lambda p: set(p.args) <= {"A", "B"}))
def test_algebraic_laws(db, pred):
    r, s = parse_expr("r"), parse_expr("s")
    assert evaluate(db, Union_(r, s)) == evaluate(db, Union_(s, r))
    assert evaluate(db, Join(r, parse_expr("u"))) == evaluate(db, Join(parse_expr("u"), r))
    assert evaluate(db, Select(pred, Union_(r, s))) == evaluate(db, Union_(Select(pred, r), Select(pred, s)))
    assert evaluate(db, Difference(r, r)).rows == frozenset()
