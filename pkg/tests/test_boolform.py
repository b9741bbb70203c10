import pytest
from hypothesis import given, settings, strategies as st

from polyra import boolform as bf

VARS = ("r", "s", "u")

formulas = st.recursive(
    st.one_of(st.sampled_from(VARS).map(bf.Var), st.booleans().map(bf.Const)),
    lambda sub: st.one_of(
        sub.map(bf.Not),
        st.tuples(sub, sub).map(lambda p: bf.And(*p)),
        st.tuples(sub, sub).map(lambda p: bf.Or(*p)),
        st.tuples(sub, sub).map(lambda p: bf.Implies(*p)),
        st.tuples(sub, sub).map(lambda p: bf.Iff(*p)),
    ),
    max_leaves=8,
)


def truth_table(f):
    return [bf.evaluate(f, s) for s in bf.subsets(VARS)]


@settings(max_examples=300)
@given(formulas)
def test_simplify_preserves_meaning(f):
    assert truth_table(bf.simplify(f)) == truth_table(f)


@settings(max_examples=300)
@given(formulas)
def test_render_parse_round_trip(f):
    g = bf.parse(bf.render(f))
    assert truth_table(g) == truth_table(f)
    assert bf.render(g) == bf.render(f)


@settings(max_examples=200)
@given(formulas)
def test_satisfiable_matches_truth_table(f):
    assert bf.satisfiable(f, VARS) == any(truth_table(f))


def test_simplify_collapses():
    r = bf.Var("r")
    assert bf.simplify(bf.Implies(r, r)) == bf.TRUE
    assert bf.simplify(bf.Iff(r, r)) == bf.TRUE
    assert bf.simplify(bf.Not(bf.Not(r))) == r
    assert bf.simplify(bf.And(bf.TRUE, r)) == r
    assert bf.simplify(bf.Or(r, bf.TRUE)) == bf.TRUE


def test_precedence():
    f = bf.parse("!r & s | u -> r <-> s")
    assert bf.render(f) == "!r & s | u -> r <-> s"
    assert isinstance(f, bf.Iff)


def test_empty_connectives():
    assert bf.conj() == bf.TRUE
    assert bf.disj() == bf.FALSE


def test_models_smallest_first():
    f = bf.parse("r | s")
    assert bf.models(f, ["r", "s"])[0] == frozenset(["r"]) or bf.models(f, ["r", "s"])[0] == frozenset(["s"])
    assert len(bf.models(f, ["r", "s"])) == 3


def test_unsatisfiable():
    assert not bf.satisfiable(bf.parse("r & !r"), ["r"])
    assert bf.equivalent(bf.parse("r -> s"), bf.parse("!r | s"), ["r", "s"])


@pytest.mark.parametrize("text", ["r &", "(r", "r s", "&", "r ->"])
def test_parse_errors(text):
    with pytest.raises(bf.FormulaSyntaxError):
        bf.parse(text)
