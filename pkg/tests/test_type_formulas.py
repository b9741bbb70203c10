import pytest

from polyra import boolform as bf
from polyra.corpus import CORPUS, RUNNING, parsed, reference
from polyra.inference import infer_formula
from polyra.ra_ast import parse_expr, subexpressions
from polyra.type_formulas import (
    FormulaFormatError, IncompatibleContexts, Instantiation, InvalidInstantiation,
    TypeContext, canonicalize, check_instantiation, conjoin, context_satisfiable,
    extend_with_attribute, formulas_equivalent_bounded, formulas_match_up_to_renaming,
    image, instantiations, output_type, outvar_invariant_holds, parse_formula,
    render_formula, rename_typevars,
)
from polyra.typing_rules import typecheck


def running():
    return reference(RUNNING)


def test_image_and_output_of_running_formula():
    phi = running()
    inst = Instantiation({"a1": {"D"}, "a2": {"E"}, "a3": {"F"}},
                         {"A": {"r", "u"}, "B": {"s"}, "C": {"r", "s"}})
    check_instantiation(phi.context, inst)
    assert image(phi.context, inst) == {"r": {"A", "C", "D", "E"}, "s": {"B", "C", "D", "E"},
                                        "u": {"A", "E", "F"}}
    assert output_type(phi, inst) == {"A", "B", "C", "D", "E", "F"}


def test_invalid_instantiations():
    gamma = running().context
    with pytest.raises(InvalidInstantiation):
        check_instantiation(gamma, Instantiation({"a1": {"A"}, "a2": set(), "a3": set()},
                                                 {"A": {"r"}, "B": {"s"}, "C": {"r", "s"}}))
    with pytest.raises(InvalidInstantiation):
        check_instantiation(gamma, Instantiation({"a1": {"D"}, "a2": {"D"}, "a3": set()},
                                                 {"A": {"r"}, "B": {"s"}, "C": {"r", "s"}}))
    with pytest.raises(InvalidInstantiation):
        check_instantiation(gamma, Instantiation({"a1": set(), "a2": set(), "a3": set()},
                                                 {"A": {"s"}, "B": {"s"}, "C": {"r", "s"}}))


def test_soundness_of_instantiations():
    # every instantiation's image types the expression with the formula's output
    for text in CORPUS[:8]:
        e = parsed(text)
        phi = infer_formula(e)
        for n, inst in enumerate(instantiations(phi.context, ["A", "B", "C", "F0"])):
            assert typecheck(image(phi.context, inst), e) == output_type(phi, inst)
            if n > 300:
                break


def test_unsatisfiable_context():
    phi = infer_formula(parse_expr("(project[A](r) union project[B](s))"))
    assert not context_satisfiable(phi.context)
    assert list(instantiations(phi.context, ["A", "B"])) == []


def test_extend_running_formula():
    phi = extend_with_attribute(infer_formula(parse_expr("((rename[A/B](r) union s) join u)")), "C")
    rs = ["r", "s", "u"]
    expected = bf.parse("r | s | u -> r & s & !u | r & s & u | !r & !s & u")
    assert bf.equivalent(phi.context.constraint["C"], expected, rs)
    assert bf.equivalent(phi.context.constraint["C"], bf.parse("r <-> s"), rs)
    assert bf.equivalent(phi.outatt["C"], bf.parse("r | s | u"), rs)
    with pytest.raises(ValueError):
        extend_with_attribute(phi, "C")


def test_conjoin():
    g = TypeContext(frozenset({"r"}), frozenset({1}), {"r": frozenset({1})}, frozenset({"A"}),
                    {"A": bf.Var("r")})
    h = TypeContext(frozenset({"s"}), frozenset({1}), {"s": frozenset({1})}, frozenset({"A"}),
                    {"A": bf.Not(bf.Var("s"))})
    both = conjoin(g, h)
    assert both.relvars == {"r", "s"}
    assert bf.equivalent(both.constraint["A"], bf.parse("r & !s"), ["r", "s"])
    assert bf.equivalent(conjoin(h, g).constraint["A"], both.constraint["A"], ["r", "s"])
    other = TypeContext(frozenset({"r"}), frozenset({2}), {"r": frozenset({2})}, frozenset({"A"}),
                        {"A": bf.TRUE})
    with pytest.raises(IncompatibleContexts):
        conjoin(g, other)


def test_renaming_invariance():
    phi = running()
    renamed = rename_typevars(phi, {"a1": "x", "a2": "y", "a3": "z"})
    assert formulas_equivalent_bounded(phi, renamed)
    assert formulas_match_up_to_renaming(phi, renamed)
    with pytest.raises(ValueError):
        rename_typevars(phi, {"a1": "x", "a2": "x", "a3": "z"})


def test_distinguishes_different_formulas():
    phi = running()
    text = render_formula(phi).replace("decl u: c2 c3", "decl u: c3")
    other = parse_formula(text, phi.expr)
    assert not formulas_equivalent_bounded(phi, other)
    assert not formulas_match_up_to_renaming(phi, other)


def test_render_is_canonical_and_parses_back():
    phi = running()
    text = render_formula(phi)
    assert text.splitlines()[:4] == ["decl r: c1 c2", "decl s: c1 c2", "decl u: c2 c3", "out: c1 c2 c3"]
    back = parse_formula(text, phi.expr)
    assert render_formula(back) == text
    assert formulas_match_up_to_renaming(back, phi)
    assert render_formula(canonicalize(phi)) == text


@pytest.mark.parametrize("text", ["decl r: a\n", "out: a\nout: a\n", "decl r: a\nout: a\nattr A: r || B: r\n",
                                  "garbage\n"])
def test_format_errors(text):
    with pytest.raises(ValueError):
        parse_formula(text)


def test_format_error_type():
    with pytest.raises(FormulaFormatError):
        parse_formula("nonsense")


def test_outvar_invariant_on_corpus():
    for text in CORPUS:
        for sub in subexpressions(parsed(text)):
            assert outvar_invariant_holds(infer_formula(sub))
