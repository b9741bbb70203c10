"""Shared hypothesis strategies: random expressions, assignments and databases."""
from hypothesis import strategies as st

from polyra.evaluator import Database, Relation
from polyra.ra_ast import (
    Attr, Comparison, Difference, Join, Literal, Predicate, Product, Project,
    ProjectOut, RelVarRef, Rename, Select, Union_,
)

RELVARS = ("r", "s", "u")
ATTRS = ("A", "B", "C")

relvar_refs = st.sampled_from(RELVARS).map(RelVarRef)
attr_names = st.sampled_from(ATTRS)

literals = st.one_of(
    st.integers(0, 9).map(lambda n: Literal(str(n), quoted=False)),
    st.sampled_from(["x", "y", "a b"]).map(Literal),
)


@st.composite
def comparisons(draw):
    left = Attr(draw(attr_names))
    right = draw(st.one_of(attr_names.map(Attr), literals))
    op = draw(st.sampled_from(["=", "!=", "<", "<=", ">", ">="]))
    if draw(st.booleans()):
        left, right = right, left
    return Comparison(left, op, right)


predicates = st.lists(comparisons(), min_size=1, max_size=2).map(lambda cs: Predicate(tuple(cs)))


def _extend(children):
    pair = st.tuples(children, children)
    distinct = st.lists(attr_names, min_size=2, max_size=2, unique=True)
    return st.one_of(
        pair.map(lambda p: Union_(*p)),
        pair.map(lambda p: Difference(*p)),
        pair.map(lambda p: Join(*p)),
        pair.map(lambda p: Product(*p)),
        st.tuples(predicates, children).map(lambda t: Select(*t)),
        st.tuples(st.lists(attr_names, max_size=3, unique=True), children)
          .map(lambda t: Project(tuple(t[0]), t[1])),
        st.tuples(distinct, children).map(lambda t: Rename(t[0][0], t[0][1], t[1])),
        st.tuples(attr_names, children).map(lambda t: ProjectOut(*t)),
    )


def expressions(max_leaves: int = 6):
    return st.recursive(relvar_refs, _extend, max_leaves=max_leaves)


# generic expressions use no literals or ordered comparisons
generic_predicates = st.lists(
    st.tuples(attr_names, st.sampled_from(["=", "!="]), attr_names)
      .filter(lambda t: t[0] != t[2])
      .map(lambda t: Comparison(Attr(t[0]), t[1], Attr(t[2]))),
    min_size=1, max_size=2,
).map(lambda cs: Predicate(tuple(cs)))

assignments = st.fixed_dictionaries(
    {r: st.frozensets(st.sampled_from(ATTRS + ("D", "E"))) for r in RELVARS}
)


@st.composite
def databases(draw, schema, values=("0", "1", "x"), max_rows=3):
    contents = {}
    for r, rel_type in schema.items():
        attrs = sorted(rel_type)
        rows = draw(st.lists(st.tuples(*[st.sampled_from(values) for _ in attrs]), max_size=max_rows))
        contents[r] = Relation(rel_type, (frozenset(zip(attrs, t)) for t in rows))
    return Database(contents)
