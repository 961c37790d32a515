from hypothesis import given, settings, strategies as st

from pcfbisim.syntax import (
    BOOL, INT, UNIT, UNIT_V, AbstractName, Arrow, Fix, Product, SymConst, Tuple, bool_c, int_c,
    parse, subterms,
)
from pcfbisim.typecheck import elaborate
from pcfbisim.ulpatt import (
    Fresh, Hole, holes, plug, ulpatt_type_enumerate, ulpatt_type_symbolic, ulpatt_value,
)

BB = Arrow(BOOL, BOOL)


def fn(text):
    return elaborate(parse(text))[0]


def test_constant_pattern():
    assert ulpatt_value(int_c(5)) == (int_c(5), [])


def test_functions_become_numbered_holes():
    ident = fn("fun (x : Int) -> x")
    d, funs = ulpatt_value(Tuple((bool_c(True), ident)))
    assert d == Tuple((bool_c(True), Hole(1, ident.ftype)))
    assert funs == [ident]


def test_left_to_right_numbering():
    a, b = fn("fun (a : Int) -> a"), fn("fun (b : Bool) -> b")
    d, funs = ulpatt_value(Tuple((a, Tuple((b, int_c(3))))))
    assert d == Tuple((Hole(1, a.ftype), Tuple((Hole(2, b.ftype), int_c(3)))))
    assert funs == [a, b]


def test_symbolic_patterns():
    assert ulpatt_type_symbolic(UNIT, Fresh()) == (UNIT_V, [], [])
    assert ulpatt_type_symbolic(INT, Fresh()) == (SymConst(1, INT), [], [SymConst(1, INT)])
    d, names, consts = ulpatt_type_symbolic(Product((BB, INT)), Fresh())
    assert d == Tuple((Hole(1, BB), SymConst(1, INT)))
    assert names == [AbstractName(1, BB)] and consts == [SymConst(1, INT)]


def test_enumerate():
    dom = {BOOL: [bool_c(False), bool_c(True)]}
    assert sorted(d.val for d, _ in ulpatt_type_enumerate(BOOL, dom)) == [False, True]
    assert all(ns == [] for _, ns in ulpatt_type_enumerate(BOOL, dom))
    assert len(ulpatt_type_enumerate(Product((BOOL, BOOL)), dom)) == 4
    ((d, names),) = ulpatt_type_enumerate(Arrow(UNIT, UNIT), dom)
    assert d == Hole(1, Arrow(UNIT, UNIT)) and len(names) == 1


def test_enumeration_is_duplicate_free():
    dom = {BOOL: [bool_c(False), bool_c(True)], INT: [int_c(0), int_c(1), int_c(2)]}
    out = ulpatt_type_enumerate(Product((BOOL, INT, Arrow(INT, INT), UNIT)), dom)
    assert len(out) == len({d for d, _ in out}) == 6


FUNS = ["fun (x : Int) -> x", "fun (b : Bool) -> not b", "fun (u : Unit) -> u"]


def values():
    leaf = st.one_of(
        st.integers(-3, 3).map(int_c), st.booleans().map(bool_c), st.just(UNIT_V),
        st.sampled_from(FUNS).map(fn),
        st.integers(1, 9).map(lambda i: AbstractName(i, BB, 0)),
    )
    return st.recursive(leaf, lambda sub: st.lists(sub, min_size=2, max_size=3)
                        .map(lambda xs: Tuple(tuple(xs))), max_leaves=8)


def count_functions(v):
    if isinstance(v, (Fix, AbstractName)):
        return 1
    if isinstance(v, Tuple):
        return sum(count_functions(x) for x in v.items)
    return 0


@settings(max_examples=300, deadline=None)
@given(values())
def test_round_trip_and_hole_numbering(v):
    d, funs = ulpatt_value(v)
    assert plug(d, funs) == v
    assert len(funs) == count_functions(v)
    assert [h.index for h in holes(d)] == list(range(1, len(funs) + 1))
    assert not any(isinstance(x, (Fix, AbstractName)) for x in subterms(d))
