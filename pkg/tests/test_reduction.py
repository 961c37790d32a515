from hypothesis import given, settings, strategies as st

from pcfbisim.reduction import (
    ABSTRACT_APP, DIV_ZERO, Decomposition, Exhausted, IsValue, Stepped, Stuck, Terminated,
    decompose, diverges, evaluate, step,
)
from pcfbisim.syntax import (
    UNIT, AbstractName, App, Arrow, PrimOp, UNIT_V, bottom, int_c, parse, show,
)
from pcfbisim.symbolic import trunc_div, trunc_mod
from pcfbisim.typecheck import elaborate


def run(text, fuel=1000):
    return evaluate(elaborate(parse(text))[0], fuel)


def test_decompose_finds_leftmost_redex():
    d = decompose(parse("(fun x -> x) 5 + 1"))
    assert isinstance(d, Decomposition)
    assert show(d.redex) == "(fun x -> x) 5"
    assert show(d.ctx.plug(int_c(7))) == "7 + 1"


def test_decompose_abstract_application_is_stuck():
    alpha = AbstractName(1, Arrow(UNIT, UNIT), 0)
    d = decompose(App(alpha, UNIT_V))
    assert isinstance(d, Stuck) and d.reason == ABSTRACT_APP


def test_decompose_value():
    assert isinstance(decompose(parse("(1, 2)")), IsValue)


def test_steps():
    assert step(parse("(fix f (x) -> x) 5")).expr == int_c(5)
    r = step(parse("let (x, y) = (1, 2) in x + y"))
    assert r.expr == PrimOp("+", (int_c(1), int_c(2)))
    assert step(r.expr).expr == int_c(3)
    assert step(parse("if false then 1 else 2")).expr == int_c(2)


def test_evaluate():
    assert isinstance(evaluate(bottom(UNIT), 1000), Exhausted)
    assert evaluate(parse("2 + 3"), 10) == Terminated(int_c(5), 1)


def test_division_by_zero_is_stuck_and_counts_as_divergence():
    r = run("1 / (1 - 1)")
    assert isinstance(r, Stuck) and r.reason == DIV_ZERO
    assert diverges(r)


def test_bottom_is_proved_divergent_with_loop_detection():
    r = evaluate(bottom(UNIT), 1000, detect_loops=True)
    assert isinstance(r, Exhausted) and r.loop and diverges(r)


def test_recursion_is_not_mistaken_for_a_loop():
    text = "let rec f (n : Int) : Int = if n == 0 then 0 else f (n - 1) in f 30"
    e = elaborate(parse(text))[0]
    assert evaluate(e, 10000, detect_loops=True).value == int_c(0)


def test_example_two_context_terminates_with_left_program():
    left = """fun (f : ((Bool -> Bool) * (Bool -> Bool)) -> Bool) (b : Bool) ->
      let rec x (d : Bool) : Bool = f (x, fun (_ : Bool) -> d) in x b"""
    right = """fun (f : ((Bool -> Bool) * (Bool -> Bool)) -> Bool) (b : Bool) ->
      f ((fun (_ : Bool) -> _bot_), fun (_ : Bool) -> b)"""
    # the context hands in a function that calls x only after fd answered
    ctx = """(fun (m : ((Bool -> Bool) * (Bool -> Bool) -> Bool) -> Bool -> Bool) ->
      m (fun (p : (Bool -> Bool) * (Bool -> Bool)) ->
           let (x, fd) = p in if fd true then x false else true) true) ({})"""
    assert isinstance(run(ctx.format(left), 5000), Terminated)
    assert diverges(evaluate(elaborate(parse(ctx.format(right)))[0], 5000, detect_loops=True))


def test_truncated_division():
    assert run("7 / 2").value == int_c(3)
    assert run("(0 - 7) / 2").value == int_c(-3)
    assert run("(0 - 7) mod 2").value == int_c(-1)


# ----- naive environment evaluator as an independent reference


def naive(e, env=None):
    from pcfbisim.syntax import App, Cond, Const, Fix, LetTuple, PrimOp, Tuple, Var
    env = env or {}
    if isinstance(e, Const):
        return e.val
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Tuple):
        return tuple(naive(x, env) for x in e.items)
    if isinstance(e, Fix):
        def f(v, e=e, env=env):
            inner = dict(env)
            inner[e.fname] = f
            inner[e.param] = v
            return naive(e.body, inner)
        return f
    if isinstance(e, App):
        fn = naive(e.fn, env)
        return fn(naive(e.arg, env))
    if isinstance(e, Cond):
        return naive(e.then if naive(e.guard, env) else e.else_, env)
    if isinstance(e, LetTuple):
        v = naive(e.bound, env)
        vals = (v,) if len(e.binders) == 1 else v
        return naive(e.body, {**env, **dict(zip(e.binders, vals))})
    if isinstance(e, PrimOp):
        args = [naive(a, env) for a in e.args]
        ops = {"+": lambda a, b: a + b, "-": lambda a, b: a - b, "*": lambda a, b: a * b,
               "/": trunc_div, "mod": trunc_mod, "<": lambda a, b: a < b,
               "<=": lambda a, b: a <= b, ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
               "==": lambda a, b: a == b, "<>": lambda a, b: a != b,
               "&&": lambda a, b: a and b, "||": lambda a, b: a or b, "not": lambda a: not a}
        return ops[e.op](*args)
    raise AssertionError(e)


def int_terms(depth, scope):
    leaves = [st.integers(-9, 9).map(lambda n: f"({n})")] + [st.just(v) for v in scope]
    leaf = st.one_of(*leaves)
    if depth == 0:
        return leaf
    sub = int_terms(depth - 1, scope)
    var = f"v{len(scope)}"
    inner = int_terms(depth - 1, scope + [var])
    return st.one_of(
        leaf,
        st.tuples(sub, st.sampled_from(["+", "-", "*"]), sub).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(sub, st.sampled_from(["<", "==", ">="]), sub, sub, sub).map(
            lambda t: f"(if {t[0]} {t[1]} {t[2]} then {t[3]} else {t[4]})"),
        st.tuples(inner, sub).map(lambda t: f"((fun ({var} : Int) -> {t[0]}) {t[1]})"),
        st.tuples(inner, sub, sub).map(
            lambda t: f"(let ({var}, _) = ({t[1]}, {t[2]}) in {t[0]})"),
    )


@settings(max_examples=300, deadline=None)
@given(int_terms(3, []))
def test_small_step_agrees_with_naive_evaluator(text):
    e = elaborate(parse(text))[0]
    r = evaluate(e, 10000)
    assert isinstance(r, Terminated)
    assert r.value.val == naive(e)


@settings(max_examples=200, deadline=None)
@given(int_terms(3, []), st.integers(0, 50))
def test_fuel_monotonicity(text, extra):
    e = elaborate(parse(text))[0]
    r = evaluate(e, 10000)
    exact = evaluate(e, r.steps)
    assert exact == r
    assert evaluate(e, r.steps + extra) == r
    if r.steps:
        assert isinstance(evaluate(e, r.steps - 1), Exhausted)


@settings(max_examples=200, deadline=None)
@given(int_terms(3, []))
def test_step_is_deterministic(text):
    e = elaborate(parse(text))[0]
    for _ in range(200):
        a, b = step(e), step(e)
        assert a == b
        if not isinstance(a, Stepped):
            break
        e = a.expr
