import random

import pytest

from helpers import SMALL_DOMAIN, composition_cases, prog, small_programs
from pcfbisim.game_oracle import (
    Exhausted, GOp, GOpApp, GOpRet, GPropApp, GPropRet, IllegalMove,
    MissingName, NameSupply, PName, TAU, Terminated, compose_program_context, context_config,
    dual, dump_play, g_transitions, is_play, match_moves, next_opponent, oview, permute,
    play_opponent, program_config, pview, random_play,
)
from pcfbisim import oracle_contexts as oc
from pcfbisim.oracle_contexts import AppContext, Apply
from pcfbisim.pairs import CORPUS_DIR, read_pair
from pcfbisim.reduction import HOLE, CondFrame, EvalContext, OpFrame, Terminated as Done, evaluate
from pcfbisim.syntax import (
    BOOL, INT, UNIT, UNIT_V, AbstractName, Arrow, bool_c, bottom, int_c,
)
from pcfbisim.ulpatt import Hole

UU = Arrow(UNIT, UNIT)


def tau_closure(c, supply=None):
    supply = supply or NameSupply(100)
    while True:
        trs = g_transitions(c, SMALL_DOMAIN, supply)
        if len(trs) != 1 or trs[0][0] is not TAU:
            return c, trs
        c = trs[0][1]


def test_program_returns_a_constant():
    _, trs = tau_closure(program_config(prog("2 + 3")))
    ((move, c),) = trs
    assert move == GPropRet(int_c(5), ())
    assert isinstance(c, GOp)


def test_context_plays_the_program_return_first():
    ctx = AppContext(UU, (Apply(prog("fun (y : Unit) -> y")),))
    c = context_config(ctx.eval_context(), UU, UNIT)
    trs = g_transitions(c, SMALL_DOMAIN, NameSupply())
    assert trs and all(isinstance(m, GOpRet) for m, _ in trs)
    ((m, nxt),) = trs
    assert m.pat == Hole(1, UU) and len(m.intro) == 1
    _, trs = tau_closure(nxt)
    assert isinstance(trs[0][0], GPropApp) and trs[0][0].name == m.intro[0]


def test_forced_opponent_move_is_replayed():
    a = AbstractName(1, UU)
    b = PName(2, UU)
    t = (GPropRet(Hole(1, UU), (b,)), GOpApp(b, UNIT_V, ()), GPropApp(a, UNIT_V, ()),
         GOpRet(UNIT_V, ()))
    assert next_opponent(t[:3]) == []
    # the same call again from an equal O-view must get the same answer
    t2 = t + (GPropApp(a, UNIT_V, ()),)
    assert next_opponent(t2) == [GOpRet(UNIT_V, ())]


def test_views_of_short_plays_are_themselves():
    assert pview(()) == () and oview(()) == ()
    m = (GPropRet(int_c(1), ()),)
    assert pview(m) == m and oview(m) == m


def test_oview_of_a_nested_call():
    b = PName(1, Arrow(UNIT, UU))
    t = (GPropRet(Hole(1, b.type), (b,)), GOpApp(b, UNIT_V, ()),
         GPropRet(Hole(1, UU), (PName(3, UU),)))
    assert oview(t) == t


def test_oview_of_a_complete_top_level_play_keeps_the_top_level_moves():
    f = PName(1, Arrow(UU, UNIT))
    a = AbstractName(2, UU)
    t = (GPropRet(Hole(1, f.type), (f,)), GOpApp(f, Hole(1, UU), (a,)),
         GPropApp(a, UNIT_V, ()), GOpRet(UNIT_V, ()), GPropRet(UNIT_V, ()))
    assert is_play(t)
    assert oview(t) == (t[0], t[1], t[4])
    assert pview(t) == t


def test_is_play_examples():
    assert is_play(())
    a = AbstractName(1, UU)
    bad = (GPropRet(int_c(0), ()), GOpApp(PName(9, UU), UNIT_V, ()))
    assert not is_play(bad)
    assert not is_play((GPropApp(a, UNIT_V, ()),))


def test_dual():
    assert dual((), {}) == ()
    a, b = AbstractName(1, UU), PName(2, UU)
    phi = {a: b}
    t = (GPropRet(Hole(1, UU), (b,)), GOpApp(b, UNIT_V, ()))
    d = dual(t, phi)
    assert d == (GOpRet(Hole(1, UU), (a,)), GPropApp(a, UNIT_V, ()))
    assert dual(d, phi) == t
    with pytest.raises(MissingName):
        dual((GPropRet(Hole(1, UU), (PName(7, UU),)),), phi)


def test_compose_first_order():
    ctx = EvalContext((CondFrame(UNIT_V, bottom(UNIT)), OpFrame("==", (), (int_c(5),))), INT)
    assert isinstance(compose_program_context(prog("2 + 3"), ctx, INT, check=True), Terminated)
    r = compose_program_context(prog("2 + 4"), ctx, INT, fuel=500)
    assert isinstance(r, Exhausted)


def test_compose_divergent_program():
    r = compose_program_context(bottom(UNIT), HOLE.with_type(UNIT), UNIT, fuel=300)
    assert isinstance(r, Exhausted)


def test_example_two_composition():
    pair = read_pair(CORPUS_DIR / "ex2.pcf")
    left, right = prog(pair.left), prog(pair.right)
    tp = left.ftype
    probe = prog("""fun (p : (Bool -> Bool) * (Bool -> Bool)) ->
                      let (x, fd) = p in if fd true then x false else true""")
    ctx = AppContext(tp, (Apply(probe), Apply(bool_c(True)), oc.Test(bool_c(True))))
    r1 = compose_program_context(left, ctx.eval_context(), tp, UNIT, fuel=3000, check=True)
    r2 = compose_program_context(right, ctx.eval_context(), tp, UNIT, fuel=3000)
    assert isinstance(r1, Terminated)
    assert isinstance(r2, Exhausted)


def test_illegal_opponent_move_is_rejected():
    _, trs = tau_closure(program_config(prog("fun (b : Bool) -> b")))
    ((_, c),) = trs
    with pytest.raises(IllegalMove):
        play_opponent(c, GOpApp(PName(999, Arrow(BOOL, BOOL)), bool_c(True), ()))


def test_dump_play():
    assert dump_play(()) == "ε"
    assert dump_play((GPropRet(int_c(1), ()),)).strip().startswith("0  pa (1)")


def random_plays(n, seed):
    rng = random.Random(seed)
    pool = [e for _, e in small_programs()]
    for i in range(n):
        e = pool[i % len(pool)]
        yield random_play(program_config(e), rng, max_moves=rng.randint(2, 12),
                          domain=SMALL_DOMAIN)


def test_random_plays_are_plays():
    for t in random_plays(150, seed=21):
        rep = is_play(t)
        assert rep.ok, (dump_play(t), rep.problems)


def test_permuted_plays_are_plays():
    rng = random.Random(4)
    for t in random_plays(60, seed=22):
        names = {n for m in t for n in m.intro}
        ids = [n.id for n in names]
        shuffled = ids[:]
        rng.shuffle(shuffled)
        perm = {}
        for n in names:
            new = shuffled[ids.index(n.id)] + 1000
            perm[n] = type(n)(new, n.type)
        t2 = tuple(permute(m, perm) for m in t)
        assert is_play(t2)
        assert match_moves(t, t2) is not None


def test_composition_agrees_with_evaluation():
    for text, e, ctx in composition_cases(6):
        r = compose_program_context(e, ctx.eval_context(), ctx.hole_type, ctx.result_type,
                                    fuel=3000, check=True)
        direct = evaluate(ctx.plug(e), 3000)
        assert isinstance(r, Terminated) == isinstance(direct, Done), (text, str(ctx))
