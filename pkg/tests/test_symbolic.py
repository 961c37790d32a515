import random
import shutil

import pytest
from hypothesis import assume, given, settings, strategies as st

from helpers import brute_force_sat, random_constraint
from pcfbisim.reduction import Branch, step
from pcfbisim.symbolic import (
    InternalSolver, NonlinearError, Sat, SmtLibSolver, SymEnv, UndeclaredConstant, Unsat,
    assert_constraint, eval_symbolic, evaluate_term, make_solver, normalize_env, satisfiable,
    smtlib_script,
)
from pcfbisim.syntax import BOOL, INT, Cond, SymConst, SymOp, int_c

Z3 = shutil.which("z3") or "/usr/local/bin/z3"
HAVE_Z3 = shutil.which(Z3) is not None

k1, k2, k7, k9 = SymConst(1, INT), SymConst(2, INT), SymConst(7, INT), SymConst(9, INT)
a, b = SymConst(3, BOOL), SymConst(4, BOOL)


def op(o, x, y, tp=BOOL):
    return SymOp(o, (x, y), tp)


def env_of(*consts, path=()):
    env = SymEnv().declare(*consts)
    for p in path:
        env = assert_constraint(env, p)
    return env


def test_assert_constraint():
    env = env_of(k1, path=[op(">", k1, int_c(0))])
    assert env.path == (op(">", k1, int_c(0)),)
    env2 = assert_constraint(env, op("<", k1, int_c(9)))
    assert len(env2.path) == 2
    with pytest.raises(UndeclaredConstant):
        assert_constraint(env, op(">", k2, int_c(0)))


def test_satisfiable_examples():
    r = satisfiable(env_of(k1, path=[op(">", k1, int_c(0)), op("<", k1, int_c(2))]))
    assert isinstance(r, Sat) and r.model[1] == 1
    assert isinstance(satisfiable(env_of(k1, path=[op(">", k1, int_c(0)),
                                                   op("<", k1, int_c(1))])), Unsat)
    assert isinstance(satisfiable(env_of(a, path=[a, SymOp("not", (a,), BOOL)])), Unsat)


def test_unbounded_integers_outside_the_box():
    r = satisfiable(env_of(k1, path=[op(">", k1, int_c(1000))]))
    assert isinstance(r, Sat) and r.model[1] > 1000
    # 2x = 1 has no integer solution anywhere
    assert isinstance(satisfiable(env_of(k1, path=[op("==", op("*", int_c(2), k1, INT),
                                                      int_c(1))])), Unsat)


def test_eval_symbolic():
    assert eval_symbolic("+", [int_c(2), int_c(3)]) == int_c(5)
    assert eval_symbolic("==", [k1, k2]) == op("==", k1, k2)
    r = step(Cond(op("==", k1, k2), int_c(1), int_c(2)))
    assert isinstance(r, Branch) and r.guard == op("==", k1, k2)


def test_nonlinear_product_is_rejected():
    with pytest.raises(NonlinearError):
        eval_symbolic("*", [k1, k2])


def test_normalize_env():
    env = env_of(k9, path=[op(">", k9, int_c(0))])
    norm, ren = normalize_env(env, [k9])
    assert norm.path == (op(">", k1, int_c(0)),) and ren == {k9: k1}
    other = env_of(k7, path=[op(">", k7, int_c(0))])
    assert normalize_env(other, [k7])[0] == norm


def test_normalize_keeps_dead_linking_constant():
    env = env_of(k9, k7, path=[op("==", k9, k7, BOOL), op(">", k7, int_c(0))])
    norm, ren = normalize_env(env, [k9])
    assert len(norm.decls) == 2 and len(norm.path) == 2
    bad = assert_constraint(env, op("<", k9, int_c(1)))
    assert isinstance(satisfiable(normalize_env(bad, [k9])[0]), Unsat)
    assert isinstance(satisfiable(bad), Unsat)


def test_normalize_drops_unrelated_dead_constraints():
    env = env_of(k9, k7, path=[op(">", k7, int_c(0)), op(">", k9, int_c(2))])
    norm, _ = normalize_env(env, [k9])
    assert norm.path == (op(">", k1, int_c(2)),)


def test_smtlib_script_shape():
    text = smtlib_script(env_of(k9, path=[op(">", k9, int_c(0))]))
    assert "(set-logic QF_LIA)" in text and "(declare-const k9 Int)" in text
    assert "(assert (> k9 0))" in text


def test_make_solver():
    assert isinstance(make_solver("internal"), InternalSolver)
    assert isinstance(make_solver("smtlib:z3"), SmtLibSolver)
    with pytest.raises(ValueError):
        make_solver("cvc9")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_internal_solver_against_brute_force(seed):
    terms, decls = random_constraint(random.Random(seed), n_int=2, n_bool=1, bound=4)
    r = InternalSolver().check_terms(terms, decls)
    assert isinstance(r, Sat) == brute_force_sat(terms, decls, bound=4)
    if isinstance(r, Sat):
        assert all(evaluate_term(t, r.model) for t in terms)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normalisation_preserves_satisfiability(seed):
    terms, decls = random_constraint(random.Random(seed), n_int=3, n_bool=1, bound=4)
    env = SymEnv(tuple(decls.items()), tuple(terms))
    live = [SymConst(i, t) for i, t in sorted(decls.items())][:1]
    s = InternalSolver()
    before = s.check(env)
    # dead conjuncts may be dropped, which is only sound on a satisfiable path
    assume(isinstance(before, Sat))
    norm, _ = normalize_env(env, live)
    assert isinstance(s.check(norm), Sat)
    # adding the same constraint on the live constant keeps the answers aligned
    extra = SymOp(">", (live[0], int_c(2)), BOOL)
    norm2, _ = normalize_env(assert_constraint(env, extra), live)
    assert type(s.check(norm2)) is type(s.check(assert_constraint(env, extra)))


@pytest.mark.skipif(not HAVE_Z3, reason="no z3 binary")
@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_internal_solver_agrees_with_external_backend(seed):
    terms, decls = random_constraint(random.Random(seed))
    mine = InternalSolver().check_terms(terms, decls)
    theirs = SmtLibSolver(Z3).check_terms(terms, decls)
    assert type(mine) is type(theirs)
