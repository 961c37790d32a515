"""Monomorphic type inference by unification.

``elaborate`` returns the program with every ``Fix`` annotated, which is
what the transition systems need: holes and abstract names must carry
concrete types.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    BOOL, INT, AbstractName, App, Arrow, BaseType, Cond, Const, Expr, Fix,
    LetTuple, PrimOp, Product, SymConst, SymOp, Tuple, Type, Var, show, show_type,
)


class TypeCheckError(Exception):
    def __init__(self, msg: str, term: Optional[Expr] = None):
        where = f" in `{_clip(show(term))}`" if term is not None else ""
        super().__init__(msg + where)
        self.term = term


def _clip(s: str, n: int = 60) -> str:
    return s if len(s) <= n else s[: n - 3] + "..."


@dataclass(frozen=True)
class TVar:
    id: int


ARITH = {"+", "-", "*", "/", "mod"}
ORDER = {"<", "<=", ">", ">="}
EQUALITY = {"==", "<>"}
LOGIC = {"&&", "||"}

# result type of each operator given its (already checked) operand types
OP_RESULT = {**{o: INT for o in ARITH}, **{o: BOOL for o in ORDER | EQUALITY | LOGIC},
             "not": BOOL}


class _Infer:
    def __init__(self):
        self.subst: dict = {}
        self.n = 0
        self.eq_vars: list = []   # operand types of == / <>

    def fresh(self) -> TVar:
        self.n += 1
        return TVar(self.n)

    def find(self, t):
        while isinstance(t, TVar) and t in self.subst:
            t = self.subst[t]
        return t

    def resolve(self, t):
        t = self.find(t)
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.dom), self.resolve(t.cod))
        if isinstance(t, Product):
            return Product(tuple(self.resolve(x) for x in t.items))
        return t

    def occurs(self, v: TVar, t) -> bool:
        t = self.find(t)
        if t == v:
            return True
        if isinstance(t, Arrow):
            return self.occurs(v, t.dom) or self.occurs(v, t.cod)
        if isinstance(t, Product):
            return any(self.occurs(v, x) for x in t.items)
        return False

    def unify(self, a, b, term: Expr):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self.occurs(a, b):
                raise TypeCheckError("recursive type required", term)
            self.subst[a] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, term)
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, term)
            self.unify(a.cod, b.cod, term)
            return
        if (isinstance(a, Product) and isinstance(b, Product)
                and len(a.items) == len(b.items)):
            for x, y in zip(a.items, b.items):
                self.unify(x, y, term)
            return
        raise TypeCheckError(
            f"expected {self.show(b)}, found {self.show(a)}", term)

    def show(self, t) -> str:
        t = self.resolve(t)
        return _show_open(t)

    def infer(self, env: dict, e: Expr):
        if isinstance(e, Const):
            return e.type
        if isinstance(e, Var):
            if e.name not in env:
                raise TypeCheckError(f"unbound variable {e.name}", e)
            return env[e.name]
        if isinstance(e, AbstractName):
            return e.type
        if isinstance(e, SymConst):
            return e.type
        if isinstance(e, Tuple):
            return Product(tuple(self.infer(env, x) for x in e.items))
        if isinstance(e, (PrimOp, SymOp)):
            return self.infer_op(env, e)
        if isinstance(e, App):
            ft = self.infer(env, e.fn)
            at = self.infer(env, e.arg)
            res = self.fresh()
            self.unify(ft, Arrow(at, res), e)
            return res
        if isinstance(e, Cond):
            self.unify(self.infer(env, e.guard), BOOL, e.guard)
            t1 = self.infer(env, e.then)
            t2 = self.infer(env, e.else_)
            self.unify(t2, t1, e)
            return t1
        if isinstance(e, Fix):
            p = e.ptype if e.ptype is not None else self.fresh()
            r = e.rtype if e.rtype is not None else self.fresh()
            inner = {**env, e.fname: Arrow(p, r), e.param: p}
            self.unify(self.infer(inner, e.body), r, e.body)
            return Arrow(p, r)
        if isinstance(e, LetTuple):
            bt = self.infer(env, e.bound)
            if len(e.binders) == 1:
                return self.infer({**env, e.binders[0]: bt}, e.body)
            comps = tuple(self.fresh() for _ in e.binders)
            self.unify(bt, Product(comps), e.bound)
            return self.infer({**env, **dict(zip(e.binders, comps))}, e.body)
        raise TypeCheckError(f"unknown expression form {type(e).__name__}")

    def infer_op(self, env: dict, e):
        args = [self.infer(env, a) for a in e.args]
        op = e.op
        arity = 1 if op == "not" else 2
        if len(args) != arity:
            raise TypeCheckError(f"operator {op} takes {arity} operand(s)", e)
        if op in ARITH or op in ORDER:
            for a, sub in zip(args, e.args):
                self.unify(a, INT, sub)
        elif op in LOGIC or op == "not":
            for a, sub in zip(args, e.args):
                self.unify(a, BOOL, sub)
        elif op in EQUALITY:
            self.unify(args[1], args[0], e)
            self.eq_vars.append((args[0], e))
        else:
            raise TypeCheckError(f"unknown operator {op}", e)
        return OP_RESULT[op]

    def finish_equalities(self):
        for t, term in self.eq_vars:
            r = self.find(t)
            if isinstance(r, TVar):
                # undetermined equality defaults to integers
                self.subst[r] = INT
            elif r not in (INT, BOOL):
                raise TypeCheckError(
                    f"equality is only defined on Int and Bool, not {self.show(r)}", term)

    def annotate(self, e: Expr) -> Expr:
        def full(t, term):
            r = self.resolve(t)
            if _has_tvar(r):
                raise TypeCheckError(
                    f"type {_show_open(r)} is not fully determined; annotate the binder",
                    term)
            return r

        def go(e: Expr) -> Expr:
            if isinstance(e, Fix):
                return Fix(e.fname, e.param, go(e.body),
                           full(self.fix_types[id(e)][0], e),
                           full(self.fix_types[id(e)][1], e))
            if isinstance(e, Tuple):
                return Tuple(tuple(go(x) for x in e.items))
            if isinstance(e, PrimOp):
                return PrimOp(e.op, tuple(go(x) for x in e.args))
            if isinstance(e, App):
                return App(go(e.fn), go(e.arg))
            if isinstance(e, Cond):
                return Cond(go(e.guard), go(e.then), go(e.else_))
            if isinstance(e, LetTuple):
                return LetTuple(e.binders, go(e.bound), go(e.body))
            return e

        return go(e)


def _has_tvar(t) -> bool:
    if isinstance(t, TVar):
        return True
    if isinstance(t, Arrow):
        return _has_tvar(t.dom) or _has_tvar(t.cod)
    if isinstance(t, Product):
        return any(_has_tvar(x) for x in t.items)
    return False


def _show_open(t, ctx: int = 0) -> str:
    if isinstance(t, TVar):
        return f"'t{t.id}"
    if isinstance(t, BaseType):
        return t.name
    if isinstance(t, Arrow):
        s = f"{_show_open(t.dom, 1)} -> {_show_open(t.cod)}"
        return f"({s})" if ctx >= 1 else s
    s = " * ".join(_show_open(x, 2) for x in t.items)
    return f"({s})" if ctx >= 2 else s


class _Recording(_Infer):
    """Inference that remembers the type variables chosen for each Fix."""

    def __init__(self):
        super().__init__()
        self.fix_types: dict = {}

    def infer(self, env, e):
        if isinstance(e, Fix):
            p = e.ptype if e.ptype is not None else self.fresh()
            r = e.rtype if e.rtype is not None else self.fresh()
            self.fix_types[id(e)] = (p, r)
            inner = {**env, e.fname: Arrow(p, r), e.param: p}
            self.unify(self.infer(inner, e.body), r, e.body)
            return Arrow(p, r)
        return super().infer(env, e)


def infer(env: dict, e: Expr) -> Type:
    """Type of ``e`` under ``env`` (identifier -> Type).

    Raises TypeCheckError when ill typed or when the type is not determined.
    """
    inf = _Recording()
    t = inf.infer(dict(env), e)
    inf.finish_equalities()
    r = inf.resolve(t)
    if _has_tvar(r):
        raise TypeCheckError(
            f"type {_show_open(r)} is not fully determined; annotate the program", e)
    return r


def elaborate(e: Expr, expected: Optional[Type] = None, env: Optional[dict] = None):
    """Infer and annotate.  Returns (annotated expression, type)."""
    inf = _Recording()
    t = inf.infer(dict(env or {}), e)
    if expected is not None:
        inf.unify(t, expected, e)
    inf.finish_equalities()
    out = inf.annotate(e)
    r = inf.resolve(t)
    if _has_tvar(r):
        raise TypeCheckError(
            f"type {_show_open(r)} is not fully determined; annotate the program", e)
    return out, r


def elaborate_pair(e1: Expr, e2: Expr):
    """Type two programs at a common type.  Returns (e1', e2', T)."""
    inf = _Recording()
    t1 = inf.infer({}, e1)
    t2 = inf.infer({}, e2)
    inf.unify(t2, t1, e2)
    inf.finish_equalities()
    a1 = inf.annotate(e1)
    a2 = inf.annotate(e2)
    r = inf.resolve(t1)
    if _has_tvar(r):
        raise TypeCheckError(
            f"type {_show_open(r)} is not fully determined; annotate the programs")
    return a1, a2, r


def check(e: Expr, t: Type, env: Optional[dict] = None) -> None:
    got = infer(env or {}, e)
    if got != t:
        raise TypeCheckError(f"expected {show_type(t)}, found {show_type(got)}", e)
