"""Small-step call-by-value reduction with evaluation contexts."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .symbolic import DivisionByZero, eval_symbolic
from .syntax import (
    AbstractName, App, Cond, Const, Expr, Fix, LetTuple, PrimOp, SymConst, SymOp,
    Tuple, Type, Var, free_vars, is_symbolic, is_value,
)

_rename = itertools.count(1)


# -------------------------------------------------------------- frames


@dataclass(frozen=True)
class TupleFrame:
    done: tuple
    rest: tuple


@dataclass(frozen=True)
class OpFrame:
    op: str
    done: tuple
    rest: tuple


@dataclass(frozen=True)
class AppLeft:
    arg: Expr


@dataclass(frozen=True)
class AppRight:
    fn: Expr


@dataclass(frozen=True)
class CondFrame:
    then: Expr
    else_: Expr


@dataclass(frozen=True)
class LetFrame:
    binders: tuple
    body: Expr


Frame = Union[TupleFrame, OpFrame, AppLeft, AppRight, CondFrame, LetFrame]


@dataclass(frozen=True)
class EvalContext:
    """Frames listed outermost first; ``hole_type`` is optional metadata."""

    frames: tuple = ()
    hole_type: Optional[Type] = None

    def plug(self, e: Expr) -> Expr:
        for fr in reversed(self.frames):
            e = plug_frame(fr, e)
        return e

    def depth(self) -> int:
        return len(self.frames)

    def with_type(self, tp: Type) -> "EvalContext":
        return EvalContext(self.frames, tp)


HOLE = EvalContext()


def plug_frame(fr: Frame, e: Expr) -> Expr:
    if isinstance(fr, TupleFrame):
        return Tuple(fr.done + (e,) + fr.rest)
    if isinstance(fr, OpFrame):
        return PrimOp(fr.op, fr.done + (e,) + fr.rest)
    if isinstance(fr, AppLeft):
        return App(e, fr.arg)
    if isinstance(fr, AppRight):
        return App(fr.fn, e)
    if isinstance(fr, CondFrame):
        return Cond(e, fr.then, fr.else_)
    if isinstance(fr, LetFrame):
        return LetTuple(fr.binders, e, fr.body)
    raise TypeError(fr)


# -------------------------------------------------------------- results


@dataclass(frozen=True)
class Decomposition:
    ctx: EvalContext
    redex: Expr


@dataclass(frozen=True)
class Stepped:
    expr: Expr
    # the beta redex that fired and its context depth, for loop detection
    redex: Optional[Expr] = field(default=None, compare=False)
    depth: int = field(default=0, compare=False)


@dataclass(frozen=True)
class IsValue:
    value: Expr


@dataclass(frozen=True)
class Stuck:
    reason: str
    ctx: Optional[EvalContext] = field(default=None, compare=False)
    redex: Optional[Expr] = field(default=None, compare=False)


@dataclass(frozen=True)
class Branch:
    """Conditional on a symbolic guard: both continuations, fully plugged."""

    guard: Expr
    if_true: Expr
    if_false: Expr


StepResult = Union[Stepped, IsValue, Stuck, Branch]

ABSTRACT_APP = "abstract-application"
DIV_ZERO = "division-by-zero"


def decompose(e: Expr):
    """Split ``e`` into an evaluation context and its redex.

    Returns Decomposition, IsValue or Stuck.  An application of an abstract
    name is reported as Stuck(ABSTRACT_APP) with context and redex attached,
    since only the transition system can proceed from there.
    """
    frames = []
    while True:
        if is_value(e):
            if not frames:
                return IsValue(e)
            raise AssertionError("decompose descended into a value")
        if isinstance(e, Var):
            return Stuck(f"free variable {e.name}", EvalContext(tuple(frames)), e)
        if isinstance(e, Tuple):
            i = next(i for i, x in enumerate(e.items) if not is_value(x))
            frames.append(TupleFrame(e.items[:i], e.items[i + 1:]))
            e = e.items[i]
            continue
        if isinstance(e, PrimOp):
            i = next((i for i, x in enumerate(e.args) if not is_value(x)), None)
            if i is None:
                return Decomposition(EvalContext(tuple(frames)), e)
            frames.append(OpFrame(e.op, e.args[:i], e.args[i + 1:]))
            e = e.args[i]
            continue
        if isinstance(e, App):
            if not is_value(e.fn):
                frames.append(AppLeft(e.arg))
                e = e.fn
                continue
            if not is_value(e.arg):
                frames.append(AppRight(e.fn))
                e = e.arg
                continue
            ctx = EvalContext(tuple(frames))
            if isinstance(e.fn, AbstractName):
                return Stuck(ABSTRACT_APP, ctx, e)
            return Decomposition(ctx, e)
        if isinstance(e, Cond):
            if not is_value(e.guard):
                frames.append(CondFrame(e.then, e.else_))
                e = e.guard
                continue
            return Decomposition(EvalContext(tuple(frames)), e)
        if isinstance(e, LetTuple):
            if not is_value(e.bound):
                frames.append(LetFrame(e.binders, e.body))
                e = e.bound
                continue
            return Decomposition(EvalContext(tuple(frames)), e)
        raise TypeError(f"not an expression: {e!r}")


def contract(redex: Expr):
    """Apply a base rule.  Returns an Expr, a (guard, then, else) triple for a
    symbolic conditional, or a Stuck."""
    if isinstance(redex, App):
        fn, arg = redex.fn, redex.arg
        if not isinstance(fn, Fix):
            return Stuck(f"application of non-function {fn!r}", None, redex)
        # e{v/x}{fix/f}: the parameter shadows a clashing self name
        return subst(fn.body, {fn.fname: fn, fn.param: arg})
    if isinstance(redex, LetTuple):
        v = redex.bound
        if len(redex.binders) == 1:
            return subst(redex.body, {redex.binders[0]: v})
        if not isinstance(v, Tuple) or len(v.items) != len(redex.binders):
            return Stuck("tuple arity mismatch", None, redex)
        return subst(redex.body, dict(zip(redex.binders, v.items)))
    if isinstance(redex, Cond):
        g = redex.guard
        if isinstance(g, Const):
            return redex.then if g.val else redex.else_
        if is_symbolic(g):
            return (g, redex.then, redex.else_)
        return Stuck("non-boolean guard", None, redex)
    if isinstance(redex, PrimOp):
        try:
            return eval_symbolic(redex.op, list(redex.args))
        except DivisionByZero:
            return Stuck(DIV_ZERO, None, redex)
    return Stuck("no rule applies", None, redex)


def step(e: Expr) -> StepResult:
    d = decompose(e)
    if not isinstance(d, Decomposition):
        return d
    out = contract(d.redex)
    if isinstance(out, Stuck):
        return Stuck(out.reason, d.ctx, d.redex)
    if isinstance(out, tuple):
        g, a, b = out
        return Branch(g, d.ctx.plug(a), d.ctx.plug(b))
    fired = d.redex if isinstance(d.redex, App) else None
    return Stepped(d.ctx.plug(out), fired, d.ctx.depth())


# -------------------------------------------------------- substitution


def subst(e: Expr, mapping: dict) -> Expr:
    """Capture-avoiding simultaneous substitution of values for variables."""
    if not mapping:
        return e
    risky = set()
    for v in mapping.values():
        if not _closed(v):
            risky |= free_vars(v)
    return _subst(e, mapping, risky)


def _closed(v: Expr) -> bool:
    if isinstance(v, (Const, AbstractName, SymConst, SymOp)):
        return True
    return not free_vars(v)


def _fresh_name(x: str) -> str:
    base = x.split("#", 1)[0]
    return f"{base}#{next(_rename)}"


def _subst(e: Expr, m: dict, risky: set) -> Expr:
    if isinstance(e, Var):
        return m.get(e.name, e)
    if isinstance(e, (Const, AbstractName, SymConst)):
        return e
    if isinstance(e, Tuple):
        return Tuple(tuple(_subst(x, m, risky) for x in e.items))
    if isinstance(e, PrimOp):
        return PrimOp(e.op, tuple(_subst(x, m, risky) for x in e.args))
    if isinstance(e, SymOp):
        return e
    if isinstance(e, App):
        return App(_subst(e.fn, m, risky), _subst(e.arg, m, risky))
    if isinstance(e, Cond):
        return Cond(_subst(e.guard, m, risky), _subst(e.then, m, risky),
                    _subst(e.else_, m, risky))
    if isinstance(e, Fix):
        inner = {k: v for k, v in m.items() if k not in (e.fname, e.param)}
        if not inner:
            return e
        fname, param, body = e.fname, e.param, e.body
        if risky and (fname in risky or param in risky):
            ren = {}
            if fname in risky:
                fname = _fresh_name(fname)
                ren[e.fname] = Var(fname)
            if param in risky:
                param = _fresh_name(param)
                ren[e.param] = Var(param)
            body = _subst(body, ren, set())
        return Fix(fname, param, _subst(body, inner, risky), e.ptype, e.rtype)
    if isinstance(e, LetTuple):
        bound = _subst(e.bound, m, risky)
        inner = {k: v for k, v in m.items() if k not in e.binders}
        if not inner:
            return LetTuple(e.binders, bound, e.body)
        binders, body = e.binders, e.body
        if risky and any(b in risky for b in binders):
            ren = {}
            new = []
            for b in binders:
                if b in risky:
                    nb = _fresh_name(b)
                    ren[b] = Var(nb)
                    new.append(nb)
                else:
                    new.append(b)
            binders = tuple(new)
            body = _subst(body, ren, set())
        return LetTuple(binders, bound, _subst(body, inner, risky))
    raise TypeError(f"not an expression: {e!r}")


# ------------------------------------------------------ loop detection


class LoopTracker:
    """Detects ``E[r] ->* E[E'[r]]`` for a repeated beta redex ``r``.

    Entries stay valid while every intermediate redex lies at or below the
    recorded context depth, which guarantees the frames above are untouched.
    When the same redex recurs at such a point the term diverges.
    """

    def __init__(self):
        self.stack: list = []   # (depth, redex)
        self.live: dict = {}

    def reset(self):
        self.stack.clear()
        self.live.clear()

    def observe(self, redex: Optional[Expr], depth: int) -> bool:
        while self.stack and self.stack[-1][0] > depth:
            _, r = self.stack.pop()
            self.live[r] -= 1
            if not self.live[r]:
                del self.live[r]
        if redex is None:
            return False
        if redex in self.live:
            return True
        self.stack.append((depth, redex))
        self.live[redex] = self.live.get(redex, 0) + 1
        return False


# ---------------------------------------------------------- evaluation


@dataclass(frozen=True)
class Terminated:
    value: Expr
    steps: int = 0


@dataclass(frozen=True)
class Exhausted:
    """Out of fuel; ``loop`` is set when divergence was proved by a repeat."""

    loop: bool = False
    steps: int = 0


EvalResult = Union[Terminated, Exhausted, Stuck]


def evaluate(e: Expr, fuel: int, detect_loops: bool = False) -> EvalResult:
    """Iterate ``step`` at most ``fuel`` times on a closed concrete term."""
    tracker = LoopTracker() if detect_loops else None
    for n in range(fuel + 1):
        r = step(e)
        if isinstance(r, IsValue):
            return Terminated(r.value, n)
        if isinstance(r, Stuck):
            return r
        if isinstance(r, Branch):
            raise ValueError("evaluate() met a symbolic guard")
        if n == fuel:
            break
        if tracker is not None and tracker.observe(r.redex, r.depth):
            return Exhausted(True, n)
        e = r.expr
    return Exhausted(False, fuel)


def diverges(result: EvalResult) -> bool:
    """Stuck terms (division by zero) are treated like divergence."""
    return isinstance(result, Stuck) or (isinstance(result, Exhausted) and result.loop)
