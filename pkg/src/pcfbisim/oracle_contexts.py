"""Brute-force equivalence oracle over applicative contexts.

Applicative contexts apply the hole to values, project out of tuples and
finally test a base-type result against a constant.  They are enough to
separate any two inequivalent programs, so running both programs in every
small context gives an independent check of the bisimulation checker.

Context arguments come from a type-directed template generator.  Templates
are built from lambdas (tuple parameters are destructured on entry),
variables, domain constants, ``_bot_``, applications of variables,
``x - 1`` / ``x + 1`` on Int variables, comparisons of an Int variable with
a constant, and a single conditional.  Lambdas do not appear as arguments
inside a template body.  Size counts constructed nodes: lambdas, tuple
destructuring, applications, conditionals, arithmetic and comparisons.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

from .reduction import (
    AppLeft, AppRight, CondFrame, EvalContext, Exhausted, LetFrame, OpFrame, Stuck,
    Terminated, evaluate,
)
from .syntax import (
    BOOL, INT, UNIT, UNIT_V, App, Arrow, BaseType, Cond, Const, Expr, Fix, LetTuple,
    PrimOp, Product, Tuple, Type, Var, bottom, int_c, is_value, lam, show,
    strip_types,
)
from .ulpatt import DEFAULT_DOMAIN

DEFAULT_SIZE = 7
DEFAULT_DEPTH = 4


# ------------------------------------------------------------ templates


def _domain_key(domain: dict) -> tuple:
    return tuple(sorted((t.name, tuple(c.val for c in cs)) for t, cs in domain.items()))


def _curried(t: Type) -> tuple:
    """(argument types, result type) of a curried arrow, outermost first."""
    args = []
    while isinstance(t, Arrow):
        args.append(t.dom)
        t = t.cod
    return tuple(args), t


class _Templates:
    def __init__(self, domain: dict):
        self.domain = domain
        self.exact = lru_cache(maxsize=None)(self._exact)

    def upto(self, tp: Type, env: tuple, size: int, lambdas: bool = True) -> Iterator[Expr]:
        for c in range(size + 1):
            yield from self.exact(tp, env, c, lambdas)

    def _exact(self, tp: Type, env: tuple, c: int, lambdas: bool) -> tuple:
        out: list = []
        if c == 0:
            if isinstance(tp, BaseType):
                out.extend(self.domain.get(tp, [UNIT_V] if tp == UNIT else []))
            out.extend(Var(x) for x, t in env if t == tp)
            out.append(bottom(tp))
        if isinstance(tp, Product) and c >= 0:
            for sizes in _splits(c, len(tp.items)):
                parts = [self.exact(t, env, s, lambdas) for t, s in zip(tp.items, sizes)]
                out.extend(Tuple(items) for items in itertools.product(*parts))
        if c >= 1 and isinstance(tp, Arrow) and lambdas:
            out.extend(self._lambdas(tp, env, c))
        if c >= 1:
            out.extend(self._applications(tp, env, c))
        if c == 1 and tp == INT:
            for x, t in env:
                if t == INT:
                    out.append(PrimOp("-", (Var(x), int_c(1))))
                    out.append(PrimOp("+", (Var(x), int_c(1))))
        if c == 1 and tp == BOOL:
            for x, t in env:
                if t == INT:
                    for k in self.domain.get(INT, []):
                        out.append(PrimOp("==", (Var(x), k)))
                    out.append(PrimOp(">", (Var(x), int_c(0))))
        if c >= 1 and not isinstance(tp, Arrow):
            out.extend(self._conditionals(tp, env, c))
        return tuple(dict.fromkeys(out))

    def _lambdas(self, tp: Arrow, env: tuple, c: int) -> list:
        x = f"x{len(env)}"
        if isinstance(tp.dom, Product):
            names = tuple(f"x{len(env) + 1 + i}" for i in range(len(tp.dom.items)))
            inner = env + tuple(zip(names, tp.dom.items))
            return [Fix(f"_f{len(env)}", x, LetTuple(names, Var(x), body), tp.dom, tp.cod)
                    for body in self.exact(tp.cod, inner, c - 2, True)] if c >= 2 else []
        return [Fix(f"_f{len(env)}", x, body, tp.dom, tp.cod)
                for body in self.exact(tp.cod, env + ((x, tp.dom),), c - 1, True)]

    def _applications(self, tp: Type, env: tuple, c: int) -> list:
        out = []
        for f, ft in env:
            args, res = _curried(ft)
            for n in range(1, len(args) + 1):
                # apply to the first n arguments when that yields tp
                rest = args[n:]
                got = res
                for a in reversed(rest):
                    got = Arrow(a, got)
                if got != tp:
                    continue
                if c < n:
                    continue
                for sizes in _splits(c - n, n):
                    parts = [[x for x in self.exact(a, env, s, False) if not _is_bottom(x)]
                             for a, s in zip(args[:n], sizes)]
                    for combo in itertools.product(*parts):
                        e: Expr = Var(f)
                        for a in combo:
                            e = App(e, a)
                        out.append(e)
        return out

    def _conditionals(self, tp: Type, env: tuple, c: int) -> list:
        out = []
        for g in range(0, c):
            guards = [x for x in self.exact(BOOL, env, g, False)
                      if not _is_bottom(x) and not isinstance(x, (Const, Cond))]
            for s1 in range(0, c - g):
                s2 = c - 1 - g - s1
                then = [x for x in self.exact(tp, env, s1, False) if not isinstance(x, Cond)]
                other = [x for x in self.exact(tp, env, s2, False) if not isinstance(x, Cond)]
                out.extend(Cond(gd, a, b) for gd in guards for a in then for b in other if a != b)
        return out


def _is_bottom(e) -> bool:
    return isinstance(e, App) and isinstance(e.fn, Fix) and e.fn.fname == "_bot"


def _splits(total: int, n: int):
    """All n-tuples of non-negative ints summing to ``total``."""
    if n == 0:
        if total == 0:
            yield ()
        return
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _splits(total - first, n - 1):
            yield (first,) + rest


_GENERATORS: dict = {}


def _generator(domain: dict) -> _Templates:
    key = _domain_key(domain)
    if key not in _GENERATORS:
        _GENERATORS[key] = _Templates(domain)
    return _GENERATORS[key]


def closed_values(tp: Type, size: int = DEFAULT_SIZE, domain: Optional[dict] = None) -> list:
    """Closed template values of type ``tp``, smallest first.

    When every base type inside ``tp`` is Bool or Unit, values that behave
    the same on all (deduplicated) arguments of the lower types are kept
    once, the smallest first.  Int-carrying types are only deduplicated
    syntactically since their probes would miss most of Int.
    """
    domain = DEFAULT_DOMAIN if domain is None else domain
    return list(_closed_values(tp, size, _domain_key(domain), _Frozen(domain)))


class _Frozen:
    """Hashable wrapper so the domain can ride along an lru_cache key."""

    def __init__(self, domain: dict):
        self.domain = domain
        self.key = _domain_key(domain)

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, _Frozen) and self.key == other.key


@lru_cache(maxsize=None)
def _closed_values(tp: Type, size: int, key: tuple, frozen: _Frozen) -> tuple:
    gen = _generator(frozen.domain)
    # closed templates that are not values (a tuple holding _bot_) are dropped
    vals = [v for v in gen.upto(tp, (), size) if is_value(v)]
    vals = list(dict.fromkeys(vals))
    if not _finite(tp):
        return tuple(vals)
    seen: dict = {}
    for v in vals:
        seen.setdefault(_fingerprint(v, tp, size, frozen), v)
    return tuple(seen.values())


_PROBE_FUEL = 400


def _finite(tp: Type) -> bool:
    if isinstance(tp, BaseType):
        return tp in (BOOL, UNIT)
    if isinstance(tp, Arrow):
        return _finite(tp.dom) and _finite(tp.cod)
    return all(_finite(t) for t in tp.items)


def _fingerprint(v: Expr, tp: Type, size: int, frozen: _Frozen):
    if isinstance(tp, BaseType):
        return v.val
    if isinstance(tp, Product):
        return tuple(_fingerprint(x, t, size, frozen) for x, t in zip(v.items, tp.items))
    out = []
    for a in _closed_values(tp.dom, size, frozen.key, frozen):
        r = evaluate(App(v, a), _PROBE_FUEL, detect_loops=True)
        if isinstance(r, Terminated):
            out.append(_fingerprint(r.value, tp.cod, size, frozen))
        elif isinstance(r, Stuck) or r.loop:
            out.append("⊥")
        else:
            out.append(("?", v))    # undecided: never merge
    return tuple(out)


def template_size(e: Expr) -> int:
    """Constructed-node count used to bound the generator."""
    if isinstance(e, Fix):
        if e.fname == "_bot":
            return 0
        return 1 + template_size(e.body)
    if isinstance(e, App):
        if _is_bottom(e):
            return 0
        return 1 + template_size(e.fn) + template_size(e.arg)
    if isinstance(e, Cond):
        return 1 + sum(template_size(x) for x in (e.guard, e.then, e.else_))
    if isinstance(e, LetTuple):
        return 1 + template_size(e.bound) + template_size(e.body)
    if isinstance(e, PrimOp):
        return 1 + sum(template_size(x) for x in e.args)
    if isinstance(e, Tuple):
        return sum(template_size(x) for x in e.items)
    return 0


# ------------------------------------------------------------- contexts


@dataclass(frozen=True)
class Apply:
    value: Expr


@dataclass(frozen=True)
class Project:
    index: int      # 0-based
    width: int


@dataclass(frozen=True)
class Test:
    const: Const


Step = Union[Apply, Project, Test]


@dataclass(frozen=True)
class AppContext:
    """An applicative context; ``steps`` apply innermost first."""

    hole_type: Type
    steps: tuple = ()

    def plug(self, e: Expr) -> Expr:
        for s in self.steps:
            if isinstance(s, Apply):
                e = App(e, s.value)
            elif isinstance(s, Project):
                names = tuple(f"_p{i}" for i in range(s.width))
                e = LetTuple(names, e, Var(names[s.index]))
            elif s.const.type == UNIT:
                e = App(lam("_", UNIT_V, UNIT, UNIT), e)
            else:
                e = Cond(PrimOp("==", (e, s.const)), UNIT_V, bottom(UNIT))
        return e

    def eval_context(self) -> EvalContext:
        """The same context as reduction frames, outermost first."""
        frames: list = []
        for s in self.steps:
            if isinstance(s, Apply):
                new = [AppLeft(s.value)]
            elif isinstance(s, Project):
                names = tuple(f"_p{i}" for i in range(s.width))
                new = [LetFrame(names, Var(names[s.index]))]
            elif s.const.type == UNIT:
                new = [AppRight(lam("_", UNIT_V, UNIT, UNIT))]
            else:
                new = [CondFrame(UNIT_V, bottom(UNIT)), OpFrame("==", (), (s.const,))]
            frames = new + frames
        return EvalContext(tuple(frames), self.hole_type)

    @property
    def result_type(self) -> Type:
        t = self.hole_type
        for s in self.steps:
            if isinstance(s, Apply):
                t = t.cod
            elif isinstance(s, Project):
                t = t.items[s.index]
            else:
                t = UNIT
        return t

    def __str__(self) -> str:
        return show(strip_types(self.plug(Var("•"))))


def iter_applicative(tp: Type, depth: int = DEFAULT_DEPTH, domain: Optional[dict] = None,
                     size: int = DEFAULT_SIZE) -> Iterator[AppContext]:
    """Applicative contexts with at most ``depth`` applications.

    Contexts come in rounds of growing argument size, so small
    distinguishing contexts are met first.  Each context is yielded once.
    """
    domain = DEFAULT_DOMAIN if domain is None else domain
    seen: set = set()
    for budget in range(size + 1):
        for ctx in _contexts(tp, (), depth, domain, budget):
            if ctx.steps not in seen:
                seen.add(ctx.steps)
                yield AppContext(tp, ctx.steps)


def _contexts(t: Type, steps: tuple, depth: int, domain: dict, size: int):
    if isinstance(t, BaseType):
        consts = domain.get(t, [UNIT_V] if t == UNIT else [])
        for c in consts:
            yield AppContext(t, steps + (Test(c),))
        if t == UNIT:
            yield AppContext(t, steps)
        return
    if isinstance(t, Product):
        for i, item in enumerate(t.items):
            yield from _contexts(item, steps + (Project(i, len(t.items)),), depth, domain, size)
        return
    yield AppContext(t, steps)
    if depth == 0:
        return
    for v in closed_values(t.dom, size, domain):
        yield from _contexts(t.cod, steps + (Apply(v),), depth - 1, domain, size)


def enumerate_applicative(tp: Type, depth: int = DEFAULT_DEPTH, domain: Optional[dict] = None,
                          size: int = DEFAULT_SIZE, limit: Optional[int] = None) -> list:
    it = iter_applicative(tp, depth, domain, size)
    return list(itertools.islice(it, limit) if limit is not None else it)


# --------------------------------------------------------------- oracle


@dataclass(frozen=True)
class Equivalent:
    contexts: int
    truncated: bool = False
    name = "EQUIVALENT"


@dataclass(frozen=True)
class Inequivalent:
    context: AppContext
    terminates_left: bool
    contexts: int
    name = "INEQUIVALENT"


@dataclass(frozen=True)
class Inconclusive:
    contexts: int
    unresolved: int
    name = "INCONCLUSIVE"


def outcome(e: Expr, fuel: int) -> Optional[bool]:
    """True if ``e`` terminates, False if provably not, None if unknown."""
    r = evaluate(e, fuel, detect_loops=True)
    if isinstance(r, Terminated):
        return True
    if isinstance(r, Stuck) or (isinstance(r, Exhausted) and r.loop):
        return False
    return None


def oracle_equiv(e1: Expr, e2: Expr, depth: int = DEFAULT_DEPTH, fuel: int = 5000,
                 tp: Optional[Type] = None, domain: Optional[dict] = None,
                 size: int = DEFAULT_SIZE, limit: Optional[int] = None):
    """Compare termination of both programs in every enumerated context.

    ``tp`` defaults to the common inferred type.  Stops at the first context
    where one side terminates and the other provably does not; otherwise
    the verdict is Equivalent unless some context stayed undecided within
    ``fuel``.  ``limit`` caps the number of contexts tried; an Equivalent
    verdict reached under the cap is marked ``truncated``.
    """
    if tp is None:
        from .typecheck import elaborate_pair
        e1, e2, tp = elaborate_pair(e1, e2)
    n = unresolved = 0
    truncated = False
    for ctx in iter_applicative(tp, depth, domain, size):
        if limit is not None and n >= limit:
            truncated = True
            break
        n += 1
        a = outcome(ctx.plug(e1), fuel)
        b = outcome(ctx.plug(e2), fuel)
        if a == b and a is not None:
            continue
        if a is None or b is None:
            unresolved += 1
            continue
        return Inequivalent(ctx, a, n)
    if unresolved:
        return Inconclusive(n, unresolved)
    return Equivalent(n, truncated)
