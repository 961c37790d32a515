"""The labelled transition system over proponent/opponent configurations.

Proponent configurations ``<A; M; K; t; e; V>`` reduce the program;
opponent configurations ``<A; M; K; t; V; u>`` choose the next move of the
context.  Only top-level returns and top-level opponent calls are visible;
everything else is recorded as opponent-visible traces in the memory ``M``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .reduction import (
    ABSTRACT_APP, Branch, EvalContext, LoopTracker, Stepped, Stuck, step,
)
from .syntax import AbstractName, App, Arrow, Expr, Fix, SymOp, Tuple, Type, free_vars
from .ulpatt import (
    Fresh, Hole, pattern_str, plug, ulpatt_type_enumerate, ulpatt_type_symbolic,
    ulpatt_value,
)


# ---------------------------------------------------------------- moves


@dataclass(frozen=True)
class PropApp:
    """Proponent calls opponent function ``name`` with pattern ``arg``."""

    name: AbstractName
    arg: object

    def __str__(self) -> str:
        return f"pq {self.name!r} ({pattern_str(self.arg)})"


@dataclass(frozen=True)
class PropRet:
    pat: object

    def __str__(self) -> str:
        return f"pa ({pattern_str(self.pat)})"


@dataclass(frozen=True)
class OpApp:
    """Opponent calls the ``index``-th (1-based) proponent function it knows."""

    index: int
    arg: object

    def __str__(self) -> str:
        return f"oq {self.index} ({pattern_str(self.arg)})"


@dataclass(frozen=True)
class OpRet:
    ret: object

    def __str__(self) -> str:
        return f"oa ({pattern_str(self.ret)})"


Move = Union[PropApp, PropRet, OpApp, OpRet]


def is_proponent(m) -> bool:
    return isinstance(m, (PropApp, PropRet))


def format_trace(t) -> str:
    return " ".join(str(m) for m in t) if t else "ε"


def move_names(m) -> list:
    """Abstract names mentioned in a move, in order."""
    if isinstance(m, PropApp):
        return [m.name] + _value_names(m.arg)
    if isinstance(m, PropRet):
        return []
    return _value_names(m.arg if isinstance(m, OpApp) else m.ret)


def introduced_names(m) -> list:
    """Names a move introduces (only opponent moves carry names)."""
    if isinstance(m, OpApp):
        return _value_names(m.arg)
    if isinstance(m, OpRet):
        return _value_names(m.ret)
    return []


def _value_names(v) -> list:
    if isinstance(v, AbstractName):
        return [v]
    if isinstance(v, Tuple):
        return [n for x in v.items for n in _value_names(x)]
    return []


# --------------------------------------------------------------- memory


@dataclass(frozen=True)
class Memory:
    """Prefix-closed set of opponent-visible traces.

    ``order`` keeps insertion order (used for canonical renaming); equality
    and hashing only look at the set.
    """

    traces: frozenset = frozenset()
    order: tuple = field(default=(), compare=False, hash=False)

    def add(self, t: tuple) -> "Memory":
        if t in self.traces:
            return self
        new = [t[:i] for i in range(1, len(t) + 1) if t[:i] not in self.traces]
        return Memory(self.traces | frozenset(new), self.order + tuple(new))

    def __contains__(self, t) -> bool:
        return t in self.traces

    def __len__(self) -> int:
        return len(self.traces)

    def union(self, other: "Memory") -> "Memory":
        out = self
        for t in other.order:
            out = out.add(t)
        return out

    def maximal(self) -> list:
        return [t for t in self.order
                if not any(len(u) > len(t) and u[:len(t)] == t for u in self.traces)]


EMPTY_MEMORY = Memory()


def nextmove(m: Memory, t: tuple) -> set:
    """``{η | tη ∈ M}``."""
    n = len(t)
    return {u[n] for u in m.traces if len(u) == n + 1 and u[:n] == t}


def is_legal(m: Memory) -> bool:
    """At most one opponent continuation per proponent-ending trace and every
    abstract name introduced at most once."""
    return not legality_violations(m)


def legality_violations(m: Memory) -> list:
    out = []
    by_prefix: dict = {}
    introduced: dict = {}
    for t in m.traces:
        last = t[-1]
        if not is_proponent(last):
            by_prefix.setdefault(t[:-1], set()).add(last)
            for a in introduced_names(last):
                introduced.setdefault(a, set()).add(t)
    for p, nxt in by_prefix.items():
        if len(nxt) > 1:
            out.append(f"{len(nxt)} opponent continuations after {format_trace(p)}")
    for a, where in introduced.items():
        if len(where) > 1:
            out.append(f"name {a!r} introduced {len(where)} times")
    return out


def is_alternating(t: tuple) -> bool:
    if t and not isinstance(t[0], PropApp):
        return False
    return all(is_proponent(a) != is_proponent(b) for a, b in zip(t, t[1:]))


# ------------------------------------------------------- configurations


@dataclass(frozen=True)
class NameTable:
    """``A``: (name id, index) -> knowledge (tuple of proponent functions)."""

    entries: tuple = ()

    def get(self, name_id: int, j: int) -> tuple:
        for (n, i), know in self.entries:
            if n == name_id and i == j:
                return know
        raise KeyError((name_id, j))

    def has(self, name_id: int, j: int) -> bool:
        return any(n == name_id and i == j for (n, i), _ in self.entries)

    def least_free(self, names) -> int:
        j = 0
        while any(self.has(a.id, j) for a in names):
            j += 1
        return j

    def extend(self, names, j: int, know: tuple) -> "NameTable":
        new = tuple(((a.id, j), know) for a in names)
        return NameTable(self.entries + new)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class KFrame:
    """Continuation pushed by a proponent call: resume trace and context.

    ``call`` records (name id, index, argument) for loop detection and call
    caching; it does not take part in equality.
    """

    trace: tuple
    ctx: EvalContext
    call: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class PropConfig:
    A: NameTable
    M: Memory
    K: tuple          # of KFrame, top of stack last
    t: tuple
    e: Expr
    V: tuple          # of knowledge tuples, top of stack last

    @property
    def top_level(self) -> bool:
        return not self.K


@dataclass(frozen=True)
class OpConfig:
    A: NameTable
    M: Memory
    K: tuple
    t: tuple
    V: tuple
    know: tuple

    @property
    def top_level(self) -> bool:
        return not self.K

    @property
    def final(self) -> bool:
        return not self.K and not self.t and not self.V


Config = Union[PropConfig, OpConfig]


class MalformedConfig(Exception):
    pass


def initial_config(e: Expr) -> PropConfig:
    """``<∅; ∅; ·; ε; e; ·>`` for a closed program."""
    fv = free_vars(e)
    if fv:
        raise MalformedConfig(f"initial configuration needs a closed term; free: {sorted(fv)}")
    return PropConfig(NameTable(), EMPTY_MEMORY, (), (), e, ())


# -------------------------------------------------------------- labels


@dataclass(frozen=True)
class Tau:
    def __str__(self) -> str:
        return "τ"


TAU = Tau()


@dataclass(frozen=True)
class Visible:
    move: object

    def __str__(self) -> str:
        return str(self.move)


@dataclass(frozen=True)
class Transition:
    label: object
    target: object
    guard: Optional[Expr] = None     # symbolic branch condition, if any
    new_consts: tuple = ()           # symbolic constants introduced
    rule: str = ""
    move: object = None              # the move recorded, visible or not


@dataclass(frozen=True)
class Concrete:
    domain: Optional[dict] = None


@dataclass(frozen=True)
class Symbolic:
    pass


# ------------------------------------------------------- rule helpers


def fun_type(v) -> Arrow:
    if isinstance(v, Fix):
        return v.ftype
    if isinstance(v, AbstractName):
        return v.type
    raise MalformedConfig(f"not a function value: {v!r}")


def instantiate(value, names, j: int):
    """Attach index ``j`` to the bare names of a move value."""
    ids = {a.id for a in names}

    def go(v):
        if isinstance(v, AbstractName) and v.id in ids:
            return AbstractName(v.id, v.type, j)
        if isinstance(v, Tuple):
            return Tuple(tuple(go(x) for x in v.items))
        return v

    return go(value)


def opponent_patterns(tp: Type, fresh: Fresh, mode) -> list:
    """(move value with bare names, names, new symbolic constants) choices."""
    if isinstance(mode, Symbolic):
        d, names, consts = ulpatt_type_symbolic(tp, fresh)
        return [(plug(d, names), names, consts)]
    return [(plug(d, names), names, []) for d, names in
            ulpatt_type_enumerate(tp, mode.domain, fresh)]


def prop_transitions(c: PropConfig, fresh: Fresh, mode) -> list:
    e = c.e
    r = step(e)
    if isinstance(r, Stepped):
        return [Transition(TAU, PropConfig(c.A, c.M, c.K, c.t, r.expr, c.V), rule="PropTau")]
    if isinstance(r, Branch):
        return [Transition(TAU, PropConfig(c.A, c.M, c.K, c.t, r.if_true, c.V),
                           guard=r.guard, rule="PropTau"),
                Transition(TAU, PropConfig(c.A, c.M, c.K, c.t, r.if_false, c.V),
                           guard=SymOp("not", (r.guard,), r.guard.type), rule="PropTau")]
    if isinstance(r, Stuck):
        if r.reason != ABSTRACT_APP:
            return []
        return [prop_call(c, r.ctx, r.redex)]
    # a value: return it
    d, funs = ulpatt_value(r.value)
    if not c.K:
        if len(c.V) > 1:
            raise MalformedConfig("top-level return with more than one knowledge frame")
        target = OpConfig(c.A, c.M, (), (), (), tuple(funs))
        return [Transition(Visible(PropRet(d)), target, rule="PropRetBarb",
                           move=PropRet(d))]
    if not c.V:
        raise MalformedConfig("inner return with an empty knowledge stack")
    t2 = c.t + (PropRet(d),)
    target = OpConfig(c.A, c.M.add(t2), c.K, t2, c.V[:-1], c.V[-1] + tuple(funs))
    return [Transition(TAU, target, rule="PropRet", move=t2[-1])]


def prop_call(c: PropConfig, ctx: EvalContext, redex: App) -> Transition:
    alpha, v = redex.fn, redex.arg
    d, funs = ulpatt_value(v)
    t2 = (PropApp(alpha.bare(), d),)
    u = c.A.get(alpha.id, alpha.index)
    frame = KFrame(c.t, ctx.with_type(alpha.type.cod), (alpha.id, alpha.index, v))
    target = OpConfig(c.A, c.M.add(t2), c.K + (frame,), t2, c.V, u + tuple(funs))
    return Transition(TAU, target, rule="PropCall", move=t2[0])


def op_return(c: OpConfig, value, names, consts=()) -> Transition:
    frame = c.K[-1]
    j = c.A.least_free(names)
    t2 = c.t + (OpRet(value),)
    inst = instantiate(value, names, j)
    target = PropConfig(c.A.extend(names, j, c.know), c.M.add(t2), c.K[:-1],
                        frame.trace, frame.ctx.plug(inst), c.V)
    return Transition(TAU, target, new_consts=tuple(consts), rule="OpRet", move=t2[-1])


def op_call(c: OpConfig, i: int, value, names, consts=()) -> Transition:
    fn = c.know[i - 1]
    if c.K:
        j = c.A.least_free(names)
        t2 = c.t + (OpApp(i, value),)
        inst = instantiate(value, names, j)
        target = PropConfig(c.A.extend(names, j, c.know), c.M.add(t2), c.K, t2,
                            App(fn, inst), c.V + (c.know,))
        return Transition(TAU, target, new_consts=tuple(consts), rule="OpCall",
                          move=t2[-1])
    inst = instantiate(value, names, 0)
    target = PropConfig(c.A.extend(names, 0, ()), c.M, (), (), App(fn, inst), ((),))
    return Transition(Visible(OpApp(i, value)), target, new_consts=tuple(consts),
                      rule="OpCallBarb", move=OpApp(i, value))


def op_transitions(c: OpConfig, fresh: Fresh, mode) -> list:
    out = []
    if not c.K:
        if c.t or c.V:
            raise MalformedConfig("top-level opponent configuration with a trace or stack")
        for i, fn in enumerate(c.know, start=1):
            for value, names, consts in opponent_patterns(fun_type(fn).dom, fresh, mode):
                out.append(op_call(c, i, value, names, consts))
        return out
    nxt = nextmove(c.M, c.t)
    if nxt:
        (eta,) = nxt
        if isinstance(eta, OpRet):
            return [op_return(c, eta.ret, _value_names(eta.ret))]
        return [op_call(c, eta.index, eta.arg, _value_names(eta.arg))]
    ret_type = c.K[-1].ctx.hole_type
    for value, names, consts in opponent_patterns(ret_type, fresh, mode):
        out.append(op_return(c, value, names, consts))
    for i, fn in enumerate(c.know, start=1):
        for value, names, consts in opponent_patterns(fun_type(fn).dom, fresh, mode):
            out.append(op_call(c, i, value, names, consts))
    return out


def transitions(c: Config, fresh: Optional[Fresh] = None, mode=None) -> list:
    """Every rule instance applicable to ``c``."""
    fresh = fresh or Fresh()
    mode = mode or Concrete()
    if isinstance(c, PropConfig):
        return prop_transitions(c, fresh, mode)
    return op_transitions(c, fresh, mode)


# ---------------------------------------------------- trace transitions


@dataclass(frozen=True)
class FuelExhausted:
    """A τ-path that made no visible move; ``loop`` when proved divergent."""

    config: object
    loop: bool = False


def big_step(c: Config, mode=None, fresh: Optional[Fresh] = None,
             fuel: int = 2000) -> list:
    """All ``(move, C')`` with ``C =τ*=> --move--> C'``.

    Paths running out of fuel, or proved divergent by a repeated redex,
    contribute a ``(FuelExhausted, C)`` entry.
    """
    fresh = fresh or Fresh()
    mode = mode or Concrete()
    out = []
    stack = [(c, fuel, LoopTracker())]
    while stack:
        cur, f, tracker = stack.pop()
        if f <= 0:
            out.append((FuelExhausted(cur), cur))
            continue
        if isinstance(cur, PropConfig):
            r = step(cur.e)
            if isinstance(r, Stepped):
                if tracker.observe(r.redex, r.depth):
                    out.append((FuelExhausted(cur, loop=True), cur))
                    continue
                stack.append((PropConfig(cur.A, cur.M, cur.K, cur.t, r.expr, cur.V),
                              f - 1, tracker))
                continue
        trs = transitions(cur, fresh, mode)
        for tr in trs:
            if isinstance(tr.label, Visible):
                out.append((tr.label.move, tr.target))
            else:
                tracker2 = LoopTracker() if len(trs) > 1 or tr.rule != "PropTau" else tracker
                stack.append((tr.target, f - 1, tracker2))
    return out


def semantics(e: Expr, depth: int = 4, domain: Optional[dict] = None,
              fuel: int = 2000) -> set:
    """``{(t, M)}`` reachable at final configurations with ``|t| <= depth``.

    Abstract names are canonicalised so that the sets of two programs can be
    compared directly.  Runs that exhaust ``fuel`` are dropped.
    """
    return {canonical_trace_memory(t, m) for t, m in final_traces(e, depth, domain, fuel)}


def final_traces(e: Expr, depth: int = 4, domain: Optional[dict] = None,
                 fuel: int = 2000) -> list:
    """Raw ``(t, M)`` pairs behind ``semantics``, in discovery order."""
    mode = Concrete(domain)
    fresh = Fresh()
    out = []
    frontier = [((), initial_config(e))]
    while frontier:
        t, c = frontier.pop()
        if len(t) >= depth:
            continue
        for move, nxt in big_step(c, mode, fresh, fuel):
            if isinstance(move, FuelExhausted):
                continue
            t2 = t + (move,)
            if isinstance(nxt, OpConfig) and nxt.final:
                out.append((t2, nxt.M))
            frontier.append((t2, nxt))
    return out


def canonical_trace_memory(t: tuple, m: Memory):
    """Rename abstract names structurally: each name becomes the position of
    the move introducing it (top-level trace or memory trace)."""
    ids: dict = {}
    for k, mv in enumerate(t):
        for h, a in enumerate(introduced_names(mv)):
            ids.setdefault(a.id, ("top", k, h))
    pending = set(m.traces)
    progress = True
    while pending and progress:
        progress = False
        for u in list(pending):
            if all(a.id in ids for mv in u[:-1] for a in move_names(mv)) and \
                    all(a.id in ids for a in move_names(u[-1]) if a not in introduced_names(u[-1])):
                key = _rename_trace(u[:-1], ids)
                for h, a in enumerate(introduced_names(u[-1])):
                    ids.setdefault(a.id, ("mem", key, len(u) - 1, h))
                pending.discard(u)
                progress = True
    ct = _rename_trace(t, ids)
    cm = frozenset(_rename_trace(u, ids) for u in m.traces)
    return ct, cm


def _rename_trace(t: tuple, ids: dict) -> tuple:
    def rv(v):
        if isinstance(v, AbstractName):
            return ("name", ids.get(v.id, ("free", v.id)), v.type)
        if isinstance(v, Tuple):
            return ("tuple",) + tuple(rv(x) for x in v.items)
        if isinstance(v, Hole):
            return ("hole", v.index, v.type)
        return ("val", v)

    out = []
    for mv in t:
        if isinstance(mv, PropApp):
            out.append(("pq", rv(mv.name), rv(mv.arg)))
        elif isinstance(mv, PropRet):
            out.append(("pa", rv(mv.pat)))
        elif isinstance(mv, OpApp):
            out.append(("oq", mv.index, rv(mv.arg)))
        else:
            out.append(("oa", rv(mv.ret)))
    return tuple(out)


# ----------------------------------------------------------- invariants


def open_opponent_calls(t: tuple) -> int:
    """Opponent calls in ``t`` not yet answered by a proponent return."""
    depth = 0
    for m in t:
        if isinstance(m, OpApp):
            depth += 1
        elif isinstance(m, PropRet):
            depth -= 1
    return depth


def invariant_violations(c: Config) -> list:
    out = list(legality_violations(c.M))
    for t in c.M.traces:
        if not is_alternating(t):
            out.append(f"non-alternating trace {format_trace(t)}")
    if c.K:
        if not c.t or not isinstance(c.t[0], PropApp):
            out.append("inner configuration whose trace does not start with a call")
        if c.K[0].trace != ():
            out.append("bottom continuation does not resume the empty trace")
    elif c.t:
        out.append("top-level configuration with a non-empty trace")
    if c.t and not is_alternating(c.t):
        out.append("current trace does not alternate")
    pending = open_opponent_calls(c.t) + sum(open_opponent_calls(f.trace) for f in c.K)
    if isinstance(c, PropConfig) and c.t and isinstance(c.t[-1], OpRet):
        pass
    base = len(c.V) - pending
    if base not in (0, 1):
        out.append(f"knowledge stack has {len(c.V)} frames for {pending} open calls")
    if isinstance(c, PropConfig):
        det = prop_transitions(c, Fresh(10 ** 6, 10 ** 6), Concrete())
        if len(det) > 1:
            out.append("proponent configuration with several successors")
    return out
