"""Bounded symbolic bisimulation checking over configuration pairs.

A pair holds two configurations that are both initial or both final, the
memory they share, the path condition and the remaining call bound.  One
round plays a shared opponent challenge to both sides:

* the left side runs to its next top-level return, branching on every free
  opponent choice and on every symbolic guard;
* for each left outcome the right side is replayed against the memory the
  left side produced.  If the left side returned, the right side may only
  follow that memory (anything else is a distinguishing behaviour); if the
  left side provably diverged, the right side runs freely and must not
  return.

Any opponent behaviour the right side could face is thereby covered: the
memory determines the opponent, and the opponent is explored from the left.
"""
from __future__ import annotations

import dataclasses
import time
from collections import Counter
from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Optional, Union

from .lts import (
    Memory, OpApp, OpConfig, PropApp, PropConfig, PropRet, fun_type,
    initial_config, instantiate, nextmove, op_call, op_transitions,
    opponent_patterns, prop_call, prop_transitions, Symbolic, format_trace,
)
from .reduction import (
    ABSTRACT_APP, Branch, LoopTracker, Stepped, Stuck, step,
)
from .symbolic import (
    FALSE, NonlinearError, Sat, SymEnv, TRUE, Unknown, Unsat, assert_constraint,
    conj, equal, format_model, make_solver, neg, normalize_env,
)
from .syntax import (
    AbstractName, Const, Expr, Fix, LetTuple, SymConst, Tuple, Type, canonical,
)
from .typecheck import elaborate_pair
from .ulpatt import Fresh, Hole, holes, pattern_str

BOUND = "bound exhausted"
SOLVER = "solver unknown"
FUEL = "fuel exhausted"
TIMEOUT = "timeout"

ENHANCEMENTS = ("memo", "identity", "normalise", "pcache", "oskip", "loopdetect")


@dataclass(frozen=True)
class Options:
    bound: int = 6
    memo: bool = True
    identity: bool = True
    normalise: bool = True
    pcache: bool = True
    oskip: bool = True
    loopdetect: bool = True
    solver: str = "internal"
    timeout: Optional[float] = None
    fuel: int = 20000          # reduction steps per side and round
    symmetric: bool = True     # retry swapped when the first run is inconclusive

    def without(self, name: str) -> "Options":
        return replace(self, **{name: False})


# ------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class Equivalent:
    stats: dict = field(default_factory=dict, compare=False)
    name = "EQUIVALENT"


@dataclass(frozen=True)
class Inequivalent:
    witness: tuple
    model: dict = field(compare=False, default_factory=dict)
    reason: str = field(compare=False, default="")
    memory: tuple = field(compare=False, default=())
    side: str = field(compare=False, default="left")
    stats: dict = field(default_factory=dict, compare=False)
    name = "INEQUIVALENT"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    stats: dict = field(default_factory=dict, compare=False)
    name = "INCONCLUSIVE"


Verdict = Union[Equivalent, Inequivalent, Inconclusive]


def render(v: Verdict) -> list:
    """Text lines: verdict, then witness moves and model on inequivalence."""
    lines = [v.name]
    if isinstance(v, Inequivalent):
        lines += [str(m) for m in v.witness]
        lines += format_model(v.model)
    return lines


def to_json(v: Verdict) -> dict:
    out = {"verdict": v.name, "witness": [], "model": {}, "stats": dict(v.stats)}
    if isinstance(v, Inequivalent):
        out["witness"] = [str(m) for m in v.witness]
        out["model"] = {f"κ{k}": val for k, val in sorted(v.model.items())}
        out["reason"] = v.reason
        out["memory"] = [format_trace(t) for t in v.memory]
        out["side"] = v.side
    elif isinstance(v, Inconclusive):
        out["reason"] = v.reason
    return out


# ---------------------------------------------------------------- pairs


@dataclass(frozen=True)
class ConfigPair:
    C1: object
    C2: object
    M: Memory
    sigma: SymEnv
    k: int
    witness: tuple = field(default=(), compare=False)
    cache1: dict = field(default_factory=dict, compare=False, hash=False)
    cache2: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class Keep:
    pass


@dataclass(frozen=True)
class Skip:
    reason: str


class CheckerState:
    """Per-run memo table, call caches, fresh supply, solver and statistics."""

    def __init__(self, opts: Options = Options(), fresh: Optional[Fresh] = None):
        self.opts = opts
        self.memo: set = set()
        self.fresh = fresh or Fresh()
        self.solver = make_solver(opts.solver, opts.timeout or 10.0)
        self.stats: Counter = Counter()
        self.deadline = (time.monotonic() + opts.timeout) if opts.timeout else None
        self._sat_cache: dict = {}

    def sat(self, env: SymEnv):
        key = (env.decls, env.path)
        if key not in self._sat_cache:
            self.stats["solver_calls"] += 1
            try:
                self._sat_cache[key] = self.solver.check(env)
            except NonlinearError as exc:
                self._sat_cache[key] = Unknown(str(exc))
        return self._sat_cache[key]

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Timeout()


class _Timeout(Exception):
    pass


# ------------------------------------------------------ pattern matching


def pattern_eq(d1, d2):
    """Formula equating two patterns leafwise, or None if shapes differ."""
    if isinstance(d1, Hole) or isinstance(d2, Hole):
        return TRUE if d1 == d2 else None
    if isinstance(d1, Tuple) or isinstance(d2, Tuple):
        if not (isinstance(d1, Tuple) and isinstance(d2, Tuple)) \
                or len(d1.items) != len(d2.items):
            return None
        parts = []
        for a, b in zip(d1.items, d2.items):
            p = pattern_eq(a, b)
            if p is None:
                return None
            parts.append(p)
        return conj(parts)
    if isinstance(d1, AbstractName) or isinstance(d2, AbstractName):
        return TRUE if d1 == d2 else None
    if d1.type != d2.type:
        return None
    if d1 == d2:
        return TRUE
    return equal(d1, d2)


def move_eq(m1, m2):
    """Formula equating two proponent moves, or None if they cannot match."""
    if isinstance(m1, PropApp) and isinstance(m2, PropApp):
        if m1.name != m2.name:
            return None
        return pattern_eq(m1.arg, m2.arg)
    if isinstance(m1, PropRet) and isinstance(m2, PropRet):
        return pattern_eq(m1.pat, m2.pat)
    return None


# ---------------------------------------------------------- normalising


class _Renamer:
    def __init__(self):
        self.names: dict = {}
        self.consts: list = []
        self._seen: set = set()

    def collect(self, obj):
        if isinstance(obj, AbstractName):
            self.names.setdefault(obj.id, len(self.names) + 1)
        elif isinstance(obj, SymConst):
            if obj not in self._seen:
                self._seen.add(obj)
                self.consts.append(obj)
        elif isinstance(obj, Memory):
            for t in obj.order:
                self.collect(t)
        elif isinstance(obj, tuple):
            for x in obj:
                self.collect(x)
        elif isinstance(obj, (Type, str, int, bool, type(None))):
            pass
        elif dataclasses.is_dataclass(obj):
            for f in fields(obj):
                self.collect(getattr(obj, f.name))

    def rebuild(self, obj, cren: dict):
        if isinstance(obj, AbstractName):
            return AbstractName(self.names.get(obj.id, obj.id), obj.type, obj.index)
        if isinstance(obj, SymConst):
            return cren.get(obj, obj)
        if isinstance(obj, Memory):
            order = tuple(self.rebuild(t, cren) for t in obj.order)
            return Memory(frozenset(order), order)
        if isinstance(obj, tuple):
            return tuple(self.rebuild(x, cren) for x in obj)
        if isinstance(obj, (Type, str, int, bool, type(None))):
            return obj
        if isinstance(obj, _NameTableType):
            return _NameTableType(tuple(
                ((self.names.get(n, n), j), self.rebuild(know, cren))
                for (n, j), know in obj.entries))
        if isinstance(obj, Const):
            return obj
        if dataclasses.is_dataclass(obj):
            vals = {f.name: self.rebuild(getattr(obj, f.name), cren)
                    for f in fields(obj) if f.init}
            out = type(obj)(**vals)
            if isinstance(out, (Fix, LetTuple)):
                out = canonical(out)
            return out
        return obj


from .lts import NameTable as _NameTableType  # noqa: E402


def _collect_table(r: _Renamer, table):
    for (n, _), know in table.entries:
        r.names.setdefault(n, len(r.names) + 1)
        r.collect(know)


def normalize_pair(pair: ConfigPair) -> ConfigPair:
    """Rename abstract names and symbolic constants by first occurrence,
    make binders canonical and drop path conjuncts about dead constants."""
    r = _Renamer()
    for c in (pair.C1, pair.C2):
        _collect_table(r, c.A)
        for f in fields(c):
            if f.name != "A":
                r.collect(getattr(c, f.name))
    r.collect(pair.M)
    sigma, cren = normalize_env(pair.sigma, r.consts)
    c1 = r.rebuild(pair.C1, cren)
    c2 = r.rebuild(pair.C2, cren)
    return ConfigPair(c1, c2, r.rebuild(pair.M, cren), sigma, pair.k, pair.witness)


def _key(pair: ConfigPair, opts: Options):
    p = normalize_pair(pair) if opts.normalise else pair
    return (p.C1, p.C2, p.M, p.sigma.path), p


def prune(pair: ConfigPair, state: CheckerState):
    """Skip a pair already explored, or one whose sides are identical."""
    key, p = _key(pair, state.opts)
    if state.opts.identity and p.C1 == p.C2:
        state.stats["identity"] += 1
        return Skip("identical")
    if state.opts.memo:
        if key in state.memo:
            state.stats["memo_hits"] += 1
            return Skip("memoised")
        state.memo.add(key)
    return Keep()


# ---------------------------------------------------------- side runner


FREE, STRICT, LOOSE = "free", "strict", "loose"


@dataclass
class Side:
    config: object
    sigma: SymEnv
    k: int
    cache: dict
    tracker: LoopTracker
    visited: frozenset
    fuel: int

    def fork(self, **kw) -> "Side":
        d = dict(config=self.config, sigma=self.sigma, k=self.k, cache=self.cache,
                 tracker=_copy_tracker(self.tracker), visited=self.visited, fuel=self.fuel)
        d.update(kw)
        return Side(**d)


def _copy_tracker(t: LoopTracker) -> LoopTracker:
    n = LoopTracker()
    n.stack = list(t.stack)
    n.live = dict(t.live)
    return n


@dataclass
class Returned:
    side: Side
    pat: object


@dataclass
class Diverged:
    side: Side
    why: str


@dataclass
class Stopped:
    side: Side
    reason: str


@dataclass
class OffMemory:
    side: Side
    why: str


def cache_calls(pair: ConfigPair, state: CheckerState) -> ConfigPair:
    """Splice cached opponent returns into sides paused at a repeated call."""
    c1 = _splice(pair.C1, pair.cache1, state) if state.opts.pcache else pair.C1
    c2 = _splice(pair.C2, pair.cache2, state) if state.opts.pcache else pair.C2
    return replace(pair, C1=c1, C2=c2)


def _splice(c, cache: dict, state: CheckerState):
    if not isinstance(c, PropConfig):
        return c
    r = step(c.e)
    if isinstance(r, Stuck) and r.reason == ABSTRACT_APP:
        key = _call_key(r.redex)
        if key in cache:
            state.stats["pcache_hits"] += 1
            return replace(c, e=r.ctx.plug(cache[key]))
    return c


def _call_key(redex):
    return (redex.fn.id, redex.fn.index, redex.arg)


def _repeats_answered_call(t: tuple, i: int, value) -> bool:
    """The trace already holds ``oq i (value)`` answered by a function-free
    return, and no later proponent return handed over new functions."""
    for p, m in enumerate(t):
        if m != OpApp(i, value):
            continue
        depth = 0
        answer = None
        for q in range(p, len(t)):
            if isinstance(t[q], OpApp):
                depth += 1
            elif isinstance(t[q], PropRet):
                depth -= 1
                if depth == 0:
                    answer = t[q]
                    break
        if answer is None or holes(answer.pat):
            continue
        if any(isinstance(x, PropRet) and holes(x.pat) for x in t[p:]):
            continue
        return True
    return False


def run_side(start: Side, mode: str, state: CheckerState) -> Iterator:
    """Drive one configuration to its next top-level return.

    Yields Returned, Diverged, Stopped or OffMemory outcomes, one per
    explored branch.
    """
    opts = state.opts
    stack = [start]
    while stack:
        state.check_time()
        st = stack.pop()
        c = st.config
        if isinstance(c, OpConfig):
            yield from _opponent(st, mode, state, stack)
            continue
        while True:
            if st.fuel <= 0:
                yield Stopped(st, FUEL)
                break
            try:
                r = step(c.e)
            except NonlinearError:
                yield Stopped(st, SOLVER)
                break
            if isinstance(r, Stepped):
                st.fuel -= 1
                if opts.loopdetect and st.tracker.observe(r.redex, r.depth):
                    state.stats["loops"] += 1
                    st.config = c
                    yield Diverged(st, "repeated reduction")
                    break
                c = replace(c, e=r.expr)
                continue
            st.config = c
            if isinstance(r, Branch):
                state.stats["branches"] += 1
                for g, e in ((r.guard, r.if_true), (neg(r.guard), r.if_false)):
                    sigma = assert_constraint(st.sigma, g)
                    res = state.sat(sigma)
                    if isinstance(res, Unsat):
                        continue
                    child = st.fork(config=replace(c, e=e), sigma=sigma)
                    if isinstance(res, Unknown):
                        yield Stopped(child, SOLVER)
                        continue
                    stack.append(child)
                break
            if isinstance(r, Stuck):
                if r.reason != ABSTRACT_APP:
                    yield Diverged(st, r.reason)
                    break
                key = _call_key(r.redex)
                if opts.pcache and key in st.cache:
                    state.stats["pcache_hits"] += 1
                    c = replace(c, e=r.ctx.plug(st.cache[key]))
                    continue
                if opts.loopdetect and any(f.call == key for f in c.K):
                    state.stats["loops"] += 1
                    yield Diverged(st, "nested identical call")
                    break
                if st.k <= 0:
                    yield Stopped(st, BOUND)
                    break
                tr = prop_call(c, r.ctx, r.redex)
                yield from _record(st.fork(k=st.k - 1), tr.target, mode, state, stack)
                break
            # a value
            if not c.K:
                (tr,) = prop_transitions(c, state.fresh, Symbolic())
                st.config = tr.target
                yield Returned(st, tr.move.pat)
                break
            (tr,) = prop_transitions(c, state.fresh, Symbolic())
            yield from _record(st, tr.target, mode, state, stack)
            break


def _record(st: Side, target: OpConfig, mode: str, state: CheckerState, stack: list):
    """Record a proponent move, matching it against the memory.

    The move either coincides with a stored proponent move (the opponent is
    then bound to answer as before) or is new; with symbolic leaves both can
    be possible and the path splits.
    """
    m = st.config.M
    t2 = target.t
    visited = st.visited | {t2}
    if t2 in m:
        stack.append(st.fork(config=replace(target, M=m), visited=visited))
        return
    prefix, mv = t2[:-1], t2[-1]
    n = len(t2)
    differ = []
    for u in m.order:
        if len(u) != n or u[:-1] != prefix:
            continue
        phi = move_eq(mv, u[-1])
        if phi is None or phi == FALSE:
            continue
        differ.append(neg(phi))
        sigma = assert_constraint(st.sigma, phi)
        res = state.sat(sigma)
        if isinstance(res, Unsat):
            continue
        child = st.fork(config=replace(target, t=u, M=m), sigma=sigma,
                        visited=st.visited | {u})
        if isinstance(res, Unknown):
            yield Stopped(child, SOLVER)
            continue
        state.stats["memory_matches"] += 1
        stack.append(child)
    sigma = assert_constraint(st.sigma, conj(differ)) if differ else st.sigma
    res = state.sat(sigma) if differ else Sat()
    if isinstance(res, Unsat):
        return
    child = st.fork(config=target, sigma=sigma, visited=visited)
    if isinstance(res, Unknown):
        yield Stopped(child, SOLVER)
    elif mode == STRICT:
        yield OffMemory(child, f"move {mv} not made by the other side")
    else:
        stack.append(child)


def _opponent(st: Side, mode: str, state: CheckerState, stack: list):
    c = st.config
    opts = state.opts
    forced = bool(nextmove(c.M, c.t))
    if not forced and mode == STRICT:
        yield OffMemory(st, f"opponent move after {format_trace(c.t)} not fixed")
        return
    trs = op_transitions(c, state.fresh, Symbolic())
    # pushed in reverse so that returns are explored before calls
    for tr in reversed(trs):
        if not forced and opts.oskip and tr.rule == "OpCall" and not tr.new_consts \
                and not _fresh_names(tr.move.arg) and _repeats_answered_call(
                    c.t, tr.move.index, tr.move.arg):
            state.stats["oskip"] += 1
            continue
        k = st.k
        # replayed calls are dictated by the memory and cost nothing
        if tr.rule == "OpCall" and not forced:
            if k <= 0:
                yield Stopped(st, BOUND)
                continue
            k -= 1
        sigma = st.sigma.declare(*tr.new_consts) if tr.new_consts else st.sigma
        cache = st.cache
        if tr.rule == "OpRet" and opts.pcache and c.K[-1].call is not None:
            value = tr.move.ret
            names = _fresh_names(value)
            j = c.A.least_free(names)
            cache = {**cache, c.K[-1].call: instantiate(value, names, j)}
        visited = st.visited | {c.t + (tr.move,)}
        stack.append(Side(tr.target, sigma, k, cache, LoopTracker(), visited, st.fuel))


def _fresh_names(v) -> list:
    if isinstance(v, AbstractName):
        return [v]
    if isinstance(v, Tuple):
        return [n for x in v.items for n in _fresh_names(x)]
    return []


# --------------------------------------------------------------- rounds


@dataclass(frozen=True)
class _Found:
    verdict: Inequivalent


def _model(state: CheckerState, sigma: SymEnv, relevant) -> Optional[dict]:
    """A model of ``sigma`` restricted to the constants in ``relevant``."""
    res = state.sat(sigma)
    if not isinstance(res, Sat):
        return None
    r = _Renamer()
    r.collect(relevant)
    wanted = {k.id for k in r.consts}
    decls = sigma.declared()
    return {cid: res.model.get(cid, False if decls[cid].name == "Bool" else 0)
            for cid in sorted(wanted) if cid in decls}


def _ineq(state, sigma, witness, reason, memory, side="left"):
    mem = tuple(memory.maximal()) if memory is not None else ()
    model = _model(state, sigma, (tuple(witness), mem))
    if model is None:
        return None
    return Inequivalent(tuple(witness), model, reason, mem, side)


def expand(pair: ConfigPair, state: CheckerState) -> list:
    """Children of a pair: matched successor pairs, or leaf verdicts.

    Leaves are Inequivalent (a distinguishing branch), Inconclusive (bound,
    fuel or solver limits) or nothing at all for branches closed by
    divergence on both sides.
    """
    out = []
    c1, c2 = pair.C1, pair.C2
    if isinstance(c1, PropConfig):
        out.extend(_round(pair, c1, c2, pair.sigma, pair.k, (), state))
        return out
    for i, fn in enumerate(c1.know, start=1):
        if pair.k <= 0:
            out.append(Inconclusive(BOUND))
            break
        (value, names, consts), = opponent_patterns(fun_type(fn).dom, state.fresh, Symbolic())
        t1 = op_call(c1, i, value, names, consts)
        t2 = op_call(c2, i, value, names, consts)
        sigma = pair.sigma.declare(*consts)
        state.stats["challenges"] += 1
        start = replace(pair, sigma=sigma)
        out.extend(_round(start, t1.target, t2.target, sigma, pair.k - 1,
                          (t1.move,), state))
        if any(isinstance(x, Inequivalent) for x in out):
            break
    return out


def _round(pair: ConfigPair, c1: PropConfig, c2: PropConfig, sigma: SymEnv, k: int,
           challenge: tuple, state: CheckerState) -> Iterator:
    opts = state.opts
    witness = pair.witness + challenge
    m0 = pair.M.traces
    if opts.identity and c1 == c2:
        state.stats["identity"] += 1
        return
    left = Side(c1, sigma, k, pair.cache1, LoopTracker(), frozenset(), opts.fuel)
    for o1 in run_side(left, FREE, state):
        if isinstance(o1, Stopped):
            yield Inconclusive(o1.reason)
            continue
        s1 = o1.side
        mem1 = s1.config.M
        right_mode = STRICT if isinstance(o1, Returned) else LOOSE
        right = Side(replace(c2, M=mem1), s1.sigma, k, pair.cache2, LoopTracker(),
                     frozenset(), opts.fuel)
        for o2 in run_side(right, right_mode, state):
            s2 = o2.side
            if isinstance(o2, Stopped):
                yield Inconclusive(o2.reason)
                continue
            if isinstance(o1, Diverged):
                if isinstance(o2, Returned):
                    v = _ineq(state, s2.sigma, witness + (PropRet(o2.pat),),
                              f"left side diverges ({o1.why}); right side returns",
                              s2.config.M, "right")
                    if v:
                        yield v
                        return
                continue
            # left returned
            w = witness + (PropRet(o1.pat),)
            if isinstance(o2, (Diverged, OffMemory)):
                why = (f"right side diverges ({o2.why})" if isinstance(o2, Diverged)
                       else f"right side cannot follow: {o2.why}")
                v = _ineq(state, s2.sigma, w, why, mem1)
                if v:
                    yield v
                    return
                continue
            phi = pattern_eq(o1.pat, o2.pat)
            if phi is None:
                v = _ineq(state, s2.sigma, w,
                          f"returns differ: {pattern_str(o1.pat)} vs {pattern_str(o2.pat)}",
                          mem1)
                if v:
                    yield v
                    return
                continue
            if phi != TRUE:
                bad = assert_constraint(s2.sigma, neg(phi))
                res = state.sat(bad)
                if isinstance(res, Sat):
                    v = _ineq(state, bad, w,
                              f"returns differ: {pattern_str(o1.pat)} vs {pattern_str(o2.pat)}",
                              mem1)
                    yield v
                    return
                if isinstance(res, Unknown):
                    yield Inconclusive(SOLVER)
                    continue
                sig = assert_constraint(s2.sigma, phi)
            else:
                sig = s2.sigma
            missing = (s1.visited - m0) - s2.visited
            if missing:
                t = min(missing, key=len)
                v = _ineq(state, sig, w, f"right side never reaches {format_trace(t)}",
                          mem1)
                if v:
                    yield v
                    return
                continue
            yield ConfigPair(s1.config, replace(s2.config, M=mem1), mem1, sig,
                             min(s1.k, s2.k), w, s1.cache, s2.cache)


# ------------------------------------------------------------ top level


def explore(e1: Expr, e2: Expr, opts: Options = Options(),
            state: Optional[CheckerState] = None) -> Verdict:
    """One-directional exploration with ``e1`` on the left."""
    state = state or CheckerState(opts)
    start = time.monotonic()
    root = ConfigPair(initial_config(e1), initial_config(e2), Memory(), SymEnv(),
                      opts.bound)
    stack = [root]
    pending: Optional[str] = None
    try:
        while stack:
            state.check_time()
            pair = stack.pop()
            state.stats["pairs"] += 1
            if isinstance(prune(pair, state), Skip):
                continue
            children = expand(pair, state)
            for ch in reversed(children):
                if isinstance(ch, Inequivalent):
                    return _with_stats(ch, state, start)
                if isinstance(ch, Inconclusive):
                    pending = pending or ch.reason
                    state.stats["inconclusive_leaves"] += 1
                else:
                    stack.append(ch)
    except _Timeout:
        return _with_stats(Inconclusive(TIMEOUT), state, start)
    if pending:
        return _with_stats(Inconclusive(pending), state, start)
    return _with_stats(Equivalent(), state, start)


def _with_stats(v, state: CheckerState, start: float):
    stats = dict(state.stats)
    stats["seconds"] = round(time.monotonic() - start, 4)
    return replace(v, stats=stats)


def check(e1: Expr, e2: Expr, k: Optional[int] = None,
          opts: Optional[Options] = None) -> Verdict:
    """Check two closed programs of the same type for equivalence.

    Programs are elaborated together (raising TypeCheckError on mismatch).
    When the first exploration is inconclusive and ``opts.symmetric`` is
    set, the sides are swapped and the result of that run is used if it is
    conclusive.
    """
    opts = opts or Options()
    if k is not None:
        opts = replace(opts, bound=k)
    a, b, _ = elaborate_pair(e1, e2)
    v = explore(a, b, opts)
    if isinstance(v, Inconclusive) and opts.symmetric and v.reason != TIMEOUT:
        w = explore(b, a, opts)
        if isinstance(w, Inequivalent):
            return replace(w, side="right" if w.side == "left" else "left",
                           stats=_merge(v.stats, w.stats))
        if isinstance(w, Equivalent):
            return replace(w, stats=_merge(v.stats, w.stats))
    return v


def _merge(a: dict, b: dict) -> dict:
    out = Counter(a)
    out.update(b)
    return dict(out)
