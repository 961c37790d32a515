"""The game transition system: plays, views, duals and composition.

Unlike the main transition system, every interaction is a visible move and
both players introduce names.  Opponent names are ``AbstractName`` values
(the program calls them), proponent names are ``PName`` values (the context
calls them, and the concretion map ``kappa`` says which function each one
stands for).  This engine is only used as a differential-testing oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .reduction import (
    ABSTRACT_APP, AppRight, Branch, EvalContext, Stepped, Stuck, step,
)
from .syntax import UNIT, UNIT_V, AbstractName, App, Arrow, Expr, Fix, Type, lam
from .ulpatt import DEFAULT_DOMAIN, pattern_str, plug, ulpatt_type_enumerate, ulpatt_value


# ---------------------------------------------------------------- names


@dataclass(frozen=True)
class PName:
    """Proponent function name."""

    id: int
    type: Arrow

    def __repr__(self) -> str:
        return f"β{self.id}"


class NameSupply:
    """Shared counter so that both sides of a composition stay disjoint."""

    def __init__(self, start: int = 1):
        self._ids = itertools.count(start)

    def opponent(self, tp: Arrow) -> AbstractName:
        return AbstractName(next(self._ids), tp)

    def proponent(self, tp: Arrow) -> PName:
        return PName(next(self._ids), tp)


# ---------------------------------------------------------------- moves


@dataclass(frozen=True)
class GPropApp:
    name: AbstractName
    pat: object
    intro: tuple = ()

    def __str__(self) -> str:
        return f"pq {self.name!r} ({pattern_str(self.pat)}) [{_names(self.intro)}]"


@dataclass(frozen=True)
class GPropRet:
    pat: object
    intro: tuple = ()

    def __str__(self) -> str:
        return f"pa ({pattern_str(self.pat)}) [{_names(self.intro)}]"


@dataclass(frozen=True)
class GOpApp:
    name: PName
    pat: object
    intro: tuple = ()

    def __str__(self) -> str:
        return f"oq {self.name!r} ({pattern_str(self.pat)}) [{_names(self.intro)}]"


@dataclass(frozen=True)
class GOpRet:
    pat: object
    intro: tuple = ()

    def __str__(self) -> str:
        return f"oa ({pattern_str(self.pat)}) [{_names(self.intro)}]"


GameMove = Union[GPropApp, GPropRet, GOpApp, GOpRet]


def _names(ns) -> str:
    return ",".join(repr(n) for n in ns)


def is_p_move(m) -> bool:
    return isinstance(m, (GPropApp, GPropRet))


def is_call(m) -> bool:
    return isinstance(m, (GPropApp, GOpApp))


def dump_play(t) -> str:
    """One move per line, with the names each move introduces in brackets."""
    return "\n".join(f"{i:3d}  {m}" for i, m in enumerate(t)) if t else "ε"


# ------------------------------------------------------- configurations


@dataclass(frozen=True)
class GProp:
    """``<A; kappa; K; t; e; V>[names]``; stacks keep their top last."""

    A: dict
    kappa: dict
    K: tuple          # of (EvalContext, opponent names)
    t: tuple
    e: Expr
    V: tuple          # of proponent-name tuples
    names: tuple

    @property
    def final(self) -> bool:
        return not self.K and not self.V and self.e == UNIT_V


@dataclass(frozen=True)
class GOp:
    """``<A; kappa; K; t; V; names>``."""

    A: dict
    kappa: dict
    K: tuple
    t: tuple
    V: tuple
    names: tuple

    @property
    def final(self) -> bool:
        return not self.K and not self.V


GameConfig = Union[GProp, GOp]


class MalformedConfig(Exception):
    pass


def program_config(e: Expr) -> GProp:
    """Initial configuration of a closed program: ``V`` holds one empty frame."""
    return GProp({}, {}, (), (), e, ((),), ())


def context_config(ctx: EvalContext, hole_type: Type, result_type: Type = UNIT) -> GOp:
    """Initial configuration of a context waiting for a ``hole_type`` value.

    Contexts whose result is not Unit are wrapped so that termination is
    always signalled by reaching ``()``.
    """
    frames = ctx.frames
    if result_type != UNIT:
        frames = (AppRight(lam("_", UNIT_V, result_type, UNIT)),) + frames
    return GOp({}, {}, ((EvalContext(frames, hole_type), ()),), (), (), ())


@dataclass(frozen=True)
class Tau:
    def __str__(self) -> str:
        return "τ"


TAU = Tau()


# ---------------------------------------------------------- justifiers


def justifiers(t) -> list:
    """Index of each move's justifier, or None for an initial move.

    Calls are justified by the move introducing the called name, returns by
    the pending call they answer.  Names introduced twice or never keep the
    first/absent introducer; ``is_play`` reports those separately.
    """
    intro: dict = {}
    pending: list = []
    out: list = []
    for i, m in enumerate(t):
        if is_call(m):
            out.append(intro.get(m.name))
            pending.append(i)
        else:
            out.append(pending.pop() if pending else None)
        for n in m.intro:
            intro.setdefault(n, i)
    return out


def _view(t, just, n: int, proponent: bool, memo: dict) -> tuple:
    """Indices of the P-view (or O-view) of the prefix of length ``n``."""
    if n in memo:
        return memo[n]
    if n <= 1:
        r = tuple(range(n))
    else:
        last = n - 1
        if is_p_move(t[last]) == proponent:
            r = _view(t, just, last, proponent, memo) + (last,)
        else:
            j = just[last]
            r = (last,) if j is None else _view(t, just, j, proponent, memo) + (j, last)
    memo[n] = r
    return r


def pview(t) -> tuple:
    t = tuple(t)
    return tuple(t[i] for i in _view(t, justifiers(t), len(t), True, {}))


def oview(t) -> tuple:
    t = tuple(t)
    return tuple(t[i] for i in _view(t, justifiers(t), len(t), False, {}))


# ---------------------------------------------------------- permutations


def match_moves(s1, s2, perm: Optional[dict] = None) -> Optional[dict]:
    """A name permutation taking ``s1`` to ``s2`` move by move, or None.

    Owner and type are preserved because names of different kind or type
    never compare equal.
    """
    if len(s1) != len(s2):
        return None
    fwd = dict(perm or {})
    back = {v: k for k, v in fwd.items()}

    def bind(a, b) -> bool:
        if type(a) is not type(b) or a.type != b.type:
            return False
        if fwd.get(a, b) != b or back.get(b, a) != a:
            return False
        fwd[a] = b
        back[b] = a
        return True

    for m1, m2 in zip(s1, s2):
        if type(m1) is not type(m2) or m1.pat != m2.pat or len(m1.intro) != len(m2.intro):
            return None
        if is_call(m1) and not bind(m1.name, m2.name):
            return None
        if not all(bind(a, b) for a, b in zip(m1.intro, m2.intro)):
            return None
    return fwd


def permute(m, perm: dict):
    ren = lambda n: perm.get(n, n)  # noqa: E731
    intro = tuple(ren(n) for n in m.intro)
    if is_call(m):
        return type(m)(ren(m.name), m.pat, intro)
    return type(m)(m.pat, intro)


# ----------------------------------------------------------- next_O


def next_opponent(t, supply: Optional[NameSupply] = None) -> list:
    """Opponent moves forced by innocence after ``t``.

    Looks for an earlier prefix ``t'o`` whose O-view matches the O-view of
    ``t`` up to a permutation and replays ``o`` under that permutation, with
    fresh names for the ones ``o`` introduces.  Empty when O is free.
    """
    t = tuple(t)
    just = justifiers(t)
    memo: dict = {}
    now = tuple(t[i] for i in _view(t, just, len(t), False, memo))
    for k in range(len(t)):
        if is_p_move(t[k]):
            continue
        before = tuple(t[i] for i in _view(t, just, k, False, memo))
        perm = match_moves(before, now)
        if perm is None:
            continue
        o = t[k]
        if is_call(o) and o.name not in perm:
            continue
        if supply is not None:
            for a in o.intro:
                perm[a] = supply.opponent(a.type)
        return [permute(o, perm)]
    return []


# --------------------------------------------------------- transitions


def _proponent_names(funs, supply: NameSupply) -> tuple:
    return tuple(supply.proponent(f.ftype if isinstance(f, Fix) else f.type) for f in funs)


def g_transitions(c: GameConfig, domain: Optional[dict] = None,
                  supply: Optional[NameSupply] = None) -> list:
    """Every rule instance from ``c`` as ``(label, target)`` pairs.

    Proponent configurations have at most one successor (up to the choice
    of fresh names).  Opponent configurations replay the forced move when
    there is one, and otherwise enumerate returns and calls over ``domain``.
    """
    supply = supply or NameSupply(10 ** 6)
    if isinstance(c, GProp):
        return _prop_steps(c, supply)
    nxt = next_opponent(c.t, supply)
    if nxt:
        try:
            return [(nxt[0], play_opponent(c, nxt[0]))]
        except IllegalMove:
            return []
    domain = DEFAULT_DOMAIN if domain is None else domain
    out = []
    if c.K:
        for d, names in ulpatt_type_enumerate(c.K[-1][0].hole_type, domain):
            m = GOpRet(d, tuple(supply.opponent(n.type) for n in names))
            out.append((m, play_opponent(c, m)))
    for b in c.names:
        for d, names in ulpatt_type_enumerate(b.type.dom, domain):
            m = GOpApp(b, d, tuple(supply.opponent(n.type) for n in names))
            out.append((m, play_opponent(c, m)))
    return out


def _prop_steps(c: GProp, supply: NameSupply) -> list:
    r = step(c.e)
    if isinstance(r, Stepped):
        return [(TAU, GProp(c.A, c.kappa, c.K, c.t, r.expr, c.V, c.names))]
    if isinstance(r, Branch):
        raise MalformedConfig("the game engine runs on concrete terms only")
    if isinstance(r, Stuck):
        if r.reason != ABSTRACT_APP:
            return []
        alpha, v = r.redex.fn, r.redex.arg
        if alpha not in c.A:
            raise MalformedConfig(f"call to unknown opponent name {alpha!r}")
        d, funs = ulpatt_value(v)
        betas = _proponent_names(funs, supply)
        m = GPropApp(alpha, d, betas)
        kappa = {**c.kappa, **{b: (f, c.names) for b, f in zip(betas, funs)}}
        K = c.K + ((r.ctx.with_type(alpha.type.cod), c.names),)
        return [(m, GOp(c.A, kappa, K, c.t + (m,), c.V, c.A[alpha] + betas))]
    if not c.V:
        return []   # final: nothing left to answer
    d, funs = ulpatt_value(r.value)
    betas = _proponent_names(funs, supply)
    m = GPropRet(d, betas)
    kappa = {**c.kappa, **{b: (f, c.names) for b, f in zip(betas, funs)}}
    return [(m, GOp(c.A, kappa, c.K, c.t + (m,), c.V[:-1], c.V[-1] + betas))]


class IllegalMove(Exception):
    pass


def play_opponent(c: GOp, m) -> GProp:
    """Apply opponent move ``m`` (its introduced names already chosen)."""
    values = list(m.intro)
    A = {**c.A, **{a: c.names for a in m.intro}}
    t = c.t + (m,)
    if isinstance(m, GOpRet):
        if not c.K:
            raise IllegalMove("opponent return with no pending call")
        (ctx, alphas), K = c.K[-1], c.K[:-1]
        return GProp(A, c.kappa, K, t, ctx.plug(plug(m.pat, values)), c.V,
                     alphas + m.intro)
    if m.name not in c.names:
        raise IllegalMove(f"{m.name!r} is not visible to the opponent")
    fn, alphas = c.kappa[m.name]
    e = App(fn, plug(m.pat, values))
    return GProp(A, c.kappa, c.K, t, e, c.V + (c.names,), alphas + m.intro)


# ---------------------------------------------------------------- plays


@dataclass(frozen=True)
class PlayReport:
    problems: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def is_play(t) -> PlayReport:
    """Check legality, alternation, bracketing, visibility and innocence."""
    t = tuple(t)
    problems = []
    seen: set = set()
    owner: dict = {}
    pending: list = []
    for i, m in enumerate(t):
        if i and is_p_move(m) == is_p_move(t[i - 1]):
            problems.append(f"move {i} does not alternate")
        own_kind = PName if is_p_move(m) else AbstractName
        if is_call(m):
            if isinstance(m.name, own_kind):
                problems.append(f"move {i} calls its own name {m.name!r}")
            elif m.name not in owner:
                problems.append(f"move {i} calls {m.name!r} before it is introduced")
            pending.append(i)
        elif pending:
            if is_p_move(t[pending[-1]]) == is_p_move(m):
                problems.append(f"move {i} answers its own call")
            pending.pop()
        elif i:
            problems.append(f"move {i} returns with no pending call")
        for n in m.intro:
            if not isinstance(n, own_kind):
                problems.append(f"move {i} introduces {n!r} owned by the other player")
            if n in seen:
                problems.append(f"move {i} reintroduces {n!r}")
            owner.setdefault(n, i)
        if is_call(m):
            seen.add(m.name)
        seen.update(m.intro)
    if problems:
        return PlayReport(tuple(problems))

    just = justifiers(t)
    pmemo: dict = {}
    omemo: dict = {}
    for i, m in enumerate(t):
        j = just[i]
        if j is None or i == 0:
            continue
        mine = is_p_move(m)
        view = _view(t, just, i, mine, pmemo if mine else omemo)
        if j not in view:
            who = "P" if mine else "O"
            problems.append(f"move {i} is not visible: justifier {j} outside the {who}-view")
    for mine, memo in ((True, pmemo), (False, omemo)):
        idx = [i for i, m in enumerate(t) if is_p_move(m) == mine]
        views = {i: tuple(t[k] for k in _view(t, just, i, mine, memo)) for i in idx}
        for a, b in itertools.combinations(idx, 2):
            if match_moves(views[a], views[b]) is None:
                continue
            if match_moves(views[a] + (t[a],), views[b] + (t[b],)) is None:
                who = "P" if mine else "O"
                problems.append(f"{who} is not innocent: moves {a} and {b} follow equal views")
    return PlayReport(tuple(problems))


# ----------------------------------------------------------------- dual


class MissingName(KeyError):
    pass


def dual(t, phi: dict) -> tuple:
    """Swap the players of ``t`` through ``phi`` (opponent -> proponent names)."""
    inv = {b: a for a, b in phi.items()}

    def o2p(a):
        if a not in phi:
            raise MissingName(a)
        return phi[a]

    def p2o(b):
        if b not in inv:
            raise MissingName(b)
        return inv[b]

    out = []
    for m in t:
        if isinstance(m, GPropRet):
            out.append(GOpRet(m.pat, tuple(map(p2o, m.intro))))
        elif isinstance(m, GOpRet):
            out.append(GPropRet(m.pat, tuple(map(o2p, m.intro))))
        elif isinstance(m, GPropApp):
            out.append(GOpApp(o2p(m.name), m.pat, tuple(map(p2o, m.intro))))
        else:
            out.append(GPropApp(p2o(m.name), m.pat, tuple(map(o2p, m.intro))))
    return tuple(out)


# ---------------------------------------------------------- composition


class Desync(Exception):
    """The two engines disagreed about a synchronised move."""


@dataclass(frozen=True)
class Terminated:
    steps: int
    play: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class Exhausted:
    """Out of fuel, or ``stuck`` when a side cannot move (division by zero)."""

    steps: int
    play: tuple = field(default=(), compare=False)
    stuck: bool = False


def compose_run(left: GameConfig, right: GameConfig, fuel: int = 10000,
                supply: Optional[NameSupply] = None, check: bool = False):
    """Run two compatible configurations against each other.

    Internal steps of the proponent side cost one unit of fuel; a visible
    move is answered by the opponent side with the dual move, extending the
    name bijection.  The run terminates when ``right`` reaches its final
    unit value.  With ``check`` the traces are re-validated at the end.
    """
    supply = supply or NameSupply()
    phi: dict = {}
    steps = 0
    while True:
        if isinstance(right, GProp) and right.final:
            result = Terminated(steps, right.t)
            break
        if isinstance(left, GProp) == isinstance(right, GProp):
            raise Desync("both sides have the same polarity")
        p_left = isinstance(left, GProp)
        pc, oc = (left, right) if p_left else (right, left)
        if steps >= fuel:
            return Exhausted(steps, right.t)
        trs = _prop_steps(pc, supply)
        if not trs:
            return Exhausted(steps, right.t, stuck=True)
        label, pc2 = trs[0]
        if label is TAU:
            steps += 1
            if p_left:
                left = pc2
            else:
                right = pc2
            continue
        alphas = tuple(supply.opponent(b.type) for b in label.intro)
        if isinstance(label, GPropApp):
            if label.name not in phi:
                raise Desync(f"{label.name!r} has no partner name")
            o = GOpApp(phi[label.name], label.pat, alphas)
        else:
            o = GOpRet(label.pat, alphas)
        forced = next_opponent(oc.t)
        if forced and not _same_up_to_intro(forced[0], o):
            raise Desync(f"opponent was forced to play {forced[0]} but met {o}")
        try:
            oc2 = play_opponent(oc, o)
        except IllegalMove as exc:
            raise Desync(str(exc)) from exc
        phi.update(zip(alphas, label.intro))
        left, right = (pc2, oc2) if p_left else (oc2, pc2)
    if check:
        if dual(right.t, phi) != left.t:
            raise Desync("traces are not dual")
        for side in (left.t, right.t):
            rep = is_play(side)
            if not rep:
                raise Desync("; ".join(rep.problems))
    return result


def _same_up_to_intro(a, b) -> bool:
    if type(a) is not type(b) or a.pat != b.pat:
        return False
    if is_call(a) and a.name != b.name:
        return False
    return [n.type for n in a.intro] == [n.type for n in b.intro]


def compose_program_context(e: Expr, ctx: EvalContext, hole_type: Type,
                            result_type: Type = UNIT, fuel: int = 10000,
                            check: bool = False):
    """``compose_run`` on the initial configurations of ``e`` and ``ctx``."""
    return compose_run(program_config(e), context_config(ctx, hole_type, result_type),
                       fuel, check=check)


def random_play(c: GameConfig, rng, steps: int = 200, domain: Optional[dict] = None,
                max_moves: int = 12) -> tuple:
    """Follow random game transitions from ``c``; returns the play reached."""
    supply = NameSupply(10 ** 5)
    for _ in range(steps):
        if len(c.t) >= max_moves:
            break
        trs = g_transitions(c, domain, supply)
        if not trs:
            break
        c = rng.choice(trs)[1]
    return c.t
