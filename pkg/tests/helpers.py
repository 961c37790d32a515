"""Shared generators for the test suite."""
from __future__ import annotations

import itertools
import random

from pcfbisim.lts import (
    Concrete, OpConfig, PropConfig, Visible, initial_config, transitions,
)
from pcfbisim.oracle_contexts import enumerate_applicative
from pcfbisim.pairs import corpus
from pcfbisim.syntax import BOOL, INT, SymConst, SymOp, bool_c, int_c, parse
from pcfbisim.typecheck import elaborate
from pcfbisim.ulpatt import Fresh

SMALL_DOMAIN = {BOOL: [bool_c(False), bool_c(True)], INT: [int_c(0), int_c(1)]}


def prog(text: str):
    """Parse and elaborate a closed program."""
    return elaborate(parse(text))[0]


def corpus_programs() -> list:
    out = []
    for p in corpus():
        out.append((p.name + ":left", prog(p.left)))
        out.append((p.name + ":right", prog(p.right)))
    return out


# Small programs of assorted orders, used where the corpus alone is too
# narrow (composition cases, random walks).
SMALL_PROGRAMS = [
    "true",
    "2 + 3",
    "(1, false)",
    "fun (b : Bool) -> not b",
    "fun (b : Bool) -> b",
    "fun (b : Bool) -> if b then _bot_ else false",
    "fun (n : Int) -> n + 1",
    "fun (n : Int) -> if n == 0 then true else false",
    "fun (f : Bool -> Bool) -> f true",
    "fun (f : Bool -> Bool) -> f (f false)",
    "fun (f : Bool -> Bool) -> if f true then f false else true",
    "fun (f : Unit -> Unit) -> f ()",
    "fun (f : Unit -> Unit) -> f (f ())",
    "fun (f : Unit -> Bool) -> if f () then () else _bot_",
    "fun (f : (Bool -> Bool) -> Bool) -> f (fun (x : Bool) -> not x)",
    "fun (p : Bool * Bool) -> let (a, b) = p in a && b",
    "(fun (b : Bool) -> b, fun (b : Bool) -> not b)",
    "fun (f : Int -> Int) -> f 0 + f 1",
]


def small_programs() -> list:
    return [(s, prog(s)) for s in SMALL_PROGRAMS]


# ------------------------------------------------------------ LTS walks


def random_walk(e, rng: random.Random, steps: int = 60, domain=None) -> list:
    """Configurations met on one random run of the concrete LTS from ``e``."""
    mode = Concrete(domain or SMALL_DOMAIN)
    fresh = Fresh()
    c = initial_config(e)
    seen = [c]
    for _ in range(steps):
        trs = transitions(c, fresh, mode)
        if not trs:
            break
        c = rng.choice(trs).target
        seen.append(c)
    return seen


def reachable_configs(n: int, seed: int = 0) -> list:
    """``n`` configurations sampled from random walks over the corpus and
    the small programs."""
    rng = random.Random(seed)
    pool = [e for _, e in corpus_programs()] + [e for _, e in small_programs()]
    out: list = []
    while len(out) < n:
        walk = random_walk(rng.choice(pool), rng, rng.randint(5, 80))
        out.extend(rng.sample(walk, min(len(walk), 4)))
    return out[:n]


def final_configs(n: int, seed: int = 0) -> list:
    """Final opponent configurations with at least one function to call."""
    rng = random.Random(seed)
    pool = [e for _, e in corpus_programs()] + [e for _, e in small_programs()]
    out: list = []
    tries = 0
    while len(out) < n and tries < 50 * n:
        tries += 1
        for c in random_walk(rng.choice(pool), rng, rng.randint(1, 60)):
            if isinstance(c, OpConfig) and c.final and c.know:
                out.append(c)
                break
    return out


def run_round(c: OpConfig, challenge, choose, fresh: Fresh, fuel: int = 3000):
    """Play ``challenge`` on final ``c`` and follow the run to the next
    top-level return.  ``choose(list)`` picks among branching transitions.

    Returns the configuration after the return, or None when the run is
    cut by fuel, diverges or gets stuck.
    """
    mode = Concrete(SMALL_DOMAIN)
    c = challenge.target
    for _ in range(fuel):
        trs = transitions(c, fresh, mode)
        if not trs:
            return None
        tr = trs[0] if len(trs) == 1 else choose(trs)
        if isinstance(tr.label, Visible):
            return tr.target
        c = tr.target
    return None


class Recorder:
    """Random chooser that can replay a previous run's choices."""

    def __init__(self, rng: random.Random, replay: list = None):
        self.rng = rng
        self.replay = list(replay or [])
        self.log: list = []

    def __call__(self, options: list):
        if self.replay:
            i = self.replay.pop(0)
        else:
            i = self.rng.randrange(len(options))
        i = min(i, len(options) - 1)
        self.log.append(i)
        return options[i]


# --------------------------------------------------------- constraints


def random_constraint(rng: random.Random, n_int: int = 3, n_bool: int = 2, bound: int = 6):
    """A random boxed linear constraint set as (terms, declarations)."""
    ints = [SymConst(i + 1, INT) for i in range(n_int)]
    bools = [SymConst(n_int + i + 1, BOOL) for i in range(n_bool)]
    decls = {k.id: k.type for k in ints + bools}
    terms = []
    for k in ints:
        terms.append(SymOp(">=", (k, int_c(-bound)), BOOL))
        terms.append(SymOp("<=", (k, int_c(bound)), BOOL))

    def lin():
        t = None
        for k in rng.sample(ints, rng.randint(1, len(ints))):
            c = rng.choice([-3, -2, -1, 1, 2, 3])
            term = k if c == 1 else SymOp("*", (int_c(c), k), INT)
            t = term if t is None else SymOp(rng.choice("+-"), (t, term), INT)
        if rng.random() < 0.2:
            t = SymOp(rng.choice(["/", "mod"]), (t, int_c(rng.choice([2, 3]))), INT)
        return t

    def atom():
        if bools and rng.random() < 0.3:
            b = rng.choice(bools)
            return b if rng.random() < 0.5 else SymOp("not", (b,), BOOL)
        op = rng.choice(["<", "<=", ">", ">=", "==", "<>"])
        return SymOp(op, (lin(), int_c(rng.randint(-2 * bound, 2 * bound))), BOOL)

    for _ in range(rng.randint(1, 5)):
        a = atom()
        if rng.random() < 0.3:
            a = SymOp(rng.choice(["&&", "||"]), (a, atom()), BOOL)
        terms.append(a)
    return terms, decls


def brute_force_sat(terms, decls, bound: int = 6) -> bool:
    from pcfbisim.symbolic import evaluate_term
    ids = sorted(decls)
    ranges = [[False, True] if decls[i] == BOOL else range(-bound, bound + 1) for i in ids]
    for vals in itertools.product(*ranges):
        model = dict(zip(ids, vals))
        if all(evaluate_term(t, model) for t in terms):
            return True
    return False


# ------------------------------------------------------- composition


def composition_cases(limit_per_program: int = 12) -> list:
    """(label, program, context) triples over the small programs."""
    out = []
    for text, e in small_programs():
        _, tp = elaborate(parse(text))
        for ctx in enumerate_applicative(tp, depth=2, domain=SMALL_DOMAIN, size=3,
                                         limit=limit_per_program):
            out.append((text, e, ctx))
    return out


def is_prop(c) -> bool:
    return isinstance(c, PropConfig)
