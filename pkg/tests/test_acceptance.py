"""Acceptance checks, one PASS/FAIL line per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or as a
script with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import os
import random
import shutil
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from helpers import (  # noqa: E402
    SMALL_DOMAIN, Recorder, composition_cases, final_configs, prog, random_constraint,
    reachable_configs, run_round, small_programs,
)
from pcfbisim import oracle_contexts as oc  # noqa: E402
from pcfbisim.checker import (  # noqa: E402
    ENHANCEMENTS, Equivalent, Inconclusive, Inequivalent, Options, check,
)
from pcfbisim.cli import main as cli_main  # noqa: E402
from pcfbisim.game_oracle import (  # noqa: E402
    Terminated, compose_program_context, is_play, program_config, random_play,
)
from pcfbisim.lts import (  # noqa: E402
    Concrete, invariant_violations, is_legal, op_transitions, semantics,
)
from pcfbisim.pairs import corpus  # noqa: E402
from pcfbisim.reduction import Terminated as Done, evaluate  # noqa: E402
from pcfbisim.symbolic import InternalSolver, SmtLibSolver  # noqa: E402
from pcfbisim.syntax import BOOL, parse  # noqa: E402
from pcfbisim.typecheck import elaborate_pair  # noqa: E402
from pcfbisim.ulpatt import Fresh  # noqa: E402

CORPUS = corpus()
BY_NAME = {p.name: p for p in CORPUS}
Z3 = shutil.which("z3") or "/usr/local/bin/z3"
TIME_LIMIT = 60.0


def report(ok: bool, label: str, detail: str) -> bool:
    print(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}", flush=True)
    return ok


def _check(name, **kw):
    p = BY_NAME[name]
    return check(parse(p.left), parse(p.right), opts=Options(bound=p.bound, **kw))


# 1 -----------------------------------------------------------------

def test_c1_worked_examples():
    details, ok = [], True
    v = _check("ex1")
    ok &= isinstance(v, Equivalent)
    details.append(f"ex1 {v.name}")
    for name in ("ex2", "ex3", "ex4_k1", "ex4_k2"):
        start = time.monotonic()
        v = _check(name)
        secs = time.monotonic() - start
        good = isinstance(v, Inequivalent) and bool(v.witness) and secs < TIME_LIMIT
        ok &= good
        details.append(f"{name} {v.name} k={BY_NAME[name].bound} {secs:.1f}s")
    assert report(ok, "C1 worked examples", "; ".join(details))


# 2 -----------------------------------------------------------------

def test_c2_appendix_pair():
    a, b = "fun (f : Unit -> Unit) -> f ()", "fun (f : Unit -> Unit) -> f (f ())"
    v = check(parse(a), parse(b), k=BY_NAME["appendix_thunk"].bound)
    domain = {BOOL: SMALL_DOMAIN[BOOL]}
    equal = [semantics(prog(a), d, domain) == semantics(prog(b), d, domain) for d in range(1, 6)]
    ok = isinstance(v, Equivalent) and all(equal)
    assert report(ok, "C2 appendix pair", f"checker {v.name}; semantics equal at depths 1-5: {equal}")


# 3 -----------------------------------------------------------------

def test_c3_corpus_and_bench():
    import contextlib
    import io
    import json
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["bench", "--json"])
    data = json.loads(buf.getvalue())
    counts = data["counts"]
    n_eq = sum(1 for p in CORPUS if p.expect == "EQUIVALENT")
    ok = (len(CORPUS) >= 20 and n_eq >= 8 and code == 0
          and sum(counts.values()) == len(CORPUS) and counts["EQUIVALENT"] >= 8)
    assert report(ok, "C3 corpus", f"{len(CORPUS)} pairs, {n_eq} expected EQ; bench counts {counts}, "
                                   f"exit {code}, {data['seconds']:.1f}s")


# 4 -----------------------------------------------------------------

def test_c4_oracle_agreement():
    compared, skipped, disagree = [], [], []
    for p in CORPUS:
        a, b, tp = elaborate_pair(parse(p.left), parse(p.right))
        if not oc._finite(tp):
            continue
        v = check(parse(p.left), parse(p.right), k=p.bound)
        if isinstance(v, Inconclusive):
            skipped.append(p.name)
            continue
        o = oc.oracle_equiv(a, b, tp=tp)
        if isinstance(o, oc.Inconclusive) or o.name != v.name:
            disagree.append(f"{p.name} ({v.name} vs {o.name})")
        compared.append(p.name)
    ok = len(compared) > 0 and not disagree
    assert report(ok, "C4 oracle agreement",
                  f"{len(compared)} finite-type pairs compared, {len(disagree)} disagreements "
                  f"{disagree}; checker inconclusive, not compared: {skipped}")


# 5 -----------------------------------------------------------------

def test_c5_composition_matches_evaluation():
    cases = composition_cases()
    bad = []
    for text, e, ctx in cases:
        r = compose_program_context(e, ctx.eval_context(), ctx.hole_type, ctx.result_type,
                                    fuel=3000, check=True)
        direct = evaluate(ctx.plug(e), 3000)
        if isinstance(r, Terminated) != isinstance(direct, Done):
            bad.append((text, str(ctx)))
    ok = len(cases) >= 100 and not bad
    assert report(ok, "C5 composition", f"{len(cases)} cases, {len(bad)} disagreements")


# 6 -----------------------------------------------------------------

def test_c6_invariants_and_m_determinacy():
    configs = reachable_configs(1000, seed=2024)
    violating = [c for c in configs if invariant_violations(c)]
    rng = random.Random(7)
    runs = legal = differ = 0
    for c in final_configs(200, seed=8):
        challenges = op_transitions(c, Fresh(500, 500), Concrete(SMALL_DOMAIN))
        ch = rng.choice(challenges)
        first = Recorder(rng)
        c1 = run_round(c, ch, first, Fresh(1000, 1000))
        second = Recorder(rng, first.log if rng.random() < 0.5 else None)
        c2 = run_round(c, ch, second, Fresh(1000, 1000))
        runs += 1
        if c1 is None or c2 is None or not is_legal(c1.M.union(c2.M)):
            continue
        legal += 1
        differ += c1 != c2
    ok = len(configs) == 1000 and not violating and runs == 200 and differ == 0
    assert report(ok, "C6 invariants",
                  f"{len(configs)} configurations, {len(violating)} violations; {runs} double runs, "
                  f"{legal} with a legal joint memory, {differ} differing")


# 7 -----------------------------------------------------------------

def test_c7_random_plays():
    rng = random.Random(31)
    pool = [e for _, e in small_programs()] + [prog(p.left) for p in CORPUS]
    bad = 0
    for i in range(500):
        t = random_play(program_config(pool[i % len(pool)]), rng,
                        max_moves=rng.randint(2, 12), domain=SMALL_DOMAIN)
        bad += not is_play(t).ok
    assert report(bad == 0, "C7 game plays", f"500 random plays, {bad} rejected by is_play")


# 8 -----------------------------------------------------------------

def test_c8_reflexive_symmetric_and_toggles():
    problems = []
    base = {}
    for p in CORPUS:
        for src in (p.left, p.right):
            if isinstance(check(parse(src), parse(src), k=4), Inequivalent):
                problems.append(f"{p.name} not reflexive")
        v = check(parse(p.left), parse(p.right), k=p.bound)
        w = check(parse(p.right), parse(p.left), k=p.bound)
        base[p.name] = v
        if v.name != w.name:
            problems.append(f"{p.name} not symmetric")
    weakened = 0
    for enh in ENHANCEMENTS:
        for p in CORPUS:
            off = check(parse(p.left), parse(p.right),
                        opts=Options(bound=p.bound, timeout=5).without(enh))
            v = base[p.name]
            if isinstance(off, Inconclusive):
                weakened += not isinstance(v, Inconclusive)
            elif not isinstance(v, Inconclusive) and off.name != v.name:
                problems.append(f"{p.name} flips without {enh}")
    assert report(not problems, "C8 reflexivity, symmetry, toggles",
                  f"{len(CORPUS)} pairs x {len(ENHANCEMENTS)} toggles, {len(problems)} problems "
                  f"{problems}; {weakened} runs turned inconclusive")


# 9 -----------------------------------------------------------------

def test_c9_solver_parity():
    if not shutil.which(Z3):
        assert report(False, "C9 solver parity", f"no z3 binary at {Z3}")
    rng = random.Random(99)
    ours, theirs = InternalSolver(), SmtLibSolver(Z3)
    bad, sat = [], 0
    for i in range(500):
        terms, decls = random_constraint(rng)
        a, b = ours.check_terms(terms, decls), theirs.check_terms(terms, decls)
        sat += type(a).__name__ == "Sat"
        if type(a) is not type(b):
            bad.append(i)
    assert report(not bad, "C9 solver parity",
                  f"500 constraints ({sat} sat), {len(bad)} disagreements with z3")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
