"""Symbolic constants, path constraints and satisfiability.

Constraints are plain Bool-typed value terms built from ``SymConst``,
``SymOp`` and ``Const`` nodes, so the same objects flow from the reducer
into the solver.  Two deciders are provided:

* ``InternalSolver``: case splitting over the Boolean structure, then
  Fourier-Motzkin elimination with integer tightening for each branch and a
  bounded model search in a window of 129 values (box 64) around the
  feasible point nearest 0.
* ``SmtLibSolver``: writes an SMT-LIB 2 ``QF_LIA`` script to an external
  solver process and parses its answer.
"""
from __future__ import annotations

import math
import shlex
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .syntax import (
    BOOL, INT, BaseType, Const, FALSE, TRUE, SymConst, SymOp, bool_c, int_c, show,
)


class NonlinearError(Exception):
    """Raised for products of two symbolic terms or symbolic divisors."""


class UndeclaredConstant(Exception):
    pass


class SolverFailure(Exception):
    pass


# ------------------------------------------------------------ operations

ARITH = {"+", "-", "*", "/", "mod"}
COMPARE = {"<", "<=", ">", ">="}


def trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def trunc_mod(a: int, b: int) -> int:
    return a - b * trunc_div(a, b)


class DivisionByZero(Exception):
    pass


def fold(op: str, vals: list):
    """Apply an operator to Python constants (bool/int)."""
    if op == "+":
        return vals[0] + vals[1]
    if op == "-":
        return vals[0] - vals[1]
    if op == "*":
        return vals[0] * vals[1]
    if op in ("/", "mod"):
        if vals[1] == 0:
            raise DivisionByZero()
        return trunc_div(*vals) if op == "/" else trunc_mod(*vals)
    if op == "<":
        return vals[0] < vals[1]
    if op == "<=":
        return vals[0] <= vals[1]
    if op == ">":
        return vals[0] > vals[1]
    if op == ">=":
        return vals[0] >= vals[1]
    if op == "==":
        return vals[0] == vals[1]
    if op == "<>":
        return vals[0] != vals[1]
    if op == "&&":
        return vals[0] and vals[1]
    if op == "||":
        return vals[0] or vals[1]
    if op == "not":
        return not vals[0]
    raise ValueError(f"unknown operator {op}")


def _result_type(op: str, args) -> BaseType:
    if op in ARITH:
        return INT
    return BOOL


def _const(val, tp: BaseType) -> Const:
    return bool_c(val) if tp == BOOL else int_c(val)


def term_type(t) -> BaseType:
    return t.type


def eval_symbolic(op: str, args: list):
    """Fold when every operand is concrete, otherwise build a symbolic term.

    Raises DivisionByZero for a literal zero divisor and NonlinearError for
    products/divisions the linear fragment cannot express.
    """
    if all(isinstance(a, Const) for a in args):
        return _const(fold(op, [a.val for a in args]), _result_type(op, args))
    tp = _result_type(op, args)
    if op == "not":
        a = args[0]
        if isinstance(a, SymOp) and a.op == "not":
            return a.args[0]
        return SymOp("not", (a,), BOOL)
    x, y = args
    if op == "*":
        if not isinstance(x, Const) and not isinstance(y, Const):
            raise NonlinearError(f"nonlinear product {show(x)} * {show(y)}")
        c, other = (x, y) if isinstance(x, Const) else (y, x)
        if c.val == 0:
            return int_c(0)
        if c.val == 1:
            return other
    if op in ("/", "mod"):
        if not isinstance(y, Const):
            raise NonlinearError(f"symbolic divisor in {show(x)} {op} {show(y)}")
        if y.val == 0:
            raise DivisionByZero()
        if op == "/" and y.val == 1:
            return x
    if op == "+":
        if x == int_c(0):
            return y
        if y == int_c(0):
            return x
    if op == "-" and y == int_c(0):
        return x
    if op in ("==", "<=", ">=") and x == y:
        return TRUE
    if op in ("<>", "<", ">") and x == y:
        return FALSE
    if op == "&&":
        if x == FALSE or y == FALSE:
            return FALSE
        if x == TRUE:
            return y
        if y == TRUE:
            return x
    if op == "||":
        if x == TRUE or y == TRUE:
            return TRUE
        if x == FALSE:
            return y
        if y == FALSE:
            return x
    return SymOp(op, (x, y), tp)


def neg(t):
    return eval_symbolic("not", [t])


def conj(ts) -> object:
    out = TRUE
    for t in ts:
        out = eval_symbolic("&&", [out, t])
    return out


def disj(ts) -> object:
    out = FALSE
    for t in ts:
        out = eval_symbolic("||", [out, t])
    return out


def equal(a, b):
    return eval_symbolic("==", [a, b])


def constants_of(t) -> list:
    """Symbolic constants of a term in first-occurrence order."""
    out: dict = {}

    def go(t):
        if isinstance(t, SymConst):
            out.setdefault(t, None)
        elif isinstance(t, SymOp):
            for a in t.args:
                go(a)

    go(t)
    return list(out)


def evaluate_term(t, model: dict):
    """Evaluate a term under a model mapping constant ids to Python values."""
    if isinstance(t, Const):
        return t.val
    if isinstance(t, SymConst):
        if t.id in model:
            return model[t.id]
        return False if t.type == BOOL else 0
    if isinstance(t, SymOp):
        return fold(t.op, [evaluate_term(a, model) for a in t.args])
    raise TypeError(f"not a symbolic term: {t!r}")


def substitute(t, mapping: dict):
    """Replace symbolic constants (by object) and re-simplify."""
    if isinstance(t, SymConst):
        return mapping.get(t, t)
    if isinstance(t, SymOp):
        return eval_symbolic(t.op, [substitute(a, mapping) for a in t.args])
    return t


# -------------------------------------------------------------- SymEnv


@dataclass(frozen=True)
class SymEnv:
    """Declared constants (id -> base type) and the path condition."""

    decls: tuple = ()
    path: tuple = ()

    def declared(self) -> dict:
        return dict(self.decls)

    def declare(self, *consts: SymConst) -> "SymEnv":
        d = dict(self.decls)
        new = list(self.decls)
        for c in consts:
            if c.id not in d:
                d[c.id] = c.type
                new.append((c.id, c.type))
        return SymEnv(tuple(new), self.path)

    def formula(self):
        return conj(self.path)


def assert_constraint(env: SymEnv, phi) -> SymEnv:
    """Conjoin ``phi`` to the path.  Every constant must be declared."""
    d = env.declared()
    for c in constants_of(phi):
        if c.id not in d:
            raise UndeclaredConstant(f"κ{c.id} is not declared")
    if phi == TRUE:
        return env
    return SymEnv(env.decls, env.path + (phi,))


def normalize_env(env: SymEnv, order: list) -> tuple:
    """Rename constants to κ1, κ2, ... by first occurrence.

    ``order`` lists the live constants (SymConst objects) in the order they
    occur in the surrounding configuration.  Path conjuncts whose constants
    are all dead and unconnected to any live constant are dropped (the path
    is assumed satisfiable).  Returns (new env, renaming dict old->new).
    """
    live = set(order)
    conjuncts = list(env.path)
    consts = [set(constants_of(c)) for c in conjuncts]
    # connected components over conjuncts sharing constants
    reach = set(live)
    changed = True
    keep = [False] * len(conjuncts)
    while changed:
        changed = False
        for i, cs in enumerate(consts):
            if not keep[i] and (cs & reach or not cs):
                keep[i] = True
                if not cs <= reach:
                    reach |= cs
                    changed = True
    kept = [c for c, k in zip(conjuncts, keep) if k and c != TRUE]
    seq = list(order)
    for c in kept:
        for k in constants_of(c):
            if k not in live and k not in seq:
                seq.append(k)
    ren = {}
    for i, k in enumerate(seq, start=1):
        ren[k] = SymConst(i, k.type)
    new_path = tuple(substitute(c, ren) for c in kept)
    new_decls = tuple((ren[k].id, k.type) for k in seq)
    return SymEnv(new_decls, new_path), ren


# -------------------------------------------------------------- results


@dataclass(frozen=True)
class Sat:
    model: dict = field(default_factory=dict, hash=False, compare=False)


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Unknown:
    reason: str = ""


SolverResult = Union[Sat, Unsat, Unknown]


def format_model(model: dict) -> list:
    out = []
    for k in sorted(model):
        v = model[k]
        s = ("true" if v else "false") if isinstance(v, bool) else str(v)
        out.append(f"κ{k} = {s}")
    return out


# ------------------------------------------------------ internal solver
#
# Linear expressions are dicts var -> int coefficient with the constant
# under key None.  Atoms are ('le', lin) meaning lin <= 0, ('eq', lin)
# meaning lin = 0 and ('b', id, polarity) for Boolean constants.


def _lin_add(a: dict, b: dict, k: int = 1) -> dict:
    out = dict(a)
    for v, c in b.items():
        out[v] = out.get(v, 0) + k * c
        if out[v] == 0 and v is not None:
            del out[v]
    return out


def _lin_scale(a: dict, k: int) -> dict:
    return {v: c * k for v, c in a.items() if c * k != 0 or v is None}


def _lin_const(n: int) -> dict:
    return {None: n}


class _Translator:
    def __init__(self):
        self.aux = 0
        self.side: list = []   # extra formulas for div/mod definitions

    def fresh(self) -> int:
        self.aux -= 1
        return self.aux

    def lin(self, t) -> dict:
        if isinstance(t, Const):
            return _lin_const(int(t.val))
        if isinstance(t, SymConst):
            return {t.id: 1, None: 0}
        op = t.op
        if op == "+":
            return _lin_add(self.lin(t.args[0]), self.lin(t.args[1]))
        if op == "-":
            return _lin_add(self.lin(t.args[0]), self.lin(t.args[1]), -1)
        if op == "*":
            a, b = t.args
            if isinstance(a, Const):
                return _lin_scale(self.lin(b), a.val)
            if isinstance(b, Const):
                return _lin_scale(self.lin(a), b.val)
            raise NonlinearError(f"nonlinear product in {show(t)}")
        if op in ("/", "mod"):
            a, b = t.args
            if not isinstance(b, Const) or b.val == 0:
                raise NonlinearError(f"unsupported divisor in {show(t)}")
            c = int(b.val)
            m = abs(c)
            la = self.lin(a)
            qq = self.fresh()
            q = {qq: 1, None: 0}
            mq = _lin_scale(q, m)
            # a >= 0:  m*qq <= a <= m*qq + m - 1
            pos = ("and", [("lit", ("le", _lin_add(_lin_scale(la, -1), _lin_const(0)))),
                           ("lit", ("le", _lin_add(mq, la, -1))),
                           ("lit", ("le", _lin_add(_lin_add(la, mq, -1), _lin_const(-(m - 1)))))])
            # a < 0:  m*qq - (m-1) <= a <= m*qq
            negb = ("and", [("lit", ("le", _lin_add(la, _lin_const(1)))),
                            ("lit", ("le", _lin_add(_lin_add(mq, la, -1), _lin_const(-(m - 1))))),
                            ("lit", ("le", _lin_add(la, mq, -1)))])
            self.side.append(("or", [pos, negb]))
            quotient = q if c > 0 else _lin_scale(q, -1)
            if op == "/":
                return quotient
            return _lin_add(la, _lin_scale(quotient, c), -1)
        raise NonlinearError(f"not an integer term: {show(t)}")

    def formula(self, t, pol: bool = True):
        if isinstance(t, Const):
            return ("true",) if bool(t.val) == pol else ("false",)
        if isinstance(t, SymConst):
            return ("lit", ("b", t.id, pol))
        op = t.op
        if op == "not":
            return self.formula(t.args[0], not pol)
        if op in ("&&", "||"):
            kind = "and" if (op == "&&") == pol else "or"
            return (kind, [self.formula(a, pol) for a in t.args])
        a, b = t.args
        if op in ("==", "<>") and a.type == BOOL:
            same = (op == "==") == pol
            fa, fb = self.formula(a), self.formula(b)
            na, nb = self.formula(a, False), self.formula(b, False)
            if same:
                return ("or", [("and", [fa, fb]), ("and", [na, nb])])
            return ("or", [("and", [fa, nb]), ("and", [na, fb])])
        diff = _lin_add(self.lin(a), self.lin(b), -1)   # a - b
        if op in ("==", "<>"):
            if (op == "==") == pol:
                return ("lit", ("eq", diff))
            return ("or", [("lit", ("le", _lin_add(diff, _lin_const(1)))),
                           ("lit", ("le", _lin_add(_lin_scale(diff, -1), _lin_const(1))))])
        # normalise to a - b R 0
        if op == "<":
            le = _lin_add(diff, _lin_const(1))          # a - b + 1 <= 0
        elif op == "<=":
            le = diff
        elif op == ">":
            le = _lin_add(_lin_scale(diff, -1), _lin_const(1))
        elif op == ">=":
            le = _lin_scale(diff, -1)
        else:
            raise NonlinearError(f"unknown comparison {op}")
        if pol:
            return ("lit", ("le", le))
        return ("lit", ("le", _lin_add(_lin_scale(le, -1), _lin_const(1))))


def _norm_le(lin: dict):
    """Tighten ``lin <= 0`` over the integers.  Returns None if trivially true,
    False if trivially false."""
    coefs = [c for v, c in lin.items() if v is not None and c != 0]
    const = lin.get(None, 0)
    if not coefs:
        return None if const <= 0 else False
    g = 0
    for c in coefs:
        g = math.gcd(g, abs(c))
    out = {v: c // g for v, c in lin.items() if v is not None and c != 0}
    out[None] = -((-const) // g)   # ceil(const / g)
    return out


class _Budget(Exception):
    pass


class InternalSolver:
    """Self-contained decision procedure for the linear fragment."""

    name = "internal"

    def __init__(self, box: int = 64, fm_limit: int = 400, search_limit: int = 20000):
        self.box = box
        self.fm_limit = fm_limit
        self.search_limit = search_limit

    def check(self, env: SymEnv) -> SolverResult:
        return self.check_terms(list(env.path), env.declared())

    def check_terms(self, terms: list, decls: Optional[dict] = None) -> SolverResult:
        tr = _Translator()
        try:
            parts = [tr.formula(t) for t in terms]
        except NonlinearError as ex:
            return Unknown(str(ex))
        parts.extend(tr.side)
        res = self._search(parts, [], {})
        if isinstance(res, Sat):
            model = {k: v for k, v in res.model.items() if k >= 0}
            decls = decls or {}
            for k, tp in decls.items():
                model.setdefault(k, False if tp == BOOL else 0)
            for t in terms:
                for c in constants_of(t):
                    model.setdefault(c.id, False if c.type == BOOL else 0)
            if not all(evaluate_term(t, model) for t in terms):
                return Unknown("model validation failed")
            return Sat(model)
        return res

    # Boolean layer: split disjunctions depth-first
    def _search(self, todo: list, lits: list, bools: dict) -> SolverResult:
        todo = list(todo)
        lits = list(lits)
        bools = dict(bools)
        ors = []
        while todo:
            f = todo.pop()
            kind = f[0]
            if kind == "true":
                continue
            if kind == "false":
                return Unsat()
            if kind == "and":
                todo.extend(f[1])
            elif kind == "or":
                ors.append(f)
            else:
                atom = f[1]
                if atom[0] == "b":
                    if bools.get(atom[1], atom[2]) != atom[2]:
                        return Unsat()
                    bools[atom[1]] = atom[2]
                else:
                    lits.append(atom)
        theory = self._theory(lits, want_model=not ors)
        if isinstance(theory, Unsat) or not ors:
            if isinstance(theory, Sat):
                model = dict(theory.model)
                model.update(bools)
                return Sat(model)
            return theory
        first, rest = ors[0], ors[1:]
        unknown = None
        for alt in first[1]:
            r = self._search(rest + [alt], lits, bools)
            if isinstance(r, Sat):
                return r
            if isinstance(r, Unknown):
                unknown = r
        return unknown if unknown is not None else Unsat()

    # Theory layer: conjunction of linear (in)equalities over integers
    def _theory(self, lits: list, want_model: bool) -> SolverResult:
        eqs = [dict(a[1]) for a in lits if a[0] == "eq"]
        les = [dict(a[1]) for a in lits if a[0] == "le"]
        defs = []   # (var, lin) solved equalities, applied in reverse
        while eqs:
            e = eqs.pop()
            e = {v: c for v, c in e.items() if c != 0 or v is None}
            vars_ = [v for v in e if v is not None]
            if not vars_:
                if e.get(None, 0) != 0:
                    return Unsat()
                continue
            g = 0
            for v in vars_:
                g = math.gcd(g, abs(e[v]))
            if e.get(None, 0) % g:
                return Unsat()
            unit = next((v for v in vars_ if abs(e[v]) == 1), None)
            if unit is None:
                les.append(e)
                les.append(_lin_scale(e, -1))
                continue
            # unit*x + rest = 0  ->  x = -unit * rest
            rest = {v: c for v, c in e.items() if v != unit}
            sol = _lin_scale(rest, -e[unit])
            defs.append((unit, sol))
            eqs = [_subst_lin(x, unit, sol) for x in eqs]
            les = [_subst_lin(x, unit, sol) for x in les]
        rows = []
        for le in les:
            n = _norm_le(le)
            if n is False:
                return Unsat()
            if n is not None:
                rows.append(n)
        variables = sorted({v for r in rows for v in r if v is not None},
                           key=lambda v: (abs(v), v))
        stages = [rows]
        cur = rows
        for x in variables:
            lower = [r for r in cur if r.get(x, 0) < 0]
            upper = [r for r in cur if r.get(x, 0) > 0]
            others = [r for r in cur if r.get(x, 0) == 0]
            nxt = list(others)
            for lo in lower:
                for up in upper:
                    a, b = -lo[x], up[x]
                    combo = _lin_add(_lin_scale(lo, b), _lin_scale(up, a))
                    combo.pop(x, None)
                    n = _norm_le(combo)
                    if n is False:
                        return Unsat()
                    if n is not None:
                        nxt.append(n)
            nxt = _dedupe(nxt)
            if len(nxt) > self.fm_limit:
                return Unknown("elimination blow-up")
            cur = nxt
            stages.append(cur)
        # the last stage has no variables and passed the constant checks
        if not want_model:
            return Sat({})
        try:
            model, complete = self._model(variables, stages)
        except _Budget:
            return Unknown("search budget exhausted")
        if model is None:
            return Unsat() if complete else Unknown("box exhausted")
        for var, sol in reversed(defs):
            model[var] = _eval_lin(sol, model)
        return Sat(model)

    def _model(self, variables: list, stages: list):
        """Back-substitute from the last eliminated variable to the first."""
        order = list(reversed(range(len(variables))))
        steps = [0]
        complete = [True]

        def bounds(i: int, model: dict):
            x = variables[i]
            lo, hi = None, None
            for r in stages[i]:
                c = r.get(x, 0)
                if c == 0:
                    continue
                rest = -sum(k * model[v] for v, k in r.items()
                            if v is not None and v != x) - r.get(None, 0)
                if c > 0:
                    b = math.floor(Fraction(rest, c))
                    hi = b if hi is None else min(hi, b)
                else:
                    b = math.ceil(Fraction(rest, c))
                    lo = b if lo is None else max(lo, b)
            return lo, hi

        def candidates(lo, hi):
            # values are tried outwards from the point of the feasible range
            # nearest 0, inside a window of 2*box+1 values; clipping makes a
            # failed search inconclusive rather than a proof
            if lo is not None and hi is not None and lo > hi:
                return []
            centre = 0
            if lo is not None and lo > 0:
                centre = lo
            elif hi is not None and hi < 0:
                centre = hi
            if lo is None or lo < centre - self.box:
                complete[0] = False
                lo = centre - self.box
            if hi is None or hi > centre + self.box:
                complete[0] = False
                hi = centre + self.box
            start = min(max(0, lo), hi)
            out = [start]
            d = 1
            while start - d >= lo or start + d <= hi:
                if start + d <= hi:
                    out.append(start + d)
                if start - d >= lo:
                    out.append(start - d)
                d += 1
            return out

        def go(k: int, model: dict):
            if k == len(order):
                return model
            i = order[k]
            lo, hi = bounds(i, model)
            for val in candidates(lo, hi):
                steps[0] += 1
                if steps[0] > self.search_limit:
                    raise _Budget()
                model[variables[i]] = val
                res = go(k + 1, model)
                if res is not None:
                    return res
                del model[variables[i]]
            return None

        res = go(0, {})
        return res, complete[0]


def _subst_lin(e: dict, var, sol: dict) -> dict:
    c = e.get(var, 0)
    if c == 0:
        return e
    out = {v: k for v, k in e.items() if v != var}
    return _lin_add(out, sol, c)


def _eval_lin(e: dict, model: dict) -> int:
    return sum(c * model.get(v, 0) for v, c in e.items() if v is not None) + e.get(None, 0)


def _dedupe(rows: list) -> list:
    seen = set()
    out = []
    for r in rows:
        key = tuple(sorted(((v if v is not None else 10 ** 9), c) for v, c in r.items()))
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


# ------------------------------------------------------- SMT-LIB backend


def _smt_name(k: int) -> str:
    return f"k{k}"


def to_smtlib(t) -> str:
    if isinstance(t, Const):
        if t.type == BOOL:
            return "true" if t.val else "false"
        return str(t.val) if t.val >= 0 else f"(- {-t.val})"
    if isinstance(t, SymConst):
        return _smt_name(t.id)
    op = t.op
    args = [to_smtlib(a) for a in t.args]
    if op == "not":
        return f"(not {args[0]})"
    if op == "&&":
        return f"(and {args[0]} {args[1]})"
    if op == "||":
        return f"(or {args[0]} {args[1]})"
    if op == "==":
        return f"(= {args[0]} {args[1]})"
    if op == "<>":
        return f"(not (= {args[0]} {args[1]}))"
    if op in ("+", "-", "*", "<", "<=", ">", ">="):
        return f"({op} {args[0]} {args[1]})"
    if op in ("/", "mod"):
        c = t.args[1].val
        a = args[0]
        m = abs(c)
        q = f"(ite (>= {a} 0) (div {a} {m}) (- (div (- {a}) {m})))"
        if c < 0:
            q = f"(- {q})"
        if op == "/":
            return q
        return f"(- {a} (* {to_smtlib(t.args[1])} {q}))"
    raise ValueError(f"cannot encode {op}")


def smtlib_script(env_or_terms, decls: Optional[dict] = None) -> str:
    if isinstance(env_or_terms, SymEnv):
        terms = list(env_or_terms.path)
        decls = env_or_terms.declared()
    else:
        terms = list(env_or_terms)
        decls = dict(decls or {})
    for t in terms:
        for c in constants_of(t):
            decls.setdefault(c.id, c.type)
    for t in terms:
        if isinstance(t, SymOp):
            _check_linear(t)
    lines = ["(set-logic QF_LIA)"]
    for k in sorted(decls):
        sort = "Bool" if decls[k] == BOOL else "Int"
        lines.append(f"(declare-const {_smt_name(k)} {sort})")
    for t in terms:
        lines.append(f"(assert {to_smtlib(t)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    lines.append("(exit)")
    return "\n".join(lines) + "\n"


def _check_linear(t):
    if isinstance(t, SymOp):
        if t.op == "*" and not any(isinstance(a, Const) for a in t.args):
            raise NonlinearError(f"nonlinear product in {show(t)}")
        if t.op in ("/", "mod") and not isinstance(t.args[1], Const):
            raise NonlinearError(f"symbolic divisor in {show(t)}")
        for a in t.args:
            _check_linear(a)


def _sexprs(text: str):
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            out = []
            while tokens[pos] != ")":
                out.append(read())
            pos += 1
            return out
        return tok

    items = []
    while pos < len(tokens):
        items.append(read())
    return items


def _smt_value(x):
    if isinstance(x, list):
        if len(x) == 2 and x[0] == "-":
            return -_smt_value(x[1])
        raise SolverFailure(f"unexpected model value {x}")
    if x == "true":
        return True
    if x == "false":
        return False
    return int(x)


class SmtLibSolver:
    """External solver speaking SMT-LIB 2 over a child process pipe."""

    def __init__(self, command: str = "z3", timeout: float = 10.0):
        argv = shlex.split(command)
        if len(argv) == 1 and argv[0].rsplit("/", 1)[-1].startswith("z3"):
            argv += ["-in", "-smt2"]
        self.argv = argv
        self.timeout = timeout
        self.name = f"smtlib:{command}"

    def check(self, env: SymEnv) -> SolverResult:
        return self.check_terms(list(env.path), env.declared())

    def check_terms(self, terms: list, decls: Optional[dict] = None) -> SolverResult:
        try:
            script = smtlib_script(terms, decls)
        except NonlinearError as ex:
            return Unknown(str(ex))
        try:
            proc = subprocess.run(self.argv, input=script, capture_output=True,
                                  text=True, timeout=self.timeout)
        except subprocess.TimeoutExpired:
            return Unknown("solver timeout")
        except OSError as ex:
            raise SolverFailure(f"cannot run {self.argv[0]}: {ex}") from ex
        out = proc.stdout.strip()
        if not out:
            raise SolverFailure(f"no answer from solver: {proc.stderr.strip()}")
        first, _, rest = out.partition("\n")
        first = first.strip()
        if first == "unsat":
            return Unsat()
        if first == "unknown":
            return Unknown("external solver answered unknown")
        if first != "sat":
            raise SolverFailure(f"unexpected solver answer {first!r}")
        model = {}
        for item in _sexprs(rest):
            defs = item if isinstance(item, list) else []
            if defs and defs[0] == "model":
                defs = defs[1:]
            elif defs and isinstance(defs[0], str):
                defs = [defs]
            for d in defs:
                if isinstance(d, list) and d and d[0] == "define-fun":
                    name = d[1]
                    if name.startswith("k") and name[1:].isdigit():
                        model[int(name[1:])] = _smt_value(d[-1])
        return Sat(model)


def satisfiable(env: SymEnv, solver=None) -> SolverResult:
    return (solver or InternalSolver()).check(env)


def make_solver(spec: str = "internal", timeout: float = 10.0):
    if spec == "internal":
        return InternalSolver()
    if spec.startswith("smtlib:"):
        return SmtLibSolver(spec[len("smtlib:"):], timeout=timeout)
    raise ValueError(f"unknown solver {spec!r}; use 'internal' or 'smtlib:<path>'")
