"""Abstract syntax, concrete grammar, parser and printer.

The concrete syntax is a small ML dialect::

    fun x -> e            fun (x : T) -> e         fun (a, b) -> e
    fix f (x : T) : R -> e
    let rec f x = e in e'    let f x = e in e'     let (x, y) = e in e'
    if e then e1 else e2
    e1 e2    (e1, e2)    () true false 42 _bot_
    + - * / mod == <> < <= > >= && || not
    (* comments *)

Types are written ``Int``, ``Bool``, ``Unit``, ``T * T`` and ``T -> T``
(``*`` binds tighter than ``->``, which associates to the right).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class BaseType:
    name: str

    def __str__(self) -> str:
        return self.name


BOOL = BaseType("Bool")
INT = BaseType("Int")
UNIT = BaseType("Unit")


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class Product:
    items: tuple

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("product types need at least two components")

    def __str__(self) -> str:
        return show_type(self)


Type = Union[BaseType, Arrow, Product]


def show_type(t: Type, ctx: int = 0) -> str:
    # ctx: 0 top, 1 left of arrow, 2 inside product
    if isinstance(t, BaseType):
        return t.name
    if isinstance(t, Arrow):
        s = f"{show_type(t.dom, 1)} -> {show_type(t.cod, 0)}"
        return f"({s})" if ctx >= 1 else s
    s = " * ".join(show_type(x, 2) for x in t.items)
    return f"({s})" if ctx >= 2 else s


def arrow(*ts: Type) -> Type:
    """Right-nested arrow ``t1 -> t2 -> ... -> tn``."""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


# ---------------------------------------------------------- expressions


@dataclass(frozen=True)
class Const:
    val: Union[bool, int, None]
    type: BaseType

    def __repr__(self) -> str:
        return show(self)


UNIT_V = Const(None, UNIT)
TRUE = Const(True, BOOL)
FALSE = Const(False, BOOL)


def int_c(n: int) -> Const:
    return Const(int(n), INT)


def bool_c(b: bool) -> Const:
    return TRUE if b else FALSE


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Tuple:
    items: tuple

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class PrimOp:
    op: str
    args: tuple

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Cond:
    guard: "Expr"
    then: "Expr"
    else_: "Expr"

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Fix:
    """Recursive function ``fix fname (param : ptype) : rtype -> body``.

    ``ptype``/``rtype`` are ``None`` until the type checker fills them in.
    """

    fname: str
    param: str
    body: "Expr"
    ptype: Optional[Type] = None
    rtype: Optional[Type] = None

    @property
    def ftype(self) -> Optional[Arrow]:
        if self.ptype is None or self.rtype is None:
            return None
        return Arrow(self.ptype, self.rtype)

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class LetTuple:
    """``let (x1, ..., xn) = bound in body``; arity one is a plain let."""

    binders: tuple
    bound: "Expr"
    body: "Expr"

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class AbstractName:
    """Opponent function name.  ``index`` is ``None`` inside moves."""

    id: int
    type: Arrow
    index: Optional[int] = None

    def bare(self) -> "AbstractName":
        return AbstractName(self.id, self.type) if self.index is not None else self

    def __repr__(self) -> str:
        s = f"α{self.id}"
        return s if self.index is None else f"{s}^{self.index}"


@dataclass(frozen=True)
class SymConst:
    id: int
    type: BaseType

    def __repr__(self) -> str:
        return f"κ{self.id}"


@dataclass(frozen=True)
class SymOp:
    """A primitive operation stuck on symbolic operands; a base-type value."""

    op: str
    args: tuple
    type: BaseType

    def __repr__(self) -> str:
        return show(self)


Expr = Union[Const, Var, Tuple, PrimOp, App, Cond, Fix, LetTuple,
             AbstractName, SymConst, SymOp]


def is_value(e: Expr) -> bool:
    if isinstance(e, (Const, Fix, AbstractName, SymConst, SymOp)):
        return True
    if isinstance(e, Tuple):
        return all(is_value(x) for x in e.items)
    return False


def is_symbolic(e: Expr) -> bool:
    return isinstance(e, (SymConst, SymOp))


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, (Const, AbstractName, SymConst)):
        return frozenset()
    if isinstance(e, (Tuple,)):
        return frozenset().union(*map(free_vars, e.items))
    if isinstance(e, (PrimOp, SymOp)):
        return frozenset().union(*map(free_vars, e.args))
    if isinstance(e, App):
        return free_vars(e.fn) | free_vars(e.arg)
    if isinstance(e, Cond):
        return free_vars(e.guard) | free_vars(e.then) | free_vars(e.else_)
    if isinstance(e, Fix):
        return free_vars(e.body) - {e.fname, e.param}
    if isinstance(e, LetTuple):
        return free_vars(e.bound) | (free_vars(e.body) - set(e.binders))
    raise TypeError(f"not an expression: {e!r}")


def subterms(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, Tuple):
        kids = e.items
    elif isinstance(e, (PrimOp, SymOp)):
        kids = e.args
    elif isinstance(e, App):
        kids = (e.fn, e.arg)
    elif isinstance(e, Cond):
        kids = (e.guard, e.then, e.else_)
    elif isinstance(e, Fix):
        kids = (e.body,)
    elif isinstance(e, LetTuple):
        kids = (e.bound, e.body)
    else:
        kids = ()
    for k in kids:
        yield from subterms(k)


def size(e: Expr) -> int:
    return sum(1 for _ in subterms(e))


def lam(param: str, body: Expr, ptype: Optional[Type] = None,
        rtype: Optional[Type] = None) -> Fix:
    """Non-recursive lambda: a Fix whose self name does not occur in the body."""
    used = free_vars(body) | {param}
    n = 0
    while f"_f{n}" in used:
        n += 1
    return Fix(f"_f{n}", param, body, ptype, rtype)


def bottom(tp: Optional[Type] = None) -> Expr:
    """The diverging term ``(fix f (x : Unit) -> f x) ()``."""
    return App(Fix("_bot", "_u", App(Var("_bot"), Var("_u")), UNIT, tp), UNIT_V)


# --------------------------------------------------------------- lexer


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


KEYWORDS = {"fun", "fix", "let", "rec", "in", "if", "then", "else", "true",
            "false", "not", "mod", "_bot_", "Int", "Bool", "Unit", "int",
            "bool", "unit"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>->|==|<>|<=|>=|&&|\|\||[-+*/<>=(),:])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str   # 'int' 'ident' 'kw' 'sym' 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    toks = []
    i, line, col = 0, 1, 1

    def advance(s: str):
        nonlocal line, col
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1

    while i < len(text):
        if text.startswith("(*", i):
            depth, j = 1, i + 2
            while j < len(text) and depth:
                if text.startswith("(*", j):
                    depth, j = depth + 1, j + 2
                elif text.startswith("*)", j):
                    depth, j = depth - 1, j + 2
                else:
                    j += 1
            if depth:
                raise ParseError("unterminated comment", line, col)
            advance(text[i:j])
            i = j
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            toks.append(Tok(kind, s, line, col))
        advance(s)
        i = m.end()
    toks.append(Tok("eof", "", line, col))
    return toks


# -------------------------------------------------------------- parser

_CMP = {"==", "<>", "<", "<=", ">", ">="}
_BASE_NAMES = {"Int": INT, "int": INT, "Bool": BOOL, "bool": BOOL,
               "Unit": UNIT, "unit": UNIT}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.used = {t.text for t in self.toks if t.kind == "ident"}
        self.counter = 0

    # helpers
    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("kw", "sym") and t.text == text

    def next(self) -> Tok:
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            t = self.peek()
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def fresh(self, base: str) -> str:
        while True:
            self.counter += 1
            name = f"_{base}{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return name

    def lam(self, param: str, body: Expr, ptype=None, rtype=None) -> Fix:
        return Fix(self.fresh("f"), param, body, ptype, rtype)

    # types
    def type_(self) -> Type:
        left = self.type_prod()
        if self.at("->"):
            self.next()
            return Arrow(left, self.type_())
        return left

    def type_prod(self) -> Type:
        items = [self.type_atom()]
        while self.at("*"):
            self.next()
            items.append(self.type_atom())
        return items[0] if len(items) == 1 else Product(tuple(items))

    def type_atom(self) -> Type:
        t = self.peek()
        if t.kind == "kw" and t.text in _BASE_NAMES:
            self.next()
            return _BASE_NAMES[t.text]
        if self.at("("):
            self.next()
            tp = self.type_()
            self.expect(")")
            return tp
        self.error(f"expected a type, found {t.text or 'end of input'!r}")

    # binders
    def ident(self) -> str:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            return self.fresh("w") if t.text == "_" else t.text
        self.error(f"expected an identifier, found {t.text or 'end of input'!r}")

    def param(self):
        """A function parameter: name, ``(name : T)``, ``()`` or ``(p1, p2, ...)``.

        Returns (name, annotation, tuple binders or None).
        """
        if self.at("("):
            if self.peek(1).kind == "sym" and self.peek(1).text == ")":
                self.next(), self.next()
                return self.fresh("w"), UNIT, None
            self.next()
            names = [self.ident()]
            ann = None
            if self.at(":"):
                self.next()
                ann = self.type_()
                self.expect(")")
                return names[0], ann, None
            while self.at(","):
                self.next()
                names.append(self.ident())
            self.expect(")")
            if len(names) == 1:
                return names[0], None, None
            return self.fresh("p"), None, tuple(names)
        return self.ident(), None, None

    def is_param_start(self) -> bool:
        t = self.peek()
        return t.kind == "ident" or self.at("(")

    def wrap_params(self, params, body: Expr, rtype=None, self_name=None) -> Expr:
        for k, (name, ann, tup) in enumerate(reversed(params)):
            if tup is not None:
                body = LetTuple(tup, Var(name), body)
            last = k == len(params) - 1
            if last and self_name is not None:
                body = Fix(self_name, name, body, ann, rtype if len(params) == 1 else None)
            else:
                body = self.lam(name, body, ann, rtype if k == 0 else None)
        return body

    # expressions
    def expr(self) -> Expr:
        if self.at("fun"):
            self.next()
            params = [self.param()]
            while not self.at("->") and not self.at(":"):
                params.append(self.param())
            rtype = None
            if self.at(":"):
                self.next()
                rtype = self.type_prod_arrowless()
            self.expect("->")
            return self.wrap_params(params, self.expr(), rtype)
        if self.at("fix"):
            self.next()
            fname = self.ident()
            name, ann, tup = self.param()
            rtype = None
            if self.at(":"):
                self.next()
                rtype = self.type_prod_arrowless()
            self.expect("->")
            body = self.expr()
            if tup is not None:
                body = LetTuple(tup, Var(name), body)
            return Fix(fname, name, body, ann, rtype)
        if self.at("let"):
            return self.let()
        if self.at("if"):
            self.next()
            g = self.expr()
            self.expect("then")
            a = self.expr()
            self.expect("else")
            b = self.expr()
            return Cond(g, a, b)
        return self.disj()

    def type_prod_arrowless(self) -> Type:
        # a return annotation is followed by '->', so parenthesise arrows there
        return self.type_prod()

    def let(self) -> Expr:
        self.expect("let")
        if self.at("rec"):
            self.next()
            fname = self.ident()
            params = [self.param()]
            while self.is_param_start():
                params.append(self.param())
            rtype = None
            if self.at(":"):
                self.next()
                rtype = self.type_()
            self.expect("=")
            body = self.expr()
            self.expect("in")
            rest = self.expr()
            fn = self.wrap_params(params, body, rtype, self_name=fname)
            return LetTuple((fname,), fn, rest)
        if self.at("("):
            save = self.pos
            self.next()
            if self.at(")"):
                self.next()
                self.expect("=")
                bound = self.expr()
                self.expect("in")
                return LetTuple((self.fresh("w"),), bound, self.expr())
            names = [self.ident()]
            if self.at(","):
                while self.at(","):
                    self.next()
                    names.append(self.ident())
                self.expect(")")
                self.expect("=")
                bound = self.expr()
                self.expect("in")
                return LetTuple(tuple(names), bound, self.expr())
            self.pos = save
        name = self.ident()
        params = []
        while self.is_param_start():
            params.append(self.param())
        self.expect("=")
        bound = self.expr()
        self.expect("in")
        rest = self.expr()
        if params:
            bound = self.wrap_params(params, bound)
        return LetTuple((name,), bound, rest)

    def disj(self) -> Expr:
        left = self.conj()
        while self.at("||"):
            self.next()
            left = Cond(left, TRUE, self.conj())
        return left

    def conj(self) -> Expr:
        left = self.cmp()
        while self.at("&&"):
            self.next()
            left = Cond(left, self.cmp(), FALSE)
        return left

    def cmp(self) -> Expr:
        left = self.add()
        t = self.peek()
        if t.kind == "sym" and t.text in _CMP:
            self.next()
            left = PrimOp(t.text, (left, self.add()))
            t = self.peek()
            if t.kind == "sym" and t.text in _CMP:
                self.error("comparison operators do not associate")
        return left

    def add(self) -> Expr:
        left = self.mul()
        while self.at("+") or self.at("-"):
            op = self.next().text
            left = PrimOp(op, (left, self.mul()))
        return left

    def mul(self) -> Expr:
        left = self.unary()
        while self.at("*") or self.at("/") or self.at("mod"):
            op = self.next().text
            left = PrimOp(op, (left, self.unary()))
        return left

    def unary(self) -> Expr:
        if self.at("not"):
            self.next()
            return PrimOp("not", (self.unary(),))
        if self.at("-"):
            self.next()
            e = self.unary()
            if isinstance(e, Const) and e.type == INT:
                return int_c(-e.val)
            return PrimOp("-", (int_c(0), e))
        return self.app()

    def starts_atom(self) -> bool:
        t = self.peek()
        if t.kind in ("int", "ident"):
            return True
        if t.kind == "kw" and t.text in ("true", "false", "_bot_"):
            return True
        return self.at("(")

    def app(self) -> Expr:
        e = self.atom()
        while self.starts_atom():
            e = App(e, self.atom())
        return e

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return int_c(int(t.text))
        if t.kind == "ident":
            self.next()
            if t.text == "_":
                raise ParseError("'_' is only allowed as a binder", t.line, t.col)
            return Var(t.text)
        if t.kind == "kw":
            if t.text == "true":
                self.next()
                return TRUE
            if t.text == "false":
                self.next()
                return FALSE
            if t.text == "_bot_":
                self.next()
                return bottom()
        if self.at("("):
            self.next()
            if self.at(")"):
                self.next()
                return UNIT_V
            items = [self.expr()]
            while self.at(","):
                self.next()
                items.append(self.expr())
            self.expect(")")
            return items[0] if len(items) == 1 else Tuple(tuple(items))
        self.error(f"unexpected {t.text or 'end of input'!r}")


def parse(text: str) -> Expr:
    """Parse a program.  Raises ParseError carrying line and column."""
    p = _Parser(text)
    e = p.expr()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"unexpected {t.text!r} after expression", t.line, t.col)
    return e


def parse_type(text: str) -> Type:
    p = _Parser(text)
    tp = p.type_()
    if p.peek().kind != "eof":
        p.error("trailing input after type")
    return tp


# ------------------------------------------------------------- printer

# precedence levels, loosest first
_P_EXPR, _P_CMP, _P_ADD, _P_MUL, _P_UNARY, _P_APP, _P_ATOM = range(7)
_OP_LEVEL = {"+": _P_ADD, "-": _P_ADD, "*": _P_MUL, "/": _P_MUL, "mod": _P_MUL}
for _op in _CMP:
    _OP_LEVEL[_op] = _P_CMP


def _paren(s: str, inner: int, outer: int) -> str:
    return f"({s})" if inner < outer else s


def _binder(name: str, tp: Optional[Type], body: Expr) -> str:
    shown = name if name in free_vars(body) else "_"
    if tp is None:
        return shown
    if tp == UNIT and shown == "_":
        return "()"
    return f"({shown} : {show_type(tp)})"


def _is_bottom(e: App) -> bool:
    f = e.fn
    return (e.arg == UNIT_V and isinstance(f, Fix) and f.rtype is None
            and f.body == App(Var(f.fname), Var(f.param)) and f.fname != f.param)


def show(e: Expr, prec: int = _P_EXPR) -> str:
    if isinstance(e, Const):
        if e.type == UNIT:
            return "()"
        if e.type == BOOL:
            return "true" if e.val else "false"
        return str(e.val) if e.val >= 0 else f"({e.val})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, (AbstractName, SymConst)):
        return repr(e)
    if isinstance(e, Tuple):
        return "(" + ", ".join(show(x) for x in e.items) + ")"
    if isinstance(e, (PrimOp, SymOp)):
        if e.op == "not":
            return _paren("not " + show(e.args[0], _P_UNARY), _P_UNARY, prec)
        if e.op in ("&&", "||"):
            lvl = _P_CMP
            s = f"{show(e.args[0], lvl + 1)} {e.op} {show(e.args[1], lvl + 1)}"
            return _paren(s, lvl, prec)
        lvl = _OP_LEVEL[e.op]
        right = lvl + 1
        left = lvl + 1 if lvl == _P_CMP else lvl
        s = f"{show(e.args[0], left)} {e.op} {show(e.args[1], right)}"
        return _paren(s, lvl, prec)
    if isinstance(e, App):
        if _is_bottom(e):
            return "_bot_"
        s = f"{show(e.fn, _P_APP)} {show(e.arg, _P_ATOM)}"
        return _paren(s, _P_APP, prec)
    if isinstance(e, Cond):
        s = f"if {show(e.guard)} then {show(e.then)} else {show(e.else_)}"
        return _paren(s, _P_EXPR, prec)
    if isinstance(e, Fix):
        ret = f" : {show_type(e.rtype, 2)}" if e.rtype is not None else ""
        if e.fname in free_vars(e.body) - {e.param}:
            s = (f"fix {e.fname} {_binder(e.param, e.ptype, e.body)}{ret} -> "
                 f"{show(e.body)}")
        else:
            s = f"fun {_binder(e.param, e.ptype, e.body)}{ret} -> {show(e.body)}"
        return _paren(s, _P_EXPR, prec)
    if isinstance(e, LetTuple):
        if len(e.binders) == 1:
            pat = e.binders[0] if e.binders[0] in free_vars(e.body) else "_"
        else:
            pat = "(" + ", ".join(e.binders) + ")"
        s = f"let {pat} = {show(e.bound)} in {show(e.body)}"
        return _paren(s, _P_EXPR, prec)
    # pattern holes and other leaves print themselves
    return repr(e)


def alpha_eq(a: Expr, b: Expr) -> bool:
    """Alpha-equivalence; unused self names of Fix are irrelevant."""
    return canonical(a) == canonical(b)


def canonical(e: Expr, env: Optional[dict] = None, counter: Optional[list] = None) -> Expr:
    """Rename every bound variable to a name derived from binding order.

    Names free in ``e`` are never chosen, so open terms keep their meaning.
    """
    env = {} if env is None else env
    counter = [0] if counter is None else counter
    avoid = free_vars(e)

    def fresh() -> str:
        counter[0] += 1
        while f"v{counter[0]}" in avoid:
            counter[0] += 1
        return f"v{counter[0]}"

    def go(e: Expr, env: dict) -> Expr:
        if isinstance(e, Var):
            return Var(env.get(e.name, e.name))
        if isinstance(e, (Const, AbstractName, SymConst)):
            return e
        if isinstance(e, Tuple):
            return Tuple(tuple(go(x, env) for x in e.items))
        if isinstance(e, PrimOp):
            return PrimOp(e.op, tuple(go(x, env) for x in e.args))
        if isinstance(e, SymOp):
            return SymOp(e.op, tuple(go(x, env) for x in e.args), e.type)
        if isinstance(e, App):
            return App(go(e.fn, env), go(e.arg, env))
        if isinstance(e, Cond):
            return Cond(go(e.guard, env), go(e.then, env), go(e.else_, env))
        if isinstance(e, Fix):
            f, x = fresh(), fresh()
            inner = {**env, e.fname: f, e.param: x}
            return Fix(f, x, go(e.body, inner), e.ptype, e.rtype)
        if isinstance(e, LetTuple):
            bound = go(e.bound, env)
            names = tuple(fresh() for _ in e.binders)
            inner = {**env, **dict(zip(e.binders, names))}
            return LetTuple(names, bound, go(e.body, inner))
        raise TypeError(f"not an expression: {e!r}")

    return go(e, env)


def strip_types(e: Expr) -> Expr:
    """Drop Fix annotations (used to compare parsed and elaborated terms)."""
    if isinstance(e, Fix):
        return Fix(e.fname, e.param, strip_types(e.body))
    if isinstance(e, Tuple):
        return Tuple(tuple(map(strip_types, e.items)))
    if isinstance(e, PrimOp):
        return PrimOp(e.op, tuple(map(strip_types, e.args)))
    if isinstance(e, App):
        return App(strip_types(e.fn), strip_types(e.arg))
    if isinstance(e, Cond):
        return Cond(strip_types(e.guard), strip_types(e.then), strip_types(e.else_))
    if isinstance(e, LetTuple):
        return LetTuple(e.binders, strip_types(e.bound), strip_types(e.body))
    return e


__all__ = [
    "BaseType", "BOOL", "INT", "UNIT", "Arrow", "Product", "Type", "show_type", "arrow",
    "Const", "UNIT_V", "TRUE", "FALSE", "int_c", "bool_c", "Var", "Tuple", "PrimOp",
    "App", "Cond", "Fix", "LetTuple", "AbstractName", "SymConst", "SymOp", "Expr",
    "is_value", "is_symbolic", "free_vars", "subterms", "size", "lam", "bottom",
    "ParseError", "parse", "parse_type", "show", "alpha_eq", "canonical", "strip_types",
]
