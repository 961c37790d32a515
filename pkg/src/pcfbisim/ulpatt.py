"""Ultimate patterns: values with every function replaced by a numbered hole."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    BOOL, INT, UNIT, UNIT_V, AbstractName, Arrow, BaseType, Const, Fix, SymConst, SymOp, Tuple, Type, bool_c, int_c,
)


@dataclass(frozen=True)
class Hole:
    index: int
    type: Type

    def __repr__(self) -> str:
        return f"•{self.index}"


class Fresh:
    """Supply of abstract names and symbolic constants, numbered from 1."""

    def __init__(self, start_name: int = 1, start_const: int = 1):
        self._names = itertools.count(start_name)
        self._consts = itertools.count(start_const)

    def name(self, tp: Arrow) -> AbstractName:
        return AbstractName(next(self._names), tp)

    def const(self, tp: BaseType) -> SymConst:
        return SymConst(next(self._consts), tp)


def ulpatt_value(v):
    """Return (D, functions) with D[functions] == v, holes numbered 1..n."""
    funs: list = []

    def go(v):
        if isinstance(v, (Const, SymConst, SymOp)):
            return v
        if isinstance(v, Tuple):
            return Tuple(tuple(go(x) for x in v.items))
        if isinstance(v, Fix):
            tp = v.ftype
            if tp is None:
                raise ValueError("function value lacks a type annotation")
            funs.append(v)
            return Hole(len(funs), tp)
        if isinstance(v, AbstractName):
            funs.append(v)
            return Hole(len(funs), v.type)
        raise ValueError(f"not a value: {v!r}")

    d = go(v)
    return d, funs


def plug(d, values) -> object:
    """Fill hole ``i`` with ``values[i-1]``."""
    if isinstance(d, Hole):
        return values[d.index - 1]
    if isinstance(d, Tuple):
        return Tuple(tuple(plug(x, values) for x in d.items))
    return d


def holes(d) -> list:
    if isinstance(d, Hole):
        return [d]
    if isinstance(d, Tuple):
        return [h for x in d.items for h in holes(x)]
    return []


def leaves(d) -> list:
    """Base-type leaves (constants and symbolic terms) in left-to-right order."""
    if isinstance(d, (Const, SymConst, SymOp)):
        return [d]
    if isinstance(d, Tuple):
        return [x for y in d.items for x in leaves(y)]
    return []


def ulpatt_type_symbolic(tp: Type, fresh: Fresh):
    """Canonical symbolic pattern of type ``tp``.

    Returns (D, names, consts): Unit positions become ``()``, Bool/Int
    positions fresh symbolic constants, arrows numbered holes standing for
    the fresh (index-free) abstract names listed in ``names``.
    """
    names: list = []
    consts: list = []

    def go(t):
        if t == UNIT:
            return UNIT_V
        if isinstance(t, BaseType):
            k = fresh.const(t)
            consts.append(k)
            return k
        if isinstance(t, Arrow):
            names.append(fresh.name(t))
            return Hole(len(names), t)
        return Tuple(tuple(go(x) for x in t.items))

    d = go(tp)
    return d, names, consts


DEFAULT_DOMAIN = {BOOL: [bool_c(False), bool_c(True)], INT: [int_c(0), int_c(1)],
                  UNIT: [UNIT_V]}


def ulpatt_type_enumerate(tp: Type, domain: Optional[dict] = None,
                          fresh: Optional[Fresh] = None) -> list:
    """All patterns of ``tp`` over a finite base domain, each with fresh names."""
    domain = DEFAULT_DOMAIN if domain is None else domain
    fresh = fresh or Fresh()

    def shapes(t):
        # yields pattern skeletons; arrows become placeholders filled later
        if t == UNIT:
            yield UNIT_V
        elif isinstance(t, BaseType):
            yield from domain[t]
        elif isinstance(t, Arrow):
            yield t
        else:
            for combo in itertools.product(*[list(shapes(x)) for x in t.items]):
                yield Tuple(tuple(combo))

    out = []
    for skel in shapes(tp):
        names: list = []

        def fill(s):
            if isinstance(s, Arrow):
                names.append(fresh.name(s))
                return Hole(len(names), s)
            if isinstance(s, Tuple):
                return Tuple(tuple(fill(x) for x in s.items))
            return s

        out.append((fill(skel), names))
    return out


def pattern_str(d) -> str:
    from .syntax import show
    if isinstance(d, Hole):
        return f"•{d.index}"
    if isinstance(d, Tuple):
        return "(" + ", ".join(pattern_str(x) for x in d.items) + ")"
    if isinstance(d, AbstractName):
        return repr(d.bare())
    return show(d)
