"""Bounded bisimulation checking for a call-by-value PCF."""
from .checker import Equivalent, Inconclusive, Inequivalent, Options, check
from .lts import semantics
from .oracle_contexts import oracle_equiv
from .syntax import parse, show
from .typecheck import elaborate, infer

__all__ = ["Equivalent", "Inconclusive", "Inequivalent", "Options", "check", "elaborate",
           "infer", "oracle_equiv", "parse", "semantics", "show"]
