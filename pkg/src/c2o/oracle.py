"""Reference evaluator: Lustre stream semantics over the checked Contract AST.

Integers are unbounded and reals are exact rationals. ``if``, ``->``, ``=>``,
``and`` and ``or`` evaluate only the operands they need. ``pre e`` at step 0
is the undefined value ``BOTTOM``, which propagates through strict
operators and is an error if it reaches a check. Node calls are evaluated
in place: each call site owns its own streams.

This module works on the source AST only; it does not use the IR or the
code generator.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from c2o.arith import int_div, int_mod
from c2o.errors import BottomObserved, DivisionByZero
from c2o.frontend import ast as A
from c2o.verdict import StepVerdict, with_vacuity


class _Bottom:
    def __repr__(self) -> str:
        return "BOTTOM"


BOTTOM = _Bottom()


class _Trap(Exception):
    def __init__(self, where: str):
        self.where = where


@dataclass
class OracleResult:
    verdicts: list[StepVerdict]
    trap: Optional[DivisionByZero] = None
    values: list[dict[str, Any]] = field(default_factory=list)


class StreamEvaluator:
    """Memoized evaluation of one contract over one trace."""

    def __init__(self, contract: A.Contract, steps: Sequence[dict[str, Any]]):
        self.c = contract
        self.steps = steps
        self.eqs = {q.name: q.expr for q in contract.eqs}
        self.nodes = {n.name: n for n in contract.nodes}
        self.memo: dict[tuple, Any] = {}
        self.evaluations: Counter = Counter()  # id(expr) -> times evaluated
        self.calls: dict[int, A.Call] = {}

    def evaluated(self, e: A.Expr) -> int:
        return self.evaluations[id(e)]

    # scope: () for the contract body; for a node body, (id of call, caller scope)
    def value(self, e: A.Expr, t: int, scope: tuple = ()) -> Any:
        key = (id(e), t, scope)
        if key in self.memo:
            return self.memo[key]
        self.evaluations[id(e)] += 1
        v = self._eval(e, t, scope)
        self.memo[key] = v
        return v

    def name(self, n: str, t: int, scope: tuple) -> Any:
        if scope:
            call_id, outer = scope
            call = self.calls[call_id]
            node = self.nodes[call.name]
            for p, arg in zip(node.params, call.args):
                if p.name == n:
                    return self.value(arg, t, outer)
        if n in self.eqs:
            return self.value(self.eqs[n], t, ())
        return self.steps[t][n]

    def _eval(self, e: A.Expr, t: int, scope: tuple) -> Any:
        if isinstance(e, (A.BoolLit, A.IntLit)):
            return e.value
        if isinstance(e, A.RealLit):
            return Fraction(e.value)
        if isinstance(e, A.Ident):
            return self.name(e.name, t, scope)
        if isinstance(e, A.Select):
            base = self.value(e.base, t, scope)
            return BOTTOM if base is BOTTOM else base[e.field_name]
        if isinstance(e, A.Pre):
            return BOTTOM if t == 0 else self.value(e.operand, t - 1, scope)
        if isinstance(e, A.Arrow):
            return self.value(e.init if t == 0 else e.rest, t, scope)
        if isinstance(e, A.If):
            c = self.value(e.cond, t, scope)
            if c is BOTTOM:
                return BOTTOM
            return self.value(e.then if c else e.else_, t, scope)
        if isinstance(e, A.Call):
            self.calls[id(e)] = e
            return self.value(self.nodes[e.name].body, t, (id(e), scope))
        if isinstance(e, A.RecordLit):
            items = {n: self.value(x, t, scope) for n, x in e.items}
            return BOTTOM if any(v is BOTTOM for v in items.values()) else items
        if isinstance(e, A.Unary):
            v = self.value(e.operand, t, scope)
            if v is BOTTOM:
                return BOTTOM
            return (not v) if e.op == "not" else -v
        if isinstance(e, A.Binary):
            return self._binary(e, t, scope)
        raise TypeError(type(e).__name__)

    def _binary(self, e: A.Binary, t: int, scope: tuple) -> Any:
        op = e.op
        a = self.value(e.left, t, scope)
        if op in ("and", "or", "=>"):
            if a is BOTTOM:
                return BOTTOM
            if op == "and" and not a:
                return False
            if op == "or" and a:
                return True
            if op == "=>" and not a:
                return True
            b = self.value(e.right, t, scope)
            return BOTTOM if b is BOTTOM else bool(b)
        b = self.value(e.right, t, scope)
        if a is BOTTOM or b is BOTTOM:
            return BOTTOM
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op in ("/", "div", "mod"):
            if b == 0:
                raise _Trap(f"{op} at {e.span}")
            if op == "/":
                return Fraction(a) / Fraction(b)
            return int_div(a, b) if op == "div" else int_mod(a, b)
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        if op == "=":
            return a == b
        if op == "<>":
            return a != b
        raise AssertionError(op)

    def check(self, label: str, e: A.Expr, t: int) -> bool:
        v = self.value(e, t)
        if v is BOTTOM:
            raise BottomObserved(f"undefined pre value reaches {label!r} at step {t}", e.span)
        return bool(v)


def evaluate(contract: A.Contract, steps: Sequence[dict[str, Any]],
             record: Sequence[str] = ()) -> OracleResult:
    """Verdicts (and optionally eq values) for every step, stopping at a trap."""
    ev = StreamEvaluator(contract, steps)
    raw, values = [], []
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        for t in range(len(steps)):
            try:
                assumes = {c.label: ev.check(c.label, c.expr, t) for c in contract.assumes}
                proves = {c.label: ev.check(c.label, c.expr, t) for c in contract.guarantees}
                row = {n: ev.name(n, t, ()) for n in record}
            except _Trap as trap:
                return OracleResult(with_vacuity(raw), DivisionByZero(t, trap.where), values)
            raw.append((assumes, proves))
            values.append(row)
    finally:
        sys.setrecursionlimit(limit)
    return OracleResult(with_vacuity(raw), None, values)


def eval(contract: A.Contract, steps: Sequence[dict[str, Any]], cfg=None) -> list[StepVerdict]:
    """Per-step verdicts under exact stream semantics; raises DivisionByZero.

    ``cfg`` is accepted for interface symmetry with the observer; arithmetic
    here is always exact, and projection happens in the harness.
    """
    res = evaluate(contract, steps)
    if res.trap is not None:
        raise res.trap
    return res.verdicts
