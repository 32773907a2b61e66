"""The imperative observer: one step function over persistent state.

A program's statements always run in this order: persistent declarations,
the first-call initialization guard, ``body`` (assignments interleaved with
``assume``/``prove``), ``updates`` (pre-variables), then
``first_time := false``. The sections are separate fields, so the order holds
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from c2o.codegen.types import BOOL_L, FixedInt, Float, LBool, LoweredType, Struct

HELPERS = ("ifFunction", "impliesFunction", "arrowFunction", "isequal", "mod")
LOCAL_HELPERS = ("ifFunction", "impliesFunction", "arrowFunction")
ARITH = ("+", "-", "*", "/", "idiv")
COMPARE = ("<", "<=", ">", ">=", "~=")
LOGIC = ("&&", "||")


@dataclass(frozen=True)
class Const:
    value: Union[bool, int, Fraction]
    ty: LoweredType


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Field:
    base: "OExpr"
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" | "not"
    operand: "OExpr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "OExpr"
    right: "OExpr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["OExpr", ...]


@dataclass(frozen=True)
class StructLit:
    type_name: str
    items: tuple[tuple[str, "OExpr"], ...]


OExpr = Union[Const, Var, Field, Unary, Binary, Call, StructLit]


def children(e: OExpr) -> tuple:
    if isinstance(e, Field):
        return (e.base,)
    if isinstance(e, Unary):
        return (e.operand,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, Call):
        return e.args
    if isinstance(e, StructLit):
        return tuple(x for _, x in e.items)
    return ()


def walk(e: OExpr) -> Iterator[OExpr]:
    yield e
    for k in children(e):
        yield from walk(k)


@dataclass(frozen=True)
class Assign:
    target: str
    expr: OExpr


@dataclass(frozen=True)
class Assume:
    label: str
    expr: OExpr


@dataclass(frozen=True)
class Prove:
    label: str
    expr: OExpr


Stmt = Union[Assign, Assume, Prove]


@dataclass(frozen=True)
class Update:
    target: str
    expr: OExpr


@dataclass(frozen=True)
class Persistent:
    name: str
    ty: LoweredType
    init: OExpr


@dataclass(frozen=True)
class ObserverProgram:
    name: str
    int_type: FixedInt
    float_type: Optional[Float]
    structs: tuple[Struct, ...]
    params: tuple[tuple[str, LoweredType], ...]
    first_time: str
    persistents: tuple[Persistent, ...]  # first_time comes first
    locals: tuple[tuple[str, LoweredType], ...]
    body: tuple[Stmt, ...]
    updates: tuple[Update, ...]
    outputs: tuple[str, ...] = ()  # locals exported by a design model

    @property
    def helpers(self) -> tuple[str, ...]:
        used = set()
        for e in self.expressions():
            for n in walk(e):
                if isinstance(n, Call) and n.fn in LOCAL_HELPERS:
                    used.add(n.fn)
        return tuple(h for h in LOCAL_HELPERS if h in used)

    @property
    def pre_persistents(self) -> tuple[Persistent, ...]:
        return self.persistents[1:]

    def expressions(self) -> Iterator[OExpr]:
        for s in self.body:
            yield s.expr
        for u in self.updates:
            yield u.expr

    def symbols(self) -> dict[str, LoweredType]:
        table = dict(self.params)
        table.update((p.name, p.ty) for p in self.persistents)
        table.update(self.locals)
        return table

    def checks(self) -> tuple[list[str], list[str]]:
        """Assume labels and prove labels in program order."""
        return ([s.label for s in self.body if isinstance(s, Assume)],
                [s.label for s in self.body if isinstance(s, Prove)])

    def struct(self, name: str) -> Struct:
        for s in self.structs:
            if s.name == name:
                return s
        raise KeyError(name)


def infer_type(e: OExpr, symbols: dict[str, LoweredType], structs: dict[str, Struct]
               ) -> LoweredType:
    if isinstance(e, Const):
        return e.ty
    if isinstance(e, Var):
        return symbols[e.name]
    if isinstance(e, Field):
        base = infer_type(e.base, symbols, structs)
        return base.field_type(e.name)
    if isinstance(e, Unary):
        return BOOL_L if e.op == "not" else infer_type(e.operand, symbols, structs)
    if isinstance(e, Binary):
        if e.op in COMPARE or e.op in LOGIC:
            return BOOL_L
        return infer_type(e.left, symbols, structs)
    if isinstance(e, Call):
        if e.fn in ("isequal", "impliesFunction"):
            return BOOL_L
        if e.fn == "mod":
            return infer_type(e.args[0], symbols, structs)
        return infer_type(e.args[1], symbols, structs)
    if isinstance(e, StructLit):
        return structs[e.type_name]
    raise TypeError(type(e).__name__)


class ProgramError(Exception):
    pass


def verify_program(p: ObserverProgram) -> None:
    """Structural checks: unique names, assigned-before-read, typed constants."""
    names = [n for n, _ in p.params] + [q.name for q in p.persistents] + [n for n, _ in p.locals]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ProgramError(f"duplicate names: {sorted(dup)}")
    if not p.persistents or p.persistents[0].name != p.first_time \
            or p.persistents[0].ty != BOOL_L:
        raise ProgramError("first persistent must be the boolean first-step flag")
    if p.first_time in {u.target for u in p.updates}:
        raise ProgramError("first-step flag is reset implicitly, not through updates")
    symbols = p.symbols()
    structs = {s.name: s for s in p.structs}
    local_names = {n for n, _ in p.locals}
    assigned = {n for n, _ in p.params} | {q.name for q in p.persistents}

    def reads_ok(e: OExpr, where: str) -> None:
        for n in walk(e):
            if isinstance(n, Var) and n.name not in assigned:
                raise ProgramError(f"{where} reads {n.name!r} before it is assigned")
            if isinstance(n, Const) and isinstance(n.ty, (FixedInt, Float)) \
                    and isinstance(n.value, bool):
                raise ProgramError(f"{where}: boolean constant cast to {n.ty}")
            if isinstance(n, Const) and isinstance(n.ty, LBool) and not isinstance(n.value, bool):
                raise ProgramError(f"{where}: numeric constant typed bool")
        infer_type(e, symbols, structs)

    for s in p.body:
        where = getattr(s, "target", None) or getattr(s, "label", "?")
        reads_ok(s.expr, where)
        if isinstance(s, Assign):
            if s.target not in local_names:
                raise ProgramError(f"assignment to undeclared local {s.target!r}")
            if s.target in assigned:
                raise ProgramError(f"{s.target!r} assigned twice")
            assigned.add(s.target)
    missing = local_names - assigned
    if missing:
        raise ProgramError(f"locals never assigned: {sorted(missing)}")
    pres = {q.name for q in p.pre_persistents}
    for u in p.updates:
        if u.target not in pres:
            raise ProgramError(f"update of non-persistent {u.target!r}")
        reads_ok(u.expr, u.target)
    for o in p.outputs:
        if o not in local_names:
            raise ProgramError(f"exported output {o!r} is not a local")
