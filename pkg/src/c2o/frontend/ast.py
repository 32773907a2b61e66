"""Contract AST: semantic types, expressions and the Contract container.

Nodes are frozen dataclasses so structural equality and hashing come for free;
``span`` and the resolved ``ty`` are excluded from comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Optional, Union

from c2o.errors import NO_SPAN, Span


# -- semantic types ---------------------------------------------------------


@dataclass(frozen=True)
class BoolType:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class IntType:
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class RealType:
    def __str__(self) -> str:
        return "real"


@dataclass(frozen=True)
class RecordType:
    name: str
    fields: tuple[tuple[str, "SemType"], ...]

    def __str__(self) -> str:
        return self.name

    def field_type(self, name: str) -> Optional["SemType"]:
        for fname, fty in self.fields:
            if fname == name:
                return fty
        return None


SemType = Union[BoolType, IntType, RealType, RecordType]

BOOL = BoolType()
INT = IntType()
REAL = RealType()


def is_numeric(ty: SemType) -> bool:
    return isinstance(ty, (IntType, RealType))


def contains_real(ty: SemType) -> bool:
    if isinstance(ty, RealType):
        return True
    if isinstance(ty, RecordType):
        return any(contains_real(t) for _, t in ty.fields)
    return False


# -- expressions ------------------------------------------------------------


def _meta():
    return field(default=None, compare=False, repr=False, kw_only=True)


def _span():
    return field(default=NO_SPAN, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Expr:
    def children(self) -> tuple["Expr", ...]:
        return ()

    def with_children(self, kids: tuple["Expr", ...]) -> "Expr":
        return self

    def walk(self) -> Iterator["Expr"]:
        yield self
        for kid in self.children():
            yield from kid.walk()


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    ty: Optional[SemType] = _meta()
    span: Span = _span()


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    ty: Optional[SemType] = _meta()
    span: Span = _span()


@dataclass(frozen=True)
class RealLit(Expr):
    value: Fraction
    ty: Optional[SemType] = _meta()
    span: Span = _span()


@dataclass(frozen=True)
class Ident(Expr):
    name: str
    ty: Optional[SemType] = _meta()
    span: Span = _span()


@dataclass(frozen=True)
class Select(Expr):
    base: Expr
    field_name: str
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return (self.base,)

    def with_children(self, kids):
        return replace(self, base=kids[0])


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "neg" | "not"
    operand: Expr
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return (self.operand,)

    def with_children(self, kids):
        return replace(self, operand=kids[0])


ARITH_OPS = ("+", "-", "*", "/", "div", "mod")
ORDER_OPS = ("<", "<=", ">", ">=")
EQ_OPS = ("=", "<>")
BOOL_OPS = ("and", "or", "=>")
BINARY_OPS = ARITH_OPS + ORDER_OPS + EQ_OPS + BOOL_OPS


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return replace(self, left=kids[0], right=kids[1])


@dataclass(frozen=True)
class Pre(Expr):
    operand: Expr
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return (self.operand,)

    def with_children(self, kids):
        return replace(self, operand=kids[0])


@dataclass(frozen=True)
class Arrow(Expr):
    init: Expr
    rest: Expr
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return (self.init, self.rest)

    def with_children(self, kids):
        return replace(self, init=kids[0], rest=kids[1])


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    else_: Expr
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return (self.cond, self.then, self.else_)

    def with_children(self, kids):
        return replace(self, cond=kids[0], then=kids[1], else_=kids[2])


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return self.args

    def with_children(self, kids):
        return replace(self, args=tuple(kids))


@dataclass(frozen=True)
class RecordLit(Expr):
    type_name: str
    items: tuple[tuple[str, Expr], ...]
    ty: Optional[SemType] = _meta()
    span: Span = _span()

    def children(self):
        return tuple(e for _, e in self.items)

    def with_children(self, kids):
        return replace(self, items=tuple((n, k) for (n, _), k in zip(self.items, kids)))


def is_temporal(e: Expr) -> bool:
    return isinstance(e, (Pre, Arrow))


def contains_temporal(e: Expr) -> bool:
    return any(is_temporal(n) for n in e.walk())


def map_bottom_up(e: Expr, fn) -> Expr:
    """Rebuild ``e`` applying ``fn`` to every node after its children."""
    kids = e.children()
    if kids:
        new_kids = tuple(map_bottom_up(k, fn) for k in kids)
        if any(a is not b for a, b in zip(new_kids, kids)):
            e = e.with_children(new_kids)
    return fn(e)


def free_names(e: Expr) -> set[str]:
    return {n.name for n in e.walk() if isinstance(n, Ident)}


def strip_meta(e: Expr) -> Expr:
    """Drop ``ty`` annotations (spans are kept)."""

    def clear(n: Expr) -> Expr:
        return replace(n, ty=None) if n.ty is not None else n

    return map_bottom_up(e, clear)


# -- declarations -----------------------------------------------------------


@dataclass(frozen=True)
class TypeRef:
    """A type as written in source; resolved to a SemType by the checker."""

    name: str
    span: Span = _span()

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class RecordDecl:
    name: str
    fields: tuple[tuple[str, TypeRef], ...]
    span: Span = _span()


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: TypeRef
    span: Span = _span()


@dataclass(frozen=True)
class NodeDecl:
    name: str
    params: tuple[VarDecl, ...]
    result: TypeRef
    body: Expr
    span: Span = _span()


@dataclass(frozen=True)
class CheckDecl:
    """An ``assume`` or ``guarantee`` statement."""

    label: str
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class EqDecl:
    name: str
    type: TypeRef
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class AssignDecl:
    """Design-model statement defining a declared output."""

    name: str
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Contract:
    name: str
    records: tuple[RecordDecl, ...] = ()
    inputs: tuple[VarDecl, ...] = ()
    outputs: tuple[VarDecl, ...] = ()
    nodes: tuple[NodeDecl, ...] = ()
    assumes: tuple[CheckDecl, ...] = ()
    guarantees: tuple[CheckDecl, ...] = ()
    eqs: tuple[EqDecl, ...] = ()
    assigns: tuple[AssignDecl, ...] = ()
    span: Span = _span()
    # filled in by the checker
    types: Optional[dict] = field(default=None, compare=False, repr=False, kw_only=True)
    warnings: tuple = field(default=(), compare=False, repr=False, kw_only=True)

    def record_types(self) -> dict[str, RecordType]:
        return dict(self.types or {})

    def resolve(self, ref: TypeRef) -> SemType:
        builtin = {"bool": BOOL, "int": INT, "real": REAL}
        if ref.name in builtin:
            return builtin[ref.name]
        return self.record_types()[ref.name]

    def input_types(self) -> list[tuple[str, SemType]]:
        return [(d.name, self.resolve(d.type)) for d in self.inputs]

    def output_types(self) -> list[tuple[str, SemType]]:
        return [(d.name, self.resolve(d.type)) for d in self.outputs]

    def node(self, name: str) -> Optional[NodeDecl]:
        for n in self.nodes:
            if n.name == name:
                return n
        return None

    def all_exprs(self) -> Iterator[Expr]:
        for c in self.assumes + self.guarantees:
            yield c.expr
        for e in self.eqs:
            yield e.expr
        for a in self.assigns:
            yield a.expr
