"""DataflowIR -> ObserverProgram."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction

from c2o.codegen import program as P
from c2o.codegen.types import (BOOL_L, LoweredType, Struct, TypeConfig, default_value,
                               lower_type)
from c2o.errors import ConstantOverflow
from c2o.frontend import ast as A
from c2o.ir import DataflowIR

_SINGLE_MAX = Fraction(3.4028234663852886e38)
_DOUBLE_MAX = Fraction(sys.float_info.max)


@dataclass(frozen=True)
class Param:
    name: str
    ty: A.SemType
    role: str  # "input" | "output"


@dataclass(frozen=True)
class ObserverInterface:
    params: tuple[Param, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)


def interface_of(contract: A.Contract) -> ObserverInterface:
    """Observer parameters: component inputs then outputs, records kept whole."""
    params = [Param(n, t, "input") for n, t in contract.input_types()]
    params += [Param(n, t, "output") for n, t in contract.output_types()]
    return ObserverInterface(tuple(params))


def const_of(value, ty: LoweredType) -> P.OExpr:
    if isinstance(ty, Struct):
        return P.StructLit(ty.name, tuple((f, const_of(value[f], t)) for f, t in ty.fields))
    return P.Const(value, ty)


class _Namer:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)

    def claim(self, base: str) -> str:
        name, k = base, 1
        while name in self.taken:
            name = f"{base}_{k}"
            k += 1
        self.taken.add(name)
        return name


class _Lowerer:
    def __init__(self, ir: DataflowIR, cfg: TypeConfig):
        self.ir = ir
        self.cfg = cfg
        self.structs: dict[str, Struct] = {}
        for rt in ir.records:
            lower_type(rt, cfg, self.structs)
        self.pre_names: dict[A.Expr, str] = {}
        self.first_time = "first_time"

    def ty(self, t: A.SemType) -> LoweredType:
        return lower_type(t, self.cfg, self.structs)

    def const(self, e: A.Expr) -> P.Const:
        if isinstance(e, A.BoolLit):
            return P.Const(bool(e.value), BOOL_L)
        if isinstance(e, A.IntLit):
            it = self.cfg.int_type
            if not it.contains(e.value):
                raise ConstantOverflow(f"constant {e.value} does not fit {it}", e.span)
            return P.Const(int(e.value), it)
        ft = self.ty(A.REAL)
        limit = _SINGLE_MAX if ft.precision == "single" else _DOUBLE_MAX
        if abs(e.value) > limit:
            raise ConstantOverflow(f"constant {e.value} does not fit {ft}", e.span)
        return P.Const(Fraction(e.value), ft)

    def expr(self, e: A.Expr) -> P.OExpr:
        if isinstance(e, (A.BoolLit, A.IntLit, A.RealLit)):
            return self.const(e)
        if isinstance(e, A.Ident):
            return P.Var(e.name)
        if isinstance(e, A.Select):
            return P.Field(self.expr(e.base), e.field_name)
        if isinstance(e, A.Unary):
            return P.Unary("not" if e.op == "not" else "-", self.expr(e.operand))
        if isinstance(e, A.Binary):
            a, b = self.expr(e.left), self.expr(e.right)
            op = e.op
            if op in ("+", "-", "*", "/", "<", "<=", ">", ">="):
                return P.Binary(op, a, b)
            if op == "div":
                return P.Binary("idiv", a, b)
            if op == "mod":
                return P.Call("mod", (a, b))
            if op == "=":
                return P.Call("isequal", (a, b))
            if op == "<>":
                if isinstance(e.left.ty, A.RecordType):
                    return P.Unary("not", P.Call("isequal", (a, b)))
                return P.Binary("~=", a, b)
            if op == "and":
                return P.Binary("&&", a, b)
            if op == "or":
                return P.Binary("||", a, b)
            if op == "=>":
                return P.Call("impliesFunction", (a, b))
            raise AssertionError(op)
        if isinstance(e, A.Pre):
            return P.Var(self.pre_names[e.operand])
        if isinstance(e, A.Arrow):
            return P.Call("arrowFunction",
                          (P.Var(self.first_time), self.expr(e.init), self.expr(e.rest)))
        if isinstance(e, A.If):
            return P.Call("ifFunction",
                          (self.expr(e.cond), self.expr(e.then), self.expr(e.else_)))
        if isinstance(e, A.RecordLit):
            return P.StructLit(e.type_name, tuple((n, self.expr(x)) for n, x in e.items))
        if isinstance(e, A.Call):
            raise AssertionError("node calls must be inlined before lowering")
        raise TypeError(type(e).__name__)

    def run(self) -> P.ObserverProgram:
        ir = self.ir
        model = ir.role == "model"
        params = [(n, self.ty(t)) for n, t in ir.inputs]
        if not model:
            params += [(n, self.ty(t)) for n, t in ir.outputs]
        value_locals = [loc for loc in ir.locals if loc.kind not in ("assume", "guarantee")]
        namer = _Namer({n for n, _ in params} | {loc.name for loc in value_locals}
                       | set(P.HELPERS))
        self.first_time = namer.claim("first_time")
        for operand, pid in ir.pre_table:
            if isinstance(operand, A.Ident):
                base = "pre_" + operand.name.lstrip("_")
            else:
                base = "pre_" + pid.lstrip("_")
            self.pre_names[operand] = namer.claim(base)

        labels = {n: lbl for lbl, n in ir.assumes + ir.guarantees}
        body: list[P.Stmt] = []
        locals_: list[tuple[str, LoweredType]] = []
        for loc in ir.locals:
            rhs = self.expr(loc.expr)
            if loc.kind == "assume":
                body.append(P.Assume(labels[loc.name], rhs))
            elif loc.kind == "guarantee":
                body.append(P.Prove(labels[loc.name], rhs))
            else:
                locals_.append((loc.name, self.ty(loc.ty)))
                body.append(P.Assign(loc.name, rhs))

        persistents = [P.Persistent(self.first_time, BOOL_L, P.Const(True, BOOL_L))]
        updates = []
        for operand, _ in ir.pre_table:
            pty = self.ty(operand.ty)
            name = self.pre_names[operand]
            persistents.append(P.Persistent(name, pty, const_of(default_value(pty), pty)))
            updates.append(P.Update(name, self.expr(operand)))

        prog = P.ObserverProgram(
            name=ir.name,
            int_type=self.cfg.int_type,
            float_type=self.cfg.float_type,
            structs=tuple(self.structs.values()),
            params=tuple(params),
            first_time=self.first_time,
            persistents=tuple(persistents),
            locals=tuple(locals_),
            body=tuple(body),
            updates=tuple(updates),
            outputs=tuple(n for n, _ in ir.outputs) if model else (),
        )
        P.verify_program(prog)
        return prog


def lower(ir: DataflowIR, cfg: TypeConfig) -> P.ObserverProgram:
    """Translate the ordered IR into an imperative step program."""
    return _Lowerer(ir, cfg).run()
