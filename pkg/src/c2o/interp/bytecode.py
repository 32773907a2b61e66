"""Flatten an ObserverProgram into register bytecode for the step kernels.

Records are split into one register per scalar leaf; record equality
becomes a conjunction of leaf comparisons and record-valued selects become
one select per leaf. Every instruction is a 5-tuple ``(op, d, a, b, c)``.
Registers live in one index space; ``kinds[r]`` says whether register ``r``
holds an integer/boolean (0) or a float (1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from c2o.codegen import program as P
from c2o.codegen.types import BOOL_L, FixedInt, Float, LBool, LoweredType, Struct, default_value

# opcodes; keep in sync with _kernel.pyx
NOP = 0
MOVI, MOVF = 1, 2
IADD, ISUB, IMUL, IDIV, IMOD, INEG = 3, 4, 5, 6, 7, 8
FADD, FSUB, FMUL, FDIV, FNEG = 9, 10, 11, 12, 13
ILT, ILE, IGT, IGE, IEQ, INE = 14, 15, 16, 17, 18, 19
FLT, FLE, FGT, FGE, FEQ, FNE = 20, 21, 22, 23, 24, 25
NOT, IMPL, AND = 26, 27, 28
SELI, SELF = 29, 30
JZ, JNZ, JMP = 31, 32, 33
ASSUME, PROVE = 34, 35

OPNAMES = {v: k for k, v in dict(globals()).items() if k.isupper() and isinstance(v, int)
           and k not in ("INT", "FLOAT")}

INT, FLOAT = 0, 1

_IARITH = {"+": IADD, "-": ISUB, "*": IMUL, "idiv": IDIV}
_FARITH = {"+": FADD, "-": FSUB, "*": FMUL, "/": FDIV}
_ICMP = {"<": ILT, "<=": ILE, ">": IGT, ">=": IGE, "~=": INE}
_FCMP = {"<": FLT, "<=": FLE, ">": FGT, ">=": FGE, "~=": FNE}

Val = Union[int, dict]  # a register, or field name -> Val for records


@dataclass(frozen=True)
class Leaf:
    path: str
    ty: LoweredType
    reg: int


@dataclass
class Code:
    instrs: list[tuple[int, int, int, int, int]]
    kinds: list[int]
    where: list[str]
    consts: list[tuple[int, object]]
    params: list[Leaf]
    persistents: list[tuple[Leaf, object]]  # (leaf, default value)
    first_time: int
    locals: list[Leaf]
    outputs: list[Leaf]
    assume_labels: list[str]
    prove_labels: list[str]
    int_type: FixedInt
    float_type: Float | None
    false_reg: int = 0
    param_vals: dict = field(default_factory=dict)

    @property
    def nregs(self) -> int:
        return len(self.kinds)

    def flat(self) -> list[int]:
        out: list[int] = []
        for ins in self.instrs:
            out.extend(ins)
        return out

    def disassemble(self) -> str:
        lines = []
        for pc, (op, d, a, b, c) in enumerate(self.instrs):
            lines.append(f"{pc:4d} {OPNAMES.get(op, op):7s} {d:4d} {a:4d} {b:4d} {c:4d}"
                         f"   ; {self.where[pc]}")
        return "\n".join(lines)


def _kind(ty: LoweredType) -> int:
    return FLOAT if isinstance(ty, Float) else INT


class _Compiler:
    def __init__(self, prog: P.ObserverProgram):
        self.prog = prog
        self.kinds: list[int] = []
        self.instrs: list[tuple[int, int, int, int, int]] = []
        self.where: list[str] = []
        self.const_regs: dict[tuple, int] = {}
        self.consts: list[tuple[int, object]] = []
        self.env: dict[str, Val] = {}
        self.types = prog.symbols()
        self.structs = {s.name: s for s in prog.structs}
        self.ctx = ""

    # -- registers --------------------------------------------------------

    def reg(self, kind: int) -> int:
        self.kinds.append(kind)
        return len(self.kinds) - 1

    def alloc(self, ty: LoweredType) -> Val:
        if isinstance(ty, Struct):
            return {f: self.alloc(t) for f, t in ty.fields}
        return self.reg(_kind(ty))

    def leaves(self, val: Val, ty: LoweredType, path: str) -> list[Leaf]:
        if isinstance(ty, Struct):
            out = []
            for f, t in ty.fields:
                out.extend(self.leaves(val[f], t, f"{path}.{f}"))
            return out
        return [Leaf(path, ty, val)]

    def const(self, value, ty: LoweredType) -> int:
        if isinstance(ty, LBool):
            key = ("b", bool(value))
        elif isinstance(ty, Float):
            key = ("f", Fraction(value))
        else:
            key = ("i", int(value))
        if key not in self.const_regs:
            r = self.reg(_kind(ty))
            self.const_regs[key] = r
            self.consts.append((r, key[1]))
        return self.const_regs[key]

    def emit(self, op: int, d: int = 0, a: int = 0, b: int = 0, c: int = 0) -> int:
        self.instrs.append((op, d, a, b, c))
        self.where.append(self.ctx)
        return len(self.instrs) - 1

    # -- expressions ------------------------------------------------------

    def ty(self, e: P.OExpr) -> LoweredType:
        return P.infer_type(e, self.types, self.structs)

    def expr(self, e: P.OExpr) -> Val:
        if isinstance(e, P.Const):
            return self.const(e.value, e.ty)
        if isinstance(e, P.Var):
            return self.env[e.name]
        if isinstance(e, P.Field):
            return self.expr(e.base)[e.name]
        if isinstance(e, P.StructLit):
            return {n: self.expr(x) for n, x in e.items}
        if isinstance(e, P.Unary):
            a = self.expr(e.operand)
            if e.op == "not":
                d = self.reg(INT)
                self.emit(NOT, d, a)
                return d
            is_float = isinstance(self.ty(e.operand), Float)
            d = self.reg(FLOAT if is_float else INT)
            self.emit(FNEG if is_float else INEG, d, a)
            return d
        if isinstance(e, P.Binary):
            if e.op in ("&&", "||"):
                return self.short_circuit(e)
            a = self.expr(e.left)
            b = self.expr(e.right)
            lt = self.ty(e.left)
            is_float = isinstance(lt, Float)
            if e.op in _ICMP:
                d = self.reg(INT)
                self.emit((_FCMP if is_float else _ICMP)[e.op], d, a, b)
                return d
            table = _FARITH if is_float else _IARITH
            d = self.reg(FLOAT if is_float else INT)
            self.emit(table[e.op], d, a, b)
            return d
        if isinstance(e, P.Call):
            return self.call(e)
        raise TypeError(type(e).__name__)

    def short_circuit(self, e: P.Binary) -> int:
        d = self.reg(INT)
        a = self.expr(e.left)
        self.emit(MOVI, d, a)
        jump = self.emit(JZ if e.op == "&&" else JNZ, 0, d, 0)
        b = self.expr(e.right)
        self.emit(MOVI, d, b)
        op, _, cond, _, _ = self.instrs[jump]
        self.instrs[jump] = (op, 0, cond, len(self.instrs), 0)
        return d

    def equal(self, a: Val, b: Val, ty: LoweredType) -> int:
        if isinstance(ty, Struct):
            acc = None
            for f, t in ty.fields:
                r = self.equal(a[f], b[f], t)
                if acc is None:
                    acc = r
                else:
                    d = self.reg(INT)
                    self.emit(AND, d, acc, r)
                    acc = d
            return acc if acc is not None else self.const(True, BOOL_L)
        d = self.reg(INT)
        self.emit(FEQ if isinstance(ty, Float) else IEQ, d, a, b)
        return d

    def select(self, cond: int, a: Val, b: Val, ty: LoweredType) -> Val:
        if isinstance(ty, Struct):
            return {f: self.select(cond, a[f], b[f], t) for f, t in ty.fields}
        is_float = isinstance(ty, Float)
        d = self.reg(FLOAT if is_float else INT)
        self.emit(SELF if is_float else SELI, d, cond, a, b)
        return d

    def call(self, e: P.Call) -> Val:
        args = [self.expr(x) for x in e.args]  # helper arguments are evaluated eagerly
        if e.fn == "isequal":
            return self.equal(args[0], args[1], self.ty(e.args[0]))
        if e.fn == "mod":
            d = self.reg(INT)
            self.emit(IMOD, d, args[0], args[1])
            return d
        if e.fn == "impliesFunction":
            d = self.reg(INT)
            self.emit(IMPL, d, args[0], args[1])
            return d
        if e.fn in ("ifFunction", "arrowFunction"):
            return self.select(args[0], args[1], args[2], self.ty(e.args[1]))
        raise ValueError(f"unknown function {e.fn}")

    def move(self, dst: Val, src: Val, ty: LoweredType) -> None:
        if isinstance(ty, Struct):
            for f, t in ty.fields:
                self.move(dst[f], src[f], t)
            return
        self.emit(MOVF if isinstance(ty, Float) else MOVI, dst, src)

    # -- program ----------------------------------------------------------

    def run(self) -> Code:
        p = self.prog
        params = []
        for name, ty in p.params:
            self.env[name] = self.alloc(ty)
            params.extend(self.leaves(self.env[name], ty, name))
        persists = []
        for q in p.persistents:
            self.env[q.name] = self.alloc(q.ty)
            for leaf in self.leaves(self.env[q.name], q.ty, q.name):
                persists.append(leaf)
        locals_ = []
        for name, ty in p.locals:
            self.env[name] = self.alloc(ty)
            locals_.extend(self.leaves(self.env[name], ty, name))

        assume_labels, prove_labels = [], []
        for s in p.body:
            if isinstance(s, P.Assign):
                self.ctx = f"assignment to {s.target}"
                self.move(self.env[s.target], self.expr(s.expr), self.types[s.target])
            elif isinstance(s, P.Assume):
                self.ctx = f"assume {s.label!r}"
                self.emit(ASSUME, 0, self.expr(s.expr), len(assume_labels))
                assume_labels.append(s.label)
            else:
                self.ctx = f"prove {s.label!r}"
                self.emit(PROVE, 0, self.expr(s.expr), len(prove_labels))
                prove_labels.append(s.label)

        persistent_regs = set()
        for q in p.persistents:
            persistent_regs |= {leaf.reg for leaf in self.leaves(self.env[q.name], q.ty, q.name)}
        staged = []
        for u in p.updates:
            self.ctx = f"update of {u.target}"
            ty = self.types[u.target]
            src = self.expr(u.expr)
            # stage through fresh registers so later updates never see new values
            leaves = self.leaves(src, ty, "")
            if any(leaf.reg in persistent_regs for leaf in leaves):
                tmp = self.alloc(ty)
                self.move(tmp, src, ty)
                src = tmp
            staged.append((u.target, src, ty))
        for target, src, ty in staged:
            self.ctx = f"update of {target}"
            self.move(self.env[target], src, ty)
        self.ctx = f"reset of {p.first_time}"
        false_reg = self.const(False, BOOL_L)
        first = self.env[p.first_time]
        self.emit(MOVI, first, false_reg)

        defaults = []
        for q in p.persistents:
            dv = _init_value(q.init)
            for leaf in self.leaves(self.env[q.name], q.ty, q.name):
                defaults.append((leaf, _pick(dv, leaf.path[len(q.name):])))

        outputs = []
        for o in p.outputs:
            outputs.extend(self.leaves(self.env[o], self.types[o], o))

        return Code(
            instrs=self.instrs, kinds=self.kinds, where=self.where, consts=self.consts,
            params=params, persistents=defaults, first_time=first, locals=locals_,
            outputs=outputs, assume_labels=assume_labels, prove_labels=prove_labels,
            int_type=p.int_type, float_type=p.float_type, false_reg=false_reg)


def _init_value(e: P.OExpr):
    if isinstance(e, P.Const):
        return e.value
    if isinstance(e, P.StructLit):
        return {n: _init_value(x) for n, x in e.items}
    raise ValueError("persistent initializers must be constants")


def _pick(value, dotted: str):
    for part in [s for s in dotted.split(".") if s]:
        value = value[part]
    return value


def compile_program(prog: P.ObserverProgram) -> Code:
    return _Compiler(prog).run()


def leaf_defaults(prog: P.ObserverProgram) -> dict[str, object]:
    """Declared default for every persistent leaf path (used by tests)."""
    out = {}
    for q in prog.persistents:
        dv = default_value(q.ty) if q.name != prog.first_time else True
        for path, _ in _leaf_paths(q.ty, q.name):
            out[path] = _pick(dv, path[len(q.name):])
    return out


def _leaf_paths(ty, prefix):
    if isinstance(ty, Struct):
        for f, t in ty.fields:
            yield from _leaf_paths(t, f"{prefix}.{f}")
    else:
        yield prefix, ty
