"""MATLAB-compatible observer text (golden-tested as text, never executed).

Record-typed parameters stay whole (bus objects); record-typed locals and
pre-variables are split into one scalar variable per field. A numeric
constant that meets a non-constant operand in an arithmetic or comparison
operator is written bare, because MATLAB converts it to the other operand's
integer class; every other constant carries an explicit cast.
"""

from __future__ import annotations

import re
from fractions import Fraction

from c2o.codegen import program as P
from c2o.codegen.types import Float, LBool, LoweredType, Struct
from c2o.emit.osl import format_number

IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]{0,62}$")
MAX_LEN = 63

MATLAB_KEYWORDS = frozenset("""
break case catch classdef continue else elseif end for function global if otherwise
parfor persistent return spmd switch try while
""".split())

RESERVED = MATLAB_KEYWORDS | frozenset("""
ifFunction impliesFunction arrowFunction isequal mod isempty sldv true false not struct
int8 int16 int32 uint8 uint16 uint32 single double boolean logical result
""".split())

_INDENT = "    "


class Sanitizer:
    """Injective map from program names to valid, non-reserved MATLAB names."""

    def __init__(self, reserved=RESERVED):
        self.reserved = set(reserved)
        self.mapping: dict[str, str] = {}
        self.used: set[str] = set()

    def __call__(self, name: str) -> str:
        if name in self.mapping:
            return self.mapping[name]
        base = re.sub(r"[^A-Za-z0-9_]", "_", name)
        if not base or not base[0].isalpha():
            base = "v" + base
        base = base[:MAX_LEN]
        cand, k = base, 1
        while cand in self.used or cand in self.reserved:
            suffix = f"_{k}"
            cand = base[:MAX_LEN - len(suffix)] + suffix
            k += 1
        self.mapping[name] = cand
        self.used.add(cand)
        return cand


def _leaf_paths(ty: LoweredType, prefix=()):
    if isinstance(ty, Struct):
        for f, t in ty.fields:
            yield from _leaf_paths(t, prefix + (f,))
    else:
        yield prefix, ty


def _type_label(ty: LoweredType) -> str:
    if isinstance(ty, LBool):
        return "boolean"
    if isinstance(ty, Struct):
        return f"Simulink bus object {ty.name}"
    return str(ty)


class _Writer:
    def __init__(self, p: P.ObserverProgram):
        self.p = p
        self.symbols = p.symbols()
        self.structs = {s.name: s for s in p.structs}
        self.params = {n for n, _ in p.params}
        self.name = Sanitizer()
        self.fn_name = self.name(f"{p.name}_observer")
        for n, _ in p.params:
            self.name(n)
        # record-typed locals and persistents become one variable per leaf
        self.flat: dict[tuple[str, tuple], str] = {}
        for n, ty in [(q.name, q.ty) for q in p.persistents] + list(p.locals):
            if isinstance(ty, Struct):
                for path, _ in _leaf_paths(ty):
                    self.flat[(n, path)] = self.name("_".join((n,) + path))
            else:
                self.name(n)

    def ty(self, e: P.OExpr) -> LoweredType:
        return P.infer_type(e, self.symbols, self.structs)

    # -- expressions ------------------------------------------------------

    def const(self, c: P.Const, bare: bool = False) -> str:
        if isinstance(c.ty, LBool):
            return "true" if c.value else "false"
        text = format_number(Fraction(c.value) if isinstance(c.ty, Float) else c.value)
        return text if bare else f"{c.ty}({text})"

    def operand(self, e: P.OExpr, other: P.OExpr) -> str:
        if isinstance(e, P.Const) and not isinstance(other, P.Const):
            return self.const(e, bare=True)
        text = self.expr(e)
        nested = isinstance(e, P.Binary) or (isinstance(e, P.Unary) and e.op == "-")
        return f"({text})" if nested else text

    def int_cast(self, e: P.OExpr) -> str:
        if isinstance(e, P.Const):
            return self.const(e)
        return f"{self.p.int_type}({self.expr(e)})"

    def whole(self, e: P.OExpr) -> str | None:
        """Text for a record-valued expression that exists as one MATLAB value."""
        if isinstance(e, P.Var) and e.name in self.params:
            return self.name(e.name)
        if isinstance(e, P.Field):
            base = self.whole(e.base)
            return None if base is None else f"{base}.{e.name}"
        return None

    def leaf(self, e: P.OExpr, path: tuple) -> str:
        """Scalar text for field ``path`` of a record-valued expression."""
        if not path:
            return self.expr(e)
        if isinstance(e, P.Var):
            if e.name in self.params:
                return ".".join((self.name(e.name),) + path)
            return self.flat[(e.name, path)]
        if isinstance(e, P.Field):
            return self.leaf(e.base, (e.name,) + path)
        if isinstance(e, P.StructLit):
            return self.leaf(dict(e.items)[path[0]], path[1:])
        if isinstance(e, P.Call) and e.fn in ("ifFunction", "arrowFunction"):
            c, a, b = e.args
            return f"{e.fn}({self.expr(c)}, {self.leaf(a, path)}, {self.leaf(b, path)})"
        raise TypeError(f"cannot project {type(e).__name__}")

    def expr(self, e: P.OExpr) -> str:
        if isinstance(e, P.Const):
            return self.const(e)
        if isinstance(e, P.Var):
            return self.name(e.name)
        if isinstance(e, P.Field):
            whole = self.whole(e)
            return whole if whole is not None else self.leaf(e.base, (e.name,))
        if isinstance(e, P.Unary):
            if e.op == "not":
                return f"not({self.expr(e.operand)})"
            inner = self.expr(e.operand)
            return f"-({inner})" if isinstance(e.operand, P.Binary) else f"-{inner}"
        if isinstance(e, P.Binary):
            if e.op == "idiv":
                return f"{self.int_cast(e.left)} / {self.int_cast(e.right)}"
            return f"{self.operand(e.left, e.right)} {e.op} {self.operand(e.right, e.left)}"
        if isinstance(e, P.Call):
            if e.fn == "isequal" and isinstance(self.ty(e.args[0]), Struct):
                return self.record_equal(*e.args)
            return f"{e.fn}({', '.join(self.expr(a) for a in e.args)})"
        if isinstance(e, P.StructLit):
            items = ", ".join(f"'{n}', {self.expr(x)}" for n, x in e.items)
            return f"struct({items})"
        raise TypeError(type(e).__name__)

    def record_equal(self, a: P.OExpr, b: P.OExpr) -> str:
        wa, wb = self.whole(a), self.whole(b)
        if wa is not None and wb is not None:
            return f"isequal({wa}, {wb})"
        parts = [f"isequal({self.leaf(a, path)}, {self.leaf(b, path)})"
                 for path, _ in _leaf_paths(self.ty(a))]
        return "(" + " && ".join(parts) + ")" if len(parts) > 1 else parts[0]

    # -- statements -------------------------------------------------------

    def assign(self, target: str, e: P.OExpr, ty: LoweredType) -> list[str]:
        if isinstance(ty, Struct):
            return [f"{self.flat[(target, path)]} = {self.leaf(e, path)};"
                    for path, _ in _leaf_paths(ty)]
        return [f"{self.name(target)} = {self.expr(e)};"]

    def persistent_names(self, q: P.Persistent) -> list[str]:
        if isinstance(q.ty, Struct):
            return [self.flat[(q.name, path)] for path, _ in _leaf_paths(q.ty)]
        return [self.name(q.name)]

    def render(self) -> str:
        p = self.p
        params = ", ".join(self.name(n) for n, _ in p.params)
        out = [f"function {self.fn_name}({params})",
               f"% Observer for component {p.name}.",
               f"% Integer type {p.int_type}; real type "
               f"{p.float_type if p.float_type else 'unused'}."]
        out += [f"% {self.name(n)} : {_type_label(t)}" for n, t in p.params]
        out.append("%#codegen")
        for q in p.persistents:
            out += [f"persistent {n};" for n in self.persistent_names(q)]
        first = self.name(p.first_time)
        out.append(f"if isempty({first})")
        for q in p.persistents:
            out += [_INDENT + line for line in self.assign(q.name, q.init, q.ty)]
        out.append("end")
        for s in p.body:
            if isinstance(s, P.Assign):
                out += self.assign(s.target, s.expr, self.symbols[s.target])
            elif isinstance(s, P.Assume):
                out.append(f"sldv.assume({self.expr(s.expr)}); % {s.label}")
            else:
                out.append(f"sldv.prove({self.expr(s.expr)}); % {s.label}")
        for u in p.updates:
            out += self.assign(u.target, u.expr, self.symbols[u.target])
        out.append(f"{first} = false;")
        out.append("end")
        for h in p.helpers:
            out.append("")
            out += _HELPERS[h]
        return "\n".join(out) + "\n"


_HELPERS = {
    "ifFunction": [
        "function result = ifFunction(c, a, b)",
        "if c",
        _INDENT + "result = a;",
        "else",
        _INDENT + "result = b;",
        "end",
        "end",
    ],
    "impliesFunction": [
        "function result = impliesFunction(a, b)",
        "result = ~a || b;",
        "end",
    ],
    "arrowFunction": [
        "function result = arrowFunction(first_time, a, b)",
        "if first_time",
        _INDENT + "result = a;",
        "else",
        _INDENT + "result = b;",
        "end",
        "end",
    ],
}


def emit_matlab(p: P.ObserverProgram) -> str:
    return _Writer(p).render()


def valid_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name)) and name not in MATLAB_KEYWORDS
