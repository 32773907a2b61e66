"""OSL: the neutral observer step language, text form.

Layout (one declaration per line, ``--`` starts a comment)::

    osl 1
    observer NAME
    int int32
    float double            -- or: float none
    struct S { a : bool; b : int32; }
    param Input : int32;
    persistent first_time : bool = true;
    persistent pre_x : int32 = int32(0);
    local x : int32;
    output x;               -- design models only
    body
      x := arrowFunction(first_time, int32(0), (pre_x + int32(1)));
      assume "range" (Input < int32(20));
      prove "c" (x >= int32(0));
    update
      pre_x := x;
      first_time := false;
    end

Expressions are fully parenthesized; every numeric constant is a cast.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from c2o.codegen import program as P
from c2o.codegen.types import BOOL_L, SCALAR_NAMES, FixedInt, Float, LBool, Struct
from c2o.errors import OSLParseError, Span
from c2o.frontend.printer import format_decimal

OSL_VERSION = 1


def format_number(v) -> str:
    if isinstance(v, Fraction):
        try:
            return format_decimal(v)
        except ValueError:
            return f"{v.numerator}/{v.denominator}"
    return str(v)


def type_name(ty) -> str:
    return str(ty)


def format_oexpr(e: P.OExpr) -> str:
    if isinstance(e, P.Const):
        if isinstance(e.ty, LBool):
            return "true" if e.value else "false"
        return f"{e.ty}({format_number(e.value)})"
    if isinstance(e, P.Var):
        return e.name
    if isinstance(e, P.Field):
        return f"{format_oexpr(e.base)}.{e.name}"
    if isinstance(e, P.Unary):
        sep = " " if e.op == "not" else ""
        return f"({e.op}{sep}{format_oexpr(e.operand)})"
    if isinstance(e, P.Binary):
        return f"({format_oexpr(e.left)} {e.op} {format_oexpr(e.right)})"
    if isinstance(e, P.Call):
        return f"{e.fn}({', '.join(format_oexpr(a) for a in e.args)})"
    if isinstance(e, P.StructLit):
        items = ", ".join(f"{n} = {format_oexpr(x)}" for n, x in e.items)
        return f"{e.type_name}{{{items}}}"
    raise TypeError(type(e).__name__)


def emit_osl(p: P.ObserverProgram) -> str:
    out = [f"osl {OSL_VERSION}", f"observer {p.name}", f"int {p.int_type}",
           f"float {p.float_type if p.float_type else 'none'}"]
    for s in p.structs:
        fields = " ".join(f"{f} : {t};" for f, t in s.fields)
        out.append(f"struct {s.name} {{ {fields} }}")
    out += [f"param {n} : {t};" for n, t in p.params]
    out += [f"persistent {q.name} : {q.ty} = {format_oexpr(q.init)};" for q in p.persistents]
    out += [f"local {n} : {t};" for n, t in p.locals]
    out += [f"output {n};" for n in p.outputs]
    out.append("body")
    for s in p.body:
        if isinstance(s, P.Assign):
            out.append(f"  {s.target} := {format_oexpr(s.expr)};")
        else:
            kw = "assume" if isinstance(s, P.Assume) else "prove"
            out.append(f"  {kw} {json.dumps(s.label)} {format_oexpr(s.expr)};")
    out.append("update")
    out += [f"  {u.target} := {format_oexpr(u.expr)};" for u in p.updates]
    out.append(f"  {p.first_time} := false;")
    out.append("end")
    return "\n".join(out) + "\n"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|--[^\n]*)
  | (?P<nl>\n)
  | (?P<num>-?[0-9]+(?:\.[0-9]+)?(?:/[0-9]+)?)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|<=|>=|~=|&&|\|\||[-+*/<>(){},;:.=])
""", re.VERBOSE)

_BINOPS = {"+", "-", "*", "/", "idiv", "<", "<=", ">", ">=", "~=", "&&", "||"}


class _Tok:
    __slots__ = ("kind", "text", "span")

    def __init__(self, kind, text, span):
        self.kind, self.text, self.span = kind, text, span

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.span}"


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OSLParseError(f"unexpected character {text[pos]!r}", Span(line, col))
        kind = m.lastgroup
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind != "ws":
                toks.append(_Tok(kind, m.group(), Span(line, col)))
            col += m.end() - m.start()
        pos = m.end()
    toks.append(_Tok("eof", "", Span(line, col)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.structs: dict[str, Struct] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        got = tok.text or "end of input"
        raise OSLParseError(f"{msg} (found {got!r})", tok.span)

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            self.fail(f"expected {text or kind}")
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("ident", "op")

    def ident(self) -> str:
        return self.take(kind="ident").text

    def type_(self):
        t = self.take(kind="ident")
        if t.text in SCALAR_NAMES:
            return SCALAR_NAMES[t.text]
        if t.text in self.structs:
            return self.structs[t.text]
        self.fail("unknown type", t)

    def number(self, ty) -> object:
        t = self.take(kind="num")
        if isinstance(ty, FixedInt):
            if "." in t.text or "/" in t.text:
                self.fail("integer constant expected", t)
            return int(t.text)
        return Fraction(t.text)

    def expr(self) -> P.OExpr:
        t = self.tok
        if t.text == "(" and t.kind == "op":
            self.i += 1
            if self.at("-") or (self.at("not") and self.peek().text != ")"):
                op = self.take().text
                arg = self.expr()
                self.take(")")
                return P.Unary(op, arg)
            left = self.expr()
            op = self.tok
            if op.text not in _BINOPS:
                self.fail("expected binary operator", op)
            self.i += 1
            right = self.expr()
            self.take(")")
            return P.Binary(op.text, left, right)
        if t.kind != "ident":
            self.fail("expected expression")
        self.i += 1
        if t.text in ("true", "false"):
            e: P.OExpr = P.Const(t.text == "true", BOOL_L)
        elif self.at("(") and t.text in SCALAR_NAMES:
            ty = SCALAR_NAMES[t.text]
            if isinstance(ty, LBool):
                self.fail("boolean constants are written true/false", t)
            self.take("(")
            e = P.Const(self.number(ty), ty)
            self.take(")")
        elif self.at("("):
            if t.text not in P.HELPERS:
                self.fail("unknown function", t)
            self.take("(")
            args = [self.expr()]
            while self.at(","):
                self.take(",")
                args.append(self.expr())
            self.take(")")
            e = P.Call(t.text, tuple(args))
        elif self.at("{"):
            if t.text not in self.structs:
                self.fail("unknown struct", t)
            self.take("{")
            items = []
            while not self.at("}"):
                if items:
                    self.take(",")
                name = self.ident()
                self.take("=")
                items.append((name, self.expr()))
            self.take("}")
            e = P.StructLit(t.text, tuple(items))
        else:
            e = P.Var(t.text)
        while self.at("."):
            self.take(".")
            e = P.Field(e, self.ident())
        return e

    def decl(self, kw: str) -> bool:
        return self.at(kw) and self.peek().text != ":="

    def program(self) -> P.ObserverProgram:
        self.take("osl")
        v = self.take(kind="num")
        if v.text != str(OSL_VERSION):
            self.fail(f"unsupported OSL version (this reader handles {OSL_VERSION})", v)
        self.take("observer")
        name = self.ident()
        self.take("int")
        it = self.type_()
        if not isinstance(it, FixedInt):
            self.fail("int section needs an integer type")
        self.take("float")
        if self.at("none"):
            self.take("none")
            ft = None
        else:
            ft = self.type_()
            if not isinstance(ft, Float):
                self.fail("float section needs single or double")
        while self.decl("struct"):
            self.take("struct")
            sname = self.ident()
            self.take("{")
            fields = []
            while not self.at("}"):
                f = self.ident()
                self.take(":")
                fields.append((f, self.type_()))
                self.take(";")
            self.take("}")
            self.structs[sname] = Struct(sname, tuple(fields))
        params, persists, locals_, outputs = [], [], [], []
        while self.decl("param"):
            self.take("param")
            n = self.ident()
            self.take(":")
            params.append((n, self.type_()))
            self.take(";")
        while self.decl("persistent"):
            self.take("persistent")
            n = self.ident()
            self.take(":")
            ty = self.type_()
            self.take("=")
            persists.append(P.Persistent(n, ty, self.expr()))
            self.take(";")
        while self.decl("local"):
            self.take("local")
            n = self.ident()
            self.take(":")
            locals_.append((n, self.type_()))
            self.take(";")
        while self.decl("output"):
            self.take("output")
            outputs.append(self.ident())
            self.take(";")
        if not persists:
            self.fail("missing persistent first-step flag")
        first = persists[0].name

        self.take("body")
        body: list[P.Stmt] = []
        while not self.decl("update"):
            if self.tok.kind == "eof" or self.decl("end"):
                self.fail("missing update section")
            if self.decl("assume") or self.decl("prove"):
                kw = self.take().text
                label = json.loads(self.take(kind="str").text)
                e = self.expr()
                body.append(P.Assume(label, e) if kw == "assume" else P.Prove(label, e))
            else:
                target = self.ident()
                self.take(":=")
                body.append(P.Assign(target, self.expr()))
            self.take(";")
        self.take("update")
        updates = []
        saw_reset = False
        while not self.decl("end"):
            if self.tok.kind == "eof":
                self.fail("missing end")
            if saw_reset:
                self.fail(f"{first} := false must be the last update")
            target_tok = self.tok
            target = self.ident()
            self.take(":=")
            e = self.expr()
            self.take(";")
            if target == first:
                if e != P.Const(False, BOOL_L):
                    self.fail(f"{first} may only be reset to false", target_tok)
                saw_reset = True
            else:
                updates.append(P.Update(target, e))
        if not saw_reset:
            self.fail(f"update section must end with {first} := false")
        self.take("end")
        self.take(kind="eof")
        prog = P.ObserverProgram(
            name=name, int_type=it, float_type=ft, structs=tuple(self.structs.values()),
            params=tuple(params), first_time=first, persistents=tuple(persists),
            locals=tuple(locals_), body=tuple(body), updates=tuple(updates),
            outputs=tuple(outputs))
        try:
            P.verify_program(prog)
        except P.ProgramError as e:
            raise OSLParseError(str(e), Span(1, 1)) from None
        return prog


def parse_osl(text: str) -> P.ObserverProgram:
    """Inverse of ``emit_osl``; raises OSLParseError with a line/column."""
    return _Parser(text).program()
