"""Deterministic JSON form of an ObserverProgram (``.osl.json``).

Top-level keys, in order: ``osl_version``, ``observer``, ``int_type``,
``float_type``, ``structs``, ``params``, ``persistents``, ``locals``,
``outputs``, ``body``, ``updates``. Expressions are single-key-tagged
objects (``const``, ``var``, ``field``, ``unary``, ``binary``, ``call``,
``struct``). Real constants are exact decimal strings. The schema ships as
``c2o/schemas/osl.schema.json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from c2o.codegen import program as P
from c2o.codegen.types import SCALAR_NAMES, FixedInt, Float, LBool, Struct
from c2o.emit.osl import OSL_VERSION, format_number
from c2o.errors import OSLParseError


def _expr(e: P.OExpr) -> dict:
    if isinstance(e, P.Const):
        if isinstance(e.ty, LBool):
            value = bool(e.value)
        elif isinstance(e.ty, FixedInt):
            value = int(e.value)
        else:
            value = format_number(Fraction(e.value))
        return {"const": value, "type": str(e.ty)}
    if isinstance(e, P.Var):
        return {"var": e.name}
    if isinstance(e, P.Field):
        return {"field": e.name, "of": _expr(e.base)}
    if isinstance(e, P.Unary):
        return {"unary": e.op, "arg": _expr(e.operand)}
    if isinstance(e, P.Binary):
        return {"binary": e.op, "left": _expr(e.left), "right": _expr(e.right)}
    if isinstance(e, P.Call):
        return {"call": e.fn, "args": [_expr(a) for a in e.args]}
    if isinstance(e, P.StructLit):
        return {"struct": e.type_name,
                "items": [{"name": n, "value": _expr(x)} for n, x in e.items]}
    raise TypeError(type(e).__name__)


def to_document(p: P.ObserverProgram) -> dict:
    body = []
    for s in p.body:
        if isinstance(s, P.Assign):
            body.append({"assign": s.target, "expr": _expr(s.expr)})
        else:
            body.append({"assume" if isinstance(s, P.Assume) else "prove": s.label,
                         "expr": _expr(s.expr)})
    return {
        "osl_version": OSL_VERSION,
        "observer": p.name,
        "int_type": str(p.int_type),
        "float_type": str(p.float_type) if p.float_type else None,
        "structs": [{"name": s.name,
                     "fields": [{"name": f, "type": str(t)} for f, t in s.fields]}
                    for s in p.structs],
        "params": [{"name": n, "type": str(t)} for n, t in p.params],
        "persistents": [{"name": q.name, "type": str(q.ty), "init": _expr(q.init)}
                        for q in p.persistents],
        "locals": [{"name": n, "type": str(t)} for n, t in p.locals],
        "outputs": list(p.outputs),
        "body": body,
        "updates": [{"target": u.target, "expr": _expr(u.expr)} for u in p.updates],
    }


def emit_json(p: P.ObserverProgram) -> str:
    return json.dumps(to_document(p), indent=2, ensure_ascii=False) + "\n"


def schema() -> dict:
    text = resources.files("c2o.schemas").joinpath("osl.schema.json").read_text()
    return json.loads(text)


class _Reader:
    def __init__(self, doc: dict):
        self.structs: dict[str, Struct] = {}
        self.doc = doc

    def ty(self, name: str):
        if name in SCALAR_NAMES:
            return SCALAR_NAMES[name]
        if name in self.structs:
            return self.structs[name]
        raise OSLParseError(f"unknown type {name!r}")

    def expr(self, d: dict) -> P.OExpr:
        if "const" in d:
            ty = self.ty(d["type"])
            v = d["const"]
            if isinstance(ty, LBool):
                return P.Const(bool(v), ty)
            if isinstance(ty, FixedInt):
                return P.Const(int(v), ty)
            return P.Const(Fraction(v), ty)
        if "var" in d:
            return P.Var(d["var"])
        if "field" in d:
            return P.Field(self.expr(d["of"]), d["field"])
        if "unary" in d:
            return P.Unary(d["unary"], self.expr(d["arg"]))
        if "binary" in d:
            return P.Binary(d["binary"], self.expr(d["left"]), self.expr(d["right"]))
        if "call" in d:
            return P.Call(d["call"], tuple(self.expr(a) for a in d["args"]))
        if "struct" in d:
            return P.StructLit(d["struct"], tuple((i["name"], self.expr(i["value"]))
                                                  for i in d["items"]))
        raise OSLParseError(f"unrecognized expression object with keys {sorted(d)}")

    def program(self) -> P.ObserverProgram:
        d = self.doc
        if d.get("osl_version") != OSL_VERSION:
            raise OSLParseError(f"unsupported osl_version {d.get('osl_version')!r}")
        for s in d["structs"]:
            self.structs[s["name"]] = Struct(
                s["name"], tuple((f["name"], self.ty(f["type"])) for f in s["fields"]))
        it = self.ty(d["int_type"])
        ft = self.ty(d["float_type"]) if d["float_type"] is not None else None
        if not isinstance(it, FixedInt) or (ft is not None and not isinstance(ft, Float)):
            raise OSLParseError("bad int_type/float_type")
        persists = tuple(P.Persistent(q["name"], self.ty(q["type"]), self.expr(q["init"]))
                         for q in d["persistents"])
        if not persists:
            raise OSLParseError("missing persistent first-step flag")
        body = []
        for s in d["body"]:
            if "assign" in s:
                body.append(P.Assign(s["assign"], self.expr(s["expr"])))
            elif "assume" in s:
                body.append(P.Assume(s["assume"], self.expr(s["expr"])))
            else:
                body.append(P.Prove(s["prove"], self.expr(s["expr"])))
        prog = P.ObserverProgram(
            name=d["observer"], int_type=it, float_type=ft,
            structs=tuple(self.structs.values()),
            params=tuple((x["name"], self.ty(x["type"])) for x in d["params"]),
            first_time=persists[0].name, persistents=persists,
            locals=tuple((x["name"], self.ty(x["type"])) for x in d["locals"]),
            body=tuple(body),
            updates=tuple(P.Update(u["target"], self.expr(u["expr"])) for u in d["updates"]),
            outputs=tuple(d["outputs"]))
        try:
            P.verify_program(prog)
        except P.ProgramError as e:
            raise OSLParseError(str(e)) from None
        return prog


def parse_json(text: str) -> P.ObserverProgram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise OSLParseError(f"invalid JSON: {e.msg} at line {e.lineno}") from None
    try:
        return _Reader(doc).program()
    except (KeyError, TypeError) as e:
        raise OSLParseError(f"malformed observer document: {e!r}") from None
