"""Name resolution and type checking for parsed contracts."""

from __future__ import annotations

from dataclasses import replace

from c2o.errors import Diagnostic, ResolveError, TypeMismatch
from c2o.frontend import ast as A

_BUILTIN = {"bool": A.BOOL, "int": A.INT, "real": A.REAL}


def _resolve_records(contract: A.Contract) -> dict[str, A.RecordType]:
    decls = {}
    for rd in contract.records:
        if rd.name in decls or rd.name in _BUILTIN:
            raise ResolveError(f"duplicate record type {rd.name!r}", rd.span)
        seen = set()
        for fname, _ in rd.fields:
            if fname in seen:
                raise ResolveError(f"duplicate field {fname!r} in record {rd.name!r}", rd.span)
            seen.add(fname)
        decls[rd.name] = rd

    resolved: dict[str, A.RecordType] = {}
    visiting: list[str] = []

    def resolve(name: str, ref: A.TypeRef) -> A.SemType:
        if name in _BUILTIN:
            return _BUILTIN[name]
        if name in resolved:
            return resolved[name]
        if name not in decls:
            raise ResolveError(f"unknown type {name!r}", ref.span)
        if name in visiting:
            cycle = visiting[visiting.index(name):] + [name]
            raise TypeMismatch("recursive record type: " + " -> ".join(cycle), ref.span)
        visiting.append(name)
        rd = decls[name]
        fields = tuple((f, resolve(t.name, t)) for f, t in rd.fields)
        visiting.pop()
        resolved[name] = A.RecordType(name, fields)
        return resolved[name]

    for rd in contract.records:
        resolve(rd.name, A.TypeRef(rd.name, span=rd.span))
    return resolved


class _Checker:
    def __init__(self, contract: A.Contract, records: dict[str, A.RecordType]):
        self.contract = contract
        self.records = records
        self.nodes = {n.name: n for n in contract.nodes}
        self.node_sigs: dict[str, tuple[list[A.SemType], A.SemType]] = {}

    def sem(self, ref: A.TypeRef) -> A.SemType:
        if ref.name in _BUILTIN:
            return _BUILTIN[ref.name]
        if ref.name in self.records:
            return self.records[ref.name]
        raise ResolveError(f"unknown type {ref.name!r}", ref.span)

    def check(self, e: A.Expr, env: dict[str, A.SemType]) -> A.Expr:
        method = getattr(self, "_" + type(e).__name__)
        return method(e, env)

    def _BoolLit(self, e, env):
        return replace(e, ty=A.BOOL)

    def _IntLit(self, e, env):
        return replace(e, ty=A.INT)

    def _RealLit(self, e, env):
        return replace(e, ty=A.REAL)

    def _Ident(self, e, env):
        if e.name not in env:
            raise ResolveError(f"unresolved identifier {e.name!r}", e.span)
        return replace(e, ty=env[e.name])

    def _Select(self, e, env):
        base = self.check(e.base, env)
        if not isinstance(base.ty, A.RecordType):
            raise TypeMismatch(f"field selection on non-record type {base.ty}", e.span)
        fty = base.ty.field_type(e.field_name)
        if fty is None:
            raise ResolveError(f"record {base.ty.name} has no field {e.field_name!r}", e.span)
        return replace(e, base=base, ty=fty)

    def _Unary(self, e, env):
        x = self.check(e.operand, env)
        if e.op == "not":
            self._want(x, A.BOOL, "not")
            return replace(e, operand=x, ty=A.BOOL)
        if not A.is_numeric(x.ty):
            raise TypeMismatch(f"unary '-' needs int or real, got {x.ty}", e.span)
        return replace(e, operand=x, ty=x.ty)

    def _Binary(self, e, env):
        a = self.check(e.left, env)
        b = self.check(e.right, env)
        op = e.op
        if op in ("and", "or", "=>"):
            self._want(a, A.BOOL, op)
            self._want(b, A.BOOL, op)
            ty = A.BOOL
        elif op in ("=", "<>"):
            if a.ty != b.ty:
                raise TypeMismatch(f"'{op}' operands differ: {a.ty} vs {b.ty}", e.span)
            ty = A.BOOL
        else:
            if not A.is_numeric(a.ty) or a.ty != b.ty:
                raise TypeMismatch(
                    f"'{op}' needs two int or two real operands, got {a.ty} and {b.ty}", e.span)
            if op in ("div", "mod") and a.ty != A.INT:
                raise TypeMismatch(f"'{op}' is defined on int only", e.span)
            if op == "/" and a.ty != A.REAL:
                raise TypeMismatch("'/' is defined on real only; use div for int", e.span)
            ty = A.BOOL if op in A.ORDER_OPS else a.ty
        return replace(e, left=a, right=b, ty=ty)

    def _Pre(self, e, env):
        x = self.check(e.operand, env)
        return replace(e, operand=x, ty=x.ty)

    def _Arrow(self, e, env):
        a = self.check(e.init, env)
        b = self.check(e.rest, env)
        if a.ty != b.ty:
            raise TypeMismatch(f"'->' operands differ: {a.ty} vs {b.ty}", e.span)
        return replace(e, init=a, rest=b, ty=a.ty)

    def _If(self, e, env):
        c = self.check(e.cond, env)
        self._want(c, A.BOOL, "if condition")
        a = self.check(e.then, env)
        b = self.check(e.else_, env)
        if a.ty != b.ty:
            raise TypeMismatch(f"if branches differ: {a.ty} vs {b.ty}", e.span)
        return replace(e, cond=c, then=a, else_=b, ty=a.ty)

    def _Call(self, e, env):
        if e.name not in self.nodes:
            raise ResolveError(f"unknown node {e.name!r}", e.span)
        params, result = self.signature(e.name)
        if len(params) != len(e.args):
            raise TypeMismatch(
                f"node {e.name} takes {len(params)} argument(s), got {len(e.args)}", e.span)
        args = []
        for i, (arg, pty) in enumerate(zip(e.args, params)):
            x = self.check(arg, env)
            if x.ty != pty:
                raise TypeMismatch(f"argument {i + 1} of {e.name}: expected {pty}, got {x.ty}",
                                   arg.span)
            args.append(x)
        return replace(e, args=tuple(args), ty=result)

    def _RecordLit(self, e, env):
        rt = self.records.get(e.type_name)
        if rt is None:
            raise ResolveError(f"unknown record type {e.type_name!r}", e.span)
        given = {}
        for fname, fexpr in e.items:
            if fname in given:
                raise TypeMismatch(f"field {fname!r} given twice", fexpr.span)
            given[fname] = fexpr
        missing = [f for f, _ in rt.fields if f not in given]
        extra = [f for f in given if rt.field_type(f) is None]
        if missing or extra:
            raise TypeMismatch(
                f"record literal {rt.name}: missing {missing or '[]'}, unknown {extra or '[]'}",
                e.span)
        items = []
        for fname, fty in rt.fields:
            x = self.check(given[fname], env)
            if x.ty != fty:
                raise TypeMismatch(f"field {fname}: expected {fty}, got {x.ty}", x.span)
            items.append((fname, x))
        return replace(e, items=tuple(items), ty=rt)

    def _want(self, x: A.Expr, ty: A.SemType, what: str) -> None:
        if x.ty != ty:
            raise TypeMismatch(f"{what} needs {ty}, got {x.ty}", x.span)

    def signature(self, name: str):
        if name not in self.node_sigs:
            nd = self.nodes[name]
            self.node_sigs[name] = ([self.sem(p.type) for p in nd.params], self.sem(nd.result))
        return self.node_sigs[name]


def check_contract(contract: A.Contract) -> A.Contract:
    """Resolve and type-annotate ``contract``; raise on the first error."""
    records = _resolve_records(contract)
    ck = _Checker(contract, records)

    env: dict[str, A.SemType] = {}
    kinds: dict[str, str] = {}

    def declare(name: str, ty: A.SemType, kind: str, span) -> None:
        if name in kinds:
            raise ResolveError(f"{kind} {name!r} collides with {kinds[name]} of the same name",
                               span)
        kinds[name] = kind
        env[name] = ty

    for d in contract.inputs:
        declare(d.name, ck.sem(d.type), "input", d.span)
    for d in contract.outputs:
        declare(d.name, ck.sem(d.type), "output", d.span)
    for eq in contract.eqs:
        declare(eq.name, ck.sem(eq.type), "eq", eq.span)
    for nd in contract.nodes:
        if nd.name in kinds:
            raise ResolveError(f"node {nd.name!r} collides with {kinds[nd.name]} of the same name",
                               nd.span)
        kinds[nd.name] = "node"

    nodes = []
    for nd in contract.nodes:
        penv = {}
        for p in nd.params:
            if p.name in penv:
                raise ResolveError(f"duplicate parameter {p.name!r} in node {nd.name}", p.span)
            penv[p.name] = ck.sem(p.type)
        body = ck.check(nd.body, penv)
        result = ck.sem(nd.result)
        if body.ty != result:
            raise TypeMismatch(f"node {nd.name} declared {result}, body is {body.ty}", nd.span)
        nodes.append(replace(nd, body=body))

    def checks(decls, what):
        out = []
        for c in decls:
            e = ck.check(c.expr, env)
            if e.ty != A.BOOL:
                raise TypeMismatch(f"{what} {c.label!r} must be bool, got {e.ty}", c.span)
            out.append(replace(c, expr=e))
        return tuple(out)

    eqs = []
    for eq in contract.eqs:
        e = ck.check(eq.expr, env)
        if e.ty != env[eq.name]:
            raise TypeMismatch(f"eq {eq.name} declared {env[eq.name]}, got {e.ty}", eq.span)
        eqs.append(replace(eq, expr=e))

    assigns = []
    assigned = set()
    for asg in contract.assigns:
        if kinds.get(asg.name) != "output":
            raise ResolveError(f"assign target {asg.name!r} is not a declared output", asg.span)
        if asg.name in assigned:
            raise ResolveError(f"output {asg.name!r} assigned twice", asg.span)
        assigned.add(asg.name)
        e = ck.check(asg.expr, env)
        if e.ty != env[asg.name]:
            raise TypeMismatch(f"assign {asg.name} expects {env[asg.name]}, got {e.ty}", asg.span)
        assigns.append(replace(asg, expr=e))

    seen_labels = set()
    for c in contract.assumes + contract.guarantees:
        if c.label in seen_labels:
            raise ResolveError(f"duplicate check label {c.label!r}", c.span)
        seen_labels.add(c.label)
    assumes = checks(contract.assumes, "assume")
    guarantees = checks(contract.guarantees, "guarantee")

    outputs = {d.name for d in contract.outputs}
    warnings = []
    for c in assumes:
        used = sorted(A.free_names(c.expr) & outputs)
        if used:
            warnings.append(Diagnostic(
                "AssumeReadsOutput",
                f"assume {c.label!r} references output(s) {', '.join(used)}",
                c.span, severity="warning"))

    return replace(contract, nodes=tuple(nodes), eqs=tuple(eqs), assigns=tuple(assigns),
                   assumes=assumes, guarantees=guarantees, types=records,
                   warnings=tuple(warnings))
