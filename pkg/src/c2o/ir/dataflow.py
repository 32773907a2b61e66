"""The flat, ordered equation list handed to observer code generation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from c2o.errors import CombinationalCycle, ResolveError
from c2o.frontend import ast as A
from c2o.frontend.printer import format_expr
from c2o.ir.decouple import fresh_names, type_ref

IR_VERSION = 1


@dataclass(frozen=True)
class Local:
    name: str
    ty: A.SemType
    expr: A.Expr
    kind: str  # "eq" | "hoisted" | "assign" | "assume" | "guarantee"


@dataclass(frozen=True)
class DataflowIR:
    name: str
    role: str  # "observer" | "model"
    records: tuple[A.RecordType, ...]
    inputs: tuple[tuple[str, A.SemType], ...]
    outputs: tuple[tuple[str, A.SemType], ...]
    locals: tuple[Local, ...]
    assumes: tuple[tuple[str, str], ...]
    guarantees: tuple[tuple[str, str], ...]
    pre_table: tuple[tuple[A.Expr, str], ...]

    def local(self, name: str) -> Optional[Local]:
        for loc in self.locals:
            if loc.name == name:
                return loc
        return None

    def pre_id(self, operand: A.Expr) -> str:
        for key, pid in self.pre_table:
            if key == operand:
                return pid
        raise KeyError(format_expr(operand))

    def to_contract(self) -> A.Contract:
        """Render back as a node-free contract (check locals are inlined)."""
        by_name = {loc.name: loc for loc in self.locals}
        records = tuple(
            A.RecordDecl(rt.name, tuple((f, type_ref(t)) for f, t in rt.fields))
            for rt in self.records)
        eqs = tuple(A.EqDecl(loc.name, type_ref(loc.ty), loc.expr)
                    for loc in self.locals if loc.kind in ("eq", "hoisted"))
        assigns = tuple(A.AssignDecl(loc.name, loc.expr)
                        for loc in self.locals if loc.kind == "assign")
        assumes = tuple(A.CheckDecl(lbl, by_name[n].expr) for lbl, n in self.assumes)
        guarantees = tuple(A.CheckDecl(lbl, by_name[n].expr) for lbl, n in self.guarantees)
        outputs = self.outputs
        return A.Contract(
            self.name, records=records,
            inputs=tuple(A.VarDecl(n, type_ref(t)) for n, t in self.inputs),
            outputs=tuple(A.VarDecl(n, type_ref(t)) for n, t in outputs),
            assumes=assumes, guarantees=guarantees, eqs=eqs, assigns=assigns,
            types={rt.name: rt for rt in self.records})

    def to_json(self) -> str:
        doc = {
            "ir_version": IR_VERSION,
            "component": self.name,
            "role": self.role,
            "records": [{"name": rt.name,
                         "fields": [{"name": f, "type": str(t)} for f, t in rt.fields]}
                        for rt in self.records],
            "inputs": [{"name": n, "type": str(t)} for n, t in self.inputs],
            "outputs": [{"name": n, "type": str(t)} for n, t in self.outputs],
            "locals": [{"name": loc.name, "kind": loc.kind, "type": str(loc.ty),
                        "expr": format_expr(loc.expr)} for loc in self.locals],
            "assumes": [{"label": lbl, "local": n} for lbl, n in self.assumes],
            "guarantees": [{"label": lbl, "local": n} for lbl, n in self.guarantees],
            "pre_table": [{"id": pid, "operand": format_expr(e)} for e, pid in self.pre_table],
        }
        return json.dumps(doc, indent=2) + "\n"


def same_step_reads(e: A.Expr) -> set[str]:
    """Identifiers read at the current step (those under ``pre`` are excluded)."""
    out: set[str] = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, A.Pre):
            continue
        if isinstance(n, A.Ident):
            out.add(n.name)
        stack.extend(n.children())
    return out


def _topo_order(items: list[Local]) -> list[Local]:
    index = {loc.name: loc for loc in items}
    deps = {loc.name: [d for d in sorted(same_step_reads(loc.expr)) if d in index]
            for loc in items}
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    order: list[Local] = []

    for root in items:
        if root.name in state:
            continue
        stack: list[tuple[str, int]] = [(root.name, 0)]
        path: list[str] = [root.name]
        state[root.name] = 1
        while stack:
            name, i = stack[-1]
            if i < len(deps[name]):
                stack[-1] = (name, i + 1)
                d = deps[name][i]
                if state.get(d) == 1:
                    raise CombinationalCycle(sorted(path[path.index(d):]))
                if d not in state:
                    state[d] = 1
                    stack.append((d, 0))
                    path.append(d)
            else:
                stack.pop()
                path.pop()
                state[name] = 2
                order.append(index[name])
    return order


def order_dataflow(contract: A.Contract, role: str = "observer") -> DataflowIR:
    """Sort locals so one forward pass never reads an unassigned value.

    ``role="model"`` treats declared outputs as computed signals (from
    ``assign``) and drops assumes/guarantees; ``role="observer"`` treats
    outputs as observed parameters and ignores ``assign``.
    """
    if role not in ("observer", "model"):
        raise ValueError(f"unknown role {role!r}")
    sem = contract.resolve
    items: list[Local] = []
    for q in contract.eqs:
        kind = "hoisted" if q.name.startswith("__") else "eq"
        items.append(Local(q.name, sem(q.type), q.expr, kind))

    assumes: list[tuple[str, str]] = []
    guarantees: list[tuple[str, str]] = []
    if role == "model":
        assigned = {a.name for a in contract.assigns}
        missing = [d.name for d in contract.outputs if d.name not in assigned]
        if missing:
            raise ResolveError("design model leaves output(s) unassigned: " + ", ".join(missing),
                               contract.span)
        out_ty = dict(contract.output_types())
        for a in contract.assigns:
            items.append(Local(a.name, out_ty[a.name], a.expr, "assign"))
    else:
        taken = {d.name for d in contract.inputs + contract.outputs} | {i.name for i in items}
        anames = fresh_names(taken, "__a")
        gnames = fresh_names(taken, "__g")
        for c in contract.assumes:
            n = next(anames)
            items.append(Local(n, A.BOOL, c.expr, "assume"))
            assumes.append((c.label, n))
        for c in contract.guarantees:
            n = next(gnames)
            items.append(Local(n, A.BOOL, c.expr, "guarantee"))
            guarantees.append((c.label, n))

    ordered = _topo_order(items)

    pre_table: list[tuple[A.Expr, str]] = []
    seen: dict[A.Expr, str] = {}
    pids = fresh_names(set(), "__p")
    for loc in ordered:
        for n in loc.expr.walk():
            if isinstance(n, A.Pre) and n.operand not in seen:
                pid = next(pids)
                seen[n.operand] = pid
                pre_table.append((n.operand, pid))

    return DataflowIR(
        name=contract.name,
        role=role,
        records=tuple(contract.record_types().values()),
        inputs=tuple(contract.input_types()),
        outputs=tuple(contract.output_types()),
        locals=tuple(ordered),
        assumes=tuple(assumes),
        guarantees=tuple(guarantees),
        pre_table=tuple(pre_table),
    )
