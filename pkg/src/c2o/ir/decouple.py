"""Hoist nested temporal subexpressions into fresh ``__t<n>`` equations.

After this pass every ``pre`` operand is free of temporal operators, and no
``->`` operand contains another ``->``. A ``pre`` applied to a temporal-free
operand stays in place: it is a plain read of last step's value.
Structurally identical hoisted expressions share one equation.
"""

from __future__ import annotations

from dataclasses import replace
from itertools import count

from c2o.frontend import ast as A


def _has_arrow(e: A.Expr) -> bool:
    return any(isinstance(n, A.Arrow) for n in e.walk())


def fresh_names(taken: set[str], prefix: str):
    for i in count(1):
        name = f"{prefix}{i}"
        if name not in taken:
            taken.add(name)
            yield name


def type_ref(ty: A.SemType) -> A.TypeRef:
    return A.TypeRef(str(ty))


class _Hoister:
    def __init__(self, taken: set[str]):
        self.table: dict[A.Expr, str] = {}
        self.names = fresh_names(taken, "__t")
        self.pending: list[A.EqDecl] = []

    def hoist(self, e: A.Expr) -> A.Expr:
        name = self.table.get(e)
        if name is None:
            name = next(self.names)
            self.table[e] = name
            self.pending.append(A.EqDecl(name, type_ref(e.ty), e, span=e.span))
        return A.Ident(name, ty=e.ty, span=e.span)

    def rewrite(self, e: A.Expr) -> A.Expr:
        def step(n: A.Expr) -> A.Expr:
            if isinstance(n, A.Pre) and A.contains_temporal(n.operand):
                return replace(n, operand=self.hoist(n.operand))
            if isinstance(n, A.Arrow):
                init, rest = n.init, n.rest
                if _has_arrow(init):
                    init = self.hoist(init)
                if _has_arrow(rest):
                    rest = self.hoist(rest)
                if init is not n.init or rest is not n.rest:
                    return replace(n, init=init, rest=rest)
            return n

        return A.map_bottom_up(e, step)

    def take(self) -> list[A.EqDecl]:
        out, self.pending = self.pending, []
        return out


def decouple_temporal(contract: A.Contract) -> A.Contract:
    """Return an equivalent contract whose temporal operands are flat."""
    taken = {d.name for d in contract.inputs + contract.outputs}
    taken |= {q.name for q in contract.eqs}
    h = _Hoister(taken)

    eqs: list[A.EqDecl] = []
    for q in contract.eqs:
        new = replace(q, expr=h.rewrite(q.expr))
        eqs.extend(h.take())
        eqs.append(new)
    assigns = []
    for a in contract.assigns:
        assigns.append(replace(a, expr=h.rewrite(a.expr)))
        eqs.extend(h.take())
    assumes = []
    for c in contract.assumes:
        assumes.append(replace(c, expr=h.rewrite(c.expr)))
        eqs.extend(h.take())
    guarantees = []
    for c in contract.guarantees:
        guarantees.append(replace(c, expr=h.rewrite(c.expr)))
        eqs.extend(h.take())

    return replace(contract, eqs=tuple(eqs), assigns=tuple(assigns),
                   assumes=tuple(assumes), guarantees=tuple(guarantees))
