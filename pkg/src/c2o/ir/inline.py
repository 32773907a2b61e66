from __future__ import annotations

from dataclasses import replace

from c2o.errors import RecursiveNodeError
from c2o.frontend import ast as A


def _substitute(body: A.Expr, binding: dict[str, A.Expr]) -> A.Expr:
    # node bodies only mention their parameters, so plain substitution cannot capture
    def sub(n: A.Expr) -> A.Expr:
        if isinstance(n, A.Ident):
            return binding[n.name]
        return n

    return A.map_bottom_up(body, sub)


def inline_nodes(contract: A.Contract) -> A.Contract:
    """Replace every node call by the node body with arguments substituted."""
    nodes = {n.name: n for n in contract.nodes}
    done: dict[str, A.Expr] = {}
    path: list[str] = []

    def flat_body(name: str) -> A.Expr:
        if name in done:
            return done[name]
        if name in path:
            raise RecursiveNodeError(path[path.index(name):] + [name])
        path.append(name)
        body = expand(nodes[name].body)
        path.pop()
        done[name] = body
        return body

    def expand(e: A.Expr) -> A.Expr:
        def step(n: A.Expr) -> A.Expr:
            if isinstance(n, A.Call):
                nd = nodes[n.name]
                binding = {p.name: a for p, a in zip(nd.params, n.args)}
                return _substitute(flat_body(n.name), binding)
            return n

        return A.map_bottom_up(e, step)

    # surface cycles even among nodes nobody calls
    for name in nodes:
        flat_body(name)

    return replace(
        contract,
        nodes=(),
        assumes=tuple(replace(c, expr=expand(c.expr)) for c in contract.assumes),
        guarantees=tuple(replace(c, expr=expand(c.expr)) for c in contract.guarantees),
        eqs=tuple(replace(q, expr=expand(q.expr)) for q in contract.eqs),
        assigns=tuple(replace(a, expr=expand(a.expr)) for a in contract.assigns),
    )
