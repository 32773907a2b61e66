"""Temporal well-formedness: every ``pre`` must be guarded by a ``->``.

Walking up from a ``pre`` node, the first temporal context met must be the
right-hand side of an arrow. Meeting the root first means the ``pre`` is
read at the initial step (``UnguardedPre``); meeting another ``pre`` first
means two delays stack with no arrow between them (``NestedPreWithoutArrow``).
Arrow left-hand sides are transparent.
"""

from __future__ import annotations

from c2o.errors import Diagnostic, WellFormednessError
from c2o.frontend import ast as A

_ROOT, _PRE, _RHS = "root", "pre", "rhs"


def expr_diagnostics(e: A.Expr, ctx: str = _ROOT) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    stack = [(e, ctx)]
    while stack:
        node, ctx = stack.pop()
        if isinstance(node, A.Pre):
            if ctx == _ROOT:
                out.append(Diagnostic("UnguardedPre",
                                      "'pre' is not on the right-hand side of any '->'",
                                      node.span))
            elif ctx == _PRE:
                out.append(Diagnostic("NestedPreWithoutArrow",
                                      "nested 'pre' with no '->' in between", node.span))
            stack.append((node.operand, _PRE))
        elif isinstance(node, A.Arrow):
            stack.append((node.rest, _RHS))
            stack.append((node.init, ctx))
        else:
            stack.extend((k, ctx) for k in reversed(node.children()))
    return sorted(out, key=lambda d: (d.span.line, d.span.col, d.kind))


def check_temporal_wellformedness(contract: A.Contract) -> list[Diagnostic]:
    """Return every temporal diagnostic; an empty list means well-formed.

    Node calls are inlined first so a ``pre`` inside a node body is judged
    in the context of each call site.
    """
    from c2o.ir.inline import inline_nodes

    flat = inline_nodes(contract)
    diags: list[Diagnostic] = []
    for e in flat.all_exprs():
        diags.extend(expr_diagnostics(e))
    return diags


def require_wellformed(contract: A.Contract) -> None:
    diags = check_temporal_wellformedness(contract)
    if diags:
        raise WellFormednessError(diags)
