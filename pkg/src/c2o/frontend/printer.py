"""Pretty-printer producing source that re-parses to the same AST."""

from __future__ import annotations

from fractions import Fraction

from c2o.frontend import ast as A

# binding strength; higher binds tighter
_PREC = {
    "->": 1, "=>": 2, "or": 3, "and": 4, "not": 5,
    "<": 6, "<=": 6, ">": 6, ">=": 6, "=": 6, "<>": 6,
    "+": 7, "-": 7, "*": 8, "/": 8, "div": 8, "mod": 8,
    "neg": 9, "pre": 10, "postfix": 11, "atom": 12,
}
_RIGHT_ASSOC = {"->", "=>"}
_NON_ASSOC = {"<", "<=", ">", ">=", "=", "<>"}


def format_decimal(value: Fraction) -> str:
    """Exact decimal text for a terminating fraction (always has a '.')."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    digits = 0
    while (10 ** digits) % den:
        digits += 1
        if digits > 400:
            raise ValueError(f"{value} has no terminating decimal expansion")
    scaled = num * (10 ** digits // den)
    text = str(scaled).rjust(digits + 1, "0")
    whole, frac = text[: len(text) - digits] or "0", text[len(text) - digits:]
    return f"{sign}{whole}.{frac or '0'}"


def _prec(e: A.Expr) -> int:
    if isinstance(e, A.Binary):
        return _PREC[e.op]
    if isinstance(e, A.Arrow):
        return _PREC["->"]
    if isinstance(e, A.Unary):
        return _PREC[e.op]
    if isinstance(e, A.Pre):
        return _PREC["pre"]
    if isinstance(e, A.Select):
        return _PREC["postfix"]
    if isinstance(e, A.If):
        return 0
    return _PREC["atom"]


def format_expr(e: A.Expr) -> str:
    return _fmt(e, 0)


def _fmt(e: A.Expr, need: int) -> str:
    text = _fmt_raw(e)
    if _prec(e) < need or (isinstance(e, A.If) and need > 0):
        return f"({text})"
    return text


def _fmt_raw(e: A.Expr) -> str:
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.IntLit):
        return str(e.value) if e.value >= 0 else f"({e.value})"
    if isinstance(e, A.RealLit):
        text = format_decimal(e.value)
        return text if e.value >= 0 else f"({text})"
    if isinstance(e, A.Ident):
        return e.name
    if isinstance(e, A.Select):
        return f"{_fmt(e.base, _PREC['postfix'])}.{e.field_name}"
    if isinstance(e, A.Unary):
        if e.op == "not":
            return f"not {_fmt(e.operand, _PREC['not'])}"
        inner = _fmt(e.operand, _PREC["neg"])
        if isinstance(e.operand, (A.IntLit, A.RealLit)) and not inner.startswith("("):
            inner = f"({inner})"
        elif isinstance(e.operand, A.Unary) and e.operand.op == "neg":
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, A.Pre):
        return f"pre({format_expr(e.operand)})"
    if isinstance(e, A.Arrow):
        p = _PREC["->"]
        return f"{_fmt(e.init, p + 1)} -> {_fmt(e.rest, p)}"
    if isinstance(e, A.Binary):
        p = _PREC[e.op]
        if e.op in _RIGHT_ASSOC:
            lp, rp = p + 1, p
        elif e.op in _NON_ASSOC:
            lp, rp = p + 1, p + 1
        else:
            lp, rp = p, p + 1
        return f"{_fmt(e.left, lp)} {e.op} {_fmt(e.right, rp)}"
    if isinstance(e, A.If):
        return (f"if {format_expr(e.cond)} then {format_expr(e.then)} "
                f"else {format_expr(e.else_)}")
    if isinstance(e, A.Call):
        return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, A.RecordLit):
        inner = ", ".join(f"{n} = {format_expr(x)}" for n, x in e.items)
        return f"{e.type_name} {{{inner}}}"
    raise TypeError(f"cannot format {type(e).__name__}")


def format_contract(c: A.Contract) -> str:
    lines = [f"component {c.name} {{"]
    for rd in c.records:
        fields = " ".join(f"{f} : {t};" for f, t in rd.fields)
        lines.append(f"  record {rd.name} {{ {fields} }}")
    for d in c.inputs:
        lines.append(f"  input {d.name} : {d.type};")
    for d in c.outputs:
        lines.append(f"  output {d.name} : {d.type};")
    for nd in c.nodes:
        params = ", ".join(f"{p.name} : {p.type}" for p in nd.params)
        lines.append(f"  node {nd.name}({params}) : {nd.result} = {format_expr(nd.body)};")
    for eq in c.eqs:
        lines.append(f"  eq {eq.name} : {eq.type} = {format_expr(eq.expr)};")
    for a in c.assigns:
        lines.append(f"  assign {a.name} = {format_expr(a.expr)};")
    for ck in c.assumes:
        lines.append(f'  assume "{ck.label}" : {format_expr(ck.expr)};')
    for ck in c.guarantees:
        lines.append(f'  guarantee "{ck.label}" : {format_expr(ck.expr)};')
    lines.append("}")
    return "\n".join(lines) + "\n"
