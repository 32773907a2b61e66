"""Type-directed generator of well-formed random contracts.

Generated contracts use every expression construct the compiler supports:
arithmetic (``+ - * / div mod`` and negation), comparisons, ``= <>`` on
scalars and records, ``and or not =>``, ``if``, ``->``, ``pre``, record
selection and literals, and node calls. Three restrictions keep traces
meaningful for differential testing:

* every divisor is guarded as ``if d = 0 then 1 else d``;
* ``*`` only multiplies small terms (inputs, literals, ``mod`` results), and
  accumulators follow the template ``x = e0 -> pre(x) + e1``, so values stay
  far from the int32 range over traces of a few dozen steps;
* ``pre`` is only produced on the right of an ``->``, so every contract is
  temporally well-formed by construction.

Output is source text, so the parser is exercised too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

BOOL, INT, REAL, REC = "bool", "int", "real", "Sync"
REC_FIELDS = (("Active", BOOL), ("Level", INT))


@dataclass
class _Scope:
    names: dict[str, list[str]] = field(default_factory=lambda: {BOOL: [], INT: [], REAL: [],
                                                                 REC: []})
    # names whose previous value may be read with pre
    delayed: dict[str, list[str]] = field(default_factory=lambda: {BOOL: [], INT: [], REAL: [],
                                                                   REC: []})
    nodes: list[tuple[str, list[str], str]] = field(default_factory=list)


class ContractGenerator:
    def __init__(self, rng: random.Random, reals: bool = True, records: bool = True,
                 nodes: bool = True, max_depth: int = 3):
        self.rng = rng
        self.reals = reals
        self.records = records
        self.use_nodes = nodes
        self.max_depth = max_depth

    # -- leaves -------------------------------------------------------------

    def literal(self, ty: str) -> str:
        r = self.rng
        if ty == BOOL:
            return r.choice(("true", "false"))
        if ty == INT:
            return str(r.randint(-9, 9))
        if ty == REAL:
            return f"{r.randint(-20, 20) / 4:.2f}"
        return f"Sync{{Active = {self.literal(BOOL)}, Level = {self.literal(INT)}}}"

    def leaf(self, ty: str, s: _Scope) -> str:
        pool = s.names[ty]
        if pool and self.rng.random() < 0.75:
            return self.rng.choice(pool)
        return self.literal(ty)

    def small_int(self, s: _Scope, guarded: bool) -> str:
        k = self.rng.random()
        if k < 0.4:
            return self.leaf(INT, s)
        if k < 0.7:
            return f"({self.expr(INT, s, 1, guarded)} mod {self.rng.randint(2, 7)})"
        if k < 0.85 and self.records and s.names[REC]:
            return f"{self.rng.choice(s.names[REC])}.Level"
        return self.literal(INT)

    def small_real(self, s: _Scope) -> str:
        if s.names[REAL] and self.rng.random() < 0.7:
            return self.rng.choice(s.names[REAL])
        return self.literal(REAL)

    def guard(self, d: str, ty: str) -> str:
        zero, one = ("0", "1") if ty == INT else ("0.0", "1.0")
        return f"(if {d} = {zero} then {one} else {d})"

    # -- expressions ----------------------------------------------------------

    def expr(self, ty: str, s: _Scope, depth: int, guarded: bool = False) -> str:
        """A random expression of type ``ty``; ``guarded`` means ``pre`` is allowed."""
        if ty == REAL and not self.reals:
            raise ValueError("reals disabled")
        r = self.rng
        if depth >= self.max_depth or r.random() < 0.2:
            return self.leaf(ty, s)
        choices = ["if", "arrow"]
        if guarded and s.delayed[ty]:
            choices += ["pre", "pre"]
        if ty == BOOL:
            choices += ["cmp", "cmp", "eq", "logic", "logic", "not", "implies"]
            if self.reals:
                choices.append("cmpreal")
            if self.records and s.names[REC]:
                choices += ["receq", "select"]
        elif ty == INT:
            choices += ["add", "add", "mul", "div", "mod", "neg"]
            if self.records and s.names[REC]:
                choices.append("select")
        elif ty == REAL:
            choices += ["add", "mul", "rdiv", "neg"]
        else:
            choices += ["lit"]
        if s.nodes and any(n[2] == ty for n in s.nodes):
            choices.append("call")
        kind = r.choice(choices)
        d = depth + 1
        sub = lambda t=ty, g=guarded: self.expr(t, s, d, g)  # noqa: E731

        if kind == "if":
            return f"(if {sub(BOOL)} then {sub()} else {sub()})"
        if kind == "arrow":
            return f"({sub(ty, guarded)} -> {sub(ty, True)})"
        if kind == "pre":
            name = r.choice(s.delayed[ty])
            if ty != REC and r.random() < 0.3:
                # pre of a compound operand, which is itself unguarded
                op = "or" if ty == BOOL else "+"
                return f"(pre ({name} {op} {self.expr(ty, s, d, False)}))"
            return f"(pre {name})"
        if kind == "cmp":
            return f"({sub(INT)} {r.choice(('<', '<=', '>', '>='))} {sub(INT)})"
        if kind == "cmpreal":
            return f"({sub(REAL)} {r.choice(('<', '<=', '>', '>=', '=', '<>'))} {sub(REAL)})"
        if kind == "eq":
            t = r.choice((BOOL, INT))
            return f"({sub(t)} {r.choice(('=', '<>'))} {sub(t)})"
        if kind == "receq":
            return f"({sub(REC)} {r.choice(('=', '<>'))} {sub(REC)})"
        if kind == "logic":
            return f"({sub()} {r.choice(('and', 'or'))} {sub()})"
        if kind == "not":
            return f"(not {sub()})"
        if kind == "implies":
            return f"({sub()} => {sub()})"
        if kind == "select":
            f = "Active" if ty == BOOL else "Level"
            base = sub(REC)
            return f"({base}).{f}"
        if kind == "add":
            return f"({sub()} {r.choice(('+', '-'))} {sub()})"
        if kind == "mul":
            if ty == INT:
                return f"({self.small_int(s, guarded)} * {self.small_int(s, guarded)})"
            return f"({self.small_real(s)} * {self.small_real(s)})"
        if kind == "div":
            op = r.choice(("div", "mod"))
            return f"({sub()} {op} {self.guard(sub(), INT)})"
        if kind == "mod":
            return f"({sub()} mod {self.guard(sub(), INT)})"
        if kind == "rdiv":
            return f"({sub()} / {self.guard(self.small_real(s), REAL)})"
        if kind == "neg":
            return f"(- {sub()})"
        if kind == "lit":
            return f"Sync{{Active = {sub(BOOL)}, Level = {sub(INT)}}}"
        if kind == "call":
            name, params, _ = r.choice([n for n in s.nodes if n[2] == ty])
            return f"{name}({', '.join(sub(p) for p in params)})"
        raise AssertionError(kind)

    # -- declarations -----------------------------------------------------------

    def types(self) -> list[str]:
        out = [BOOL, INT]
        if self.reals:
            out.append(REAL)
        return out

    def node(self, idx: int, s: _Scope) -> tuple[str, str]:
        r = self.rng
        result = r.choice(self.types())
        params = [r.choice(self.types()) for _ in range(r.randint(1, 3))]
        inner = _Scope(nodes=list(s.nodes))
        decl = []
        for i, t in enumerate(params):
            inner.names[t].append(f"p{i}")
            inner.delayed[t].append(f"p{i}")
            decl.append(f"p{i} : {t}")
        body = self.expr(result, inner, 1, False)
        name = f"n{idx}"
        s.nodes.append((name, params, result))
        return name, f"  node {name}({', '.join(decl)}) : {result} = {body};"

    def accumulator(self, name: str, ty: str, s: _Scope) -> str:
        if ty == BOOL:
            e0 = self.expr(BOOL, s, 1)
            e1 = self.expr(BOOL, s, 2, True)
            return f"{e0} -> ((pre {name}) {self.rng.choice(('or', 'and'))} {e1})"
        step = self.small_int(s, True) if ty == INT else self.small_real(s)
        return f"{self.expr(ty, s, 2)} -> ((pre {name}) + {step})"

    def generate(self, name: str = "Fuzz") -> str:
        r = self.rng
        s = _Scope()
        lines = [f"component {name} {{"]
        if self.records:
            lines.append("  record Sync { Active : bool; Level : int; }")
        sigs = [("input", "i0", INT), ("input", "i1", INT), ("input", "b0", BOOL),
                ("output", "o0", INT), ("output", "ob", BOOL)]
        if self.reals:
            sigs.append(("input", "r0", REAL))
        if self.records:
            sigs.append(("input", "S", REC))
        for role, n, t in sigs:
            lines.append(f"  {role} {n} : {t};")
            s.names[t].append(n)
            s.delayed[t].append(n)
        if self.use_nodes:
            for i in range(r.randint(0, 2)):
                lines.append(self.node(i, s)[1])
        tys = self.types() + ([REC] if self.records else [])
        for i in range(r.randint(1, 4)):
            ty = r.choice(tys)
            n = f"e{i}"
            if ty != REC and r.random() < 0.5:
                s.delayed[ty].append(n)
                body = self.accumulator(n, ty, s)
            else:
                body = self.expr(ty, s, 1)
            lines.append(f"  eq {n} : {ty} = {body};")
            s.names[ty].append(n)
            if n not in s.delayed[ty]:
                s.delayed[ty].append(n)
        for i in range(r.randint(0, 2)):
            lines.append(f'  assume "a{i}" : {self.expr(BOOL, s, 1)};')
        for i in range(r.randint(1, 3)):
            lines.append(f'  guarantee "g{i}" : {self.expr(BOOL, s, 1)};')
        lines.append("}")
        return "\n".join(lines) + "\n"


def random_contract_source(seed, **opts) -> str:
    return ContractGenerator(random.Random(seed), **opts).generate()


def random_contract(seed, **opts):
    from c2o.frontend import parse
    return parse(random_contract_source(seed, **opts))
