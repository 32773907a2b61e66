"""Bounded-exhaustive and randomized checking of a bound observer/model pair.

Enumeration order for ``check_bounded``: at every step the input vectors are
visited in ``itertools.product`` order over the inputs in declaration order
(the first input varies slowest), each input's domain in the order given;
steps are explored depth-first. The first counterexample is therefore the
lexicographically smallest failing trace under that order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from c2o.codegen import TypeConfig
from c2o.errors import DivisionByZero
from c2o.frontend import ast as A
from c2o.harness.binding import HarnessBinding
from c2o.interp import Machine
from c2o.pipeline import compile_contract
from c2o.trace import Trace, format_value
from c2o.verdict import StepVerdict

Domains = Mapping[str, Sequence[Any]]

TRAP_LABEL = "<division by zero>"


def default_domain(ty: A.SemType) -> list:
    if isinstance(ty, A.BoolType):
        return [False, True]
    if isinstance(ty, A.IntType):
        return [0, 1]
    if isinstance(ty, A.RealType):
        return [Fraction(0), Fraction(1)]
    names = [f for f, _ in ty.fields]
    return [dict(zip(names, combo))
            for combo in itertools.product(*(default_domain(t) for _, t in ty.fields))]


def domains_for(signals, domains: Optional[Domains]) -> list[list]:
    domains = domains or {}
    return [list(domains[s.name]) if s.name in domains else default_domain(s.ty)
            for s in signals]


@dataclass
class Counterexample:
    label: str
    step: int
    trace: Trace  # inputs only; outputs are recomputed on replay
    table: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label, "step": self.step, "length": len(self.trace),
                "table": self.table}


@dataclass
class CheckResult:
    status: str  # "pass" | "fail" | "partial"
    explored: int
    depth: int
    counterexample: Optional[Counterexample] = None
    labels: list[str] = field(default_factory=list)
    mode: str = "bounded"
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "status": self.status,
            "explored": self.explored,
            "depth": self.depth,
            "seed": self.seed,
            "guarantees": {lbl: ("fail" if self.counterexample
                                 and self.counterexample.label == lbl
                                 else ("pass" if self.status == "pass" else "not refuted"))
                           for lbl in self.labels},
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
        }


class Harness:
    """Runs the model and the compiled observer side by side."""

    def __init__(self, binding: HarnessBinding, cfg: TypeConfig):
        binding.validate()
        self.b = binding
        self.cfg = cfg
        self.compiled = compile_contract(binding.contract, cfg)
        self.program = self.compiled.program
        self.input_names = [s.name for s in binding.inputs]

    def instances(self):
        return self.b.model.instantiate(self.cfg), Machine(self.program)

    def step(self, model, obs: Machine, inputs: Mapping[str, Any]):
        values = {s.name: inputs[s.name] for s in self.b.inputs}
        produced = model.step({port: values[sig.name] for port, sig in self.b.model_inputs})
        for port, sig in self.b.model_outputs:
            values[sig.name] = produced[port]
        params = {port: values[sig.name] for port, sig in self.b.observer_ports}
        return params, obs.step(params)

    def failure(self, v: StepVerdict) -> Optional[str]:
        if v.vacuous:
            return None
        for label, ok in v.proves.items():
            if not ok:
                return label
        return None

    def first_failure(self, steps: Sequence[Mapping[str, Any]]) -> Optional[tuple[int, str]]:
        model, obs = self.instances()
        for i, s in enumerate(steps):
            try:
                _, v = self.step(model, obs, s)
            except DivisionByZero:
                return i, TRAP_LABEL
            label = self.failure(v)
            if label:
                return i, label
            if v.vacuous:
                return None
        return None

    def table(self, steps: Sequence[Mapping[str, Any]]) -> str:
        """Every signal, observer local and verdict per step, as aligned text."""
        model, obs = self.instances()
        local_names = [n for n, _ in self.program.locals]
        rows = []
        header = None
        for i, s in enumerate(steps):
            try:
                params, v = self.step(model, obs, s)
            except DivisionByZero as e:
                rows.append([str(i), f"trap: {e.where}"])
                break
            cells = {"step": str(i)}
            for n, val in params.items():
                _flatten(cells, n, val)
            for n in local_names:
                _flatten(cells, n, obs.value(n))
            for lbl, ok in v.assumes.items():
                cells[f"assume {lbl}"] = "ok" if ok else "VIOLATED"
            for lbl, ok in v.proves.items():
                cells[f"prove {lbl}"] = "ok" if ok else "FAIL"
            if header is None:
                header = list(cells)
            rows.append([cells.get(h, "") for h in header])
        header = header or ["step"]
        widths = [max([len(h)] + [len(r[i]) for r in rows if i < len(r)])
                  for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def counterexample(self, steps: Sequence[Mapping[str, Any]], step: int, label: str
                       ) -> Counterexample:
        steps = [dict(s) for s in steps[:step + 1]]
        return Counterexample(label, step, Trace(steps), self.table(steps))


def _flatten(cells: dict, name: str, value) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(cells, f"{name}.{k}", v)
    else:
        cells[name] = format_value(value)


class _Budget(Exception):
    pass


def check_bounded(b: HarnessBinding, depth: int, domains: Optional[Domains] = None,
                  cfg: Optional[TypeConfig] = None, budget: Optional[int] = None
                  ) -> CheckResult:
    """Explore every input trace of length ``depth`` over finite domains."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    h = Harness(b, cfg or TypeConfig())
    names = h.input_names
    combos = list(itertools.product(*domains_for(b.inputs, domains)))
    k = len(combos)
    labels = [c.label for c in b.contract.guarantees]
    model, obs = h.instances()
    prefix: list[dict] = []
    explored = 0

    def dfs(level: int) -> Optional[Counterexample]:
        nonlocal explored
        for combo in combos:
            if budget is not None and explored >= budget:
                raise _Budget
            saved = (model.get_state(), obs.get_state())
            prefix.append(dict(zip(names, combo)))
            try:
                _, v = h.step(model, obs, prefix[-1])
            except DivisionByZero:
                return h.counterexample(prefix, level, TRAP_LABEL)
            label = h.failure(v)
            if label:
                return h.counterexample(prefix, level, label)
            if v.vacuous or level + 1 == depth:
                explored += k ** (depth - level - 1)
            else:
                found = dfs(level + 1)
                if found:
                    return found
            prefix.pop()
            model.set_state(saved[0])
            obs.set_state(saved[1])
        return None

    try:
        cex = dfs(0) if k else None
    except _Budget:
        return CheckResult("partial", explored, depth, None, labels)
    if cex:
        return CheckResult("fail", explored, depth, cex, labels)
    return CheckResult("pass", explored, depth, None, labels)


def random_trace(rng: random.Random, names: Sequence[str], doms: Sequence[Sequence],
                 depth: int) -> list[dict]:
    return [{n: rng.choice(d) for n, d in zip(names, doms)} for _ in range(depth)]


def shrink(h: Harness, steps: list[dict], label: str, doms: Mapping[str, Sequence]
           ) -> list[dict]:
    """Greedy: truncate, drop steps, then move values toward domain minima."""

    def fails(candidate):
        r = h.first_failure(candidate)
        return r is not None and r[1] == label

    found = h.first_failure(steps)
    steps = [dict(s) for s in steps[:found[0] + 1]]
    changed = True
    while changed:
        changed = False
        i = 0
        while len(steps) > 1 and i < len(steps):
            cand = steps[:i] + steps[i + 1:]
            if fails(cand):
                steps = cand
                changed = True
            else:
                i += 1
        for i in range(len(steps)):
            for n, dom in doms.items():
                dom = list(dom)
                if steps[i][n] not in dom:
                    continue
                for v in dom[:dom.index(steps[i][n])]:
                    cand = [dict(s) for s in steps]
                    cand[i][n] = v
                    if fails(cand):
                        steps = cand
                        changed = True
                        break
        r = h.first_failure(steps)
        steps = steps[:r[0] + 1]
    return steps


def check_random(b: HarnessBinding, trials: int, depth: int, seed: int = 0,
                 domains: Optional[Domains] = None, cfg: Optional[TypeConfig] = None
                 ) -> CheckResult:
    """Seeded random traces; the first failing trial (by index) is shrunk."""
    h = Harness(b, cfg or TypeConfig())
    names = h.input_names
    doms = domains_for(b.inputs, domains)
    labels = [c.label for c in b.contract.guarantees]
    for i in range(trials):
        rng = random.Random(f"{seed}:{i}")
        steps = random_trace(rng, names, doms, depth)
        found = h.first_failure(steps)
        if found:
            small = shrink(h, steps, found[1], dict(zip(names, doms)))
            step, label = h.first_failure(small)
            cex = h.counterexample(small, step, label)
            return CheckResult("fail", i + 1, depth, cex, labels, "random", seed)
    return CheckResult("pass", trials, depth, None, labels, "random", seed)


def replay(b: HarnessBinding, cex: Counterexample, cfg: Optional[TypeConfig] = None
           ) -> Optional[tuple[int, str]]:
    """Re-run a counterexample; returns the (step, label) it fails at."""
    return Harness(b, cfg or TypeConfig()).first_failure(cex.trace.steps)
