"""Differential testing: compiled observer versus the reference evaluator.

Every trial runs three evaluations of one random trace: the oracle (exact,
lazy), the observer on exact arithmetic, and the observer on the configured
fixed-width types. Mismatches are classified:

* ``EagerTrapDivergence``: the exact observer traps before the oracle does,
  because helper arguments are evaluated eagerly.
* ``TranslationBug``: the exact observer disagrees with the oracle in any
  other way. With no number-format effects left, this is a compiler bug.
* ``OverflowDivergence``: only the fixed-width run disagrees, and an integer
  wrapped at or before the first disagreeing step.
* ``FloatSemanticGap``: only the fixed-width run disagrees, no wrap, and the
  program uses floating point. Its magnitude is the largest relative error
  seen on a real-valued equation up to that step.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from c2o.codegen import ObserverProgram, TypeConfig
from c2o.codegen.types import Float
from c2o.frontend import Contract
from c2o.frontend import ast as A
from c2o.interp import Machine
from c2o.oracle import evaluate
from c2o.pipeline import compile_contract
from c2o.trace import Trace, leaves

CLASSES = ("TranslationBug", "OverflowDivergence", "FloatSemanticGap", "EagerTrapDivergence")
REL_TOL = 1e-9


@dataclass
class Divergence:
    kind: str
    trial: int
    step: int
    detail: str
    trace: Trace
    magnitude: float = 0.0

    def to_dict(self) -> dict:
        return {"kind": self.kind, "trial": self.trial, "step": self.step,
                "detail": self.detail, "magnitude": self.magnitude,
                "trace": [{k: _jsonable(v) for k, v in s.items()} for s in self.trace.steps]}


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, Fraction):
        return str(v)
    return v


@dataclass
class DiffReport:
    contract: str
    trials: int
    depth: int
    seed: int
    counts: dict[str, int] = field(default_factory=lambda: {k: 0 for k in CLASSES})
    examples: list[Divergence] = field(default_factory=list)
    agreeing_traps: int = 0
    max_float_gap: float = 0.0
    float_gaps_beyond_tolerance: int = 0

    @property
    def translation_bugs(self) -> int:
        return self.counts["TranslationBug"]

    def add(self, d: Divergence, keep: int = 5) -> None:
        self.counts[d.kind] += 1
        if d.kind == "FloatSemanticGap":
            self.max_float_gap = max(self.max_float_gap, d.magnitude)
            self.float_gaps_beyond_tolerance += d.magnitude > REL_TOL
        if sum(1 for e in self.examples if e.kind == d.kind) < keep:
            self.examples.append(d)

    def merge(self, other: "DiffReport") -> None:
        for k, v in other.counts.items():
            self.counts[k] += v
        self.agreeing_traps += other.agreeing_traps
        self.float_gaps_beyond_tolerance += other.float_gaps_beyond_tolerance
        self.max_float_gap = max(self.max_float_gap, other.max_float_gap)
        pool = sorted(self.examples + other.examples,
                      key=lambda d: (CLASSES.index(d.kind), d.trial))
        self.examples = [d for d in pool
                         if sum(1 for e in pool if e.kind == d.kind and e.trial < d.trial) < 5]

    def to_dict(self) -> dict:
        return {"contract": self.contract, "trials": self.trials, "depth": self.depth,
                "seed": self.seed, "counts": dict(self.counts),
                "agreeing_traps": self.agreeing_traps,
                "max_float_gap": self.max_float_gap,
                "float_gaps_beyond_tolerance": self.float_gaps_beyond_tolerance,
                "examples": [d.to_dict() for d in self.examples]}


def default_diff_domain(ty: A.SemType, cfg: TypeConfig) -> list:
    if isinstance(ty, A.BoolType):
        return [False, True]
    if isinstance(ty, A.IntType):
        it = cfg.int_type
        return [v for v in range(-10, 11) if it.contains(v)]
    if isinstance(ty, A.RealType):
        return [Fraction(k, 4) for k in range(-40, 41)]
    raise TypeError("record domains are built per field")


def _sample(rng: random.Random, ty: A.SemType, name: str, domains: Mapping[str, Sequence],
            cfg: TypeConfig):
    if name in domains:
        return rng.choice(list(domains[name]))
    if isinstance(ty, A.RecordType):
        return {f: _sample(rng, t, f"{name}.{f}", domains, cfg) for f, t in ty.fields}
    return rng.choice(default_diff_domain(ty, cfg))


def random_steps(contract: Contract, rng: random.Random, depth: int,
                 domains: Mapping[str, Sequence], cfg: TypeConfig) -> list[dict]:
    sig = contract.input_types() + contract.output_types()
    return [{n: _sample(rng, t, n, domains, cfg) for n, t in sig} for _ in range(depth)]


def _first_mismatch(a, b) -> Optional[int]:
    for i, (x, y) in enumerate(zip(a, b)):
        if x.assumes != y.assumes or x.proves != y.proves:
            return i
    return None


def _rel_err(exact, approx) -> float:
    exact = float(exact)
    approx = float(approx)
    if exact == approx:
        return 0.0
    return abs(exact - approx) / max(abs(exact), abs(approx), 1e-300)


class Differ:
    """Compiles once, then compares the three evaluations trace by trace."""

    def __init__(self, contract: Contract, cfg: TypeConfig):
        self.contract = contract
        self.cfg = cfg
        self.program: ObserverProgram = compile_contract(contract, cfg).program
        self.exact = Machine(self.program, exact=True)
        self.finite = Machine(self.program)
        self.uses_float = self.program.float_type is not None and any(
            isinstance(t, Float) for t in self.program.symbols().values())
        # (eq name, dotted leaf path) of every real-valued equation leaf
        self.real_leaves = [(q.name, path) for q in contract.eqs
                            for path, t in leaves(contract.resolve(q.type), q.name)
                            if isinstance(t, A.RealType) and path in self.finite.named]
        self.last_trap_agreed = False

    def compare(self, steps: list[dict], trial: int = 0) -> Optional[Divergence]:
        trace = Trace(steps)
        self.last_trap_agreed = False
        ref = evaluate(self.contract, steps,
                       record=sorted({n for n, _ in self.real_leaves}))
        self.exact.reset()
        ideal = self.exact.execute(steps)
        ref_end = ref.trap.step if ref.trap else len(steps)
        ideal_end = ideal.trap.step if ideal.trap else len(steps)

        m = _first_mismatch(ref.verdicts, ideal.verdicts)
        if m is not None and m < min(ref_end, ideal_end):
            return Divergence("TranslationBug", trial, m,
                              f"exact observer {ideal.verdicts[m]} vs oracle {ref.verdicts[m]}",
                              trace)
        if ideal_end < ref_end:
            return Divergence("EagerTrapDivergence", trial, ideal_end,
                              f"observer traps in {ideal.trap.where}; oracle does not", trace)
        if ref_end < ideal_end:
            return Divergence("TranslationBug", trial, ref_end,
                              f"oracle traps ({ref.trap.where}) but the observer does not",
                              trace)
        if ref.trap:
            self.last_trap_agreed = True

        self.finite.reset()
        fin = self.finite.execute(steps, record=[p for _, p in self.real_leaves])
        fin_end = fin.trap.step if fin.trap else len(steps)
        m = _first_mismatch(ref.verdicts, fin.verdicts)
        if m is not None and m >= min(ref_end, fin_end):
            m = None
        if m is None and fin_end != ref_end:
            m = min(fin_end, ref_end)
        if m is None:
            return None
        if fin.overflow_step is not None and fin.overflow_step <= m:
            return Divergence("OverflowDivergence", trial, m,
                              f"{self.cfg.int_type} wrap at step {fin.overflow_step}", trace)
        if self.uses_float:
            mag = 0.0
            for t in range(min(m + 1, len(fin.values), len(ref.values))):
                for name, path in self.real_leaves:
                    exact = ref.values[t][name]
                    for part in path.split(".")[1:]:
                        exact = exact[part]
                    mag = max(mag, _rel_err(exact, fin.values[t][path]))
            return Divergence("FloatSemanticGap", trial, m,
                              f"{self.cfg.float_precision} rounding", trace, mag)
        return Divergence("TranslationBug", trial, m,
                          "fixed-width observer disagrees without overflow", trace)


def _run_chunk(args) -> DiffReport:
    contract, cfg, indices, depth, seed, domains = args
    d = Differ(contract, cfg)
    rep = DiffReport(contract.name, len(indices), depth, seed)
    for i in indices:
        rng = random.Random(f"{seed}:{i}")
        steps = random_steps(contract, rng, rng.randint(1, depth), domains, cfg)
        div = d.compare(steps, i)
        if div:
            rep.add(div)
        elif d.last_trap_agreed:
            rep.agreeing_traps += 1
    return rep


def diff(contract: Contract, cfg: TypeConfig, trials: int, depth: int, seed: int = 0,
         domains: Optional[Mapping[str, Sequence]] = None, jobs: int = 1) -> DiffReport:
    """Compare oracle and observer on ``trials`` seeded random traces.

    Trace lengths are drawn from 1..depth. Results do not depend on ``jobs``.
    """
    domains = dict(domains or {})
    if jobs <= 1 or trials < 2 * jobs:
        rep = _run_chunk((contract, cfg, list(range(trials)), depth, seed, domains))
    else:
        chunks = [list(range(trials))[j::jobs] for j in range(jobs)]
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_run_chunk, [(contract, cfg, c, depth, seed, domains)
                                             for c in chunks]))
        rep = DiffReport(contract.name, 0, depth, seed)
        for p in parts:
            rep.merge(p)
    rep.trials = trials
    rep.examples.sort(key=lambda d: (CLASSES.index(d.kind), d.trial))
    return rep

