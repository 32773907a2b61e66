"""Acceptance gates. Run with ``pytest tests/test_acceptance.py -s`` to see
one PASS/FAIL line per criterion."""

import random
import re
import time

from c2o.codegen import TypeConfig
from c2o.emit import emit_matlab
from c2o.errors import BindingError, InterfaceMismatch
from c2o.frontend import check_temporal_wellformedness, parse
from c2o.fuzz import random_contract, random_contract_source
from c2o.harness import ContractModel, Signal, bind, check_bounded, diff, registered, replay
from c2o.harness.diff import DiffReport, REL_TOL
from c2o.interp import Machine
from c2o.pipeline import compile_contract

from conftest import CORPUS, load, program, traces
from test_emitters import TABLE1
from test_interp import random_default


def gate(n, title, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {n}. {title}" + (f": {detail}" if detail else ""))
    assert ok, detail


def test_1_table1_golden_suite():
    t0 = time.perf_counter()
    missing = []
    for row, forms in TABLE1.items():
        text = emit_matlab(program((CORPUS / "table1" / row).read_text()))
        missing += [f"{row}: {f}" for f in forms if f not in text]
    dt = time.perf_counter() - t0
    gate(1, "Table 1 golden suite", not missing and dt < 5,
         f"{len(TABLE1) - len({m.split(':')[0] for m in missing})}/{len(TABLE1)} rows, {dt:.2f}s"
         + (f", missing {missing}" if missing else ""))


def _wf(expr):
    c = parse(f'component C {{ input x : bool; guarantee "g" : {expr}; }}')
    return [d.kind for d in check_temporal_wellformedness(c)]


def test_2_temporal_semantics(counter_source):
    res = Machine(program(counter_source)).execute([{"Tick": False}] * 10, record=["x"])
    counter = [r["x"] for r in res.values] == list(range(10))
    p = program('component C { input t : bool; guarantee "g" : true -> false; }')
    tf = [v.proves["g"] for v in Machine(p).run([{"t": True}] * 10)] == [True] + [False] * 9
    wf = _wf("true -> pre(x -> pre(x))") == [] and _wf("true -> pre(pre(x))") != []
    gate(2, "temporal semantics", counter and tf and wf,
         f"counter={counter} true->false={tf} wellformedness={wf}")


def test_3_pre_deduplication():
    src = """component D { input x : int;
      guarantee "a" : true -> pre(x) > 0;
      guarantee "b" : true -> pre(x) < 10;
      eq y : int = 0 -> pre(x) + 1;
      guarantee "c" : true -> (pre(x) = y or y > 0); }"""
    names = [q.name for q in program(src).persistents]
    gate(3, "pre deduplication", len(names) == 2 and names[0] == "first_time",
         f"persistents={names}")


TOKENS = {"+": r" \+ ", "-": r" - ", "*": r" \* ", "/": r" / ", "div": r" div ", "mod": r" mod ",
          "<": r" < ", "<=": r" <= ", ">": r" > ", ">=": r" >= ", "=": r" = ", "<>": r" <> ",
          "and": r" and ", "or": r" or ", "not": r"\(not ", "=>": r" => ", "if": r"\(if ",
          "->": r" -> ", "pre": r"\(pre ", "record literal": r"Sync\{", "field": r"\.Level|\.Active",
          "node": r"n\d\("}


def test_4_differential_equivalence_gate():
    contracts, per = 500, 20
    t0 = time.perf_counter()
    total, pairs = DiffReport("all", 0, 20, 0), 0
    seen = set()
    for k in range(contracts):
        src = random_contract_source(k)
        seen |= {op for op, rx in TOKENS.items() if re.search(rx, src)}
        rep = diff(parse(src), TypeConfig(), per, 20, seed=k)
        pairs += rep.trials
        total.merge(rep)
    dt = time.perf_counter() - t0
    uncovered = sorted(set(TOKENS) - seen)
    ok = (pairs >= 10_000 and total.translation_bugs == 0
          and total.float_gaps_beyond_tolerance == 0 and not uncovered and dt < 120)
    gate(4, "differential equivalence gate", ok,
         f"{pairs} pairs, TranslationBug={total.translation_bugs}, "
         f"overflow={total.counts['OverflowDivergence']}, "
         f"float gaps > {REL_TOL:g}={total.float_gaps_beyond_tolerance}, "
         f"uncovered ops={uncovered}, {dt:.1f}s")


def test_5_bscu_bounded_study():
    t0 = time.perf_counter()
    contract = load("bscu/com.agc")
    good = check_bounded(bind(contract, ContractModel(load("bscu/com_model.agc"))), 6)
    b = bind(contract, ContractModel(load("bscu/com_model_initial_step.agc")))
    bad = check_bounded(b, 6)
    cex = bad.counterexample
    replays = cex is not None and replay(b, cex) == (cex.step, cex.label)
    dt = time.perf_counter() - t0
    ok = good.passed and cex is not None and cex.step == 0 and replays and dt < 60
    gate(5, "BSCU bounded micro-study", ok,
         f"correct={good.status} ({good.explored} traces), defect step="
         f"{cex.step if cex else None} {cex.label if cex else ''!r}, replay={replays}, {dt:.1f}s")


def test_6_semantic_gap():
    c = parse('component X { input X : int; guarantee "g": X + 1 > X; }')
    small = diff(c, TypeConfig(8), 500, 6, seed=0, domains={"X": list(range(-128, 128))})
    wide = diff(c, TypeConfig(32), 500, 6, seed=0, domains={"X": list(range(-100, 101))})
    ok = (small.counts["OverflowDivergence"] > 0 and small.translation_bugs == 0
          and sum(wide.counts.values()) == 0)
    gate(6, "semantic-gap demonstration", ok,
         f"int8 {small.counts}, int32 {sum(wide.counts.values())} divergences")


def test_7_initial_value_opacity():
    changed, runs = [], 0
    for seed in range(1000):
        c = random_contract(seed)
        m = Machine(compile_contract(c, TypeConfig()).program)
        code = m.code
        rng = random.Random(seed)
        for steps in traces(c, seed, 2, 8):
            m.reset()
            base = m.execute(steps).verdicts
            m.reset({leaf.path: random_default(rng, leaf.ty)
                     for leaf, _ in code.persistents if leaf.reg != code.first_time})
            runs += 1
            if m.execute(steps).verdicts != base:
                changed.append(seed)
    gate(7, "initial-value opacity", not changed,
         f"1000 contracts, {runs} runs, changed verdicts in {changed[:5]}")


def test_8_interface_mismatch():
    try:
        bind(load("drift/channel.agc"), ContractModel(load("drift/channel_model_drifted.agc")))
        details = []
    except InterfaceMismatch as e:
        details = e.details
    field_level = any(d.startswith("Sync.Level") for d in details) and \
        any(d.startswith("Sync.Lvl") for d in details)
    b = bind(load("range/range.agc"), registered("identity"))
    sig = b.model_inputs[0][1]
    b.model_inputs = [(b.model_inputs[0][0], Signal(sig.name, sig.ty, sig.role))]
    try:
        b.validate()
        dup = False
    except BindingError:
        dup = True
    gate(8, "interface-mismatch detection", field_level and dup,
         f"drift diagnostics={details}, duplicate port rejected={dup}")
