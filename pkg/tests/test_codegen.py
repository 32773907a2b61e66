import re

import pytest
from hypothesis import given, settings, strategies as st

from c2o.codegen import TypeConfig, interface_of, verify_program
from c2o.codegen import program as P
from c2o.codegen.types import FixedInt, Float, LBool, Struct, default_value
from c2o.emit import emit_osl
from c2o.errors import ConfigError, ConstantOverflow
from c2o.frontend import parse
from c2o.fuzz import random_contract
from c2o.interp import Machine
from c2o.pipeline import compile_contract

from conftest import program, traces


def body_lines(p):
    return [line.strip() for line in emit_osl(p).splitlines()]


def test_guarantee_row():
    p = program('component B { input Input : int; output Output : int;'
                ' guarantee "B output range" : Output < Input + 15; }')
    assert 'prove "B output range" (Output < (Input + int32(15)));' in body_lines(p)


def test_if_row():
    p = program('component C { input Error : bool; input Active : bool;'
                ' eq ok : bool = if Error then false else Active; guarantee "g" : ok; }')
    assert "ok := ifFunction(Error, false, Active);" in body_lines(p)


def test_counter_lowering(counter_source):
    p = program(counter_source)
    lines = body_lines(p)
    assert "x := arrowFunction(first_time, int32(0), (pre_x + int32(1)));" in lines
    assert "pre_x := x;" in lines
    m = Machine(p)
    m.reset()
    xs = []
    for _ in range(4):
        m.step({"Tick": True})
        xs.append(m.value("x"))
    assert xs == [0, 1, 2, 3]


def test_pre_used_in_two_guarantees_shares_one_persistent():
    p = program('component C { input x : int; guarantee "a" : true -> pre x > 0;'
                ' guarantee "b" : true -> pre x < 9; }')
    assert [q.name for q in p.persistents] == ["first_time", "pre_x"]


def test_statement_order():
    p = program('component C { input x : int; eq y : int = 0 -> pre x;'
                ' assume "a" : x > 0; guarantee "g" : y >= 0; }')
    text = emit_osl(p)
    assert text.index("body") < text.index("assume") < text.index("prove") \
        < text.index("update") < text.index("first_time := false")
    assert p.persistents[0].name == "first_time"


def test_pre_defaults_follow_type():
    assert default_value(LBool()) is True
    assert default_value(FixedInt(16, False)) == 0
    assert default_value(Float("single")) == 0
    s = Struct("S", (("a", LBool()), ("b", FixedInt(8, True))))
    assert default_value(s) == {"a": True, "b": 0}


@pytest.mark.parametrize("width,signed,ok,bad", [
    (8, True, -128, 128), (8, False, 255, 256), (16, True, 32767, -32769),
    (32, False, 4294967295, -1),
])
def test_constant_overflow(width, signed, ok, bad):
    cfg = TypeConfig(width, signed)
    src = 'component C {{ input x : int; guarantee "g" : x <> {}; }}'
    compile_contract(parse(src.format(ok)), cfg)
    with pytest.raises(ConstantOverflow):
        compile_contract(parse(src.format(bad)), cfg)


def test_real_contract_needs_float_precision():
    c = parse('component C { record R { v : real; } input r : R; guarantee "g" : r.v > 0.0; }')
    with pytest.raises(ConfigError):
        compile_contract(c, TypeConfig(32, True, None))
    with pytest.raises(ConfigError):
        TypeConfig(12)


def test_interface_of():
    c = parse("component C { record S { Active : bool; } input A : int; input Sync : S;"
              " output B : int; }")
    iface = interface_of(c)
    assert [p.name for p in iface.params] == ["A", "Sync", "B"]
    assert isinstance(iface.params[1].ty, type(c.input_types()[1][1]))
    none = interface_of(parse("component C { input A : int; }"))
    assert [p.name for p in none.params] == ["A"]


def test_record_param_stays_structured():
    p = program('component C { record S { Active : bool; } input Sync : S;'
                ' guarantee "g" : Sync.Active; }')
    assert isinstance(dict(p.params)["Sync"], Struct)
    assert 'prove "g" Sync.Active;' in body_lines(p) or \
        'prove "g" (Sync.Active);' in body_lines(p)




@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(16, True), (32, True)]))
def test_cast_completeness(seed, width):
    p = compile_contract(random_contract(seed), TypeConfig(*width)).program
    for line in emit_osl(p).splitlines():
        code = re.sub(r'"[^"]*"', "", line)
        if code.startswith(("osl ", "int ", "float ")):
            continue
        # every numeric literal sits directly inside a cast: int32(...) / double(...)
        for m in re.finditer(r"(?<![\w])(-?\d+(?:\.\d+)?(?:/\d+)?)", code):
            before = code[:m.start()]
            assert re.search(r"(u?int(8|16|32)|single|double)\($", before), line


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_persistent_count_and_verifier(seed):
    c = random_contract(seed)
    compiled = compile_contract(c, TypeConfig())
    assert len(compiled.program.persistents) == 1 + len(compiled.ir.pre_table)
    verify_program(compiled.program)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_no_default_reaches_a_verdict(seed):
    c = random_contract(seed)
    m = Machine(compile_contract(c, TypeConfig()).program, instrument=True)
    for steps in traces(c, seed, 3, 6):
        m.reset()
        m.execute(steps)
        assert m.violations == []


def test_taint_detector_fires_on_an_unguarded_read():
    # hand-built program reading pre_x directly at step 0
    p = program('component C { input x : int; guarantee "g" : true -> pre x > 0; }')
    g = next(s for s in p.body if isinstance(s, P.Prove))
    bad_body = tuple(P.Prove(g.label, P.Binary(">", P.Var("pre_x"), P.Const(0, p.int_type)))
                     if s is g else s for s in p.body)
    from dataclasses import replace
    bad = replace(p, body=bad_body)
    m = Machine(bad, instrument=True)
    m.step({"x": 1})
    assert [v[0] for v in m.violations] == ["default-value-observed"]
