import json

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from c2o.codegen import TypeConfig
from c2o.emit import EmitTarget, emit, emit_json, emit_matlab, emit_osl, parse_json, parse_osl
from c2o.emit.json_ import schema
from c2o.emit.matlab import IDENT_RE, RESERVED, Sanitizer, valid_identifier
from c2o.errors import OSLParseError
from c2o.fuzz import random_contract
from c2o.pipeline import compile_contract

from conftest import CORPUS, GOLDEN, load, program

# Table 1, right-hand column: the form each row's contract must produce
TABLE1 = {
    "component.agc": ["function Brake_observer(Pedal, Pressure)"],
    "assume.agc": ["sldv.assume(Input < 20)"],
    "guarantee.agc": ["sldv.prove(Output < (Input + 15))"],
    "equation.agc": ["Active = not(Sync.Active)"],
    "if_then_else.agc": ["ifFunction(Error, false, Active)"],
    "data_types.agc": ["% Count : int32", "% Gain : double", "% Enabled : boolean"],
    "record_types.agc": ["% Sync : Simulink bus object SyncBus", "Sync.Level"],
    "logic_ops.agc": ["not(P)", "~=", "(-B)", "&&", "||"],
    "arith_ops.agc": ["(A + B) > (A - B)", "(A * B) < 3", "A >= B", "A <= B", "X / 2.0"],
    "mod_op.agc": ["mod(A, int32(2))"],
    "record_equal.agc": ["isequal(Echo, Sync)"],
    "div_op.agc": ["int32(A) / int32(3)"],
    "implies.agc": ["impliesFunction(Error, not(Ok))", "result = ~a || b;"],
    "arrow.agc": ["arrowFunction(first_time, int32(0), pre_x + 1)",
                  "function result = arrowFunction(first_time, a, b)"],
    "pre.agc": ["persistent pre_Held;", "pre_Held = Held;"],
}


@pytest.mark.parametrize("row", sorted(TABLE1))
def test_table1_matlab_forms(row):
    text = emit_matlab(program((CORPUS / "table1" / row).read_text()))
    for form in TABLE1[row]:
        assert form in text, form


def test_every_table1_row_has_a_contract():
    assert sorted(p.name for p in (CORPUS / "table1").glob("*.agc")) == sorted(TABLE1)


def test_matlab_init_guard_and_typed_widths():
    p = program((CORPUS / "table1" / "data_types.agc").read_text(), TypeConfig(8, False, "single"))
    text = emit_matlab(p)
    assert "if isempty(first_time)" in text
    assert "% Count : uint8" in text and "% Gain : single" in text


@pytest.mark.parametrize("target,golden", [("osl", "range_uint16.osl"),
                                           ("matlab", "range_uint16.m")])
def test_uint16_golden(target, golden):
    p = program((CORPUS / "table1" / "guarantee.agc").read_text(), TypeConfig(16, False))
    assert emit(p, target) == (GOLDEN / golden).read_text()


@pytest.mark.parametrize("target", list(EmitTarget))
def test_bscu_golden(target):
    p = compile_contract(load("bscu/com.agc"), TypeConfig()).program
    assert emit(p, target) == (GOLDEN / f"COM{target.extension}").read_text()


def test_only_used_helpers_are_emitted():
    text = emit_matlab(program((CORPUS / "table1" / "assume.agc").read_text()))
    assert "function result" not in text


def test_empty_contract_round_trips():
    p = program("component Empty { }")
    assert parse_osl(emit_osl(p)) == p
    assert parse_json(emit_json(p)) == p
    text = emit_matlab(p)
    assert "persistent first_time;" in text and "sldv" not in text


def test_minimal_handwritten_osl():
    p = parse_osl("""osl 1
observer X
int int32
float double
param a : int32;
persistent first_time : bool = true;
local y : int32;
body
  y := a;
update
  first_time := false;
end
""")
    assert p.name == "X" and len(p.body) == 1 and p.body[0].target == "y"


_HEAD = "osl 1\nobserver X\nint int32\nfloat double\npersistent first_time : bool = true;\n"


@pytest.mark.parametrize("text,needle", [
    (_HEAD + "body\nend\n", "update"),
    ("osl 1\nobserver X\nint int13\n", "int13"),
    (_HEAD + "local y : int32;\nbody\n  y := ;\n", "expression"),
])
def test_malformed_osl(text, needle):
    with pytest.raises(OSLParseError) as info:
        parse_osl(text)
    assert needle in str(info.value)


def test_osl_round_trip_200_fuzzed_programs():
    for seed in range(200):
        cfg = TypeConfig(*[(32, True, "double"), (16, True, "single")][seed % 2])
        p = compile_contract(random_contract(seed), cfg).program
        text = emit_osl(p)
        assert parse_osl(text) == p, seed
        assert emit_osl(parse_osl(text)) == text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_json_round_trip_and_schema(seed):
    p = compile_contract(random_contract(seed), TypeConfig()).program
    text = emit_json(p)
    jsonschema.validate(json.loads(text), schema())
    assert parse_json(text) == p
    assert list(json.loads(text)) == ["osl_version", "observer", "int_type", "float_type",
                                      "structs", "params", "persistents", "locals", "outputs",
                                      "body", "updates"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_emission_is_deterministic(seed):
    a = compile_contract(random_contract(seed), TypeConfig()).program
    b = compile_contract(random_contract(seed), TypeConfig()).program
    for t in EmitTarget:
        assert emit(a, t) == emit(b, t)


@settings(max_examples=200)
@given(st.lists(st.text(min_size=1, max_size=80), min_size=1, max_size=30, unique=True))
def test_sanitizer_is_injective_and_valid(names):
    s = Sanitizer()
    out = [s(n) for n in names]
    assert len(set(out)) == len(out)
    for o in out:
        assert IDENT_RE.match(o) and o not in RESERVED and valid_identifier(o)
    assert [s(n) for n in names] == out


def test_sanitizer_handles_collisions_and_reserved_words():
    s = Sanitizer()
    assert s("end") != "end"
    assert s("a.b") == "a_b"
    assert s("a_b") != s("a.b")
    assert s("_x")[0].isalpha()
    assert len(s("x" * 100)) <= 63


def test_matlab_names_are_valid_for_fuzzed_programs():
    import re
    for seed in range(50):
        text = emit_matlab(compile_contract(random_contract(seed), TypeConfig()).program)
        for m in re.finditer(r"^(?:persistent )?([A-Za-z_]\w*) = ", text, re.M):
            assert valid_identifier(m.group(1)), m.group(1)
