from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from c2o.errors import BottomObserved, DivisionByZero
from c2o.frontend import parse, parse_syntax
from c2o.frontend.checker import check_contract
from c2o.oracle import StreamEvaluator, eval as oracle_eval, evaluate

from conftest import traces


def test_counter_stream():
    c = parse('component C { input t : bool; eq x : int = 0 -> pre x + 1; guarantee "g" : true; }')
    res = evaluate(c, [{"t": True}] * 10, record=["x"])
    assert [r["x"] for r in res.values] == list(range(10))


def test_true_then_false():
    c = parse('component C { input t : bool; guarantee "g" : true -> false; }')
    assert [v.proves["g"] for v in oracle_eval(c, [{"t": True}] * 4)] == [True, False, False, False]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_reflexivity(seed):
    r = parse('component R { input x : int; input b : bool; guarantee "g" : x = x and b = b; }')
    for steps in traces(r, seed, 3, 6):
        assert all(v.proves["g"] for v in oracle_eval(r, steps))


def test_exact_reals():
    c = parse('component C { input r : real; eq y : real = r / 3.0 * 3.0; guarantee "g" : y = r; }')
    res = evaluate(c, [{"r": Fraction(1, 10)}], record=["y"])
    assert res.values[0]["y"] == Fraction(1, 10)
    assert res.verdicts[0].proves["g"]


def test_if_is_lazy():
    c = parse('component C { input b : int; guarantee "g" : if b = 0 then true else 10 div b > 0; }')
    g = c.guarantees[0].expr
    ev = StreamEvaluator(c, [{"b": 0}])
    assert ev.value(g, 0) is True
    assert ev.evaluated(g.else_) == 0
    assert ev.evaluated(g.then) == 1
    assert oracle_eval(c, [{"b": 0}, {"b": -5}])[1].proves["g"] is False


@pytest.mark.parametrize("expr,untouched", [
    ("false and (1 div x > 0)", "right"),
    ("true or (1 div x > 0)", "right"),
    ("false => (1 div x > 0)", "right"),
])
def test_boolean_operators_short_circuit(expr, untouched):
    c = parse(f'component C {{ input x : int; guarantee "g" : {expr}; }}')
    e = c.guarantees[0].expr
    ev = StreamEvaluator(c, [{"x": 0}])
    ev.value(e, 0)
    assert ev.evaluated(getattr(e, untouched)) == 0


def test_arrow_does_not_evaluate_other_side():
    c = parse('component C { input x : int; guarantee "g" : true -> (1 div x > 0); }')
    e = c.guarantees[0].expr
    ev = StreamEvaluator(c, [{"x": 0}])
    ev.value(e, 0)
    assert ev.evaluated(e.rest) == 0


def test_trap_reported_with_step():
    c = parse('component C { input x : int; guarantee "g" : 1 div x > 0; }')
    res = evaluate(c, [{"x": 1}, {"x": 0}, {"x": 2}])
    assert res.trap is not None and res.trap.step == 1
    assert len(res.verdicts) == 1
    with pytest.raises(DivisionByZero):
        oracle_eval(c, [{"x": 0}])


def test_bottom_reaching_a_verdict():
    # skip the well-formedness check on purpose
    c = check_contract(parse_syntax('component C { input x : int; guarantee "g" : pre x > 0; }'))
    with pytest.raises(BottomObserved):
        oracle_eval(c, [{"x": 1}])


def test_vacuity_matches_definition():
    c = parse('component B { input Input : int; output Output : int;'
              ' assume "a" : Input < 20; guarantee "g" : Output < Input + 15; }')
    steps = [{"Input": i, "Output": 0} for i in (0, 25, 0)]
    assert [v.vacuous for v in oracle_eval(c, steps)] == [False, True, True]


def test_oracle_shares_no_code_with_the_compiler():
    import c2o.oracle as o
    src = open(o.__file__).read()
    for mod in ("c2o.ir", "c2o.codegen", "c2o.interp", "c2o.emit"):
        assert mod not in src
