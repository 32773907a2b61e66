import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from c2o.arith import int_div, int_mod, to_single
from c2o.codegen import TypeConfig
from c2o.codegen.types import FixedInt, LBool
from c2o.errors import DivisionByZero
from c2o.frontend import parse
from c2o.fuzz import random_contract
from c2o.interp import KERNEL, Machine, run
from c2o.interp.machine import _fast
from c2o.pipeline import compile_contract
from c2o.trace import Trace

from conftest import program, traces

KERNELS = ["python"] + (["cython"] if _fast is not None else [])


@pytest.mark.parametrize("kernel", KERNELS)
def test_counter_stream(kernel, counter_source):
    m = Machine(program(counter_source), kernel=kernel)
    res = m.execute([{"Tick": False}] * 4, record=["x"])
    assert [r["x"] for r in res.values] == [0, 1, 2, 3]
    assert all(v.proves["c"] for v in res.verdicts)


@pytest.mark.parametrize("kernel", KERNELS)
def test_true_arrow_false(kernel):
    p = program('component C { input t : bool; guarantee "g" : true -> false; }')
    verdicts = Machine(p, kernel=kernel).run([{"t": True}] * 5)
    assert [v.proves["g"] for v in verdicts] == [True, False, False, False, False]


def test_vacuity_from_the_violating_step_on():
    p = program('component B { input Input : int; output Output : int;'
                ' assume "B input range" : Input < 20;'
                ' guarantee "B output range" : Output < Input + 15; }')
    steps = [{"Input": i, "Output": 0} for i in (1, 2, 25, 3, 4)]
    verdicts = run(p, steps)
    assert [v.vacuous for v in verdicts] == [False, False, True, True, True]
    assert [v.assumes["B input range"] for v in verdicts] == [True, True, False, True, True]


def test_reset_and_isolation(counter_source):
    p = program(counter_source)
    m = Machine(p)
    m.reset()
    first = m.run([{"Tick": True}] * 3)
    assert m.run([{"Tick": True}] * 3) == first
    a, b = Machine(p), Machine(p)
    a.step({"Tick": True})
    a.step({"Tick": True})
    b.step({"Tick": True})
    assert (a.value("x"), b.value("x")) == (1, 0)


def test_state_snapshots(counter_source):
    m = Machine(program(counter_source))
    m.step({"Tick": True})
    saved = m.get_state()
    m.step({"Tick": True})
    m.step({"Tick": True})
    m.set_state(saved)
    m.step({"Tick": True})
    assert m.value("x") == 1


def test_division_conventions():
    assert [int_div(a, b) for a, b in [(7, 2), (-7, 2), (7, -2), (-7, -2)]] == [3, -3, -3, 3]
    assert [int_mod(a, b) for a, b in [(7, 2), (-7, 2), (7, -2), (-7, -2)]] == [1, 1, -1, -1]


def _ref_wrap(v, signed):
    v &= 0xFF
    return v - 256 if signed and v >= 128 else v


@pytest.mark.parametrize("kernel", KERNELS)
@pytest.mark.parametrize("signed", [True, False])
def test_width8_wrap_exhaustive(kernel, signed):
    lo, hi = (-128, 127) if signed else (0, 255)
    p = program("""component W { input a : int; input b : int;
        eq s : int = a + b; eq d : int = a - b; eq m : int = a * b;
        eq q : int = a div (if b = 0 then 1 else b);
        guarantee "g" : true; }""", TypeConfig(8, signed))
    steps = [{"a": a, "b": b} for a in range(lo, hi + 1) for b in range(lo, hi + 1)]
    res = Machine(p, kernel=kernel).execute(steps, record=["s", "d", "m", "q"])
    for st_, got in zip(steps, res.values):
        a, b = st_["a"], st_["b"]
        assert got["s"] == _ref_wrap(a + b, signed)
        assert got["d"] == _ref_wrap(a - b, signed)
        assert got["m"] == _ref_wrap(a * b, signed)
        assert got["q"] == _ref_wrap(int_div(a, b if b else 1), signed)


@pytest.mark.parametrize("kernel", KERNELS)
def test_overflow_step_is_reported(kernel):
    p = program('component X { input X : int; guarantee "g" : X + 1 > X; }', TypeConfig(8))
    res = Machine(p, kernel=kernel).execute([{"X": 5}, {"X": 127}, {"X": 0}])
    assert [v.proves["g"] for v in res.verdicts] == [True, False, True]
    assert res.overflow_step == 1


@pytest.mark.parametrize("kernel", KERNELS)
@pytest.mark.parametrize("src", [
    'component Z { input a : int; input b : int; guarantee "g" : a div b = 0; }',
    'component Z { input a : real; input b : real; guarantee "g" : a / b = 0.0; }',
])
def test_division_by_zero_traps(kernel, src):
    c = parse(src)
    zero = 0 if "int" in src else Fraction(0)
    steps = [{"a": zero + 1, "b": zero + 1}, {"a": zero + 1, "b": zero}]
    m = Machine(compile_contract(c, TypeConfig()).program, kernel=kernel)
    with pytest.raises(DivisionByZero) as info:
        m.run(steps)
    assert info.value.step == 1
    assert m.execute(steps).trap is not None


def test_untaken_branch_traps_eagerly():
    p = program('component Z { input b : int; guarantee "g" : if b = 0 then true else 1 div b > 0; }')
    with pytest.raises(DivisionByZero):
        run(p, [{"b": 0}])


def test_single_precision_rounds():
    p = program('component S { input r : real; eq y : real = r * 0.1; guarantee "g" : true; }',
                TypeConfig(32, True, "single"))
    for kernel in KERNELS:
        res = Machine(p, kernel=kernel).execute([{"r": Fraction(3)}], record=["y"])
        assert res.values[0]["y"] == to_single(to_single(3.0) * to_single(0.1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([TypeConfig(), TypeConfig(8),
                                               TypeConfig(16, True, "single")]))
def test_kernels_agree(seed, cfg):
    if len(KERNELS) < 2:
        pytest.skip("compiled kernel not built")
    c = random_contract(seed)
    try:
        p = compile_contract(c, cfg).program
    except Exception:
        return
    dom = {"i0": list(range(-128, 128)), "i1": list(range(-128, 128))} if cfg.int_width == 8 else {}
    for steps in traces(c, seed, 4, 12, cfg, dom):
        a = Machine(p, kernel="python").execute(steps)
        b = Machine(p, kernel="cython").execute(steps)
        assert a.verdicts == b.verdicts
        assert a.overflow_step == b.overflow_step
        assert (a.trap is None) == (b.trap is None)


def random_default(rng, ty):
    if isinstance(ty, LBool):
        return rng.choice([True, False])
    if isinstance(ty, FixedInt):
        return rng.randint(ty.lo, ty.hi)
    return Fraction(rng.randint(-99, 99), 7)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_initial_value_opacity(seed):
    c = random_contract(seed)
    p = compile_contract(c, TypeConfig()).program
    m = Machine(p)
    rng = random.Random(seed)
    code = m.code
    for steps in traces(c, seed, 3, 8):
        m.reset()
        base = m.execute(steps)
        defaults = {}
        for leaf, _ in code.persistents:
            if leaf.reg == code.first_time:
                continue
            defaults[leaf.path] = random_default(rng, leaf.ty)
        m.reset(defaults)
        other = m.execute(steps)
        assert other.verdicts == base.verdicts


def test_kernel_selection():
    assert KERNEL in ("cython", "python")
    if _fast is None:
        pytest.skip("compiled kernel not built")
    # exact and instrumented modes exist only in the Python kernel
    with pytest.raises(ValueError):
        _fast.Core([], 1, [0], 32, True, False, 0, 0, exact=True)


def test_trace_csv_round_trip():
    c = parse("component T { record S { a : bool; v : real; } input s : S; input n : int; }")
    iface = c.input_types()
    tr = Trace([{"s": {"a": True, "v": Fraction(1, 3)}, "n": -4},
                {"s": {"a": False, "v": Fraction(5, 2)}, "n": 7}])
    text = tr.to_csv(iface)
    assert text.splitlines()[0] == "s.a,s.v,n"
    assert "1/3" in text and "2.5" in text
    assert Trace.from_csv(text, iface) == tr
    assert Trace.from_json(tr.to_json(), iface) == tr
    with pytest.raises(ValueError):
        Trace.from_csv("s.a,n\ntrue,1\n", iface)
