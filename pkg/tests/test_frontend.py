from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from c2o.errors import (LexError, ParseError, ResolveError, TypeMismatch,
                        WellFormednessError)
from c2o.frontend import (check_temporal_wellformedness, format_contract, format_expr, parse,
                          parse_expr, parse_syntax, require_wellformed)
from c2o.frontend import ast as A
from c2o.fuzz import random_contract_source


def strip(e):
    return A.strip_meta(e)


def test_assume_row_parses_to_lt():
    c = parse('component B { input Input : int; assume "B input range" : Input < 20; }')
    assert len(c.assumes) == 1
    a = c.assumes[0]
    assert a.label == "B input range"
    assert strip(a.expr) == strip(A.Binary("<", A.Ident("Input"), A.IntLit(20)))


def test_empty_component():
    c = parse("component Empty { }")
    assert c.assumes == () and c.guarantees == () and c.eqs == ()


def test_eq_with_record_selection():
    c = parse("""component C { record SyncBus { Active : bool; }
                 input Sync : SyncBus; eq Active : bool = not Sync.Active; }""")
    e = c.eqs[0]
    assert e.name == "Active"
    assert strip(e.expr) == strip(A.Unary("not", A.Select(A.Ident("Sync"), "Active")))


def test_real_literals_are_exact():
    e = parse_expr("0.1 + 2.25")
    assert e.left.value == Fraction(1, 10)
    assert e.right.value == Fraction(9, 4)


@pytest.mark.parametrize("src,ast", [
    ("a -> b -> c", "a -> (b -> c)"),
    ("a => b => c", "a => (b => c)"),
    ("a or b and c", "a or (b and c)"),
    ("not a = b", "not (a = b)"),
    ("a + b * c", "a + (b * c)"),
    ("- pre x", "-(pre x)"),
    ("pre s.f", "pre (s.f)"),
    ("x -> y => z", "x -> (y => z)"),
])
def test_precedence(src, ast):
    assert strip(parse_expr(src)) == strip(parse_expr(ast))


@pytest.mark.parametrize("src,err", [
    ("component C { input x : int; guarantee \"g\" : y > 0; }", ResolveError),
    ("component C { input x : int; guarantee \"g\" : x; }", TypeMismatch),
    ("component C { input x : int; guarantee \"g\" : x / 2 > 0; }", TypeMismatch),
    ("component C { input r : real; guarantee \"g\" : r div 2.0 > 0.0; }", TypeMismatch),
    ("component C { input x : int; guarantee \"g\" : x > 0 }", ParseError),
    ("component C { input x : int; guarantee \"g\" : x > 0 > 1; }", ParseError),
    ("component C { input x : int; input x : bool; }", ResolveError),
    ("component C { input __t1 : int; }", ParseError),
    ("component C { input x : int; guarantee \"g\" : x # 1; }", LexError),
    ("component C { input x : int; guarantee \"g\" : x > 0; guarantee \"g\" : true; }",
     ResolveError),
])
def test_rejections_carry_spans(src, err):
    with pytest.raises(err) as info:
        parse(src)
    assert info.value.span.line >= 1


def _wf(expr: str):
    c = parse(f'component C {{ input x : bool; guarantee "g" : {expr}; }}')
    return [d.kind for d in check_temporal_wellformedness(c)]


def test_wellformedness_exemplars():
    assert _wf("true -> pre(pre(x))") == ["NestedPreWithoutArrow"]
    assert _wf("true -> pre(x -> pre(x))") == []
    assert _wf("pre(x) = true") == ["UnguardedPre"]


def test_wellformedness_sees_through_nodes():
    ok = """component C { input x : int; node d(a : int) : int = pre a;
            guarantee "g" : true -> d(x) > 0; }"""
    bad = """component C { input x : int; node d(a : int) : int = pre a;
             guarantee "g" : d(x) > 0; }"""
    require_wellformed(parse(ok))
    with pytest.raises(WellFormednessError) as info:
        require_wellformed(parse(bad))
    assert [d.kind for d in info.value.diagnostics] == ["UnguardedPre"]


def test_scope_lint_is_a_warning():
    c = parse('component C { input i : int; output o : int; assume "a" : o > 0; }')
    assert any(w.severity == "warning" for w in c.warnings)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_parse_print_parse_fixpoint(seed):
    c = parse_syntax(random_contract_source(seed))
    again = parse_syntax(format_contract(c))
    assert again == c


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="abx01+-*/()<>=;:. \n\"{}", max_size=60))
def test_garbage_never_crashes(text):
    try:
        parse("component C { input x : int; guarantee \"g\" : " + text + " }")
    except (LexError, ParseError, ResolveError, TypeMismatch):
        pass


def test_format_expr_round_trips_negatives():
    for src in ["-(-3)", "- x", "1 - -2", "-(a + b)"]:
        src_ast = parse_expr(src)
        assert strip(parse_expr(format_expr(src_ast))) == strip(src_ast)
