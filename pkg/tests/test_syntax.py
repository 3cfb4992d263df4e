from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzz import corpus
from pdlcheck.errors import ParseError
from pdlcheck.evaluate import Valuation
from pdlcheck.syntax import (
    SKIP,
    And,
    Assign,
    Atf,
    Binary,
    Const,
    Demonic,
    Forall,
    If,
    Not,
    PBox,
    ProbChoice,
    Seq,
    Skip,
    Unary,
    Var,
    While,
    format_expr,
    format_formula,
    format_program,
    parse_expr,
    parse_formula,
    parse_program,
    parse_valuation,
    tokenize,
)


def A(name, value):
    return Assign(name, Const(value))


# ---------------------------------------------------------------- programs


def test_skip():
    assert parse_program("skip") == Skip()


def test_fair_die_is_right_nested():
    text = "{x:=1} [1/6] {{x:=2} [1/5] {{x:=3} [1/4] {{x:=4} [1/3] {{x:=5} [1/2] {x:=6}}}}}"
    expected = A("x", 6)
    for k, p in zip((5, 4, 3, 2, 1), (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(1, 6))):
        expected = ProbChoice(Const(p), A("x", k), expected)
    assert parse_program(text) == expected


def test_demonic_choice():
    assert parse_program("{x:=0} [] {x:=1}") == Demonic(A("x", 0), A("x", 1))


def test_truncated_assignment_reports_end_of_input():
    with pytest.raises(ParseError) as info:
        parse_program("x := ")
    assert "end of input" in str(info.value)
    assert info.value.position == (1, 6)
    assert info.value.expected


def test_error_position_and_expected_set():
    with pytest.raises(ParseError) as info:
        parse_program("x := 1;\n  y 2")
    assert info.value.line == 2
    assert info.value.col == 5
    assert ":=" in info.value.expected


@pytest.mark.parametrize("text", ["while := 1", "x := if", "skip := 2", "{true := 1}"])
def test_reserved_word_as_identifier(text):
    with pytest.raises(ParseError):
        parse_program(text)


def test_sequence_is_right_associated():
    assert parse_program("a := 1; b := 2; c := 3") == Seq(A("a", 1), Seq(A("b", 2), A("c", 3)))


def test_choice_chains_nest_to_the_right():
    s = parse_program("{a := 1} [] {a := 2} [1/2] {a := 3}")
    assert s == Demonic(A("a", 1), ProbChoice(Const(Fraction(1, 2)), A("a", 2), A("a", 3)))


def test_if_without_else_defaults_to_skip():
    assert parse_program("if x > 0 { x := 0 }") == If(Binary(">", Var("x"), Const(0)), A("x", 0), SKIP)


def test_while_and_comments():
    s = parse_program("# count\nwhile i < 3 { i := i + 1 }  # done\n")
    assert s == While(Binary("<", Var("i"), Const(3)), Assign("i", Binary("+", Var("i"), Const(1))))


def test_trailing_semicolon_is_allowed():
    assert parse_program("x := 1;") == A("x", 1)
    assert parse_program("{x := 1;} [] {skip;}") == Demonic(A("x", 1), SKIP)


def test_double_semicolon_rejected():
    with pytest.raises(ParseError):
        parse_program("x := 1;; y := 2")


def test_probability_from_expression():
    s = parse_program("{x := 1} [p * 2] {x := 0}")
    assert isinstance(s, ProbChoice) and s.prob == Binary("*", Var("p"), Const(2))


# ------------------------------------------------------------- expressions


def test_precedence():
    assert parse_expr("1 + 2 * 3 == 7 && !b || c") == Binary(
        "||",
        Binary("&&", Binary("==", Binary("+", Const(1), Binary("*", Const(2), Const(3))), Const(7)), Unary("!", Var("b"))),
        Var("c"),
    )


def test_implication_is_right_associative():
    assert parse_expr("a => b => c") == Binary("=>", Var("a"), Binary("=>", Var("b"), Var("c")))


def test_comparison_is_not_associative():
    with pytest.raises(ParseError):
        parse_expr("1 < 2 < 3")


def test_literals():
    assert parse_expr("1/3") == Const(Fraction(1, 3))
    assert parse_expr("0.2") == Const(Fraction(1, 5))
    assert parse_expr("-3") == Const(-3)
    assert parse_expr("4/2") == Const(2)
    assert parse_expr("1 / 3") == Binary("/", Const(1), Const(3))
    assert parse_expr("-(3)") == Unary("-", Const(3))


def test_true_and_one_are_different_constants():
    assert Const(True) != Const(1)
    assert Const(2) == Const(Fraction(4, 2))
    assert len({Const(True), Const(1)}) == 2


def test_zero_denominator_literal():
    with pytest.raises(ParseError):
        parse_expr("1/0")


def test_tokenizer_positions():
    toks = tokenize("x :=\n 12")
    assert [(t.kind, t.line, t.col) for t in toks[:3]] == [("IDENT", 1, 1), (":=", 1, 3), ("INT", 2, 2)]


# ---------------------------------------------------------------- formulas


def test_box_of_atom():
    assert parse_formula("[skip]_{1} (x == 0)") == PBox(SKIP, Const(1), Atf(Binary("==", Var("x"), Const(0))))


def test_forall_over_referenced_program(tmp_path):
    die = "{x:=1} [1/6] {{x:=2} [1/5] {{x:=3} [1/4] {{x:=4} [1/3] {{x:=5} [1/2] {x:=6}}}}}"
    (tmp_path / "die.pgcl").write_text(die)
    phi = parse_formula("forall d in {0,1,2}. [@die]_{1/2} (x > d)", base_dir=tmp_path)
    assert isinstance(phi, Forall) and phi.domain == (0, 1, 2)
    assert phi.body == PBox(parse_program(die), Const(Fraction(1, 2)), Atf(Binary(">", Var("x"), Var("d"))))


def test_unbound_logical_variable_is_named():
    with pytest.raises(ParseError, match="unbound logical variable 'l'"):
        parse_formula("[skip]_{1} (x == l)", program_vars={"x"})


def test_empty_domain():
    with pytest.raises(ParseError, match="empty quantifier domain"):
        parse_formula("forall l in {}. (l == 1)")


def test_duplicate_domain_values():
    with pytest.raises(ParseError):
        parse_formula("forall l in {1, 2, 2/1}. (l == 1)")


def test_shadowing_binder_rejected():
    with pytest.raises(ParseError):
        parse_formula("forall l in {1}. forall l in {2}. (l == 1)")


def test_logical_name_must_not_clash_with_program_variable():
    with pytest.raises(ParseError, match="clashes"):
        parse_formula("forall x in {1}. [x := 2]_{1} (x == 2)")


def test_missing_reference_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_formula("[@nowhere]_{1} (true)", base_dir=tmp_path)


def test_bare_reference_uses_default_program():
    prog = parse_program("x := 1")
    assert parse_formula("[@]_{1} (x == 1)", default_program=prog).program == prog


def test_implication_desugars():
    a, b = "(x == 1)", "[skip]_{1} (y == 2)"
    assert parse_formula(f"{a} -> {b}") == parse_formula(f"!({a} && !{b})")


def test_disjunction_and_exists_desugar():
    assert parse_formula("(x == 1) || (y == 2)") == parse_formula("!(!(x == 1) && !(y == 2))")
    assert parse_formula("exists l in {1,2}. (x == l)") == parse_formula("!(forall l in {1,2}. !(x == l))")


def test_boolean_operators_in_atoms_become_connectives():
    assert parse_formula("x == 1 && y == 2") == And(
        Atf(Binary("==", Var("x"), Const(1))), Atf(Binary("==", Var("y"), Const(2)))
    )


def test_parenthesised_arithmetic_in_atoms():
    assert parse_formula("(x + 1) * 2 == 4") == Atf(
        Binary("==", Binary("*", Binary("+", Var("x"), Const(1)), Const(2)), Const(4))
    )


def _no_sugar(phi) -> bool:
    if isinstance(phi, Atf):
        return True
    if isinstance(phi, Not):
        return _no_sugar(phi.body)
    if isinstance(phi, And):
        return _no_sugar(phi.left) and _no_sugar(phi.right)
    if isinstance(phi, Forall):
        return _no_sugar(phi.body)
    if isinstance(phi, PBox):
        return _no_sugar(phi.body)
    return False


def test_parse_results_only_contain_core_connectives():
    phi = parse_formula("exists l in {1}. ((x == l) -> [skip]_{1/2} ((y == 1) || (z == 2)))")
    assert _no_sugar(phi)


# -------------------------------------------------------------- valuations


def test_valuation_parsing():
    assert parse_valuation("switch=true") == Valuation({"switch": True})
    assert parse_valuation("") == Valuation()
    assert parse_valuation("n=20, mu=1/2, d=0.1, k=-3") == Valuation(
        {"n": 20, "mu": Fraction(1, 2), "d": Fraction(1, 10), "k": -3}
    )


@pytest.mark.parametrize("text", ["x=1,x=2", "x", "x=", "x=abc", "1x=2", "x=1/0", "if=1"])
def test_bad_valuations(text):
    with pytest.raises(ParseError):
        parse_valuation(text)


# -------------------------------------------------------------- round trip


def test_fuzzed_programs_round_trip():
    for c in corpus(500):
        assert parse_program(format_program(c.program)) == c.program


def test_fuzzed_formulas_round_trip():
    for c in corpus(500):
        box = PBox(c.program, Const(Fraction(1, 3)), Not(And(c.phi, c.psi)))
        assert parse_formula(format_formula(box)) == box


NAMES = st.sampled_from(["x", "y", "z", "flag_1"])
VALUES = st.one_of(
    st.booleans(),
    st.integers(-50, 50),
    st.fractions(min_value=-5, max_value=5, max_denominator=9),
)


def exprs():
    leaf = st.one_of(VALUES.map(Const), NAMES.map(Var))
    ops = ["+", "-", "*", "/", "%", "==", "!=", "<", "<=", ">", ">=", "&&", "||", "=>"]
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(st.sampled_from(["!", "-"]), sub).map(lambda t: Unary(*t)),
            st.tuples(st.sampled_from(ops), sub, sub).map(lambda t: Binary(*t)),
        ),
        max_leaves=8,
    )


def stmts():
    leaf = st.one_of(st.just(SKIP), st.tuples(NAMES, exprs()).map(lambda t: Assign(*t)))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda t: Seq(*t)),
            st.tuples(sub, sub).map(lambda t: Demonic(*t)),
            st.tuples(exprs(), sub, sub).map(lambda t: ProbChoice(*t)),
            st.tuples(exprs(), sub, sub).map(lambda t: If(*t)),
            st.tuples(exprs(), sub).map(lambda t: While(*t)),
        ),
        max_leaves=6,
    )


def atoms():
    # atoms whose top operator is a connective would parse as formula nodes
    return exprs().filter(lambda e: not (isinstance(e, Unary) and e.op == "!")).filter(
        lambda e: not (isinstance(e, Binary) and e.op in ("&&", "||", "=>"))
    ).map(Atf)


def formulas():
    return st.recursive(
        atoms(),
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(st.just("l"), st.lists(VALUES, min_size=1, max_size=3, unique_by=lambda v: (isinstance(v, bool), v)), sub).map(
                lambda t: Forall(t[0], tuple(t[1]), t[2])
            ),
            st.tuples(stmts(), exprs(), sub).map(lambda t: PBox(*t)),
        ),
        max_leaves=5,
    )


@settings(max_examples=300, deadline=None)
@given(exprs())
def test_expression_round_trip(e):
    assert parse_expr(format_expr(e)) == e


@settings(max_examples=300, deadline=None)
@given(stmts())
def test_program_round_trip(s):
    assert parse_program(format_program(s)) == s


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_formula_round_trip(phi):
    # nested binders named alike are a well-formedness error, not a parse issue
    try:
        parsed = parse_formula(format_formula(phi))
    except ParseError as exc:
        assert "bound twice" in str(exc)
        return
    assert parsed == phi
