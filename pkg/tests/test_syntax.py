import random

import pytest
from hypothesis import given, settings, strategies as st

from basiq.formulas import Atom, Bin, Derivation, Op, PerpAtom, Sequent, bell_formula, entangle, mk_qubit
from basiq.syntax import (
    MAX_NESTING,
    ParseError,
    SourceSpan,
    parse_blf,
    parse_derivation,
    parse_formula,
    parse_sequent,
    print_derivation,
    print_formula,
    print_sequent,
)

from strategies import formulas, sequents


def test_qubit_text():
    assert parse_formula("(A & A^)") == mk_qubit("A")
    assert print_formula(mk_qubit("A")) == "(A & A^)"
    assert print_formula(PerpAtom("B")) == "B^"


def test_bell_text():
    assert parse_formula("((A % B) & (A^ % B^))") == bell_formula("PhiLike")


@pytest.mark.parametrize(
    "text, op",
    [("(A & B)", Op.WITH), ("(A v B)", Op.OR), ("(A * B)", Op.TIMES),
     ("(A % B)", Op.PAR), ("(A @ B)", Op.ENT), ("(A $ B)", Op.DUAL_ENT)],
)
def test_each_connective(text, op):
    assert parse_formula(text) == Bin(op, Atom("A"), Atom("B"))


def test_unicode_aliases():
    assert parse_formula("((A ℘ B) & (A⊥ ℘ B⊥))") == bell_formula("PhiLike")
    assert parse_formula("((A ⊗ B) ∨ (A⊥ ⊗ B⊥))") == parse_formula("((A * B) v (A^ * B^))")
    assert parse_formula("((A&A⊥) § (B&B⊥))").op is Op.DUAL_ENT
    assert parse_sequent("A ⊢ A") == parse_sequent("A |- A")


def test_whitespace_is_insignificant():
    assert parse_formula("((A&A^)@(B&B^))") == parse_formula(" ( (A & A^)\t@ (B & B^) ) ") == entangle("A", "B")


@pytest.mark.parametrize(
    "text, col",
    [
        ("(A & B", 7),
        ("(A & B))", 8),
        ("(A & B)^", 8),
        ("a", 1),
        ("(A B)", 4),
        ("A & B", 3),
        ("^", 1),
        ("", 1),
        ("(A # B)", 4),
    ],
)
def test_formula_errors_are_positioned(text, col):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert err.value.span == SourceSpan(1, col)


def test_nesting_limit_reports_error_not_recursion_crash():
    deep = "(" * (MAX_NESTING + 5) + "A" + " & A)" * (MAX_NESTING + 5)
    with pytest.raises(ParseError, match="nested too deeply"):
        parse_formula(deep)


@pytest.mark.parametrize(
    "text, left, right",
    [
        ("A |- A", ("A",), ("A",)),
        ("|- (A & A^)", (), ("(A & A^)",)),
        ("((A&A^) @ (B&B^)) |- A, B", ("((A & A^) @ (B & B^))",), ("A", "B")),
        ("A, B |-", ("A", "B"), ()),
        ("|-", (), ()),
    ],
)
def test_sequents(text, left, right):
    s = parse_sequent(text)
    assert tuple(map(str, s.antecedent)) == left
    assert tuple(map(str, s.succedent)) == right


@pytest.mark.parametrize("text", ["A", "A |- B |- C", "A,, B |- C", "A, |- B", "A |- B,"])
def test_sequent_errors(text):
    with pytest.raises(ParseError):
        parse_sequent(text)


def _random_formula(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.3:
        name = rng.choice(["A", "B", "C", "Q1", "Zz9"])
        return Atom(name) if rng.random() < 0.5 else PerpAtom(name)
    return Bin(rng.choice(list(Op)), _random_formula(rng, depth - 1), _random_formula(rng, depth - 1))


def test_round_trip_1000_random_formulas():
    rng = random.Random(1234)
    for _ in range(1000):
        f = _random_formula(rng, 6)
        assert parse_formula(print_formula(f)) == f


def test_round_trip_200_random_sequents():
    rng = random.Random(99)
    for _ in range(200):
        s = Sequent(
            tuple(_random_formula(rng, 4) for _ in range(rng.randrange(4))),
            tuple(_random_formula(rng, 4) for _ in range(rng.randrange(4))),
        )
        assert parse_sequent(print_sequent(s)) == s


@given(formulas)
def test_formula_round_trip_property(f):
    assert parse_formula(print_formula(f)) == f


@given(sequents)
def test_sequent_round_trip_property(s):
    assert parse_sequent(print_sequent(s)) == s


def _total(data: bytes):
    """Value or positioned error; anything else propagates and fails the test."""
    for parse in (parse_formula, parse_sequent, parse_derivation, parse_blf):
        try:
            parse(data)
        except ParseError as e:
            assert e.span.line >= 1 and e.span.column >= 1


def test_fuzz_10k_random_byte_strings():
    rng = random.Random(2024)
    alphabet = b"AB()&v*%@$^|-, \n\t:[]#xz" + "⊥℘⊗§⊢".encode()
    for i in range(10_000):
        n = rng.randrange(0, 40)
        if i % 2:
            data = bytes(rng.randrange(256) for _ in range(n))
        else:
            data = bytes(rng.choice(alphabet) for _ in range(n))
        _total(data)


@settings(max_examples=300)
@given(st.binary(max_size=60))
def test_fuzz_property(data):
    _total(data)


def test_invalid_utf8_position():
    with pytest.raises(ParseError) as err:
        parse_formula(b"(A &\xff B)")
    assert err.value.span == SourceSpan(1, 5)


MEASUREMENT = """\
CUT: |- A
  ID: |- (A & A^)
  WITH_REFL_EXPL_1: (A & A^) |- A
"""


def test_derivation_three_nodes():
    d = parse_derivation(MEASUREMENT)
    assert d.rule == "CUT"
    assert d.size() == 3
    assert [p.rule for p in d.premises] == ["ID", "WITH_REFL_EXPL_1"]
    assert print_derivation(d) == MEASUREMENT


def test_single_leaf():
    d = parse_derivation("ID: A |- A")
    assert d == Derivation("ID", parse_sequent("A |- A"))


def test_labels_and_comments():
    d = parse_derivation("# a comment\nWEAK_R [weak.L]: A |- A, B  # trailing\n  ID: A |- A\n")
    assert d.label == "weak.L"
    assert print_derivation(d) == "WEAK_R [weak.L]: A |- A, B\n  ID: A |- A\n"


@pytest.mark.parametrize(
    "text, span",
    [
        ("CUT: |- A\n   ID: A |- A", SourceSpan(2, 4)),  # three spaces
        ("CUT: |- A\n    ID: A |- A", SourceSpan(2, 5)),  # skips a level
        ("  ID: A |- A", SourceSpan(1, 3)),
        ("ID: A |- A\nID: A |- A", SourceSpan(2, 1)),
        ("CUT: |- A\n\tID: A |- A", SourceSpan(2, 1)),
        ("ID A |- A", SourceSpan(1, 1)),
        ("ID: A |- a", SourceSpan(1, 10)),
        ("", SourceSpan(1, 1)),
    ],
)
def test_derivation_errors(text, span):
    with pytest.raises(ParseError) as err:
        parse_derivation(text)
    assert err.value.span == span


def test_unknown_rule_names_survive_parsing():
    assert parse_derivation("MAGIC: A |- A").rule == "MAGIC"


def test_blf_lists():
    items = parse_blf("# formulas\n(A & A^)\n\nA, B |- A  # goal\n")
    assert items == [mk_qubit("A"), parse_sequent("A, B |- A")]
    with pytest.raises(ParseError) as err:
        parse_blf("A\n(A &\n")
    assert err.value.span.line == 2
