import pytest
from hypothesis import given, settings, strategies as st

from bilat.formula import (
    BOT, MINUS, PLUS, TOP, And, Atom, CoImp, Imp, Or, ParseError, Polarity,
    atoms_of_formula, complexity, dual_formula, parse_formula, print_formula, subformula_closure,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")

atoms = st.sampled_from("pqrs").map(Atom)
leaves = st.one_of(atoms, st.just(BOT), st.just(TOP))


def formulas(max_leaves=12):
    return st.recursive(
        leaves,
        lambda sub: st.one_of(*(st.tuples(sub, sub).map(lambda t, k=k: k(*t)) for k in (And, Or, Imp, CoImp))),
        max_leaves=max_leaves,
    )


def depth(f):
    if isinstance(f, (And, Or, Imp, CoImp)):
        return 1 + max(depth(f.left), depth(f.right))
    return 0


class TestParse:
    def test_atom(self):
        assert parse_formula("p") == p

    def test_negation_sugar(self):
        assert parse_formula("~p") == Imp(p, BOT)
        assert parse_formula("-p") == CoImp(TOP, p)

    def test_precedence(self):
        assert parse_formula("p & q | r") == Or(And(p, q), r)
        assert parse_formula("p | q -> r") == Imp(Or(p, q), r)
        assert parse_formula("~p & q") == And(Imp(p, BOT), q)

    def test_associativity(self):
        assert parse_formula("p -> q -> r") == Imp(p, Imp(q, r))
        assert parse_formula("p <- q <- r") == CoImp(CoImp(p, q), r)
        assert parse_formula("p & q & r") == And(And(p, q), r)

    def test_constants(self):
        assert parse_formula("bot") == BOT
        assert parse_formula("(top)") == TOP

    @pytest.mark.parametrize("text", ["p -> q <- r", "p <- q -> r"])
    def test_mixed_arrows_rejected(self, text):
        with pytest.raises(ParseError):
            parse_formula(text)

    def test_mixed_arrows_with_parens(self):
        assert parse_formula("p -> (q <- r)") == Imp(p, CoImp(q, r))
        assert parse_formula("(p -> q) <- r") == CoImp(Imp(p, q), r)

    @pytest.mark.parametrize("text, offset", [("p &", 3), ("(p", 2), ("p q", 2), ("", 0), ("p $ q", 2)])
    def test_error_offsets(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse_formula(text)
        assert info.value.offset == offset
        assert info.value.expected

    def test_uppercase_start_is_not_an_atom(self):
        with pytest.raises(ParseError):
            parse_formula("P")


class TestPrint:
    def test_right_assoc(self):
        assert print_formula(Imp(p, Imp(q, r))) == "p -> q -> r"
        assert print_formula(Imp(Imp(p, q), r)) == "(p -> q) -> r"

    def test_coimp(self):
        assert print_formula(CoImp(TOP, p)) == "top <- p"
        assert print_formula(CoImp(CoImp(p, q), r)) == "p <- q <- r"
        assert print_formula(CoImp(p, CoImp(q, r))) == "p <- (q <- r)"

    def test_precedence_parens(self):
        assert print_formula(And(Or(p, q), r)) == "(p | q) & r"
        assert print_formula(Or(And(p, q), r)) == "p & q | r"

    def test_mixed_arrows_get_parens(self):
        assert print_formula(Imp(p, CoImp(q, r))) == "p -> (q <- r)"
        assert print_formula(CoImp(Imp(p, q), r)) == "(p -> q) <- r"


class TestDual:
    def test_examples(self):
        assert dual_formula(p) == p
        assert dual_formula(Imp(p, q)) == CoImp(q, p)
        assert dual_formula(Or(p, And(q, r))) == And(p, Or(q, r))
        assert dual_formula(BOT) == TOP and dual_formula(TOP) == BOT
        assert dual_formula(CoImp(p, And(q, BOT))) == Imp(Or(q, TOP), p)

    def test_polarity_dual(self):
        assert PLUS.dual is MINUS and MINUS.dual is PLUS
        assert Polarity.parse("-") is MINUS


class TestClosure:
    def test_examples(self):
        assert subformula_closure({p}) == {p}
        assert subformula_closure({Imp(p, q)}) == {Imp(p, q), p, q}
        assert subformula_closure({CoImp(TOP, p)}) == {CoImp(TOP, p), TOP, p}

    def test_atoms_and_complexity(self):
        f = parse_formula("(p -> q) & top")
        assert atoms_of_formula(f) == {"p", "q"}
        assert complexity(f) == 3  # two connectives plus the constant


@settings(max_examples=300)
@given(formulas())
def test_dual_is_involution(f):
    assert dual_formula(dual_formula(f)) == f


@settings(max_examples=300)
@given(formulas())
def test_print_parse_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@given(formulas())
def test_dual_preserves_complexity(f):
    assert complexity(dual_formula(f)) == complexity(f)


@given(st.frozensets(formulas(6), max_size=3), st.frozensets(formulas(6), max_size=3))
def test_closure_idempotent_and_monotone(a, b):
    ca = subformula_closure(a)
    assert subformula_closure(ca) == ca
    assert a <= ca
    assert ca <= subformula_closure(a | b)


def test_involution_depth_six(rng):
    from bilat.gen import random_formula
    for _ in range(500):
        f = random_formula(rng, "pq", 6, leaf_bias=0.1)
        assert depth(f) <= 6
        assert dual_formula(dual_formula(f)) == f
