import json

import pytest
from hypothesis import given, strategies as st

from bilat.base import (
    AtomicRule, Base, BaseFormatError, RulePremise, atoms_of, dual_base, dual_rule, extends,
    parse_base, print_base,
)
from bilat.formula import MINUS, PLUS
from bilat.gen import random_base, random_rule


def prem(atom, pol, proofs=(), refs=()):
    return RulePremise(atom, pol, frozenset(proofs), frozenset(refs))


def shapes(b):
    return {r.name: r.shape for r in b.rules}


atom_st = st.sampled_from("pqrs")
premise_st = st.builds(prem, atom_st, st.sampled_from((PLUS, MINUS)),
                       st.frozensets(atom_st, max_size=1), st.frozensets(atom_st, max_size=1))
rule_st = st.builds(lambda prems, c, pol, n: AtomicRule(f"R{n}", tuple(prems), c, pol),
                    st.lists(premise_st, max_size=2), atom_st, st.sampled_from((PLUS, MINUS)),
                    st.integers(0, 9))
base_st = st.lists(rule_st, max_size=5, unique_by=lambda r: r.name).map(Base.of)


class TestParse:
    def test_empty(self):
        assert len(parse_base('{"rules": []}')) == 0

    def test_example_base(self, ex_base):
        assert len(ex_base) == 4
        r4 = ex_base.rule("R4")
        assert r4.premises == (prem("r", PLUS, refs={"q"}),)
        assert (r4.conclusion, r4.conclusion_polarity) == ("s", PLUS)
        assert ex_base.rule("R3").is_axiom

    def test_round_trip(self, ex_base):
        assert parse_base(print_base(ex_base)) == ex_base

    def test_duplicate_names(self):
        rule = {"name": "R", "premises": [], "conclusion": "p", "conclusionPolarity": "+"}
        with pytest.raises(BaseFormatError):
            parse_base(json.dumps({"rules": [rule, dict(rule, conclusion="q")]}))

    @pytest.mark.parametrize("bad", [
        "{", '{"rules": 3}', '{"rules": [{"name": "R", "premises": [], "conclusion": "Bad", "conclusionPolarity": "+"}]}',
        '{"rules": [{"name": "R", "premises": [], "conclusion": "p", "conclusionPolarity": "*"}]}',
        '{"rules": [{"name": "R", "premises": [], "conclusion": "bot", "conclusionPolarity": "+"}]}',
    ])
    def test_malformed(self, bad):
        with pytest.raises(BaseFormatError):
            parse_base(bad)


class TestExtends:
    def test_examples(self, ex_base):
        assert extends(ex_base, ex_base)
        axiom = AtomicRule("New", (), "t", PLUS)
        assert extends(ex_base.union([axiom]), ex_base)
        assert not extends(Base(), ex_base)

    def test_names_ignored(self, ex_base):
        renamed = Base.of(AtomicRule("X" + r.name, r.premises, r.conclusion, r.conclusion_polarity)
                          for r in ex_base.rules)
        assert extends(renamed, ex_base) and extends(ex_base, renamed)

    @given(base_st, base_st, base_st)
    def test_preorder(self, a, b, c):
        assert extends(a, a)
        if extends(a, b) and extends(b, c):
            assert extends(a, c)

    @given(base_st, base_st)
    def test_dual_transfer(self, b, extra):
        c = Base.of(list(dual_base(b).rules) + [r for r in extra.rules if r.name not in dual_base(b)])
        assert extends(c, dual_base(b))
        assert extends(dual_base(c), b)


class TestDual:
    def test_axiom(self, ex_base):
        d = dual_rule(ex_base.rule("R3"))
        assert d.premises == () and d.conclusion_polarity is MINUS and d.conclusion == "p"

    def test_discharge_swap(self, ex_base):
        d = dual_rule(ex_base.rule("R4"))
        assert d.premises == (prem("r", MINUS, proofs={"q"}),)
        assert (d.conclusion, d.conclusion_polarity) == ("s", MINUS)

    def test_example_base(self, ex_base):
        d = dual_base(ex_base)
        assert sorted(r.name for r in d.rules) == ["R1^D", "R2^D", "R3^D", "R4^D"]
        assert d.rule("R1^D").premises == (prem("p", MINUS), prem("q", PLUS))
        assert d.rule("R1^D").conclusion_polarity is MINUS
        assert d.rule("R2^D").conclusion_polarity is PLUS
        assert dual_base(Base()) == Base()

    def test_atoms(self, ex_base):
        assert atoms_of(Base()) == set()
        assert atoms_of(ex_base) == {"p", "q", "r", "s"}
        assert atoms_of(dual_base(ex_base)) == atoms_of(ex_base)

    @given(rule_st)
    def test_rule_structure(self, r):
        d = dual_rule(r)
        assert d.conclusion == r.conclusion and d.conclusion_polarity is r.conclusion_polarity.dual
        for a, b in zip(r.premises, d.premises, strict=True):
            assert b.atom == a.atom and b.polarity is a.polarity.dual
            assert b.discharged_proofs == a.discharged_refutations
            assert b.discharged_refutations == a.discharged_proofs
        assert dual_rule(d) == r

    @given(base_st)
    def test_base_involution(self, b):
        assert dual_base(dual_base(b)) == b
        assert parse_base(print_base(b)) == b


def test_random_generators_respect_bounds(rng):
    for _ in range(200):
        b = random_base(rng)
        assert len(b) <= 6
        assert atoms_of(b) <= {"p", "q", "r", "s"}
        for r in b.rules:
            assert len(r.premises) <= 2
            for pr in r.premises:
                assert len(pr.discharged_proofs) + len(pr.discharged_refutations) <= 1
    assert isinstance(random_rule(rng, "X", "pq"), AtomicRule)
