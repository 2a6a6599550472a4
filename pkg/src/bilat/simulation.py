"""Simulation bases: atomic mirrors of N2Int* over a finite set of formulas.

Every formula of a subformula-closed set gets an atom (atoms keep their own
name, compound formulas get ``f_<k>``), and every N2Int* rule instance over
the set becomes an atomic rule over those atoms.  Rules whose conclusion is
an arbitrary formula (the schematic ``q`` of the collapse and elimination
rules) are instantiated over a finite query universe.

Rule names have the form ``family:label:atom`` or ``family:label:atom:q``,
e.g. ``imp:I(+):f_0`` or ``or:E1(+):f_2:r``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .atomic import AssumptionLeaf, AtomicDeduction, AtomicSequent, RuleNode
from .base import AtomicRule, Base, RulePremise
from .formula import (
    BOT, MINUS, PLUS, TOP, And, Atom, Bot, CoImp, Formula, Imp, Or, Polarity, Top,
    print_formula, subformula_closure,
)
from .nd import Apply, Assume, NDJudgment, NDProof

__all__ = [
    "AtomicMapping", "SimulationSpec", "SimulationError", "FRESH_QUERY_ATOM",
    "build_mapping", "build_simulation_base", "default_universe",
    "translate_nd_to_atomic", "translate_atomic_to_nd", "map_judgment", "unmap_sequent",
]

RESERVED_RE = re.compile(r"f_\d+\Z")
FRESH_QUERY_ATOM = "q_fresh"


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class AtomicMapping:
    table: dict = field(hash=False)  # Formula -> atom name

    def __hash__(self):
        return hash(frozenset(self.table.items()))

    def __getitem__(self, f: Formula) -> str:
        try:
            return self.table[f]
        except KeyError:
            raise SimulationError(f"{print_formula(f)} is outside the mapping's domain") from None

    @property
    def domain(self) -> frozenset:
        return frozenset(self.table)

    def image(self) -> frozenset[str]:
        return frozenset(self.table.values())

    def inverse(self) -> dict[str, Formula]:
        return {a: f for f, a in self.table.items()}

    def preimage(self, atom: str) -> Formula:
        """The formula an atom stands for; atoms outside the image stand for themselves."""
        return self.inverse().get(atom, Atom(atom))

    def to_json(self) -> dict:
        return {"map": {print_formula(f): a for f, a in sorted(self.table.items(), key=lambda kv: kv[1])}}


def build_mapping(theta: Iterable[Formula]) -> AtomicMapping:
    closure = subformula_closure(theta)
    table: dict[Formula, str] = {}
    for f in closure:
        if isinstance(f, Atom):
            if RESERVED_RE.match(f.name):
                raise SimulationError(f"atom {f.name} collides with the reserved names f_<digits>")
            table[f] = f.name
    compound = sorted((f for f in closure if not isinstance(f, Atom)), key=print_formula)
    for k, f in enumerate(compound):
        table[f] = f"f_{k}"
    return AtomicMapping(table)


@dataclass(frozen=True)
class SimulationSpec:
    theta: frozenset
    query_universe: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta", frozenset(self.theta))
        if self.query_universe is not None:
            object.__setattr__(self, "query_universe", frozenset(self.query_universe))


def default_universe(m: AtomicMapping) -> frozenset[str]:
    fresh = FRESH_QUERY_ATOM
    image = m.image()
    k = 1
    while fresh in image:
        fresh = f"{FRESH_QUERY_ATOM}{k}"
        k += 1
    return image | {fresh}


def _universe(spec: SimulationSpec, m: AtomicMapping) -> list[str]:
    uni = default_universe(m) if spec.query_universe is None else spec.query_universe
    missing = m.image() - uni
    if missing:
        raise SimulationError(f"query universe lacks mapped atoms {sorted(missing)}")
    return sorted(uni)


def _prem(atom: str, pol: Polarity, proofs=(), refutations=()) -> RulePremise:
    return RulePremise(atom, pol, frozenset(proofs), frozenset(refutations))


def _rules_for(f: Formula, m: AtomicMapping, universe: list[str]) -> list[AtomicRule]:
    p = m[f]
    out: list[AtomicRule] = []

    def rule(family, label, premises, concl, pol, q=None):
        name = f"{family}:{label}:{p}" + (f":{q}" if q is not None else "")
        out.append(AtomicRule(name, tuple(premises), concl, pol))

    if isinstance(f, Top):
        rule("top", "(+)", [], p, PLUS)
        for q in universe:
            rule("top", "(-)", [_prem(p, MINUS)], q, MINUS, q)
            rule("top", "(-)_2", [_prem(p, MINUS)], q, PLUS, q)
        return out
    if isinstance(f, Bot):
        rule("bot", "(-)", [], p, MINUS)
        for q in universe:
            rule("bot", "(+)_1", [_prem(p, PLUS)], q, PLUS, q)
            rule("bot", "(+)_2", [_prem(p, PLUS)], q, MINUS, q)
        return out
    a, b = m[f.left], m[f.right]
    if isinstance(f, Imp):
        rule("imp", "I(+)", [_prem(b, PLUS, proofs=[a])], p, PLUS)
        rule("imp", "E(+)", [_prem(p, PLUS), _prem(a, PLUS)], b, PLUS)
        rule("imp", "I(-)", [_prem(a, PLUS), _prem(b, MINUS)], p, MINUS)
        rule("imp", "E1(-)", [_prem(p, MINUS)], a, PLUS)
        rule("imp", "E2(-)", [_prem(p, MINUS)], b, MINUS)
    elif isinstance(f, CoImp):
        rule("coimp", "I(+)", [_prem(a, PLUS), _prem(b, MINUS)], p, PLUS)
        rule("coimp", "E1(+)", [_prem(p, PLUS)], a, PLUS)
        rule("coimp", "E2(+)", [_prem(p, PLUS)], b, MINUS)
        rule("coimp", "I(-)", [_prem(a, MINUS, refutations=[b])], p, MINUS)
        rule("coimp", "E(-)", [_prem(p, MINUS), _prem(b, MINUS)], a, MINUS)
    elif isinstance(f, And):
        rule("and", "I(+)", [_prem(a, PLUS), _prem(b, PLUS)], p, PLUS)
        rule("and", "E1(+)", [_prem(p, PLUS)], a, PLUS)
        rule("and", "E2(+)", [_prem(p, PLUS)], b, PLUS)
        rule("and", "I1(-)", [_prem(a, MINUS)], p, MINUS)
        rule("and", "I2(-)", [_prem(b, MINUS)], p, MINUS)
        for q in universe:
            rule("and", "E1(-)", [_prem(p, MINUS), _prem(q, MINUS, refutations=[a]),
                                  _prem(q, MINUS, refutations=[b])], q, MINUS, q)
            rule("and", "E2(-)", [_prem(p, MINUS), _prem(q, PLUS, refutations=[a]),
                                  _prem(q, PLUS, refutations=[b])], q, PLUS, q)
    elif isinstance(f, Or):
        rule("or", "I1(+)", [_prem(a, PLUS)], p, PLUS)
        rule("or", "I2(+)", [_prem(b, PLUS)], p, PLUS)
        for q in universe:
            rule("or", "E1(+)", [_prem(p, PLUS), _prem(q, PLUS, proofs=[a]),
                                 _prem(q, PLUS, proofs=[b])], q, PLUS, q)
            rule("or", "E2(+)", [_prem(p, PLUS), _prem(q, MINUS, proofs=[a]),
                                 _prem(q, MINUS, proofs=[b])], q, MINUS, q)
        rule("or", "I(-)", [_prem(a, MINUS), _prem(b, MINUS)], p, MINUS)
        rule("or", "E1(-)", [_prem(p, MINUS)], a, MINUS)
        rule("or", "E2(-)", [_prem(p, MINUS)], b, MINUS)
    return out


def build_simulation_base(spec: SimulationSpec, m: AtomicMapping | None = None) -> Base:
    m = build_mapping(spec.theta) if m is None else m
    universe = _universe(spec, m)
    rules: list[AtomicRule] = []
    for f in sorted(m.domain, key=print_formula):
        if not isinstance(f, Atom):
            rules.extend(_rules_for(f, m, universe))
    return Base.of(rules)


# ----------------------------------------------------------------------------
# translations
# ----------------------------------------------------------------------------

# ND tag -> rule label; introductions are named after their conclusion,
# eliminations after their major premise
_INTRO = {
    "ImpIPlus": "I(+)", "ImpIMinus": "I(-)", "CoImpIPlus": "I(+)", "CoImpIMinus": "I(-)",
    "AndIPlus": "I(+)", "AndI1Minus": "I1(-)", "AndI2Minus": "I2(-)",
    "OrI1Plus": "I1(+)", "OrI2Plus": "I2(+)", "OrIMinus": "I(-)",
}
_ELIM = {
    "ImpEPlus": "E(+)", "ImpE1Minus": "E1(-)", "ImpE2Minus": "E2(-)",
    "CoImpE1Plus": "E1(+)", "CoImpE2Plus": "E2(+)", "CoImpEMinus": "E(-)",
    "AndE1Plus": "E1(+)", "AndE2Plus": "E2(+)",
    "OrE1Minus": "E1(-)", "OrE2Minus": "E2(-)",
}
_FAMILY = {Imp: "imp", CoImp: "coimp", And: "and", Or: "or", Top: "top", Bot: "bot"}


def _nd_conclusion(p: NDProof) -> Formula:
    return p.formula if isinstance(p, Assume) else p.conclusion


def _rule_name(p: Apply, m: AtomicMapping) -> str:
    tag = p.rule
    if tag in _INTRO:
        f = p.conclusion
        return f"{_FAMILY[type(f)]}:{_INTRO[tag]}:{m[f]}"
    if tag in _ELIM:
        f = _nd_conclusion(p.children[0])
        return f"{_FAMILY[type(f)]}:{_ELIM[tag]}:{m[f]}"
    q = m[p.conclusion]
    rp = p.result_polarity
    if tag == "TopPlus":
        return f"top:(+):{m[TOP]}"
    if tag == "BotMinus":
        return f"bot:(-):{m[BOT]}"
    if tag == "BotPlus":
        label = "(+)_1" if rp is PLUS else "(+)_2"
        return f"bot:{label}:{m[BOT]}:{q}"
    if tag == "TopMinus":
        label = "(-)" if rp is MINUS else "(-)_2"
        return f"top:{label}:{m[TOP]}:{q}"
    major = m[_nd_conclusion(p.children[0])]
    if tag == "OrEPlus":
        return f"or:{'E1(+)' if rp is PLUS else 'E2(+)'}:{major}:{q}"
    if tag == "AndEMinus":
        return f"and:{'E1(-)' if rp is MINUS else 'E2(-)'}:{major}:{q}"
    raise SimulationError(f"no simulation rule for {tag}")


def translate_nd_to_atomic(p: NDProof, m: AtomicMapping, spec: SimulationSpec | None = None) -> AtomicDeduction:
    """Rule-for-rule image of an ND proof in the simulation base."""
    universe = None if spec is None else set(_universe(spec, m))
    return _to_atomic(p, m, universe)


def _to_atomic(p: NDProof, m: AtomicMapping, universe) -> AtomicDeduction:
    if isinstance(p, Assume):
        return AssumptionLeaf(m[p.formula], p.polarity)
    name = _rule_name(p, m)
    if universe is not None and name.count(":") == 3 and name.rsplit(":", 1)[1] not in universe:
        raise SimulationError(f"rule instance {name} needs an atom outside the query universe")
    return RuleNode(name, tuple(_to_atomic(c, m, universe) for c in p.children))


_FLEX = {
    ("bot", "(+)_1"): ("BotPlus", PLUS), ("bot", "(+)_2"): ("BotPlus", MINUS),
    ("top", "(-)"): ("TopMinus", MINUS), ("top", "(-)_2"): ("TopMinus", PLUS),
    ("or", "E1(+)"): ("OrEPlus", PLUS), ("or", "E2(+)"): ("OrEPlus", MINUS),
    ("and", "E1(-)"): ("AndEMinus", MINUS), ("and", "E2(-)"): ("AndEMinus", PLUS),
}
_FIXED = {("top", "(+)"): "TopPlus", ("bot", "(-)"): "BotMinus"}


def _tag_family(tag: str) -> str:
    for prefix, fam in (("CoImp", "coimp"), ("Imp", "imp"), ("And", "and"), ("Or", "or")):
        if tag.startswith(prefix):
            return fam
    raise AssertionError(tag)


for _tag, _label in list(_INTRO.items()) + list(_ELIM.items()):
    _FIXED[(_tag_family(_tag), _label)] = _tag


def translate_atomic_to_nd(d: AtomicDeduction, m: AtomicMapping, base: Base) -> NDProof:
    """Replace every atom by the formula it stands for, rule by rule."""
    counter = [0]
    inverse = m.inverse()

    def pre(atom: str) -> Formula:
        return inverse.get(atom, Atom(atom))

    def go(d: AtomicDeduction) -> NDProof:
        if isinstance(d, AssumptionLeaf):
            return Assume(pre(d.atom), d.polarity, 0)
        rule = base.get(d.rule)
        if rule is None:
            raise SimulationError(f"rule {d.rule!r} is not in the simulation base")
        parts = d.rule.split(":")
        family, label = parts[0], parts[1]
        if (family, label) in _FLEX:
            tag, rp = _FLEX[(family, label)]
        elif (family, label) in _FIXED:
            tag, rp = _FIXED[(family, label)], None
        else:
            raise SimulationError(f"rule {d.rule!r} is not a simulation rule")
        kids = []
        discharge = []
        for child, prem in zip(d.children, rule.premises):
            nd = go(child)
            targets = [(pre(a), PLUS) for a in sorted(prem.discharged_proofs)]
            targets += [(pre(a), MINUS) for a in sorted(prem.discharged_refutations)]
            for f, pol in targets:
                counter[0] += 1
                nd, hit = _relabel(nd, f, pol, counter[0])
                discharge.append(counter[0] if hit else None)
            kids.append(nd)
        return Apply(tag, pre(rule.conclusion), tuple(kids), tuple(discharge), rp)

    return go(d)


def _relabel(p: NDProof, f: Formula, pol: Polarity, label: int) -> tuple[NDProof, bool]:
    if isinstance(p, Assume):
        if p.label == 0 and p.formula == f and p.polarity is pol:
            return Assume(f, pol, label), True
        return p, False
    hit = False
    kids = []
    for c in p.children:
        c2, h = _relabel(c, f, pol, label)
        kids.append(c2)
        hit = hit or h
    if not hit:
        return p, False
    return Apply(p.rule, p.conclusion, tuple(kids), p.discharge, p.result_polarity), True


def map_judgment(j: NDJudgment, m: AtomicMapping) -> AtomicSequent:
    return AtomicSequent(
        frozenset(m[f] for f in j.proof_assumptions),
        frozenset(m[f] for f in j.refutation_assumptions),
        j.polarity,
        m[j.conclusion],
    )


def unmap_sequent(s: AtomicSequent, m: AtomicMapping) -> NDJudgment:
    return NDJudgment(
        frozenset(m.preimage(a) for a in s.proof_assumptions),
        frozenset(m.preimage(a) for a in s.refutation_assumptions),
        s.polarity,
        m.preimage(s.conclusion),
    )
