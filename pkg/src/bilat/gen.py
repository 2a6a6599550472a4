"""Seeded random generators and bounded enumerators for property tests."""
from __future__ import annotations

import itertools
import random

from .atomic import AssumptionLeaf, AtomicDeduction, RuleNode
from .base import AtomicRule, Base, RulePremise
from .formula import BOT, MINUS, PLUS, TOP, And, Atom, CoImp, Formula, Imp, Or
from .kripke import KripkeModel, validate_model

__all__ = ["random_formula", "random_base", "random_model", "random_rule", "enumerate_deductions"]

_BINARY = (And, Or, Imp, CoImp)


def random_formula(rng: random.Random, atoms, depth: int, leaf_bias: float = 0.3) -> Formula:
    atoms = list(atoms)
    if depth <= 0 or rng.random() < leaf_bias:
        roll = rng.random()
        if roll < 0.1:
            return BOT
        if roll < 0.2:
            return TOP
        return Atom(rng.choice(atoms))
    op = rng.choice(_BINARY)
    return op(random_formula(rng, atoms, depth - 1, leaf_bias), random_formula(rng, atoms, depth - 1, leaf_bias))


def random_rule(rng: random.Random, name: str, atoms, max_premises: int = 2, max_discharge: int = 1) -> AtomicRule:
    atoms = list(atoms)
    premises = []
    for _ in range(rng.randint(0, max_premises)):
        proofs, refs = set(), set()
        for _ in range(rng.randint(0, max_discharge)):
            (proofs if rng.random() < 0.5 else refs).add(rng.choice(atoms))
        premises.append(RulePremise(rng.choice(atoms), rng.choice((PLUS, MINUS)), frozenset(proofs), frozenset(refs)))
    return AtomicRule(name, tuple(premises), rng.choice(atoms), rng.choice((PLUS, MINUS)))


def random_base(rng: random.Random, atoms=("p", "q", "r", "s"), max_rules: int = 6,
                max_premises: int = 2, max_discharge: int = 1) -> Base:
    rules = []
    seen = set()
    for i in range(rng.randint(0, max_rules)):
        r = random_rule(rng, f"R{i + 1}", atoms, max_premises, max_discharge)
        if r.shape in seen:
            continue
        seen.add(r.shape)
        rules.append(r)
    return Base.of(rules)


def random_model(rng: random.Random, max_worlds: int = 4, atoms=("p", "q")) -> KripkeModel:
    n = rng.randint(1, max_worlds)
    names = [f"w{i}" for i in range(n)]
    order = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
    up = {w: {w} for w in names}
    changed = True
    while changed:
        changed = False
        for a, b in order:
            new = up[b] - up[a]
            if new:
                up[a] |= new
                changed = True
    vals = []
    for _ in range(2):
        val = {w: set() for w in names}
        for a in atoms:
            for w in names:
                if rng.random() < 0.3:
                    for v in up[w]:
                        val[v].add(a)
        vals.append(val)
    return validate_model(names, order, vals[0], vals[1])


def enumerate_deductions(b: Base, max_depth: int, cap: int = 5000) -> list[AtomicDeduction]:
    """Well-formed deductions over ``b`` of depth at most ``max_depth``.

    Children are either the single matching assumption leaf or a rule
    application concluding the premise.  At most ``cap`` trees per target
    and in total are produced.
    """
    heads: dict[tuple, list[AtomicRule]] = {}
    for r in b.sorted_rules():
        heads.setdefault((r.conclusion, r.conclusion_polarity), []).append(r)
    memo: dict[tuple, list[AtomicDeduction]] = {}

    def trees(atom: str, pol, depth: int) -> list[AtomicDeduction]:
        key = (atom, pol, depth)
        if key in memo:
            return memo[key]
        out: list[AtomicDeduction] = [AssumptionLeaf(atom, pol)]
        if depth > 0:
            for r in heads.get((atom, pol), ()):
                options = [trees(p.atom, p.polarity, depth - 1) for p in r.premises]
                for kids in itertools.product(*options):
                    out.append(RuleNode(r.name, kids))
                    if len(out) >= cap:
                        break
                if len(out) >= cap:
                    break
        memo[key] = out
        return out

    result: list[AtomicDeduction] = []
    targets = sorted({(r.conclusion, r.conclusion_polarity) for r in b.rules}
                     | {(p.atom, p.polarity) for r in b.rules for p in r.premises})
    for atom, pol in targets:
        for d in trees(atom, pol, max_depth):
            result.append(d)
            if len(result) >= cap:
                return result
    return result
