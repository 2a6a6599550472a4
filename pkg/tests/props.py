"""Randomized instances for the support-lemma properties.

Each ``*_instance`` returns ``(ok, fired)``: ``ok`` is False on a property
violation, ``fired`` tells whether the instance met the property's hypothesis
(so callers can check the run was not vacuous).
"""
from bilat.base import AtomicRule
from bilat.formula import BOT, MINUS, PLUS, TOP, And, Atom, CoImp, Imp, Or
from bilat.gen import random_base, random_rule
from bilat.support import FAILS, HOLDS, support

ATOMS = ("p", "q", "r", "s")


def exact_formula(rng, pol, depth, atoms=ATOMS):
    """A formula whose support at ``pol`` the checker always decides exactly.

    Uses atoms, constants, the connectives that split into independent parts
    at that polarity, and implications whose reduction is an atomic Inf query.
    """
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        if rng.random() < 0.15:
            return rng.choice((BOT, TOP))
        return Atom(rng.choice(atoms))
    a, b = Atom(rng.choice(atoms)), Atom(rng.choice(atoms))
    if roll < 0.45:
        # reduces to an atomic Inf query
        return Imp(a, b) if pol is PLUS else CoImp(a, b)
    sub = lambda s: exact_formula(rng, s, depth - 1, atoms)
    if pol is PLUS:
        return And(sub(PLUS), sub(PLUS)) if rng.random() < 0.5 else CoImp(sub(PLUS), sub(MINUS))
    return Or(sub(MINUS), sub(MINUS)) if rng.random() < 0.5 else Imp(sub(PLUS), sub(MINUS))


def rich_base(rng):
    """A random base, topped up with axioms so that derivations are common."""
    b = random_base(rng)
    extra = [AtomicRule(f"A{i}", (), rng.choice(ATOMS), rng.choice((PLUS, MINUS)))
             for i in range(rng.randint(0, 3))]
    return b.union(r for r in extra if r.shape not in b.shapes())


def extension_of(rng, b):
    rules = [random_rule(rng, f"X{i}", ATOMS) for i in range(rng.randint(1, 3))]
    return b.union(r for r in rules if r.shape not in b.shapes())


def monotonicity_instance(rng, budget):
    b = rich_base(rng)
    pol = rng.choice((PLUS, MINUS))
    f = exact_formula(rng, pol, 3)
    v = support(b, (), (), pol, f, budget)
    if not v.decisive:
        return False, False
    if v.outcome != HOLDS:
        return True, False
    for _ in range(3):
        c = extension_of(rng, b)
        if support(c, (), (), pol, f, budget).outcome != HOLDS:
            return False, True
    return True, True


def _case_lemma(rng, budget, connective, major_pol, side):
    b = rich_base(rng)
    phi, psi = exact_formula(rng, major_pol, 1), exact_formula(rng, major_pol, 1)
    pol = rng.choice((PLUS, MINUS))
    chi = Atom(rng.choice(ATOMS))
    major = support(b, (), (), major_pol, connective(phi, psi), budget)
    if major.outcome != HOLDS:
        return True, False
    for part in (phi, psi):
        gamma, delta = ((part,), ()) if side == "proof" else ((), (part,))
        if support(b, gamma, delta, pol, chi, budget).outcome != HOLDS:
            return True, False
    return support(b, (), (), pol, chi, budget).outcome == HOLDS, True


def disjunction_instance(rng, budget):
    return _case_lemma(rng, budget, Or, PLUS, "proof")


def conjunction_instance(rng, budget):
    return _case_lemma(rng, budget, And, MINUS, "refutation")


def explosion_instance(rng, budget):
    b = random_base(rng)
    v1 = support(b, (), (), PLUS, BOT, budget)
    v2 = support(b, (), (), MINUS, TOP, budget)
    return v1.outcome == FAILS and v2.outcome == FAILS, True
