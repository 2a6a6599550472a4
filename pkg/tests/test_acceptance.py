"""Acceptance criteria, one test each.

Each test records a PASS/FAIL line (with its wall time against the stated
limit) that is printed in the terminal summary.
"""
import itertools
import random
import time

import pytest

from bilat.atomic import (
    AssumptionLeaf, AtomicSequent, RuleNode, check_atomic, derivable, derivable_fixpoint, derive,
    dual_deduction, fixpoint_table, load_deduction,
)
from bilat.base import dual_base, dual_rule, parse_base
from bilat.formula import MINUS, PLUS, dual_formula, parse_formula as F
from bilat.gen import enumerate_deductions, random_base, random_formula, random_model, random_rule
from bilat.kripke import countermodel_search, forces
from bilat.nd import check_nd
from bilat.simulation import (
    SimulationSpec, build_mapping, build_simulation_base, map_judgment, translate_atomic_to_nd,
    translate_nd_to_atomic,
)
from bilat.support import NAIVE, Budget, FAILS, HOLDS, VIOLATION, harmony_check, recheck, strong_harmony_check, support

import props
from conftest import DATA
from corpus_util import DERIVED_RULES, corpus_items, proof_formulas, two_atom_instances

ATOMS = ("p", "q", "r", "s")
POPULATION = 200


def seq(proofs, refs, pol, atom):
    return AtomicSequent(frozenset(proofs), frozenset(refs), pol, atom)


@pytest.fixture(scope="module")
def population(request):
    rng = random.Random(request.config.getoption("--seed"))
    return [random_base(rng, ATOMS, max_rules=6, max_premises=2, max_discharge=1) for _ in range(POPULATION)]


def test_criterion_1_example_deductions(acceptance):
    t = time.perf_counter()
    b = parse_base((DATA / "example_base.json").read_text())
    cases = [
        (load_deduction((DATA / "example_refute_r.json").read_text()), seq((), {"q"}, MINUS, "r")),
        (load_deduction((DATA / "example_prove_s.json").read_text()), seq((), (), PLUS, "s")),
    ]
    ok = True
    for d, want in cases:
        ok &= check_atomic(b, d) == want
        w = derive(b, want)
        ok &= w is not None and check_atomic(b, w).weaker_than(want)
    elapsed = time.perf_counter() - t
    assert acceptance.record(1, "example deductions check and are re-derived", ok, elapsed, 1)


def test_criterion_2_naive_counterexamples(acceptance):
    t = time.perf_counter()
    universe = {"p", "q", "r"}
    explosion_base = parse_base((DATA / "naive_explosion_base.json").read_text())
    disjunction_base = parse_base((DATA / "naive_disjunction_base.json").read_text())
    # derivability side, exact
    no_q = not derivable(explosion_base, seq((), (), MINUS, "q"))
    no_r = not derivable(disjunction_base, seq((), (), MINUS, "r"))
    # naive positive conditions, default budget: no violation found
    explosion = support(explosion_base, (), (), PLUS, F("bot"), mode=NAIVE, universe=universe)
    disjunction = support(disjunction_base, (), (), PLUS, F("p | q"), mode=NAIVE, universe=universe)
    cases = [support(disjunction_base, {F(x)}, (), MINUS, F("r"), mode=NAIVE, universe=universe) for x in "pq"]
    ok = (no_q and no_r and explosion.outcome == HOLDS and recheck(explosion)
          and disjunction.outcome != FAILS and all(c.outcome == HOLDS for c in cases))
    elapsed = time.perf_counter() - t
    detail = f"naive bot+: {explosion.outcome}, naive p|q: {disjunction.outcome} ({disjunction.kind})"
    assert acceptance.record(2, "naive clauses diverge on finitized bases", ok, elapsed, 5, detail)


def test_criterion_3_derived_rules(acceptance):
    t = time.perf_counter()
    items = [x for x in corpus_items() if x[0] in DERIVED_RULES]
    ok = len(items) == 4 and all(check_nd(proof) == j for _, proof, j in items)
    elapsed = time.perf_counter() - t
    assert acceptance.record(3, "four derived-rule derivations check", ok, elapsed, 1)


def _random_deduction(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return AssumptionLeaf(rng.choice(ATOMS), rng.choice((PLUS, MINUS)))
    name = rng.choice(("R1", "R2", "R3", "R1^D"))
    return RuleNode(name, tuple(_random_deduction(rng, depth - 1) for _ in range(rng.randint(0, 2))))


def test_criterion_4_duality(acceptance, population, seed):
    t = time.perf_counter()
    failures = closed = transports = 0
    for b in population:
        db = dual_base(b)
        for a in ATOMS:
            for pol in (PLUS, MINUS):
                closed += 1
                failures += derivable(b, seq((), (), pol, a)) != derivable(db, seq((), (), pol.dual, a))
        for d in enumerate_deductions(b, 4):
            s = check_atomic(b, d)
            transports += 1
            failures += check_atomic(db, dual_deduction(d)) != s.dual()
    rng = random.Random(seed)
    for i in range(1000):
        f = random_formula(rng, ATOMS, 5)
        r = random_rule(rng, f"R{i}", ATOMS)
        b = random_base(rng)
        d = _random_deduction(rng, 4)
        failures += dual_formula(dual_formula(f)) != f
        failures += dual_rule(dual_rule(r)) != r
        failures += dual_base(dual_base(b)) != b
        failures += dual_deduction(dual_deduction(d)) != d
    elapsed = time.perf_counter() - t
    detail = f"{closed} closed-sequent checks, {transports} deductions, {failures} failures"
    assert acceptance.record(4, "duality suite", failures == 0, elapsed, 60, detail)


def test_criterion_5_oracle_equivalence(acceptance, population):
    t = time.perf_counter()
    subsets = [frozenset(c) for k in range(len(ATOMS) + 1) for c in itertools.combinations(ATOMS, k)]
    disagreements = total = 0
    for i, b in enumerate(population):
        table = fixpoint_table(b, ATOMS)
        for g, d, pol, a in itertools.product(subsets, subsets, (PLUS, MINUS), ATOMS):
            total += 1
            disagreements += derivable(b, seq(g, d, pol, a)) != ((g, d, pol, a) in table)
        # the per-query entry point agrees with the shared table
        g, d = subsets[i % len(subsets)], subsets[-1 - i % len(subsets)]
        disagreements += derivable_fixpoint(b, ATOMS, seq(g, d, PLUS, "p")) != ((g, d, PLUS, "p") in table)
    elapsed = time.perf_counter() - t
    detail = f"{total} sequents, {disagreements} disagreements"
    assert acceptance.record(5, "goal-directed search matches the fixpoint oracle", disagreements == 0,
                             elapsed, 60, detail)


def test_criterion_6_kripke(acceptance, seed):
    t = time.perf_counter()
    rng = random.Random(seed)
    violations = 0
    for _ in range(500):
        m = random_model(rng, max_worlds=4, atoms=("p", "q"))
        f = random_formula(rng, ("p", "q"), 5)
        for w, v in m.order:
            for pol in (PLUS, MINUS):
                violations += forces(m, w, pol, f) and not forces(m, v, pol, f)
    lem = countermodel_search((), (), PLUS, F("p | (p -> bot)"), 2)
    dual_lem = countermodel_search((), (), MINUS, F("p & (top <- p)"), 2)
    found = lem is not None and dual_lem is not None
    unsound = 0
    for name, _, j in corpus_items():
        for inst in two_atom_instances(j):
            hit = countermodel_search(inst.proof_assumptions, inst.refutation_assumptions, inst.polarity,
                                      inst.conclusion, 4, atom_universe={"p", "q"})
            unsound += hit is not None
    elapsed = time.perf_counter() - t
    ok = violations == 0 and found and unsound == 0
    detail = f"{violations} persistence violations, {unsound} corpus countermodels"
    assert acceptance.record(6, "Kripke persistence, countermodels, corpus soundness", ok, elapsed, 120, detail)


def test_criterion_7_simulation_round_trip(acceptance):
    t = time.perf_counter()
    mismatches = 0
    items = corpus_items()
    for _, proof, j in items:
        theta = proof_formulas(proof)
        m = build_mapping(theta)
        spec = SimulationSpec(frozenset(theta))
        b = build_simulation_base(spec, m)
        d = translate_nd_to_atomic(proof, m, spec)
        s = check_atomic(b, d)
        back = check_nd(translate_atomic_to_nd(d, m, b))
        mismatches += not (s.weaker_than(map_judgment(j, m)) and back == j)
    elapsed = time.perf_counter() - t
    detail = f"{len(items)} proofs, {mismatches} mismatches"
    assert acceptance.record(7, "completeness-construction round trip", mismatches == 0, elapsed, 10, detail)


HARMONY_BUDGET = Budget(extra_atoms=1, max_extra_rules=2, max_premises=2, max_discharge=1, max_extensions=500)


def test_criterion_8_harmony(acceptance, population, seed):
    t = time.perf_counter()
    rng = random.Random(seed + 1)
    instances = decided = violations = unconfirmed = 0
    for b in population:
        pol = rng.choice((PLUS, MINUS))
        reports = [harmony_check(b, pol, random_formula(rng, ATOMS, 3), HARMONY_BUDGET)]
        gamma = {random_formula(rng, ATOMS, 2)} if rng.random() < 0.5 else set()
        delta = {random_formula(rng, ATOMS, 2)} if rng.random() < 0.5 else set()
        reports.append(strong_harmony_check(b, gamma, delta, rng.choice((PLUS, MINUS)),
                                            random_formula(rng, ATOMS, 3), HARMONY_BUDGET))
        for rep in reports:
            instances += 1
            decided += rep.decided
            violations += rep.status == VIOLATION
            unconfirmed += not (recheck(rep.left) and recheck(rep.right))
    elapsed = time.perf_counter() - t
    ratio = decided / instances
    ok = violations == 0 and unconfirmed == 0 and ratio >= 0.30
    detail = f"{instances} instances, {ratio:.0%} decided, {violations} violations"
    assert acceptance.record(8, "weak and strong harmony", ok, elapsed, 120, detail)


LEMMA_BUDGET = Budget(max_extensions=200)


def test_criterion_9_lemma_shadows(acceptance, seed):
    t = time.perf_counter()
    rng = random.Random(seed + 2)
    results = {}
    for name, fn in (("monotonicity", props.monotonicity_instance),
                     ("disjunction", props.disjunction_instance),
                     ("conjunction", props.conjunction_instance),
                     ("explosion", props.explosion_instance)):
        bad = fired = 0
        for _ in range(500):
            ok, hit = fn(rng, LEMMA_BUDGET)
            bad += not ok
            fired += hit
        results[name] = (bad, fired)
    elapsed = time.perf_counter() - t
    ok = all(bad == 0 and fired > 0 for bad, fired in results.values())
    detail = ", ".join(f"{k}: {f} fired/{b} bad" for k, (b, f) in results.items())
    assert acceptance.record(9, "monotonicity and lemma shadows", ok, elapsed, 60, detail)
