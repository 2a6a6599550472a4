import itertools
import json

import pytest

from bilat.formula import BOT, MINUS, PLUS, TOP, And, Atom, CoImp, Imp, Or, parse_formula as F
from bilat.gen import random_formula, random_model
from bilat.kripke import (
    ModelError, MonotonicityViolation, SearchTooLarge, countermodel_search, entails, forces,
    load_model, model_to_json, model_valid, rooted_posets, validate_model,
)

from conftest import DATA
from corpus_util import corpus_items, kripke_bound

p = Atom("p")


def chain(vp0, vp1, vm0=(), vm1=()):
    return validate_model(["w", "v"], [("w", "v")], {"w": set(vp0), "v": set(vp1)},
                          {"w": set(vm0), "v": set(vm1)})


def single(vp=(), vm=()):
    return validate_model(["w"], [], {"w": set(vp)}, {"w": set(vm)})


class TestValidate:
    def test_single_world(self):
        m = single()
        assert m.worlds == ("w",) and m.order == {("w", "w")}

    def test_violation(self):
        with pytest.raises(MonotonicityViolation) as info:
            chain({"p"}, ())
        err = info.value
        assert (err.w, err.w2, err.atom, err.sign) == ("w", "v", "p", PLUS)

    def test_violation_after_closure(self):
        with pytest.raises(MonotonicityViolation):
            validate_model("abc", [("a", "b"), ("b", "c")], {"a": {"p"}, "b": {"p"}}, {})

    def test_growth_allowed(self):
        m = chain((), {"p"})
        assert ("w", "v") in m.order and ("v", "w") not in m.order

    def test_closure_is_transitive(self):
        m = validate_model("abc", [("a", "b"), ("b", "c")], {}, {})
        assert ("a", "c") in m.order

    @pytest.mark.parametrize("bad", [
        lambda: validate_model([], [], {}, {}),
        lambda: validate_model(["w", "w"], [], {}, {}),
        lambda: validate_model(["w"], [("w", "x")], {}, {}),
        lambda: validate_model(["w"], [], {"x": {"p"}}, {}),
        lambda: validate_model(["w"], [], {"w": {"Bad"}}, {}),
    ])
    def test_malformed(self, bad):
        with pytest.raises(ModelError):
            bad()

    def test_json_round_trip(self):
        m = chain((), {"p"}, (), {"q"})
        assert load_model(json.dumps(model_to_json(m))) == m


class TestForces:
    def test_constants(self, rng):
        for _ in range(50):
            m = random_model(rng)
            for w in m.worlds:
                assert forces(m, w, MINUS, BOT) and forces(m, w, PLUS, TOP)
                assert not forces(m, w, PLUS, BOT) and not forces(m, w, MINUS, TOP)

    def test_excluded_middle_fails_at_root(self):
        m = chain((), {"p"})
        assert not forces(m, "w", PLUS, F("p | (p -> bot)"))
        assert forces(m, "v", PLUS, F("p | (p -> bot)"))

    def test_persistent_reading_of_implication(self):
        # the body is evaluated at the later world: p -> q fails at w because v forces p but not q
        m = chain((), {"p"})
        assert not forces(m, "w", PLUS, F("p -> q"))
        m2 = chain((), (), (), {"q"})
        assert not forces(m2, "w", MINUS, F("p <- q"))

    def test_unknown_world(self):
        with pytest.raises(ModelError):
            forces(single(), "nowhere", PLUS, p)

    def test_entailment_examples(self, rng):
        for _ in range(30):
            m = random_model(rng)
            assert entails(m, {p}, (), PLUS, p)
            assert entails(m, {BOT}, (), MINUS, Atom("q"))
        assert not model_valid(single(), PLUS, p)
        assert model_valid(single({"p"}), PLUS, p)

    def test_one_world_truth_table(self):
        def table(vp, vm, pol, f):
            if isinstance(f, Atom):
                return f.name in (vp if pol is PLUS else vm)
            if f == BOT or f == TOP:
                return (f == TOP) == (pol is PLUS)
            a = lambda s, g: table(vp, vm, s, g)
            plus = pol is PLUS
            if isinstance(f, And):
                return (a(PLUS, f.left) and a(PLUS, f.right)) if plus else (a(MINUS, f.left) or a(MINUS, f.right))
            if isinstance(f, Or):
                return (a(PLUS, f.left) or a(PLUS, f.right)) if plus else (a(MINUS, f.left) and a(MINUS, f.right))
            if isinstance(f, Imp):
                return (not a(PLUS, f.left) or a(PLUS, f.right)) if plus else (a(PLUS, f.left) and a(MINUS, f.right))
            return (a(PLUS, f.left) and a(MINUS, f.right)) if plus else (not a(MINUS, f.right) or a(MINUS, f.left))

        import random
        rng = random.Random(5)
        subsets = [set(), {"p"}, {"q"}, {"p", "q"}]
        for _ in range(300):
            f = random_formula(rng, "pq", 4)
            vp, vm = rng.choice(subsets), rng.choice(subsets)
            m = single(vp, vm)
            for pol in (PLUS, MINUS):
                assert forces(m, "w", pol, f) == table(vp, vm, pol, f)

    def test_persistence(self, rng):
        for _ in range(200):
            m = random_model(rng)
            f = random_formula(rng, "pq", 5)
            for w, v in m.order:
                for pol in (PLUS, MINUS):
                    if forces(m, w, pol, f):
                        assert forces(m, v, pol, f)


class TestRootedPosets:
    def test_counts(self):
        # rooted (connected from a least element) posets up to isomorphism: 1, 1, 2, 5, 16
        assert [len(rooted_posets(n)) for n in range(1, 6)] == [1, 1, 2, 5, 16]


def _brute_force(gamma, delta, pol, chi, n, atoms):
    """Existence of a countermodel over every preorder on n worlds (no rootedness, no iso pruning)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    names = [f"u{i}" for i in range(n)]
    for bits in range(1 << len(pairs)):
        chosen = [pairs[k] for k in range(len(pairs)) if bits >> k & 1]
        rel = {(i, i) for i in range(n)} | set(chosen)
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue  # only enumerate relations that are already transitive
        ups = [s for k in range(n + 1) for s in itertools.combinations(range(n), k)
               if all(b in s for a in s for (x, b) in rel if x == a)]
        order = [(names[a], names[b]) for a, b in chosen]
        for assign in itertools.product(ups, repeat=2 * len(atoms)):
            vp = {w: set() for w in names}
            vm = {w: set() for w in names}
            for k, a in enumerate(atoms):
                for i in assign[2 * k]:
                    vp[names[i]].add(a)
                for i in assign[2 * k + 1]:
                    vm[names[i]].add(a)
            m = validate_model(names, order, vp, vm)
            if not entails(m, gamma, delta, pol, chi):
                return True
    return False


class TestCountermodel:
    def test_top_has_none(self):
        assert countermodel_search((), (), PLUS, TOP, 3) is None

    def test_excluded_middle(self):
        m, w = countermodel_search((), (), PLUS, F("p | (p -> bot)"), 2)
        assert len(m.worlds) == 2 and not forces(m, w, PLUS, F("p | (p -> bot)"))

    def test_dual_excluded_middle(self):
        m, w = countermodel_search((), (), MINUS, F("p & (top <- p)"), 2)
        assert len(m.worlds) <= 2 and not forces(m, w, MINUS, F("p & (top <- p)"))

    def test_shipped_model_file(self):
        m = load_model((DATA / "lem_countermodel.json").read_text())
        assert not model_valid(m, PLUS, F("p | (p -> bot)"))

    def test_antecedents_respected(self):
        m, w = countermodel_search({F("p | q")}, (), PLUS, F("p"), 2)
        assert forces(m, w, PLUS, F("p | q")) and not forces(m, w, PLUS, p)
        assert countermodel_search({p}, (), PLUS, p, 3) is None

    def test_universe_and_bounds(self):
        with pytest.raises(ModelError):
            countermodel_search((), (), PLUS, F("p & q"), 2, atom_universe={"p"})
        with pytest.raises(ModelError):
            countermodel_search((), (), PLUS, p, 0)
        with pytest.raises(SearchTooLarge):
            countermodel_search((), (), PLUS, F("p & q & r & s"), 5, ceiling=1000)

    @pytest.mark.parametrize("name, proof, j", corpus_items(), ids=[i[0] for i in corpus_items()])
    def test_corpus_soundness(self, name, proof, j):
        bound = kripke_bound(j)
        assert countermodel_search(j.proof_assumptions, j.refutation_assumptions, j.polarity,
                                   j.conclusion, bound) is None

    def test_agrees_with_brute_force(self, rng):
        for _ in range(40):
            chi = random_formula(rng, "pq", 3)
            gamma = [random_formula(rng, "pq", 1)] if rng.random() < 0.5 else []
            pol = rng.choice((PLUS, MINUS))
            found = countermodel_search(gamma, (), pol, chi, 2, atom_universe={"p", "q"})
            assert (found is not None) == _brute_force(gamma, (), pol, chi, 2, ["p", "q"])
            if found:
                m, w = found
                assert all(forces(m, w, PLUS, g) for g in gamma) and not forces(m, w, pol, chi)

    def test_agrees_with_brute_force_three_worlds(self, rng):
        for _ in range(25):
            chi = random_formula(rng, "p", 4)
            pol = rng.choice((PLUS, MINUS))
            found = countermodel_search((), (), pol, chi, 3, atom_universe={"p"})
            assert (found is not None) == _brute_force((), (), pol, chi, 3, ["p"])
