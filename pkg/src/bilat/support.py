"""Three-valued checker for bilateral base-extension support.

The support clauses quantify over every extension of a base, so they are
not decidable in general.  :func:`support` returns

* ``HOLDS`` only along exact steps: atomic derivability, the constant
  clauses, the clauses that are plain boolean combinations, and inference
  steps that are valid by the structural lemmas (monotonicity, the atomic
  support lemma, ex falso, the disjunction and conjunction lemmas);
* ``FAILS`` only with a concrete witness: a fresh atom, or an extension of
  the base, drawn from a bounded rule universe, at which the clause body is
  violated by decisive sub-verdicts;
* ``UNKNOWN`` otherwise.

Every verdict is a tree that :func:`recheck` can re-verify independently,
recomputing atomic derivability with the bottom-up fixpoint oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .atomic import AtomicEngine, AtomicSequent, derivable_fixpoint
from .base import AtomicRule, Base, RulePremise, atoms_of, dual_base, rule_to_json
from .formula import (
    BOT, MINUS, PLUS, TOP, And, Atom, Bot, CoImp, Formula, Imp, Or, Polarity, Top,
    atoms_of_formula, dual_formula, print_formula,
)

__all__ = [
    "HOLDS", "FAILS", "UNKNOWN", "STANDARD", "NAIVE",
    "Budget", "DEFAULT_BUDGET", "SupportQuery", "Verdict", "HarmonyReport",
    "BudgetError", "support", "support_query", "recheck",
    "harmony_check", "strong_harmony_check", "parse_budget",
]

HOLDS, FAILS, UNKNOWN = "HOLDS", "FAILS", "UNKNOWN"
STANDARD, NAIVE = "standard", "naive"


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    extra_atoms: int = 1
    max_extra_rules: int = 2
    max_premises: int = 2
    max_discharge: int = 1
    max_extensions: int = 5000  # candidate extensions examined per top-level call

    def __post_init__(self):
        for name in ("extra_atoms", "max_extra_rules", "max_premises", "max_discharge", "max_extensions"):
            if getattr(self, name) < 0:
                raise BudgetError(f"budget field {name} must be >= 0")

    def to_json(self) -> dict:
        return {"extraAtoms": self.extra_atoms, "maxExtraRules": self.max_extra_rules,
                "maxPremises": self.max_premises, "maxDischarge": self.max_discharge,
                "maxExtensions": self.max_extensions}


DEFAULT_BUDGET = Budget()


def parse_budget(text: str) -> Budget:
    """``a,r,p,d`` with an optional fifth field capping examined extensions."""
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise BudgetError(f"budget must be comma-separated integers, got {text!r}") from None
    if len(parts) not in (4, 5):
        raise BudgetError("budget takes four or five fields: atoms,rules,premises,discharge[,extensions]")
    return Budget(*parts)


@dataclass(frozen=True)
class SupportQuery:
    base: Base
    gamma: frozenset = frozenset()
    delta: frozenset = frozenset()
    polarity: Polarity = PLUS
    formula: Formula = TOP
    universe: frozenset | None = None  # closed atom universe; None means At is infinite

    def __post_init__(self):
        object.__setattr__(self, "gamma", frozenset(self.gamma))
        object.__setattr__(self, "delta", frozenset(self.delta))
        if self.universe is not None:
            object.__setattr__(self, "universe", frozenset(self.universe))

    def atoms(self) -> frozenset[str]:
        out = set(atoms_of_formula(self.formula))
        for f in self.gamma | self.delta:
            out |= atoms_of_formula(f)
        return frozenset(out)


@dataclass(frozen=True)
class Verdict:
    outcome: str
    kind: str
    base: Base
    gamma: frozenset
    delta: frozenset
    polarity: Polarity
    formula: Formula
    children: tuple = ()
    extension: tuple = ()  # rules added to ``base`` (counter-extensions)
    atom: str | None = None
    sign: Polarity | None = None
    mode: str = STANDARD
    universe: frozenset | None = None
    budget: Budget | None = field(default=None, compare=False)

    @property
    def decisive(self) -> bool:
        return self.outcome != UNKNOWN

    def query_str(self) -> str:
        head = ""
        if self.gamma or self.delta:
            g = ", ".join(sorted(print_formula(f) for f in self.gamma)) or "∅"
            d = ", ".join(sorted(print_formula(f) for f in self.delta)) or "∅"
            head = f"{g} ; {d} "
        return f"{head}⊩{self.polarity} {print_formula(self.formula)}"

    def to_json(self, root: bool = True) -> dict:
        out = {"outcome": self.outcome, "kind": self.kind, "query": self.query_str()}
        if self.extension:
            out["extension"] = [rule_to_json(r) for r in self.extension]
        if self.atom is not None:
            out["atom"] = self.atom
        if self.sign is not None:
            out["sign"] = self.sign.value
        if root:
            out["mode"] = self.mode
            out["baseRules"] = len(self.base)
            if self.budget is not None:
                out["budget"] = self.budget.to_json()
        if self.children:
            out["children"] = [c.to_json(root=False) for c in self.children]
        return out


def _is_atom(f) -> bool:
    return isinstance(f, Atom)


def _hard_consequent(f: Formula, pol: Polarity) -> bool:
    """Consequents whose clause quantifies over extensions (or over all atoms)."""
    if pol is PLUS:
        return isinstance(f, (Or, Bot))
    return isinstance(f, (And, Top))


# ----------------------------------------------------------------------------
# the checker
# ----------------------------------------------------------------------------

class _Truncated(Exception):
    pass


class _Checker:
    def __init__(self, base: Base, query_atoms: frozenset, budget: Budget, mode: str, universe):
        self.budget = budget
        self.mode = mode
        self.closed = universe is not None
        if self.closed:
            universe = frozenset(universe)
            missing = (atoms_of(base) | query_atoms) - universe
            if missing:
                raise BudgetError(f"closed universe lacks atoms {sorted(missing)}")
            self.atoms = sorted(universe)
        else:
            used = set(atoms_of(base) | query_atoms)
            extra, k = [], 0
            while len(extra) < budget.extra_atoms:
                name = f"x{k}"
                if name not in used:
                    extra.append(name)
                k += 1
            self.atoms = sorted(used) + extra
        self.universe = frozenset(universe) if self.closed else None
        self.evals = 0
        self.truncated = False
        self._pool: list[AtomicRule] = []
        self._pool_iter = self._rule_stream()
        self._engines: dict[frozenset, AtomicEngine] = {}
        self._memo: dict = {}

    # -- helpers ---------------------------------------------------------------

    def engine(self, base: Base) -> AtomicEngine:
        eng = self._engines.get(base.rules)
        if eng is None:
            eng = self._engines[base.rules] = AtomicEngine(base)
        return eng

    def derivable(self, base: Base, gamma, delta, pol, atom) -> bool:
        return self.engine(base).derivable(AtomicSequent(frozenset(gamma), frozenset(delta), pol, atom))

    def v(self, outcome, kind, base, gamma, delta, pol, f, **kw) -> Verdict:
        return Verdict(outcome, kind, base, frozenset(gamma), frozenset(delta), pol, f,
                       mode=self.mode, universe=self.universe, **kw)

    def fresh_atom(self, base: Base) -> str:
        used = atoms_of(base) | set(self.atoms)
        k = 0
        while f"fresh{k}" in used:
            k += 1
        return f"fresh{k}"

    # -- bounded rule universe -----------------------------------------------

    def _rule_stream(self) -> Iterator[AtomicRule]:
        b = self.budget
        signs = (PLUS, MINUS)
        roles = [(a, r) for a in self.atoms for r in signs]
        variants: list[tuple[RulePremise, int]] = []
        for d in range(b.max_discharge + 1):
            for disch in itertools.combinations(roles, d):
                proofs = frozenset(a for a, r in disch if r is PLUS)
                refs = frozenset(a for a, r in disch if r is MINUS)
                for a in self.atoms:
                    for s in signs:
                        variants.append((RulePremise(a, s, proofs, refs), d))
        n = 0
        for k in range(b.max_premises + 1):
            for dtotal in range(k * b.max_discharge + 1):
                for combo in itertools.combinations_with_replacement(range(len(variants)), k):
                    if sum(variants[i][1] for i in combo) != dtotal:
                        continue
                    prems = tuple(variants[i][0] for i in combo)
                    for c in self.atoms:
                        for s in signs:
                            if any(p.atom == c and p.polarity is s and not p.discharged_proofs
                                   and not p.discharged_refutations for p in prems):
                                continue  # premise equals conclusion: never useful
                            yield AtomicRule(f"x{n}", prems, c, s)
                            n += 1

    def pool(self, i: int) -> AtomicRule | None:
        while len(self._pool) <= i:
            r = next(self._pool_iter, None)
            if r is None:
                return None
            self._pool.append(r)
        return self._pool[i]

    def extensions(self, base: Base, spare: int) -> Iterator[tuple[AtomicRule, ...]]:
        """Candidate extensions: the base itself, then graded by rule index."""
        yield ()
        if spare < 1:
            return
        shapes = base.shapes()
        j = 0
        while True:
            rj = self.pool(j)
            if rj is None:
                return
            if rj.shape not in shapes:
                yield (rj,)
                if spare >= 2:
                    for i in range(j):
                        ri = self._pool[i]
                        if ri.shape not in shapes:
                            yield (ri, rj)
            j += 1

    def extend(self, base: Base, added) -> Base:
        names = {r.name for r in base.rules}
        rules = []
        for r in added:
            name = r.name
            while name in names:
                name += "'"
            names.add(name)
            rules.append(AtomicRule(name, r.premises, r.conclusion, r.conclusion_polarity))
        return base.union(rules), tuple(rules)

    def tick(self):
        self.evals += 1
        if self.evals > self.budget.max_extensions:
            self.truncated = True
            raise _Truncated

    # -- plain support ---------------------------------------------------------

    def plain(self, base: Base, pol: Polarity, f: Formula, spare: int, search: bool = True) -> Verdict:
        key = ("plain", base.rules, pol, f, spare, search)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._plain(base, pol, f, spare, search)
        return hit

    def _plain(self, base, pol, f, spare, search) -> Verdict:
        E = frozenset()
        if isinstance(f, Atom):
            ok = self.derivable(base, E, E, pol, f.name)
            return self.v(HOLDS if ok else FAILS, "atom", base, E, E, pol, f)
        if (isinstance(f, Top) and pol is PLUS) or (isinstance(f, Bot) and pol is MINUS):
            return self.v(HOLDS, "constant", base, E, E, pol, f)
        if isinstance(f, (Bot, Top)):
            return self._explosive(base, pol, f)
        if isinstance(f, And) and pol is PLUS or isinstance(f, Or) and pol is MINUS:
            parts = [(pol, f.left), (pol, f.right)]
            return self._all(base, E, E, pol, f, [self.plain(base, s, g, spare, search) for s, g in parts])
        if isinstance(f, Imp) and pol is MINUS or isinstance(f, CoImp) and pol is PLUS:
            parts = [self.plain(base, PLUS, f.left, spare, search), self.plain(base, MINUS, f.right, spare, search)]
            return self._all(base, E, E, pol, f, parts)
        if isinstance(f, Imp):
            sub = self.inf(base, frozenset({f.left}), E, PLUS, f.right, spare, search)
            return self.v(sub.outcome, "reduce", base, E, E, pol, f, children=(sub,))
        if isinstance(f, CoImp):
            sub = self.inf(base, E, frozenset({f.right}), MINUS, f.left, spare, search)
            return self.v(sub.outcome, "reduce", base, E, E, pol, f, children=(sub,))
        # disjunction proved / conjunction refuted
        first = self.plain(base, pol, f.left, spare, search)
        if first.outcome == HOLDS:
            return self.v(HOLDS, "component", base, E, E, pol, f, children=(first,))
        second = self.plain(base, pol, f.right, spare, search)
        if second.outcome == HOLDS:
            return self.v(HOLDS, "component", base, E, E, pol, f, children=(second,))
        if not search:
            return self.v(UNKNOWN, "not-searched", base, E, E, pol, f)
        return self._case_search(base, pol, f, spare)

    def _explosive(self, base, pol, f) -> Verdict:
        """Bottom proved or top refuted: every atom must be proved and refuted."""
        E = frozenset()
        signs = [PLUS, MINUS]
        if self.mode == NAIVE:
            signs = [PLUS] if pol is PLUS else [MINUS]
        if not self.closed:
            atom = self.fresh_atom(base)
            return self.v(FAILS, "fresh-atom", base, E, E, pol, f, atom=atom, sign=signs[0])
        kids = []
        for a in sorted(self.universe):
            for s in signs:
                child = self.v(HOLDS if self.derivable(base, E, E, s, a) else FAILS,
                               "atom", base, E, E, s, Atom(a))
                kids.append(child)
                if child.outcome == FAILS:
                    return self.v(FAILS, "universe-atoms", base, E, E, pol, f, children=(child,))
        return self.v(HOLDS, "universe-atoms", base, E, E, pol, f, children=tuple(kids))

    def _all(self, base, gamma, delta, pol, f, kids) -> Verdict:
        for k in kids:
            if k.outcome == FAILS:
                return self.v(FAILS, "conjunction", base, gamma, delta, pol, f, children=(k,))
        if all(k.outcome == HOLDS for k in kids):
            return self.v(HOLDS, "conjunction", base, gamma, delta, pol, f, children=tuple(kids))
        return self.v(UNKNOWN, "conjunction", base, gamma, delta, pol, f, children=tuple(kids))

    def _case_search(self, base, pol, f, spare) -> Verdict:
        """Look for an extension and atom where both cases lead to it but it fails."""
        E = frozenset()
        if pol is PLUS:  # disjunction: cases are proof assumptions
            mk = lambda g: (frozenset({g}), E)
        else:
            mk = lambda g: (E, frozenset({g}))
        signs = [PLUS, MINUS]
        if self.mode == NAIVE:
            signs = [pol]
        try:
            for added in self.extensions(base, spare):
                self.tick()
                c, named = self.extend(base, added)
                left_spare = spare - len(added)
                for a in self.atoms:
                    for s in signs:
                        if self.derivable(c, E, E, s, a):
                            continue
                        atom_v = self.v(FAILS, "atom", c, E, E, s, Atom(a))
                        g1, d1 = mk(f.left)
                        v1 = self.inf(c, g1, d1, s, Atom(a), left_spare, False)
                        if v1.outcome != HOLDS:
                            continue
                        g2, d2 = mk(f.right)
                        v2 = self.inf(c, g2, d2, s, Atom(a), left_spare, False)
                        if v2.outcome != HOLDS:
                            continue
                        return self.v(FAILS, "counter-extension", base, E, E, pol, f,
                                      children=(v1, v2, atom_v), extension=named, atom=a, sign=s)
        except _Truncated:
            return self.v(UNKNOWN, "budget-exhausted", base, E, E, pol, f)
        return self.v(UNKNOWN, "no-counterexample", base, E, E, pol, f)

    # -- inference -------------------------------------------------------------

    def inf(self, base: Base, gamma: frozenset, delta: frozenset, pol: Polarity, chi: Formula,
            spare: int, search: bool = True) -> Verdict:
        if not gamma and not delta:
            return self.plain(base, pol, chi, spare, search)
        key = ("inf", base.rules, gamma, delta, pol, chi, spare, search)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._inf(base, gamma, delta, pol, chi, spare, search)
        return hit

    def _inf(self, base, gamma, delta, pol, chi, spare, search) -> Verdict:
        v = lambda outcome, kind, **kw: self.v(outcome, kind, base, gamma, delta, pol, chi, **kw)

        # antecedents that are boolean combinations split into their parts
        g2, d2 = _split_antecedents(gamma, delta)
        if (g2, d2) != (gamma, delta):
            sub = self.inf(base, g2, d2, pol, chi, spare, search)
            return v(sub.outcome, "split-antecedents", children=(sub,))

        if chi in (gamma if pol is PLUS else delta):
            return v(HOLDS, "member")
        if self.mode == STANDARD and (BOT in gamma or TOP in delta):
            return v(HOLDS, "ex-falso")

        # consequents with local clauses
        if (isinstance(chi, Top) and pol is PLUS) or (isinstance(chi, Bot) and pol is MINUS):
            return v(HOLDS, "constant")
        if isinstance(chi, And) and pol is PLUS or isinstance(chi, Or) and pol is MINUS:
            kids = [self.inf(base, gamma, delta, pol, chi.left, spare, search),
                    self.inf(base, gamma, delta, pol, chi.right, spare, search)]
            return self._all(base, gamma, delta, pol, chi, kids)
        if isinstance(chi, Imp) and pol is MINUS or isinstance(chi, CoImp) and pol is PLUS:
            kids = [self.inf(base, gamma, delta, PLUS, chi.left, spare, search),
                    self.inf(base, gamma, delta, MINUS, chi.right, spare, search)]
            return self._all(base, gamma, delta, pol, chi, kids)
        if isinstance(chi, Imp):
            sub = self.inf(base, gamma | {chi.left}, delta, PLUS, chi.right, spare, search)
            return v(sub.outcome, "reduce", children=(sub,))
        if isinstance(chi, CoImp):
            sub = self.inf(base, gamma, delta | {chi.right}, MINUS, chi.left, spare, search)
            return v(sub.outcome, "reduce", children=(sub,))

        if all(_is_atom(f) for f in gamma | delta) and _is_atom(chi):
            ok = self.derivable(base, {f.name for f in gamma}, {f.name for f in delta}, pol, chi.name)
            return v(HOLDS if ok else FAILS, "inf-atomic")

        if self.mode == STANDARD:
            # modus ponens on antecedents: an implication whose antecedent follows
            for imp in sorted((f for f in gamma if isinstance(f, Imp)), key=print_formula):
                pre = self.inf(base, gamma - {imp}, delta, PLUS, imp.left, spare, False)
                if pre.outcome == HOLDS:
                    sub = self.inf(base, (gamma - {imp}) | {imp.right}, delta, pol, chi, spare, search)
                    if sub.outcome == HOLDS:
                        return v(HOLDS, "detach", children=(pre, sub))
            for co in sorted((f for f in delta if isinstance(f, CoImp)), key=print_formula):
                pre = self.inf(base, gamma, delta - {co}, MINUS, co.right, spare, False)
                if pre.outcome == HOLDS:
                    sub = self.inf(base, gamma, (delta - {co}) | {co.left}, pol, chi, spare, search)
                    if sub.outcome == HOLDS:
                        return v(HOLDS, "detach", children=(pre, sub))
            # case analysis on a proved disjunction or refuted conjunction
            cases = [(f, True) for f in gamma if isinstance(f, Or)]
            cases += [(f, False) for f in delta if isinstance(f, And)]
            for f, proved in sorted(cases, key=lambda t: print_formula(t[0])):
                if proved:
                    a = self.inf(base, (gamma - {f}) | {f.left}, delta, pol, chi, spare, False)
                    b = self.inf(base, (gamma - {f}) | {f.right}, delta, pol, chi, spare, False) \
                        if a.outcome == HOLDS else None
                else:
                    a = self.inf(base, gamma, (delta - {f}) | {f.left}, pol, chi, spare, False)
                    b = self.inf(base, gamma, (delta - {f}) | {f.right}, pol, chi, spare, False) \
                        if a.outcome == HOLDS else None
                if b is not None and b.outcome == HOLDS:
                    return v(HOLDS, "cases", children=(a, b))

        if _hard_consequent(chi, pol) and isinstance(chi, (And, Or)):
            for part in (chi.left, chi.right):
                sub = self.inf(base, gamma, delta, pol, part, spare, False)
                if sub.outcome == HOLDS:
                    return v(HOLDS, "component", children=(sub,))

        plain = self.plain(base, pol, chi, spare, False)
        if plain.outcome == HOLDS:
            return v(HOLDS, "monotone", children=(plain,))
        if not search:
            return v(UNKNOWN, "not-searched")
        return self._counter_search(base, gamma, delta, pol, chi, spare)

    def _counter_search(self, base, gamma, delta, pol, chi, spare) -> Verdict:
        ants = [(PLUS, g) for g in sorted(gamma, key=print_formula)]
        ants += [(MINUS, d) for d in sorted(delta, key=print_formula)]
        try:
            for added in self.extensions(base, spare):
                self.tick()
                c, named = self.extend(base, added)
                left = spare - len(added)
                kids = []
                for s, g in ants:
                    k = self.plain(c, s, g, left, False)
                    if k.outcome != HOLDS:
                        break
                    kids.append(k)
                else:
                    # nested searches for the consequent are left to explicit cases only
                    k = self.plain(c, pol, chi, left, _hard_consequent(chi, pol))
                    if k.outcome == FAILS:
                        return self.v(FAILS, "counter-extension", base, gamma, delta, pol, chi,
                                      children=tuple(kids) + (k,), extension=named)
        except _Truncated:
            return self.v(UNKNOWN, "budget-exhausted", base, gamma, delta, pol, chi)
        return self.v(UNKNOWN, "no-counterexample", base, gamma, delta, pol, chi)


def _split_antecedents(gamma: frozenset, delta: frozenset) -> tuple[frozenset, frozenset]:
    g, d = set(gamma), set(delta)
    changed = True
    while changed:
        changed = False
        for f in list(g):
            if isinstance(f, Top):
                g.discard(f)
                changed = True
            elif isinstance(f, (And, CoImp)):
                g.discard(f)
                if isinstance(f, And):
                    g.update((f.left, f.right))
                else:
                    g.add(f.left)
                    d.add(f.right)
                changed = True
        for f in list(d):
            if isinstance(f, Bot):
                d.discard(f)
                changed = True
            elif isinstance(f, (Or, Imp)):
                d.discard(f)
                if isinstance(f, Or):
                    d.update((f.left, f.right))
                else:
                    g.add(f.left)
                    d.add(f.right)
                changed = True
    return frozenset(g), frozenset(d)


# ----------------------------------------------------------------------------
# public entry points
# ----------------------------------------------------------------------------

def support_query(q: SupportQuery, budget: Budget = DEFAULT_BUDGET, mode: str = STANDARD) -> Verdict:
    if mode not in (STANDARD, NAIVE):
        raise ValueError(f"unknown clause set {mode!r}")
    checker = _Checker(q.base, q.atoms(), budget, mode, q.universe)
    verdict = checker.inf(q.base, q.gamma, q.delta, q.polarity, q.formula, budget.max_extra_rules)
    return _with_budget(verdict, budget)


def support(base: Base, gamma: Iterable[Formula], delta: Iterable[Formula], polarity: Polarity,
            formula: Formula, budget: Budget = DEFAULT_BUDGET, mode: str = STANDARD,
            universe: Iterable[str] | None = None) -> Verdict:
    q = SupportQuery(base, frozenset(gamma), frozenset(delta), polarity, formula,
                     None if universe is None else frozenset(universe))
    return support_query(q, budget, mode)


def _with_budget(v: Verdict, budget: Budget) -> Verdict:
    return Verdict(v.outcome, v.kind, v.base, v.gamma, v.delta, v.polarity, v.formula,
                   v.children, v.extension, v.atom, v.sign, v.mode, v.universe, budget)


# ----------------------------------------------------------------------------
# independent re-verification
# ----------------------------------------------------------------------------

def _fixpoint_derivable(base: Base, gamma, delta, pol, atom) -> bool:
    seq = AtomicSequent(frozenset(gamma), frozenset(delta), pol, atom)
    return derivable_fixpoint(base, atoms_of(base) | seq.atoms(), seq)


def recheck(v: Verdict, derivable_fn: Callable | None = None) -> bool:
    """Re-verify every decisive node of a verdict tree.

    ``derivable_fn(base, gamma, delta, polarity, atom)`` defaults to the
    bottom-up fixpoint oracle, independent of the engine used by the checker.
    """
    der = derivable_fn or _fixpoint_derivable
    return _recheck(v, der)


def _same_query(v: Verdict, base, gamma, delta, pol, f) -> bool:
    return (v.base.rules == base.rules and v.gamma == frozenset(gamma) and v.delta == frozenset(delta)
            and v.polarity is pol and v.formula == f)


def _recheck(v: Verdict, der) -> bool:
    if v.outcome == UNKNOWN:
        return all(_recheck(c, der) for c in v.children if c.outcome != UNKNOWN)
    if not all(_recheck(c, der) for c in v.children):
        return False
    f, pol, base, kids = v.formula, v.polarity, v.base, v.children
    holds = v.outcome == HOLDS
    E = frozenset()
    k = v.kind
    if k == "atom":
        return not v.gamma and not v.delta and isinstance(f, Atom) and der(base, E, E, pol, f.name) == holds
    if k == "inf-atomic":
        if not all(_is_atom(x) for x in v.gamma | v.delta) or not _is_atom(f):
            return False
        return der(base, {x.name for x in v.gamma}, {x.name for x in v.delta}, pol, f.name) == holds
    if k == "constant":
        return holds and ((isinstance(f, Top) and pol is PLUS) or (isinstance(f, Bot) and pol is MINUS))
    if k == "fresh-atom":
        return (not holds and v.universe is None and _explosive(f, pol) and v.atom not in atoms_of(base)
                and not der(base, E, E, v.sign, v.atom))
    if k == "universe-atoms":
        if not _explosive(f, pol) or v.universe is None:
            return False
        if holds:
            signs = {PLUS, MINUS} if v.mode == STANDARD else {PLUS if pol is PLUS else MINUS}
            covered = {(c.formula.name, c.polarity) for c in kids if c.outcome == HOLDS and c.kind == "atom"}
            return all((a, s) in covered for a in v.universe for s in signs)
        return any(c.kind == "atom" and c.outcome == FAILS and c.formula.name in v.universe for c in kids)
    if k == "conjunction":
        parts = _local_parts(v)
        if parts is None:
            return False
        if holds:
            return len(kids) == len(parts) and all(
                c.outcome == HOLDS and _same_query(c, base, v.gamma, v.delta, s, g) for c, (s, g) in zip(kids, parts))
        return len(kids) == 1 and kids[0].outcome == FAILS and any(
            _same_query(kids[0], base, v.gamma, v.delta, s, g) for s, g in parts)
    if k in ("reduce", "split-antecedents"):
        if len(kids) != 1 or kids[0].outcome != v.outcome:
            return False
        c = kids[0]
        if k == "split-antecedents":
            return (c.base.rules == base.rules and (c.gamma, c.delta) == _split_antecedents(v.gamma, v.delta)
                    and c.polarity is pol and c.formula == f)
        if isinstance(f, Imp) and pol is PLUS:
            return _same_query(c, base, v.gamma | {f.left}, v.delta, PLUS, f.right)
        if isinstance(f, CoImp) and pol is MINUS:
            return _same_query(c, base, v.gamma, v.delta | {f.right}, MINUS, f.left)
        return False
    if k == "component":
        return (holds and _hard_consequent(f, pol)
                and isinstance(f, (And, Or)) and len(kids) == 1 and kids[0].outcome == HOLDS
                and any(_same_query(kids[0], base, v.gamma, v.delta, pol, g) for g in (f.left, f.right)))
    if k == "member":
        return holds and f in (v.gamma if pol is PLUS else v.delta)
    if k == "ex-falso":
        return holds and v.mode == STANDARD and (BOT in v.gamma or TOP in v.delta)
    if k == "monotone":
        return holds and len(kids) == 1 and kids[0].outcome == HOLDS and _same_query(kids[0], base, E, E, pol, f)
    if k == "detach":
        if not holds or v.mode != STANDARD or len(kids) != 2 or any(c.outcome != HOLDS for c in kids):
            return False
        pre, sub = kids
        for imp in v.gamma:
            if isinstance(imp, Imp) and _same_query(pre, base, v.gamma - {imp}, v.delta, PLUS, imp.left) \
                    and _same_query(sub, base, (v.gamma - {imp}) | {imp.right}, v.delta, pol, f):
                return True
        for co in v.delta:
            if isinstance(co, CoImp) and _same_query(pre, base, v.gamma, v.delta - {co}, MINUS, co.right) \
                    and _same_query(sub, base, v.gamma, (v.delta - {co}) | {co.left}, pol, f):
                return True
        return False
    if k == "cases":
        if not holds or v.mode != STANDARD or len(kids) != 2 or any(c.outcome != HOLDS for c in kids):
            return False
        a, b = kids
        for g in v.gamma:
            if isinstance(g, Or):
                rest = v.gamma - {g}
                if _same_query(a, base, rest | {g.left}, v.delta, pol, f) and \
                        _same_query(b, base, rest | {g.right}, v.delta, pol, f):
                    return True
        for d in v.delta:
            if isinstance(d, And):
                rest = v.delta - {d}
                if _same_query(a, base, v.gamma, rest | {d.left}, pol, f) and \
                        _same_query(b, base, v.gamma, rest | {d.right}, pol, f):
                    return True
        return False
    if k == "counter-extension":
        if holds:
            return False
        c_base = base.union(v.extension) if v.extension else base
        if any(c.base.rules != c_base.rules for c in kids):
            return False
        if not v.gamma and not v.delta and _hard_consequent(f, pol) and isinstance(f, (And, Or)):
            if len(kids) != 3 or v.atom is None or v.sign is None:
                return False
            v1, v2, at = kids
            if v.mode == NAIVE and v.sign is not pol:
                return False
            if pol is PLUS:
                ok1 = _same_query(v1, c_base, {f.left}, E, v.sign, Atom(v.atom))
                ok2 = _same_query(v2, c_base, {f.right}, E, v.sign, Atom(v.atom))
            else:
                ok1 = _same_query(v1, c_base, E, {f.left}, v.sign, Atom(v.atom))
                ok2 = _same_query(v2, c_base, E, {f.right}, v.sign, Atom(v.atom))
            return (ok1 and ok2 and v1.outcome == HOLDS and v2.outcome == HOLDS and at.outcome == FAILS
                    and _same_query(at, c_base, E, E, v.sign, Atom(v.atom)))
        ants = [(PLUS, g) for g in sorted(v.gamma, key=print_formula)]
        ants += [(MINUS, d) for d in sorted(v.delta, key=print_formula)]
        if len(kids) != len(ants) + 1:
            return False
        for c, (s, g) in zip(kids, ants):
            if c.outcome != HOLDS or not _same_query(c, c_base, E, E, s, g):
                return False
        last = kids[-1]
        return last.outcome == FAILS and _same_query(last, c_base, E, E, pol, f)
    return False


def _explosive(f, pol) -> bool:
    return (isinstance(f, Bot) and pol is PLUS) or (isinstance(f, Top) and pol is MINUS)


def _local_parts(v: Verdict):
    f, pol = v.formula, v.polarity
    if isinstance(f, And) and pol is PLUS or isinstance(f, Or) and pol is MINUS:
        return [(pol, f.left), (pol, f.right)]
    if isinstance(f, Imp) and pol is MINUS or isinstance(f, CoImp) and pol is PLUS:
        return [(PLUS, f.left), (MINUS, f.right)]
    return None


# ----------------------------------------------------------------------------
# harmony
# ----------------------------------------------------------------------------

CONSISTENT, VIOLATION = "CONSISTENT", "HARMONY-VIOLATION"


@dataclass(frozen=True)
class HarmonyReport:
    status: str
    left: Verdict
    right: Verdict

    @property
    def decided(self) -> bool:
        return self.left.decisive and self.right.decisive

    def to_json(self) -> dict:
        return {"status": self.status, "left": self.left.to_json(), "right": self.right.to_json()}


def _report(left: Verdict, right: Verdict) -> HarmonyReport:
    clash = {left.outcome, right.outcome} == {HOLDS, FAILS}
    return HarmonyReport(VIOLATION if clash else CONSISTENT, left, right)


def harmony_check(base: Base, polarity: Polarity, formula: Formula,
                  budget: Budget = DEFAULT_BUDGET, mode: str = STANDARD) -> HarmonyReport:
    left = support(base, (), (), polarity, formula, budget, mode)
    right = support(dual_base(base), (), (), polarity.dual, dual_formula(formula), budget, mode)
    return _report(left, right)


def strong_harmony_check(base: Base, gamma, delta, polarity: Polarity, formula: Formula,
                         budget: Budget = DEFAULT_BUDGET, mode: str = STANDARD) -> HarmonyReport:
    gamma, delta = frozenset(gamma), frozenset(delta)
    if not gamma and not delta:
        return harmony_check(base, polarity, formula, budget, mode)
    left = support(base, gamma, delta, polarity, formula, budget, mode)
    right = support(dual_base(base), frozenset(dual_formula(d) for d in delta),
                    frozenset(dual_formula(g) for g in gamma), polarity.dual, dual_formula(formula),
                    budget, mode)
    return _report(left, right)
