"""Atomic deductions over a bilateral base.

Two independent decision procedures for atomic derivability are provided:

* :class:`AtomicEngine` / :func:`derive` explore only the states reachable
  from a goal (assumption sets grow by the discharge sets of the premises
  that are climbed) and close that finite graph under the rules, recording
  a witness deduction for every derivable state;
* :func:`derivable_fixpoint` computes the least fixpoint over *all*
  sequents drawn from a fixed atom universe, bottom-up, and is used as an
  oracle for the former.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Union

from .base import AtomicRule, Base, atoms_of, dual_rule_name
from .formula import MINUS, PLUS, Polarity, check_atom_name

__all__ = [
    "AssumptionLeaf", "RuleNode", "AtomicDeduction", "AtomicSequent",
    "DeductionError", "UnknownRule", "ChildCountMismatch", "PremiseAtomMismatch",
    "PremisePolarityMismatch", "UniverseTooSmall",
    "check_atomic", "AtomicEngine", "derive", "derivable", "derivable_fixpoint",
    "fixpoint_table", "dual_deduction", "deduction_depth",
    "deduction_from_json", "deduction_to_json", "sequent_to_json", "format_sequent",
]


@dataclass(frozen=True)
class AssumptionLeaf:
    atom: str
    polarity: Polarity


@dataclass(frozen=True)
class RuleNode:
    rule: str
    children: tuple[AtomicDeduction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


AtomicDeduction = Union[AssumptionLeaf, RuleNode]


@dataclass(frozen=True)
class AtomicSequent:
    proof_assumptions: frozenset[str]
    refutation_assumptions: frozenset[str]
    polarity: Polarity
    conclusion: str

    def __post_init__(self):
        object.__setattr__(self, "proof_assumptions", frozenset(self.proof_assumptions))
        object.__setattr__(self, "refutation_assumptions", frozenset(self.refutation_assumptions))

    @classmethod
    def closed(cls, polarity: Polarity, conclusion: str) -> AtomicSequent:
        return cls(frozenset(), frozenset(), polarity, conclusion)

    @property
    def is_assumption_case(self) -> bool:
        if self.polarity is PLUS:
            return self.conclusion in self.proof_assumptions
        return self.conclusion in self.refutation_assumptions

    def atoms(self) -> frozenset[str]:
        return self.proof_assumptions | self.refutation_assumptions | {self.conclusion}

    def dual(self) -> AtomicSequent:
        return AtomicSequent(self.refutation_assumptions, self.proof_assumptions,
                             self.polarity.dual, self.conclusion)

    def weaker_than(self, other: AtomicSequent) -> bool:
        """True if a witness of ``self`` also witnesses ``other``."""
        return (self.polarity is other.polarity and self.conclusion == other.conclusion
                and self.proof_assumptions <= other.proof_assumptions
                and self.refutation_assumptions <= other.refutation_assumptions)

    def __str__(self) -> str:
        return format_sequent(self)


def format_sequent(s: AtomicSequent) -> str:
    g = ", ".join(sorted(s.proof_assumptions)) or "∅"
    d = ", ".join(sorted(s.refutation_assumptions)) or "∅"
    return f"{g} ; {d} ⊢{s.polarity} {s.conclusion}"


# ----------------------------------------------------------------------------
# checking
# ----------------------------------------------------------------------------

class DeductionError(ValueError):
    def __init__(self, path: tuple[int, ...], message: str):
        self.path = path
        where = "root" + "".join(f".{i}" for i in path)
        super().__init__(f"at {where}: {message}")


class UnknownRule(DeductionError):
    pass


class ChildCountMismatch(DeductionError):
    pass


class PremiseAtomMismatch(DeductionError):
    pass


class PremisePolarityMismatch(DeductionError):
    pass


class UniverseTooSmall(ValueError):
    pass


def check_atomic(b: Base, d: AtomicDeduction) -> AtomicSequent:
    """Check ``d`` against ``b`` and return the sequent it witnesses."""
    return _check(b, d, ())


def _check(b: Base, d: AtomicDeduction, path: tuple[int, ...]) -> AtomicSequent:
    if isinstance(d, AssumptionLeaf):
        if d.polarity is PLUS:
            return AtomicSequent(frozenset({d.atom}), frozenset(), PLUS, d.atom)
        return AtomicSequent(frozenset(), frozenset({d.atom}), MINUS, d.atom)
    rule = b.get(d.rule)
    if rule is None:
        raise UnknownRule(path, f"rule {d.rule!r} is not in the base")
    if len(d.children) != len(rule.premises):
        raise ChildCountMismatch(
            path, f"rule {rule.name} has {len(rule.premises)} premises, got {len(d.children)} children")
    gamma: set[str] = set()
    delta: set[str] = set()
    for i, (child, prem) in enumerate(zip(d.children, rule.premises)):
        s = _check(b, child, path + (i,))
        if s.conclusion != prem.atom:
            raise PremiseAtomMismatch(
                path + (i,), f"premise {i} of {rule.name} needs {prem.atom}, child concludes {s.conclusion}")
        if s.polarity is not prem.polarity:
            raise PremisePolarityMismatch(
                path + (i,),
                f"premise {i} of {rule.name} needs a {prem.polarity} deduction, child is {s.polarity}")
        gamma |= s.proof_assumptions - prem.discharged_proofs
        delta |= s.refutation_assumptions - prem.discharged_refutations
    return AtomicSequent(frozenset(gamma), frozenset(delta), rule.conclusion_polarity, rule.conclusion)


def deduction_depth(d: AtomicDeduction) -> int:
    if isinstance(d, AssumptionLeaf):
        return 0
    return 1 + max((deduction_depth(c) for c in d.children), default=0)


def dual_deduction(d: AtomicDeduction) -> AtomicDeduction:
    if isinstance(d, AssumptionLeaf):
        return AssumptionLeaf(d.atom, d.polarity.dual)
    return RuleNode(dual_rule_name(d.rule), tuple(dual_deduction(c) for c in d.children))


# ----------------------------------------------------------------------------
# goal-directed derivability
# ----------------------------------------------------------------------------

_State = tuple  # (frozenset gamma, frozenset delta, Polarity, atom)


def _is_axiom_state(state: _State) -> bool:
    gamma, delta, pol, atom = state
    return atom in (gamma if pol is PLUS else delta)


class AtomicEngine:
    """Derivability oracle for one base.

    Results are exact for every state ever explored, so the tables are kept
    across queries on the same engine.
    """

    def __init__(self, base: Base):
        self.base = base
        self._heads: dict[tuple[str, Polarity], list[AtomicRule]] = {}
        for r in base.sorted_rules():
            self._heads.setdefault((r.conclusion, r.conclusion_polarity), []).append(r)
        self._edges: dict[_State, list[tuple[AtomicRule, tuple[_State, ...]]]] = {}
        self._proved: dict[_State, tuple[AtomicRule, tuple[_State, ...]] | None] = {}
        self._settled: set[_State] = set()

    def _expand(self, state: _State):
        gamma, delta, _, _ = state
        options = []
        for rule in self._heads.get((state[3], state[2]), ()):
            kids = tuple(
                (gamma | p.discharged_proofs, delta | p.discharged_refutations, p.polarity, p.atom)
                for p in rule.premises
            )
            options.append((rule, kids))
        return options

    def _solve(self, goal: _State) -> None:
        if goal in self._settled:
            return
        # collect the unsettled part of the reachable graph
        region: list[_State] = []
        seen = {goal}
        stack = [goal]
        while stack:
            st = stack.pop()
            region.append(st)
            if _is_axiom_state(st):
                self._proved[st] = None
                continue
            if st not in self._edges:
                self._edges[st] = self._expand(st)
            for _, kids in self._edges[st]:
                for k in kids:
                    if k not in seen and k not in self._settled:
                        seen.add(k)
                        stack.append(k)
        # least fixpoint by stages, so witnesses are of minimal height
        pending = [st for st in region if st not in self._proved]
        while True:
            newly = {}
            for st in pending:
                for rule, kids in self._edges[st]:
                    if all(k in self._proved for k in kids):
                        newly[st] = (rule, kids)
                        break
            if not newly:
                break
            self._proved.update(newly)
            pending = [st for st in pending if st not in newly]
        self._settled.update(region)

    def derivable(self, s: AtomicSequent) -> bool:
        goal = (s.proof_assumptions, s.refutation_assumptions, s.polarity, s.conclusion)
        self._solve(goal)
        return goal in self._proved

    def derive(self, s: AtomicSequent) -> AtomicDeduction | None:
        if not self.derivable(s):
            return None
        goal = (s.proof_assumptions, s.refutation_assumptions, s.polarity, s.conclusion)
        return self._witness(goal)

    def _witness(self, state: _State) -> AtomicDeduction:
        how = self._proved[state]
        if how is None:
            return AssumptionLeaf(state[3], state[2])
        rule, kids = how
        return RuleNode(rule.name, tuple(self._witness(k) for k in kids))


def derive(b: Base, s: AtomicSequent) -> AtomicDeduction | None:
    """A deduction over ``b`` witnessing ``s``, or None if there is none."""
    return AtomicEngine(b).derive(s)


def derivable(b: Base, s: AtomicSequent) -> bool:
    return AtomicEngine(b).derivable(s)


# ----------------------------------------------------------------------------
# bottom-up oracle
# ----------------------------------------------------------------------------

def _subsets(universe: list[str]) -> list[frozenset[str]]:
    return [frozenset(c) for n in range(len(universe) + 1)
            for c in itertools.combinations(universe, n)]


def fixpoint_table(b: Base, universe: Iterable[str]) -> frozenset[_State]:
    """All derivable states whose assumption sets lie inside ``universe``."""
    uni = sorted(set(universe))
    missing = atoms_of(b) - set(uni)
    if missing:
        raise UniverseTooSmall(f"universe lacks atoms of the base: {sorted(missing)}")
    subsets = _subsets(uni)
    rules = list(b.rules)
    true: set[_State] = set()
    for g in subsets:
        for d in subsets:
            for a in g:
                true.add((g, d, PLUS, a))
            for a in d:
                true.add((g, d, MINUS, a))
    changed = True
    while changed:
        changed = False
        for g in subsets:
            for d in subsets:
                for r in rules:
                    st = (g, d, r.conclusion_polarity, r.conclusion)
                    if st in true:
                        continue
                    if all((g | p.discharged_proofs, d | p.discharged_refutations, p.polarity, p.atom) in true
                           for p in r.premises):
                        true.add(st)
                        changed = True
    return frozenset(true)


def derivable_fixpoint(b: Base, universe: Iterable[str], s: AtomicSequent) -> bool:
    universe = set(universe)
    if not s.atoms() <= universe:
        raise UniverseTooSmall(f"universe lacks atoms of the sequent: {sorted(s.atoms() - universe)}")
    table = fixpoint_table(b, universe)
    return (s.proof_assumptions, s.refutation_assumptions, s.polarity, s.conclusion) in table


# ----------------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------------

def deduction_from_json(obj) -> AtomicDeduction:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("deduction: expected an object with 'kind'")
    kind = obj["kind"]
    if kind == "assume":
        atom = check_atom_name(obj.get("atom"))
        return AssumptionLeaf(atom, Polarity.parse(obj.get("polarity", "")))
    if kind == "rule":
        name = obj.get("rule")
        if not isinstance(name, str):
            raise ValueError("deduction: rule node needs a 'rule' name")
        return RuleNode(name, tuple(deduction_from_json(c) for c in obj.get("children", [])))
    raise ValueError(f"deduction: unknown kind {kind!r}")


def deduction_to_json(d: AtomicDeduction) -> dict:
    if isinstance(d, AssumptionLeaf):
        return {"kind": "assume", "atom": d.atom, "polarity": d.polarity.value}
    return {"kind": "rule", "rule": d.rule, "children": [deduction_to_json(c) for c in d.children]}


def sequent_to_json(s: AtomicSequent) -> dict:
    return {
        "proofs": sorted(s.proof_assumptions),
        "refutations": sorted(s.refutation_assumptions),
        "polarity": s.polarity.value,
        "conclusion": s.conclusion,
    }


def load_deduction(text: str) -> AtomicDeduction:
    return deduction_from_json(json.loads(text))
