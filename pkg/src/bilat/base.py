"""Bilateral atomic rules and bases."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .formula import MINUS, PLUS, Polarity, check_atom_name

__all__ = [
    "RulePremise", "AtomicRule", "Base", "BaseFormatError",
    "parse_base", "print_base", "base_from_json", "base_to_json",
    "rule_from_json", "rule_to_json",
    "extends", "dual_rule", "dual_base", "dual_rule_name", "atoms_of",
]

DUAL_SUFFIX = "^D"


class BaseFormatError(ValueError):
    pass


@dataclass(frozen=True)
class RulePremise:
    atom: str
    polarity: Polarity
    discharged_proofs: frozenset[str] = frozenset()
    discharged_refutations: frozenset[str] = frozenset()

    def __post_init__(self):
        check_atom_name(self.atom)
        object.__setattr__(self, "discharged_proofs", frozenset(self.discharged_proofs))
        object.__setattr__(self, "discharged_refutations", frozenset(self.discharged_refutations))
        for a in self.discharged_proofs | self.discharged_refutations:
            check_atom_name(a)

    def __str__(self) -> str:
        disch = ""
        if self.discharged_proofs or self.discharged_refutations:
            dp = ",".join(sorted(self.discharged_proofs))
            dr = ",".join(sorted(self.discharged_refutations))
            disch = f"[{dp};{dr}]"
        return f"{disch}{self.polarity}{self.atom}"


@dataclass(frozen=True)
class AtomicRule:
    name: str
    premises: tuple[RulePremise, ...]
    conclusion: str
    conclusion_polarity: Polarity

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        check_atom_name(self.conclusion)

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @property
    def shape(self) -> tuple:
        """Name-free identity used by :func:`extends`."""
        return (self.premises, self.conclusion, self.conclusion_polarity)

    def atoms(self) -> frozenset[str]:
        out = {self.conclusion}
        for p in self.premises:
            out.add(p.atom)
            out |= p.discharged_proofs | p.discharged_refutations
        return frozenset(out)

    def __str__(self) -> str:
        prem = ", ".join(str(p) for p in self.premises)
        return f"{self.name}: {prem} => {self.conclusion_polarity}{self.conclusion}"


@dataclass(frozen=True)
class Base:
    rules: frozenset[AtomicRule] = frozenset()
    _by_name: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        rules = frozenset(self.rules)
        object.__setattr__(self, "rules", rules)
        by_name: dict[str, AtomicRule] = {}
        for r in rules:
            if r.name in by_name:
                raise BaseFormatError(f"duplicate rule name {r.name!r}")
            by_name[r.name] = r
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def of(cls, rules: Iterable[AtomicRule]) -> Base:
        return cls(frozenset(rules))

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.sorted_rules())

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def rule(self, name: str) -> AtomicRule:
        return self._by_name[name]

    def get(self, name: str) -> AtomicRule | None:
        return self._by_name.get(name)

    def sorted_rules(self) -> list[AtomicRule]:
        return sorted(self.rules, key=lambda r: r.name)

    def shapes(self) -> frozenset:
        return frozenset(r.shape for r in self.rules)

    def union(self, extra: Iterable[AtomicRule]) -> Base:
        return Base(self.rules | frozenset(extra))


def extends(c: Base, b: Base) -> bool:
    """True iff ``c`` results from ``b`` by adding rules (names ignored)."""
    return b.shapes() <= c.shapes()


def atoms_of(b: Base) -> frozenset[str]:
    out: set[str] = set()
    for r in b.rules:
        out |= r.atoms()
    return frozenset(out)


def dual_rule_name(name: str) -> str:
    if name.endswith(DUAL_SUFFIX):
        return name[: -len(DUAL_SUFFIX)]
    return name + DUAL_SUFFIX


def dual_rule(r: AtomicRule) -> AtomicRule:
    premises = tuple(
        RulePremise(p.atom, p.polarity.dual, p.discharged_refutations, p.discharged_proofs)
        for p in r.premises
    )
    return AtomicRule(dual_rule_name(r.name), premises, r.conclusion, r.conclusion_polarity.dual)


def dual_base(b: Base) -> Base:
    return Base(frozenset(dual_rule(r) for r in b.rules))


# ----------------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------------

def _polarity(value, where: str) -> Polarity:
    if value not in ("+", "-"):
        raise BaseFormatError(f"{where}: polarity must be \"+\" or \"-\", got {value!r}")
    return PLUS if value == "+" else MINUS


def _atom(value, where: str) -> str:
    try:
        return check_atom_name(value)
    except ValueError:
        raise BaseFormatError(f"{where}: invalid atom name {value!r}") from None


def _atom_list(value, where: str) -> frozenset[str]:
    if value is None:
        return frozenset()
    if not isinstance(value, list):
        raise BaseFormatError(f"{where}: expected a list of atoms")
    return frozenset(_atom(a, where) for a in value)


def rule_from_json(obj: dict, where: str = "rule") -> AtomicRule:
    if not isinstance(obj, dict):
        raise BaseFormatError(f"{where}: expected an object")
    try:
        name = obj["name"]
        raw_premises = obj.get("premises", [])
        conclusion = obj["conclusion"]
        pol = obj["conclusionPolarity"]
    except KeyError as e:
        raise BaseFormatError(f"{where}: missing field {e.args[0]!r}") from None
    if not isinstance(name, str) or not name:
        raise BaseFormatError(f"{where}: rule name must be a nonempty string")
    where = f"rule {name!r}"
    premises = []
    for i, p in enumerate(raw_premises):
        pw = f"{where} premise {i}"
        if not isinstance(p, dict) or "atom" not in p or "polarity" not in p:
            raise BaseFormatError(f"{pw}: expected object with 'atom' and 'polarity'")
        premises.append(RulePremise(
            _atom(p["atom"], pw),
            _polarity(p["polarity"], pw),
            _atom_list(p.get("dischargedProofs"), pw),
            _atom_list(p.get("dischargedRefutations"), pw),
        ))
    return AtomicRule(name, tuple(premises), _atom(conclusion, where), _polarity(pol, where))


def rule_to_json(r: AtomicRule) -> dict:
    return {
        "name": r.name,
        "premises": [
            {
                "atom": p.atom,
                "polarity": p.polarity.value,
                "dischargedProofs": sorted(p.discharged_proofs),
                "dischargedRefutations": sorted(p.discharged_refutations),
            }
            for p in r.premises
        ],
        "conclusion": r.conclusion,
        "conclusionPolarity": r.conclusion_polarity.value,
    }


def base_from_json(obj) -> Base:
    if not isinstance(obj, dict) or not isinstance(obj.get("rules"), list):
        raise BaseFormatError("base: expected an object with a 'rules' list")
    rules = [rule_from_json(r, f"rule #{i}") for i, r in enumerate(obj["rules"])]
    names = [r.name for r in rules]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise BaseFormatError(f"duplicate rule names: {', '.join(dupes)}")
    return Base(frozenset(rules))


def base_to_json(b: Base) -> dict:
    return {"rules": [rule_to_json(r) for r in b.sorted_rules()]}


def parse_base(text: str) -> Base:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise BaseFormatError(f"malformed JSON at offset {e.pos}: {e.msg}") from None
    return base_from_json(obj)


def print_base(b: Base) -> str:
    return json.dumps(base_to_json(b), indent=2)
