"""Proof checker for the natural deduction system N2Int*.

Proofs are explicit trees.  Each inference is checked against a schema in
:data:`CATALOG`; premise shapes are patterns over the metavariables
``phi``, ``psi`` and ``chi`` that are unified jointly with the conclusion.

Four rules (``BotPlus``, ``TopMinus``, ``OrEPlus``, ``AndEMinus``) are
polarity-flexible: their conclusion and minor premises carry a single
``result_polarity`` chosen per application.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from .formula import (
    BINARY, BOT, MINUS, PLUS, TOP, And, Atom, Bot, CoImp, Formula, Imp, Or, Polarity,
    Top, parse_formula, print_formula,
)

__all__ = [
    "Meta", "PremiseSchema", "RuleSchema", "CATALOG", "FLEXIBLE", "nd_rule_catalog",
    "Assume", "Apply", "NDProof", "NDJudgment",
    "NDCheckError", "UnknownTag", "ChildCount", "ShapeMismatch", "PolarityMismatch",
    "MixedDottedLines", "IllegalDischarge", "DuplicateLabelConflict",
    "check_nd", "proof_from_json", "proof_to_json", "judgment_to_json",
    "judgment_from_json", "format_judgment", "proof_height",
]


@dataclass(frozen=True)
class Meta:
    """Schema metavariable."""
    name: str

    def __str__(self) -> str:
        return self.name


PHI, PSI, CHI = Meta("phi"), Meta("psi"), Meta("chi")


@dataclass(frozen=True)
class PremiseSchema:
    pattern: object
    polarity: Polarity | None  # None: the application's result polarity
    discharges: object = None  # pattern of the discharged assumption, if any
    discharge_role: Polarity | None = None  # PLUS: [..] proof, MINUS: [[..]] refutation


@dataclass(frozen=True)
class RuleSchema:
    name: str
    premises: tuple[PremiseSchema, ...]
    conclusion: object
    polarity: Polarity | None  # None: flexible
    display: str = ""

    @property
    def flexible(self) -> bool:
        return self.polarity is None

    @property
    def discharge_slots(self) -> list[int]:
        return [i for i, p in enumerate(self.premises) if p.discharges is not None]


def _p(pattern, pol, discharges=None, role=None) -> PremiseSchema:
    return PremiseSchema(pattern, pol, discharges, role)


_RULES = [
    RuleSchema("TopPlus", (), TOP, PLUS, "⊤(+)"),
    RuleSchema("BotMinus", (), BOT, MINUS, "⊥(-)"),
    RuleSchema("BotPlus", (_p(BOT, PLUS),), PHI, None, "⊥(+)"),
    RuleSchema("TopMinus", (_p(TOP, MINUS),), PHI, None, "⊤(-)"),
    RuleSchema("AndIPlus", (_p(PHI, PLUS), _p(PSI, PLUS)), And(PHI, PSI), PLUS, "I∧(+)"),
    RuleSchema("AndE1Plus", (_p(And(PHI, PSI), PLUS),), PHI, PLUS, "E1∧(+)"),
    RuleSchema("AndE2Plus", (_p(And(PHI, PSI), PLUS),), PSI, PLUS, "E2∧(+)"),
    RuleSchema("OrI1Plus", (_p(PHI, PLUS),), Or(PHI, PSI), PLUS, "I1∨(+)"),
    RuleSchema("OrI2Plus", (_p(PSI, PLUS),), Or(PHI, PSI), PLUS, "I2∨(+)"),
    RuleSchema("OrEPlus", (_p(Or(PHI, PSI), PLUS), _p(CHI, None, PHI, PLUS), _p(CHI, None, PSI, PLUS)),
               CHI, None, "E∨(+)"),
    RuleSchema("ImpIPlus", (_p(PSI, PLUS, PHI, PLUS),), Imp(PHI, PSI), PLUS, "I→(+)"),
    RuleSchema("ImpEPlus", (_p(Imp(PHI, PSI), PLUS), _p(PHI, PLUS)), PSI, PLUS, "E→(+)"),
    RuleSchema("CoImpIPlus", (_p(PHI, PLUS), _p(PSI, MINUS)), CoImp(PHI, PSI), PLUS, "I↤(+)"),
    RuleSchema("CoImpE1Plus", (_p(CoImp(PHI, PSI), PLUS),), PHI, PLUS, "E1↤(+)"),
    RuleSchema("CoImpE2Plus", (_p(CoImp(PHI, PSI), PLUS),), PSI, MINUS, "E2↤(+)"),
    RuleSchema("CoImpIMinus", (_p(PHI, MINUS, PSI, MINUS),), CoImp(PHI, PSI), MINUS, "I↤(-)"),
    RuleSchema("CoImpEMinus", (_p(CoImp(PHI, PSI), MINUS), _p(PSI, MINUS)), PHI, MINUS, "E↤(-)"),
    RuleSchema("AndI1Minus", (_p(PHI, MINUS),), And(PHI, PSI), MINUS, "I1∧(-)"),
    RuleSchema("AndI2Minus", (_p(PSI, MINUS),), And(PHI, PSI), MINUS, "I2∧(-)"),
    RuleSchema("AndEMinus", (_p(And(PHI, PSI), MINUS), _p(CHI, None, PHI, MINUS), _p(CHI, None, PSI, MINUS)),
               CHI, None, "E∧(-)"),
    RuleSchema("OrIMinus", (_p(PHI, MINUS), _p(PSI, MINUS)), Or(PHI, PSI), MINUS, "I∨(-)"),
    RuleSchema("OrE1Minus", (_p(Or(PHI, PSI), MINUS),), PHI, MINUS, "E1∨(-)"),
    RuleSchema("OrE2Minus", (_p(Or(PHI, PSI), MINUS),), PSI, MINUS, "E2∨(-)"),
    RuleSchema("ImpIMinus", (_p(PHI, PLUS), _p(PSI, MINUS)), Imp(PHI, PSI), MINUS, "I→(-)"),
    RuleSchema("ImpE1Minus", (_p(Imp(PHI, PSI), MINUS),), PHI, PLUS, "E1→(-)"),
    RuleSchema("ImpE2Minus", (_p(Imp(PHI, PSI), MINUS),), PSI, MINUS, "E2→(-)"),
]

CATALOG: dict[str, RuleSchema] = {r.name: r for r in _RULES}
FLEXIBLE = frozenset(r.name for r in _RULES if r.flexible)


def _pattern_str(p) -> str:
    if isinstance(p, Meta):
        return p.name
    if isinstance(p, (Bot, Top)):
        return str(p)
    sym = {And: "&", Or: "|", Imp: "->", CoImp: "<-"}[type(p)]
    return f"({_pattern_str(p.left)} {sym} {_pattern_str(p.right)})"


def nd_rule_catalog() -> list[dict]:
    """Machine-readable description of every rule schema."""
    out = []
    for r in _RULES:
        out.append({
            "tag": r.name,
            "display": r.display,
            "arity": len(r.premises),
            "premises": [
                {
                    "shape": _pattern_str(p.pattern),
                    "polarity": p.polarity.value if p.polarity else "result",
                    "discharges": None if p.discharges is None else {
                        "shape": _pattern_str(p.discharges),
                        "role": "proof" if p.discharge_role is PLUS else "refutation",
                    },
                }
                for p in r.premises
            ],
            "conclusion": _pattern_str(r.conclusion),
            "polarity": r.polarity.value if r.polarity else "result",
            "flexible": r.flexible,
        })
    return out


# ----------------------------------------------------------------------------
# proofs and judgments
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Assume:
    formula: Formula
    polarity: Polarity
    label: int = 0  # 0: never discharged


@dataclass(frozen=True)
class Apply:
    rule: str
    conclusion: Formula
    children: tuple[NDProof, ...] = ()
    discharge: tuple[int | None, ...] = ()  # one label per discharge slot of the schema
    result_polarity: Polarity | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "discharge", tuple(self.discharge))


NDProof = Union[Assume, Apply]


@dataclass(frozen=True)
class NDJudgment:
    proof_assumptions: frozenset[Formula]
    refutation_assumptions: frozenset[Formula]
    polarity: Polarity
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "proof_assumptions", frozenset(self.proof_assumptions))
        object.__setattr__(self, "refutation_assumptions", frozenset(self.refutation_assumptions))

    def weaker_than(self, other: NDJudgment) -> bool:
        return (self.polarity is other.polarity and self.conclusion == other.conclusion
                and self.proof_assumptions <= other.proof_assumptions
                and self.refutation_assumptions <= other.refutation_assumptions)

    def __str__(self) -> str:
        return format_judgment(self)


def format_judgment(j: NDJudgment) -> str:
    g = ", ".join(sorted(print_formula(f) for f in j.proof_assumptions)) or "∅"
    d = ", ".join(sorted(print_formula(f) for f in j.refutation_assumptions)) or "∅"
    return f"{g} ; {d} ⊢{j.polarity} {print_formula(j.conclusion)}"


def proof_height(p: NDProof) -> int:
    if isinstance(p, Assume):
        return 0
    return 1 + max((proof_height(c) for c in p.children), default=0)


# ----------------------------------------------------------------------------
# errors
# ----------------------------------------------------------------------------

class NDCheckError(ValueError):
    kind = "NDCheckError"

    def __init__(self, path: tuple[int, ...], message: str):
        self.path = path
        where = "root" + "".join(f".{i}" for i in path)
        super().__init__(f"{self.kind} at {where}: {message}")


class UnknownTag(NDCheckError):
    kind = "UnknownTag"


class ChildCount(NDCheckError):
    kind = "ChildCount"


class ShapeMismatch(NDCheckError):
    kind = "ShapeMismatch"


class PolarityMismatch(NDCheckError):
    kind = "PolarityMismatch"


class MixedDottedLines(NDCheckError):
    kind = "MixedDottedLines"


class IllegalDischarge(NDCheckError):
    kind = "IllegalDischarge"


class DuplicateLabelConflict(NDCheckError):
    kind = "DuplicateLabelConflict"


# ----------------------------------------------------------------------------
# checking
# ----------------------------------------------------------------------------

def _match(pattern, f: Formula, env: dict) -> bool:
    if isinstance(pattern, Meta):
        bound = env.get(pattern)
        if bound is None:
            env[pattern] = f
            return True
        return bound == f
    if isinstance(pattern, (Bot, Top)):
        return pattern == f
    if type(pattern) is not type(f):
        return False
    return _match(pattern.left, f.left, env) and _match(pattern.right, f.right, env)


def _instantiate(pattern, env: dict) -> Formula:
    if isinstance(pattern, Meta):
        return env[pattern]
    if isinstance(pattern, (Bot, Top, Atom)):
        return pattern
    return type(pattern)(_instantiate(pattern.left, env), _instantiate(pattern.right, env))


def _polarity_of(p: NDProof) -> Polarity:
    if isinstance(p, Assume):
        return p.polarity
    schema = CATALOG[p.rule]
    return p.result_polarity if schema.flexible else schema.polarity


@dataclass
class _Result:
    conclusion: Formula
    polarity: Polarity
    open: list = field(default_factory=list)  # (label, formula, polarity, path)


def check_nd(p: NDProof) -> NDJudgment:
    """Check a proof and return the judgment it establishes."""
    labels: dict[int, tuple[Formula, Polarity]] = {}
    _collect_labels(p, (), labels)
    discharged: set[int] = set()
    res = _check(p, (), discharged)
    for label, f, pol, path in res.open:
        if label in discharged:
            raise IllegalDischarge(path, f"assumption labelled {label} lies outside the scope of its discharge")
    gamma = frozenset(f for _, f, pol, _ in res.open if pol is PLUS)
    delta = frozenset(f for _, f, pol, _ in res.open if pol is MINUS)
    return NDJudgment(gamma, delta, res.polarity, res.conclusion)


def _collect_labels(p: NDProof, path, labels: dict) -> None:
    if isinstance(p, Assume):
        if p.label < 0:
            raise DuplicateLabelConflict(path, f"negative label {p.label}")
        if p.label == 0:
            return
        seen = labels.get(p.label)
        if seen is None:
            labels[p.label] = (p.formula, p.polarity)
        elif seen != (p.formula, p.polarity):
            raise DuplicateLabelConflict(
                path, f"label {p.label} is used for {seen[1]}{print_formula(seen[0])} "
                      f"and {p.polarity}{print_formula(p.formula)}")
        return
    for i, c in enumerate(p.children):
        _collect_labels(c, path + (i,), labels)


def _check(p: NDProof, path: tuple[int, ...], discharged: set[int]) -> _Result:
    if isinstance(p, Assume):
        return _Result(p.formula, p.polarity, [(p.label, p.formula, p.polarity, path)])
    schema = CATALOG.get(p.rule)
    if schema is None:
        raise UnknownTag(path, f"unknown rule {p.rule!r}")
    if schema.flexible:
        if p.result_polarity is None:
            raise MixedDottedLines(path, f"{p.rule} needs a result polarity")
        result_pol = p.result_polarity
    else:
        if p.result_polarity is not None and p.result_polarity is not schema.polarity:
            raise PolarityMismatch(path, f"{p.rule} always concludes with {schema.polarity}")
        result_pol = schema.polarity
    if len(p.children) != len(schema.premises):
        raise ChildCount(path, f"{p.rule} takes {len(schema.premises)} premises, got {len(p.children)}")

    kids = [_check(c, path + (i,), discharged) for i, c in enumerate(p.children)]

    for i, (k, prem) in enumerate(zip(kids, schema.premises)):
        if prem.polarity is None:
            if k.polarity is not result_pol:
                raise MixedDottedLines(
                    path + (i,), f"minor premise {i} of {p.rule} is {k.polarity}, "
                                 f"but the application concludes with {result_pol}")
        elif k.polarity is not prem.polarity:
            raise PolarityMismatch(
                path + (i,), f"premise {i} of {p.rule} must be {prem.polarity}, got {k.polarity}")

    env: dict = {}
    if not _match(schema.conclusion, p.conclusion, env):
        raise ShapeMismatch(path, f"conclusion {print_formula(p.conclusion)} does not fit {p.rule}")
    for i, (k, prem) in enumerate(zip(kids, schema.premises)):
        if not _match(prem.pattern, k.conclusion, env):
            raise ShapeMismatch(
                path + (i,), f"premise {i} of {p.rule} concludes {print_formula(k.conclusion)}, "
                             f"expected {_pattern_str(prem.pattern)}")

    slots = schema.discharge_slots
    if len(p.discharge) > len(slots):
        raise IllegalDischarge(path, f"{p.rule} discharges at most {len(slots)} assumption classes")
    open_: list = []
    slot_labels = dict(zip(slots, p.discharge))
    for i, k in enumerate(kids):
        label = slot_labels.get(i)
        if label is None:
            open_.extend(k.open)
            continue
        if label <= 0:
            raise IllegalDischarge(path, f"label {label} cannot be discharged")
        if label in discharged:
            raise IllegalDischarge(path, f"label {label} is discharged twice")
        discharged.add(label)
        prem = schema.premises[i]
        target = _instantiate(prem.discharges, env)
        for entry in k.open:
            lab, f, pol, leaf_path = entry
            if lab != label:
                open_.append(entry)
                continue
            if f != target or pol is not prem.discharge_role:
                raise IllegalDischarge(
                    leaf_path, f"{p.rule} discharges {prem.discharge_role}{print_formula(target)} "
                               f"under label {label}, found {pol}{print_formula(f)}")
    return _Result(p.conclusion, result_pol, open_)


# ----------------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------------

def _formula_field(obj: dict, key: str) -> Formula:
    value = obj.get(key)
    if not isinstance(value, str):
        raise ValueError(f"proof: field {key!r} must be a formula string")
    return parse_formula(value)


def proof_from_json(obj) -> NDProof:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("proof: expected an object with 'kind'")
    kind = obj["kind"]
    if kind == "assume":
        label = obj.get("label", 0)
        if not isinstance(label, int) or isinstance(label, bool):
            raise ValueError("proof: label must be an integer")
        return Assume(_formula_field(obj, "formula"), Polarity.parse(obj.get("polarity", "")), label)
    if kind == "apply":
        rule = obj.get("rule")
        if not isinstance(rule, str):
            raise ValueError("proof: apply node needs a 'rule'")
        rp = obj.get("resultPolarity")
        discharge = obj.get("discharge") or []
        if not isinstance(discharge, list):
            raise ValueError("proof: 'discharge' must be a list of labels")
        return Apply(
            rule,
            _formula_field(obj, "conclusion"),
            tuple(proof_from_json(c) for c in obj.get("children", [])),
            tuple(discharge),
            None if rp is None else Polarity.parse(rp),
        )
    raise ValueError(f"proof: unknown kind {kind!r}")


def proof_to_json(p: NDProof) -> dict:
    if isinstance(p, Assume):
        return {"kind": "assume", "formula": print_formula(p.formula),
                "polarity": p.polarity.value, "label": p.label}
    return {
        "kind": "apply",
        "rule": p.rule,
        "conclusion": print_formula(p.conclusion),
        "resultPolarity": None if p.result_polarity is None else p.result_polarity.value,
        "children": [proof_to_json(c) for c in p.children],
        "discharge": list(p.discharge),
    }


def judgment_to_json(j: NDJudgment) -> dict:
    return {
        "proofs": sorted(print_formula(f) for f in j.proof_assumptions),
        "refutations": sorted(print_formula(f) for f in j.refutation_assumptions),
        "polarity": j.polarity.value,
        "conclusion": print_formula(j.conclusion),
    }


def judgment_from_json(obj) -> NDJudgment:
    return NDJudgment(
        frozenset(parse_formula(s) for s in obj.get("proofs", [])),
        frozenset(parse_formula(s) for s in obj.get("refutations", [])),
        Polarity.parse(obj["polarity"]),
        parse_formula(obj["conclusion"]),
    )


def load_proof(text: str) -> NDProof:
    return proof_from_json(json.loads(text))
