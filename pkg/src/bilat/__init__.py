"""Bilateral base-extension semantics for 2Int."""
from .formula import (
    MINUS, PLUS, And, Atom, Bot, CoImp, Imp, Or, Polarity, Top, BOT, TOP,
    dual_formula, parse_formula, print_formula, subformula_closure,
)
from .base import AtomicRule, Base, RulePremise, dual_base, dual_rule, extends, parse_base, print_base
from .atomic import (
    AssumptionLeaf, AtomicSequent, RuleNode, check_atomic, derivable, derivable_fixpoint, derive,
    dual_deduction,
)
from .nd import Apply, Assume, NDJudgment, check_nd, nd_rule_catalog

__version__ = "0.1.0"
