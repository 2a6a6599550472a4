"""Formulas of 2Int: syntax tree, text syntax, duality and subformulas.

Concrete syntax::

    formula := coimp
    coimp   := imp | coimp "<-" imp
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "-" unary | atom | "bot" | "top" | "(" formula ")"

``->`` associates to the right, ``<-`` to the left, and the two arrows may
not be chained at the same level without parentheses.  ``~f`` is sugar for
``f -> bot`` and ``-f`` for ``top <- f``; the tree has no negation node.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Union

__all__ = [
    "Polarity", "PLUS", "MINUS",
    "Atom", "Bot", "Top", "And", "Or", "Imp", "CoImp", "Formula", "BOT", "TOP",
    "ParseError", "parse_formula", "print_formula", "dual_formula",
    "subformula_closure", "complexity", "atoms_of_formula", "is_atom_name",
    "check_atom_name",
]

ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"bot", "top"})


class Polarity(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def dual(self) -> Polarity:
        return MINUS if self is PLUS else PLUS

    @classmethod
    def parse(cls, text: str) -> Polarity:
        try:
            return cls(text.strip())
        except ValueError:
            raise ValueError(f"polarity must be '+' or '-', got {text!r}") from None

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other: Polarity) -> bool:
        return self.value < other.value


PLUS = Polarity.PLUS
MINUS = Polarity.MINUS


def is_atom_name(name: str) -> bool:
    return isinstance(name, str) and bool(ATOM_RE.match(name)) and name not in RESERVED


def check_atom_name(name: str) -> str:
    if not is_atom_name(name):
        raise ValueError(f"invalid atom name {name!r}")
    return name


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        check_atom_name(self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Bot:
    def __str__(self) -> str:
        return "bot"


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "top"


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Imp:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class CoImp:
    """Co-implication ``left <- right``."""
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return print_formula(self)


Formula = Union[Atom, Bot, Top, And, Or, Imp, CoImp]
BOT = Bot()
TOP = Top()
BINARY = (And, Or, Imp, CoImp)


def complexity(f: Formula) -> int:
    """Number of connective nodes; constants count 1, atoms 0."""
    if isinstance(f, Atom):
        return 0
    if isinstance(f, (Bot, Top)):
        return 1
    return 1 + complexity(f.left) + complexity(f.right)


def atoms_of_formula(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset({f.name})
    if isinstance(f, BINARY):
        return atoms_of_formula(f.left) | atoms_of_formula(f.right)
    return frozenset()


def dual_formula(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Or):
        return And(dual_formula(f.left), dual_formula(f.right))
    if isinstance(f, And):
        return Or(dual_formula(f.left), dual_formula(f.right))
    if isinstance(f, Imp):
        return CoImp(dual_formula(f.right), dual_formula(f.left))
    if isinstance(f, CoImp):
        return Imp(dual_formula(f.right), dual_formula(f.left))
    raise TypeError(f"not a formula: {f!r}")


def subformula_closure(fs: Iterable[Formula]) -> frozenset[Formula]:
    out: set[Formula] = set()
    todo = list(fs)
    while todo:
        f = todo.pop()
        if f in out:
            continue
        out.add(f)
        if isinstance(f, BINARY):
            todo.append(f.left)
            todo.append(f.right)
    return frozenset(out)


# ----------------------------------------------------------------------------
# printing
# ----------------------------------------------------------------------------

_ARROW, _OR, _AND, _ATOMIC = 1, 2, 3, 4


def _level(f: Formula) -> int:
    if isinstance(f, (Imp, CoImp)):
        return _ARROW
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    return _ATOMIC


def _wrap(f: Formula, parens: bool) -> str:
    s = print_formula(f)
    return f"({s})" if parens else s


def print_formula(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, And):
        return f"{_wrap(f.left, _level(f.left) < _AND)} & {_wrap(f.right, _level(f.right) <= _AND)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _level(f.left) < _OR)} | {_wrap(f.right, _level(f.right) <= _OR)}"
    if isinstance(f, Imp):
        left = _wrap(f.left, _level(f.left) <= _ARROW)
        right = _wrap(f.right, isinstance(f.right, CoImp))
        return f"{left} -> {right}"
    if isinstance(f, CoImp):
        left = _wrap(f.left, isinstance(f.left, Imp))
        right = _wrap(f.right, _level(f.right) <= _ARROW)
        return f"{left} <- {right}"
    raise TypeError(f"not a formula: {f!r}")


# ----------------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, offset: int, expected: Iterable[str], found: str):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"syntax error at offset {offset}: expected one of {{{exp}}}, found {found}")


_TOKEN_RE = re.compile(r"\s*(?:(->|<-|[&|~()\-])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break  # only trailing whitespace left
        if m.group(1):
            tokens.append(("op", m.group(1), m.start(1)))
        elif m.group(2):
            word = m.group(2)
            if word in RESERVED:
                tokens.append((word, word, m.start(2)))
            elif ATOM_RE.match(word):
                tokens.append(("atom", word, m.start(2)))
            else:
                raise ParseError(m.start(2), {"atom", "bot", "top", "("}, repr(word))
        else:
            raise ParseError(m.start(3), {"atom", "operator"}, repr(m.group(3)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


_UNARY_START = {"atom", "bot", "top", "(", "~", "-"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def at(self, value: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val == value

    def fail(self, expected: Iterable[str]):
        kind, val, off = self.peek()
        found = "end of input" if kind == "eof" else repr(val)
        raise ParseError(off, expected, found)

    def expect(self, value: str):
        if not self.at(value):
            self.fail({value})
        self.i += 1

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            right = self.implication()
            if self.at("<-"):
                self.fail({")", "->", "end of input"})
            return Imp(left, right)
        while self.at("<-"):
            self.i += 1
            left = CoImp(left, self.disjunction())
            if self.at("->"):
                self.fail({")", "<-", "end of input"})
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Imp(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, _ = self.peek()
        if kind == "op" and val == "~":
            self.i += 1
            return Imp(self.unary(), BOT)
        if kind == "op" and val == "-":
            self.i += 1
            return CoImp(TOP, self.unary())
        if kind == "atom":
            self.i += 1
            return Atom(val)
        if kind == "bot":
            self.i += 1
            return BOT
        if kind == "top":
            self.i += 1
            return TOP
        if kind == "op" and val == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        self.fail(_UNARY_START)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail({"&", "|", "->", "<-", "end of input"})
    return f
