"""Finite Kripke models for 2Int.

A model has a preorder on worlds and two monotone valuations, one for
verification (``vplus``) and one for falsification (``vminus``).
Implication is forced with a proof sign at ``w`` when every world above
``w`` that forces the antecedent also forces the consequent; co-implication
is forced with a refutation sign dually.

Both of those clauses quantify over the worlds above ``w``. Reading them
at ``w`` alone would break persistence, so that reading is not offered.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .formula import (
    MINUS, PLUS, And, Atom, Bot, CoImp, Formula, Imp, Or, Polarity, Top,
    atoms_of_formula, check_atom_name,
)

__all__ = [
    "KripkeModel", "ModelError", "MonotonicityViolation", "SearchTooLarge",
    "validate_model", "model_from_json", "model_to_json",
    "forces", "model_valid", "entails", "countermodel_search", "rooted_posets",
]


class ModelError(ValueError):
    pass


class MonotonicityViolation(ModelError):
    def __init__(self, w: str, w2: str, atom: str, sign: Polarity):
        self.w, self.w2, self.atom, self.sign = w, w2, atom, sign
        which = "vplus" if sign is PLUS else "vminus"
        super().__init__(f"{atom} is in {which}({w}) but not in {which}({w2}) although {w2} >= {w}")


class SearchTooLarge(ModelError):
    pass


@dataclass(frozen=True)
class KripkeModel:
    """A validated model.  ``order`` is reflexive and transitive."""
    worlds: tuple[str, ...]
    order: frozenset[tuple[str, str]]  # (w, w2) means w2 >= w
    vplus: dict
    vminus: dict

    def __hash__(self):
        return hash((self.worlds, self.order))

    def above(self, w: str) -> list[str]:
        return [v for v in self.worlds if (w, v) in self.order]

    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.worlds)}


def _closure(worlds: list[str], pairs: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    rel = {(w, w) for w in worlds} | set(pairs)
    for k in worlds:
        for i in worlds:
            if (i, k) not in rel:
                continue
            for j in worlds:
                if (k, j) in rel:
                    rel.add((i, j))
    return rel


def validate_model(worlds, order, vplus, vminus) -> KripkeModel:
    """Close ``order`` reflexively and transitively, then check monotonicity."""
    worlds = [str(w) for w in worlds]
    if not worlds:
        raise ModelError("a model needs at least one world")
    if len(set(worlds)) != len(worlds):
        raise ModelError("duplicate world ids")
    known = set(worlds)
    for a, b in order:
        if a not in known or b not in known:
            raise ModelError(f"order mentions an unknown world in ({a}, {b})")
    vp, vm = {}, {}
    for name, src, dst in (("vplus", vplus, vp), ("vminus", vminus, vm)):
        for w, atoms in src.items():
            if w not in known:
                raise ModelError(f"{name} mentions unknown world {w!r}")
        for w in worlds:
            try:
                dst[w] = frozenset(check_atom_name(a) for a in src.get(w, ()))
            except ValueError as e:
                raise ModelError(f"{name} at {w!r}: {e}") from None
    rel = _closure(worlds, [(str(a), str(b)) for a, b in order])
    for w, w2 in sorted(rel):
        for sign, val in ((PLUS, vp), (MINUS, vm)):
            missing = val[w] - val[w2]
            if missing:
                raise MonotonicityViolation(w, w2, min(missing), sign)
    return KripkeModel(tuple(worlds), frozenset(rel), vp, vm)


def model_from_json(obj) -> KripkeModel:
    if not isinstance(obj, dict) or "worlds" not in obj:
        raise ModelError("model: expected an object with 'worlds'")
    order = obj.get("order", [])
    if not all(isinstance(p, list) and len(p) == 2 for p in order):
        raise ModelError("model: 'order' must be a list of [w, w'] pairs")
    return validate_model(obj["worlds"], [tuple(p) for p in order],
                          obj.get("vplus", {}), obj.get("vminus", {}))


def model_to_json(m: KripkeModel) -> dict:
    # only the strict part is written; closure is reapplied on load
    return {
        "worlds": list(m.worlds),
        "order": [[a, b] for a, b in sorted(m.order) if a != b],
        "vplus": {w: sorted(m.vplus[w]) for w in m.worlds},
        "vminus": {w: sorted(m.vminus[w]) for w in m.worlds},
    }


# ----------------------------------------------------------------------------
# forcing
# ----------------------------------------------------------------------------

def forces(m: KripkeModel, w: str, pol: Polarity, f: Formula) -> bool:
    if w not in m.vplus:
        raise ModelError(f"unknown world {w!r}")
    return _forces(m, w, pol, f)


def _forces(m: KripkeModel, w: str, pol: Polarity, f: Formula) -> bool:
    plus = pol is PLUS
    if isinstance(f, Atom):
        return f.name in (m.vplus[w] if plus else m.vminus[w])
    if isinstance(f, Bot):
        return not plus
    if isinstance(f, Top):
        return plus
    if isinstance(f, And):
        if plus:
            return _forces(m, w, PLUS, f.left) and _forces(m, w, PLUS, f.right)
        return _forces(m, w, MINUS, f.left) or _forces(m, w, MINUS, f.right)
    if isinstance(f, Or):
        if plus:
            return _forces(m, w, PLUS, f.left) or _forces(m, w, PLUS, f.right)
        return _forces(m, w, MINUS, f.left) and _forces(m, w, MINUS, f.right)
    if isinstance(f, Imp):
        if plus:
            return all(not _forces(m, v, PLUS, f.left) or _forces(m, v, PLUS, f.right)
                       for v in m.above(w))
        return _forces(m, w, PLUS, f.left) and _forces(m, w, MINUS, f.right)
    if isinstance(f, CoImp):
        if plus:
            return _forces(m, w, PLUS, f.left) and _forces(m, w, MINUS, f.right)
        return all(not _forces(m, v, MINUS, f.right) or _forces(m, v, MINUS, f.left)
                   for v in m.above(w))
    raise TypeError(f"not a formula: {f!r}")


def model_valid(m: KripkeModel, pol: Polarity, f: Formula) -> bool:
    return all(_forces(m, w, pol, f) for w in m.worlds)


def entails(m: KripkeModel, gamma, delta, pol: Polarity, chi: Formula) -> bool:
    for w in m.worlds:
        if (all(_forces(m, w, PLUS, g) for g in gamma)
                and all(_forces(m, w, MINUS, d) for d in delta)
                and not _forces(m, w, pol, chi)):
            return False
    return True


# ----------------------------------------------------------------------------
# countermodel search
# ----------------------------------------------------------------------------

def _canonical(n: int, edges: frozenset) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        if perm[0] != 0:
            continue  # the root stays the root
        key = tuple(sorted((perm[a], perm[b]) for a, b in edges))
        if best is None or key < best:
            best = key
    return best


def rooted_posets(n: int) -> list[frozenset[tuple[int, int]]]:
    """Strict partial orders on ``0..n-1`` with least element 0, one per iso class.

    Every finite preorder model is equivalent, world by world, to a rooted
    poset model (take the generated submodel and identify equivalent worlds),
    so these suffice for countermodel search.
    """
    if n == 1:
        return [frozenset()]
    optional = [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    seen = set()
    out = []
    for bits in itertools.product((False, True), repeat=len(optional)):
        edges = {(0, j) for j in range(1, n)}
        edges |= {e for e, on in zip(optional, bits) if on}
        if any((i, k) in edges and (k, j) in edges and (i, j) not in edges
               for i in range(n) for k in range(n) for j in range(n)):
            continue
        edges = frozenset(edges)
        key = _canonical(n, edges)
        if key in seen:
            continue
        seen.add(key)
        out.append(edges)
    return out


def _upsets(n: int, up: list[int]) -> list[int]:
    out = []
    for mask in range(1 << n):
        if all(mask & up[w] == up[w] for w in range(n) if mask >> w & 1):
            out.append(mask)
    return out


class _Evaluator:
    """Computes, per formula and sign, the bitmask of forcing worlds."""

    def __init__(self, n: int, up: list[int], vp: dict, vm: dict):
        self.n, self.up, self.vp, self.vm = n, up, vp, vm
        self.full = (1 << n) - 1
        self.memo: dict = {}

    def box(self, mask: int) -> int:
        # worlds all of whose successors lie in mask
        out = 0
        for w in range(self.n):
            if self.up[w] & mask == self.up[w]:
                out |= 1 << w
        return out

    def ev(self, pol: Polarity, f: Formula) -> int:
        key = (pol, f)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        plus = pol is PLUS
        if isinstance(f, Atom):
            r = (self.vp if plus else self.vm).get(f.name, 0)
        elif isinstance(f, Bot):
            r = 0 if plus else self.full
        elif isinstance(f, Top):
            r = self.full if plus else 0
        elif isinstance(f, And):
            if plus:
                r = self.ev(PLUS, f.left) & self.ev(PLUS, f.right)
            else:
                r = self.ev(MINUS, f.left) | self.ev(MINUS, f.right)
        elif isinstance(f, Or):
            if plus:
                r = self.ev(PLUS, f.left) | self.ev(PLUS, f.right)
            else:
                r = self.ev(MINUS, f.left) & self.ev(MINUS, f.right)
        elif isinstance(f, Imp):
            if plus:
                r = self.box(~self.ev(PLUS, f.left) & self.full | self.ev(PLUS, f.right))
            else:
                r = self.ev(PLUS, f.left) & self.ev(MINUS, f.right)
        elif isinstance(f, CoImp):
            if plus:
                r = self.ev(PLUS, f.left) & self.ev(MINUS, f.right)
            else:
                r = self.box(~self.ev(MINUS, f.right) & self.full | self.ev(MINUS, f.left))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[key] = r
        return r


DEFAULT_CEILING = 20_000_000


def countermodel_search(gamma, delta, pol: Polarity, chi: Formula, max_worlds: int,
                        atom_universe=None, ceiling: int = DEFAULT_CEILING):
    """First ``(model, world)`` refuting ``gamma;delta |= pol chi``, or None.

    Models are tried by increasing size, so a returned witness is as small
    as possible.  Raises :class:`SearchTooLarge` when the number of
    candidate models exceeds ``ceiling``.
    """
    gamma, delta = list(gamma), list(delta)
    needed = set(atoms_of_formula(chi))
    for f in gamma + delta:
        needed |= atoms_of_formula(f)
    atoms = sorted(needed if atom_universe is None else set(atom_universe))
    if not needed <= set(atoms):
        raise ModelError(f"atom universe lacks {sorted(needed - set(atoms))}")
    if max_worlds < 1:
        raise ModelError("max_worlds must be at least 1")
    # atoms outside the query never affect forcing; keep them empty
    relevant = [a for a in atoms if a in needed]

    shapes = []
    total = 0
    for n in range(1, max_worlds + 1):
        for edges in rooted_posets(n):
            up = [1 << w for w in range(n)]
            for a, b in edges:
                up[a] |= 1 << b
            ups = _upsets(n, up)
            total += len(ups) ** (2 * len(relevant))
            shapes.append((n, edges, up, ups))
    if total > ceiling:
        raise SearchTooLarge(f"{total} candidate models exceed the ceiling of {ceiling}")

    for n, edges, up, ups in shapes:
        for combo in itertools.product(ups, repeat=2 * len(relevant)):
            vp = dict(zip(relevant, combo[: len(relevant)]))
            vm = dict(zip(relevant, combo[len(relevant):]))
            ev = _Evaluator(n, up, vp, vm)
            ok = ev.full
            for g in gamma:
                ok &= ev.ev(PLUS, g)
            for d in delta:
                ok &= ev.ev(MINUS, d)
            bad = ok & ~ev.ev(pol, chi)
            if not bad:
                continue
            w = (bad & -bad).bit_length() - 1
            model = _materialize(n, edges, vp, vm)
            world = model.worlds[w]
            assert all(forces(model, world, PLUS, g) for g in gamma)
            assert all(forces(model, world, MINUS, d) for d in delta)
            assert not forces(model, world, pol, chi)
            return model, world
    return None


def _materialize(n: int, edges, vp: dict, vm: dict) -> KripkeModel:
    names = [f"w{i}" for i in range(n)]
    plus = {names[w]: [a for a, m in vp.items() if m >> w & 1] for w in range(n)}
    minus = {names[w]: [a for a, m in vm.items() if m >> w & 1] for w in range(n)}
    return validate_model(names, [(names[a], names[b]) for a, b in sorted(edges)], plus, minus)


def load_model(text: str) -> KripkeModel:
    return model_from_json(json.loads(text))
