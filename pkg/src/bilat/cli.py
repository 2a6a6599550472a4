"""Command-line front end.

Exit codes: 0 success (holds, derivable, valid, consistent), 1 check failed
(fails, not derivable, countermodel found, violation), 2 unknown, 3 input
error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import atomic, kripke, nd, simulation, support
from .base import BaseFormatError, base_from_json, base_to_json, dual_base
from .formula import ParseError, Polarity, dual_formula, parse_formula, print_formula

OK, FAILED, UNKNOWN, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON at offset {e.pos}: {e.msg}") from None


def _load(path: str, what: str, fn):
    obj = _read_json(path)
    try:
        return fn(obj)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{path}: invalid {what}: {e}") from None


def _formula(text: str, flag: str = "--formula"):
    try:
        return parse_formula(text)
    except ParseError as e:
        raise InputError(f"{flag} {text!r}: {e}") from None


def _formulas(csv: str | None, flag: str) -> frozenset:
    if not csv:
        return frozenset()
    return frozenset(_formula(part, flag) for part in csv.split(",") if part.strip())


def _atoms(csv: str | None) -> frozenset[str]:
    if not csv:
        return frozenset()
    from .formula import check_atom_name
    try:
        return frozenset(check_atom_name(a.strip()) for a in csv.split(",") if a.strip())
    except ValueError as e:
        raise InputError(str(e)) from None


def _polarity(text: str | None) -> Polarity:
    if text is None:
        raise InputError("--polarity is required")
    try:
        return Polarity.parse(text)
    except ValueError as e:
        raise InputError(str(e)) from None


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"--{n.replace('_', '-')} is required for {args.command}")


class _Out:
    def __init__(self, args):
        self.json = args.json
        self.doc: dict = {}
        self.lines: list[str] = []

    def say(self, line: str):
        self.lines.append(line)

    def emit(self):
        if self.json:
            print(json.dumps(self.doc, indent=2, sort_keys=True, ensure_ascii=False))
        else:
            for line in self.lines:
                print(line)


def _write(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_check_atomic(args, out: _Out) -> int:
    _require(args, "base", "deduction")
    b = _load(args.base, "base", base_from_json)
    d = _load(args.deduction, "deduction", atomic.deduction_from_json)
    try:
        s = atomic.check_atomic(b, d)
    except atomic.DeductionError as e:
        out.doc = {"valid": False, "error": type(e).__name__, "message": str(e)}
        out.say(f"INVALID: {e}")
        return FAILED
    out.doc = {"valid": True, "sequent": atomic.sequent_to_json(s)}
    out.say(str(s))
    if args.goal is not None:
        target = atomic.AtomicSequent(_atoms(args.proofs), _atoms(args.refutations),
                                      _polarity(args.polarity), args.goal)
        ok = s.weaker_than(target)
        out.doc["matchesGoal"] = ok
        if not ok:
            out.say(f"does not witness {target}")
            return FAILED
    return OK


def cmd_derive(args, out: _Out) -> int:
    _require(args, "base", "goal")
    b = _load(args.base, "base", base_from_json)
    goal = next(iter(_atoms(args.goal)), None)
    if goal is None:
        raise InputError("--goal must name an atom")
    s = atomic.AtomicSequent(_atoms(args.proofs), _atoms(args.refutations), _polarity(args.polarity), goal)
    d = atomic.derive(b, s)
    out.doc = {"sequent": atomic.sequent_to_json(s), "derivable": d is not None}
    if d is None:
        out.say(f"NOT DERIVABLE: {s}")
        return FAILED
    out.doc["deduction"] = atomic.deduction_to_json(d)
    out.say(f"DERIVABLE: {s}")
    out.say(json.dumps(atomic.deduction_to_json(d), indent=2))
    return OK


def cmd_check_nd(args, out: _Out) -> int:
    _require(args, "proof")
    p = _load(args.proof, "proof", nd.proof_from_json)
    try:
        j = nd.check_nd(p)
    except nd.NDCheckError as e:
        out.doc = {"valid": False, "error": e.kind, "path": list(e.path), "message": str(e)}
        out.say(f"INVALID: {e}")
        return FAILED
    out.doc = {"valid": True, "judgment": nd.judgment_to_json(j)}
    out.say(nd.format_judgment(j))
    if args.formula is not None:
        target = nd.NDJudgment(_formulas(args.proofs, "--proofs"), _formulas(args.refutations, "--refutations"),
                               _polarity(args.polarity), _formula(args.formula))
        ok = j.weaker_than(target)
        out.doc["matchesTarget"] = ok
        if not ok:
            out.say(f"does not establish {nd.format_judgment(target)}")
            return FAILED
    return OK


def cmd_dual(args, out: _Out) -> int:
    if args.base:
        b = _load(args.base, "base", base_from_json)
        doc = base_to_json(dual_base(b))
    elif args.deduction:
        d = _load(args.deduction, "deduction", atomic.deduction_from_json)
        doc = atomic.deduction_to_json(atomic.dual_deduction(d))
    elif args.formula:
        doc = {"formula": print_formula(dual_formula(_formula(args.formula)))}
    else:
        raise InputError("dual needs one of --base, --deduction, --formula")
    if args.out:
        _write(args.out, doc)
    out.doc = doc
    out.say(doc["formula"] if "formula" in doc else json.dumps(doc, indent=2, ensure_ascii=False))
    return OK


def cmd_kripke_check(args, out: _Out) -> int:
    _require(args, "model", "formula")
    m = _load(args.model, "model", kripke.model_from_json)
    f = _formula(args.formula)
    pol = _polarity(args.polarity)
    gamma, delta = _formulas(args.proofs, "--proofs"), _formulas(args.refutations, "--refutations")
    if args.world is not None:
        if args.world not in m.worlds:
            raise InputError(f"unknown world {args.world!r}")
        ok = (not all(kripke.forces(m, args.world, kripke.PLUS, g) for g in gamma)
              or not all(kripke.forces(m, args.world, kripke.MINUS, d) for d in delta)
              or kripke.forces(m, args.world, pol, f))
        scope = f"at {args.world}"
    else:
        ok = kripke.entails(m, gamma, delta, pol, f)
        scope = "in every world"
    out.doc = {"holds": ok, "world": args.world}
    out.say(f"{'HOLDS' if ok else 'FAILS'} {scope}")
    return OK if ok else FAILED


def cmd_kripke_countermodel(args, out: _Out) -> int:
    _require(args, "formula")
    f = _formula(args.formula)
    pol = _polarity(args.polarity)
    gamma, delta = _formulas(args.proofs, "--proofs"), _formulas(args.refutations, "--refutations")
    universe = _atoms(args.atoms) or None
    try:
        hit = kripke.countermodel_search(gamma, delta, pol, f, args.max_worlds, universe)
    except kripke.ModelError as e:
        raise InputError(str(e)) from None
    if hit is None:
        out.doc = {"countermodel": None, "maxWorlds": args.max_worlds}
        out.say(f"no countermodel with at most {args.max_worlds} worlds")
        return OK
    m, w = hit
    out.doc = {"countermodel": kripke.model_to_json(m), "world": w}
    if args.out:
        _write(args.out, kripke.model_to_json(m))
    out.say(f"COUNTERMODEL at world {w}:")
    out.say(json.dumps(kripke.model_to_json(m), indent=2))
    return FAILED


def cmd_simulate_build(args, out: _Out) -> int:
    if not args.formula:
        raise InputError("simulate-build needs at least one --formula")
    theta = [_formula(s) for s in args.formula]
    universe = _atoms(args.atoms) or None
    spec = simulation.SimulationSpec(frozenset(theta), universe)
    try:
        m = simulation.build_mapping(theta)
        b = simulation.build_simulation_base(spec, m)
    except simulation.SimulationError as e:
        raise InputError(str(e)) from None
    doc = base_to_json(b)
    if args.out:
        _write(args.out, doc)
        _write(args.out + ".map", m.to_json())
    out.doc = {"base": doc, "map": m.to_json()["map"]}
    out.say(f"{len(b)} rules")
    for f, a in m.to_json()["map"].items():
        out.say(f"  {f} -> {a}")
    return OK


def cmd_simulate_translate(args, out: _Out) -> int:
    if args.proof:
        p = _load(args.proof, "proof", nd.proof_from_json)
        try:
            j = nd.check_nd(p)
        except nd.NDCheckError as e:
            out.doc = {"valid": False, "error": e.kind, "message": str(e)}
            out.say(f"INVALID: {e}")
            return FAILED
        theta = set(j.proof_assumptions | j.refutation_assumptions | {j.conclusion})
        theta |= _collect_formulas(p)
        theta |= {_formula(s) for s in args.formula or []}
        m = simulation.build_mapping(theta)
        spec = simulation.SimulationSpec(frozenset(theta), _atoms(args.atoms) or None)
        try:
            b = simulation.build_simulation_base(spec, m)
            d = simulation.translate_nd_to_atomic(p, m, spec)
        except simulation.SimulationError as e:
            raise InputError(str(e)) from None
        s = atomic.check_atomic(b, d)
        ok = s.weaker_than(simulation.map_judgment(j, m))
        out.doc = {"deduction": atomic.deduction_to_json(d), "sequent": atomic.sequent_to_json(s),
                   "map": m.to_json()["map"], "matchesJudgment": ok}
        out.say(str(s))
        out.say(json.dumps(atomic.deduction_to_json(d), indent=2))
        return OK if ok else FAILED
    if args.deduction:
        if not args.formula:
            raise InputError("translating a deduction back needs the --formula set it was built from")
        theta = [_formula(s) for s in args.formula]
        m = simulation.build_mapping(theta)
        spec = simulation.SimulationSpec(frozenset(theta), _atoms(args.atoms) or None)
        b = simulation.build_simulation_base(spec, m)
        d = _load(args.deduction, "deduction", atomic.deduction_from_json)
        try:
            s = atomic.check_atomic(b, d)
        except atomic.DeductionError as e:
            out.doc = {"valid": False, "message": str(e)}
            out.say(f"INVALID: {e}")
            return FAILED
        p = simulation.translate_atomic_to_nd(d, m, b)
        j = nd.check_nd(p)
        ok = j == simulation.unmap_sequent(s, m)
        out.doc = {"proof": nd.proof_to_json(p), "judgment": nd.judgment_to_json(j), "matchesSequent": ok}
        out.say(nd.format_judgment(j))
        return OK if ok else FAILED
    raise InputError("simulate-translate needs --proof or --deduction")


def _collect_formulas(p) -> set:
    if isinstance(p, nd.Assume):
        return {p.formula}
    out = {p.conclusion}
    for c in p.children:
        out |= _collect_formulas(c)
    return out


_EXIT = {support.HOLDS: OK, support.FAILS: FAILED, support.UNKNOWN: UNKNOWN}


def _budget(args) -> support.Budget:
    if not args.budget:
        return support.DEFAULT_BUDGET
    try:
        return support.parse_budget(args.budget)
    except support.BudgetError as e:
        raise InputError(str(e)) from None


def cmd_bes_support(args, out: _Out) -> int:
    _require(args, "formula")
    b = _load(args.base, "base", base_from_json) if args.base else base_from_json({"rules": []})
    try:
        v = support.support(b, _formulas(args.proofs, "--proofs"), _formulas(args.refutations, "--refutations"),
                            _polarity(args.polarity), _formula(args.formula), _budget(args),
                            support.NAIVE if args.naive else support.STANDARD, _atoms(args.atoms) or None)
    except support.BudgetError as e:
        raise InputError(str(e)) from None
    out.doc = v.to_json()
    out.say(f"{v.outcome} ({v.kind}): {v.query_str()}")
    return _EXIT[v.outcome]


def cmd_harmony(args, out: _Out) -> int:
    _require(args, "formula")
    b = _load(args.base, "base", base_from_json) if args.base else base_from_json({"rules": []})
    rep = support.strong_harmony_check(b, _formulas(args.proofs, "--proofs"),
                                       _formulas(args.refutations, "--refutations"),
                                       _polarity(args.polarity), _formula(args.formula), _budget(args),
                                       support.NAIVE if args.naive else support.STANDARD)
    out.doc = rep.to_json()
    out.say(f"{rep.status}: {rep.left.outcome} / {rep.right.outcome}")
    return OK if rep.status == support.CONSISTENT else FAILED


def corpus_run(directory: str) -> tuple[int, list[tuple[str, str, str]]]:
    """Check every proof in ``directory`` against its ``.expect.json`` sidecar."""
    root = Path(directory)
    if not root.is_dir():
        raise InputError(f"{directory}: not a directory")
    rows = []
    for path in sorted(root.glob("*.json")):
        if path.name.endswith(".expect.json"):
            continue
        sidecar = path.with_name(path.stem + ".expect.json")
        if not sidecar.exists():
            rows.append((path.name, "ERROR", "missing sidecar"))
            continue
        expect = _read_json(str(sidecar))
        try:
            proof = nd.proof_from_json(_read_json(str(path)))
        except ValueError as e:
            rows.append((path.name, "ERROR", f"unreadable proof: {e}"))
            continue
        want_valid = expect.get("valid", True)
        try:
            j = nd.check_nd(proof)
        except nd.NDCheckError as e:
            if not want_valid and expect.get("error") in (None, e.kind):
                rows.append((path.name, "PASS", f"rejected: {e.kind}"))
            else:
                rows.append((path.name, "FAIL", str(e)))
            continue
        if not want_valid:
            rows.append((path.name, "FAIL", "expected a rejection"))
            continue
        target = nd.judgment_from_json(expect["judgment"])
        if j.weaker_than(target):
            rows.append((path.name, "PASS", nd.format_judgment(j)))
        else:
            rows.append((path.name, "FAIL", f"got {nd.format_judgment(j)}, expected {nd.format_judgment(target)}"))
    bad = sum(1 for _, status, _ in rows if status != "PASS")
    return (FAILED if bad else OK), rows


def cmd_corpus_run(args, out: _Out) -> int:
    code, rows = corpus_run(args.dir)
    passed = sum(1 for _, s, _ in rows if s == "PASS")
    out.doc = {"checked": len(rows), "passed": passed,
               "results": [{"file": f, "status": s, "detail": d} for f, s, d in rows]}
    width = max((len(f) for f, _, _ in rows), default=4)
    for f, s, d in rows:
        out.say(f"{f:<{width}}  {s:<5}  {d}")
    out.say(f"{len(rows)} checked, {passed} passed, {len(rows) - passed} failed")
    return code


COMMANDS = {
    "check-atomic": cmd_check_atomic,
    "derive": cmd_derive,
    "check-nd": cmd_check_nd,
    "dual": cmd_dual,
    "kripke-check": cmd_kripke_check,
    "kripke-countermodel": cmd_kripke_countermodel,
    "simulate-build": cmd_simulate_build,
    "simulate-translate": cmd_simulate_translate,
    "bes-support": cmd_bes_support,
    "harmony": cmd_harmony,
    "corpus-run": cmd_corpus_run,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base")
    common.add_argument("--deduction")
    common.add_argument("--proof")
    common.add_argument("--model")
    common.add_argument("--formula", action="append")
    common.add_argument("--goal")
    common.add_argument("--polarity")
    common.add_argument("--proofs")
    common.add_argument("--refutations")
    common.add_argument("--world")
    common.add_argument("--max-worlds", type=int, default=2)
    common.add_argument("--atoms")
    common.add_argument("--budget")
    common.add_argument("--naive", action="store_true")
    common.add_argument("--json", action="store_true")
    common.add_argument("--seed", type=int)
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="bilat", description="Bilateral base-extension semantics for 2Int.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "corpus-run":
            sp.add_argument("dir", nargs="?", default="corpus")
    return parser


_MULTI_FORMULA = {"simulate-build", "simulate-translate"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    if args.command not in _MULTI_FORMULA and args.formula is not None:
        if len(args.formula) > 1:
            print("error: --formula given more than once", file=sys.stderr)
            return INPUT_ERROR
        args.formula = args.formula[0]
    out = _Out(args)
    try:
        code = COMMANDS[args.command](args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except (BaseFormatError, ParseError, kripke.ModelError, simulation.SimulationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
