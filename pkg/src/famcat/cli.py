"""Command line: ``famcat VERB INPUT`` emits a JSON witness; ``famcat --verify W`` replays one.

Exit codes: 0 yes, 1 no (or a witness that fails to verify), 2 bound
exceeded, 3 invalid input (including a digest mismatch on verify).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from famcat.errors import BoundExceeded, CapExceeded, DecisionFailure, Diagnostic, ValidationError
from famcat.ids import from_jsonable, to_jsonable
from famcat.serialize import (
    FIXTURES,
    SCHEMA_VERSION,
    WITNESS_VERSION,
    Loaded,
    check_bounds,
    fixture_document,
    load_document,
    load_input,
    parse_json_text,
)
from famcat import witness as W

VERBS = ("familial1d", "familial", "factor", "spectrum", "spec-factor", "pra-check")
ACCEPTS = {
    "familial1d": ("functor", "copresheaf"),
    "familial": ("pseudofunctor", "fam"),
    "factor": ("pseudofunctor",),
    "spectrum": ("pseudofunctor",),
    "spec-factor": ("pseudofunctor",),
    "pra-check": ("pseudofunctor",),
}
RANDOM_INPUT = "random-copresheaf"
EXIT = {"yes": 0, "no": 1}


class InvalidInput(Exception):
    def __init__(self, kind: str, detail=(), message: str = ""):
        self.diagnostic = Diagnostic(kind, tuple(detail), message)
        super().__init__(str(self.diagnostic))


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def threads() -> int:
    try:
        return max(1, int(os.environ.get("LAXFAM_THREADS", "1")))
    except ValueError:
        return 1


def random_document(seed: int) -> dict:
    from famcat.corpus import random_copresheaf

    F = random_copresheaf(random.Random(seed))
    return {"kind": "copresheaf", "schema": SCHEMA_VERSION, "base": F.base.to_json(), "copresheaf": F.to_json()}


def resolve_input(name: str, seed: int | None) -> Loaded:
    if name == RANDOM_INPUT and not Path(name).exists():
        if seed is None:
            raise InvalidInput("SeedRequired", (name,), "random inputs need --seed")
        return load_document(random_document(seed), name)
    return load_input(name)


def build_outcome(verb: str, loaded: Loaded, all_witnesses: bool, one_cell: tuple | None = None) -> W.Outcome:
    if loaded.kind not in ACCEPTS[verb]:
        raise InvalidInput("WrongInputKind", (verb, loaded.kind), f"{verb} takes {' or '.join(ACCEPTS[verb])}")
    T = loaded.value
    if verb == "familial1d":
        return W.build_familial1d(T, loaded.kind, all_witnesses, threads())
    if verb == "familial":
        return W.build_fam(T, all_witnesses) if loaded.kind == "fam" else W.build_familial(T, all_witnesses)
    if verb == "factor":
        only = one_cell or loaded.focus
        if only is not None and only[2] not in T.target.one_cells(only[0], T.ob(only[1])):
            raise InvalidInput("NoSuchOneCell", only)
        return W.build_factor(T, all_witnesses, only)
    if verb == "spectrum":
        return W.build_spectrum(T, all_witnesses)
    if verb == "spec-factor":
        return W.build_spec_factor(T, all_witnesses)
    return W.build_pra(T, all_witnesses)


def witness_document(verb: str, loaded: Loaded, outcome: W.Outcome, args) -> dict:
    doc = {
        "schema": WITNESS_VERSION,
        "verb": verb,
        "input": {"name": loaded.name, "digest": loaded.digest, "kind": loaded.kind},
        "bounds": {"objects": args.bound_objects, "hom": args.bound_hom},
        "seed": args.seed,
        "all_witnesses": args.all_witnesses,
        "verdict": outcome.verdict,
        "counterexample": to_jsonable(outcome.counterexample),
        "certificates": outcome.certificates,
        "work": outcome.work,
    }
    if getattr(args, "one_cell", None) is not None:
        doc["one_cell"] = to_jsonable(list(args.one_cell))
    if loaded.kind == "fam":
        doc["scope"] = "relative"
        doc["universe"] = sorted(loaded.value.universe.cats)
    return doc


def run(args) -> tuple[int, dict]:
    loaded = resolve_input(args.input, args.seed)
    check_bounds(loaded, args.bound_objects, args.bound_hom)
    outcome = build_outcome(args.verb, loaded, args.all_witnesses, args.one_cell)
    return EXIT[outcome.verdict], witness_document(args.verb, loaded, outcome, args)


def verify(path: str) -> tuple[int, dict]:
    p = Path(path)
    if not p.exists():
        raise InvalidInput("NoSuchWitness", (path,))
    doc = parse_json_text(p.read_text(), path)
    required = ("schema", "verb", "input", "bounds", "all_witnesses", "verdict", "counterexample", "certificates")
    if not isinstance(doc, dict) or any(k not in doc for k in required):
        raise InvalidInput("MalformedWitness", (path,))
    if doc["schema"] != WITNESS_VERSION or doc["verb"] not in VERBS:
        raise InvalidInput("UnknownWitnessSchema", (doc.get("schema"), doc.get("verb")))
    loaded = resolve_input(doc["input"]["name"], doc.get("seed"))
    if loaded.digest != doc["input"].get("digest"):
        raise InvalidInput("DigestMismatch", (doc["input"]["name"],), "witness was made for a different input")
    check_bounds(loaded, doc["bounds"]["objects"], doc["bounds"]["hom"])
    if "one_cell" in doc:
        loaded.focus = tuple(from_jsonable(x) for x in doc["one_cell"])
    from famcat.replay import replay

    mismatches = replay(doc, loaded)
    report = {
        "verified": not mismatches,
        "verdict": doc["verdict"],
        "mismatches": [{"kind": "CertificateMismatch", "id": cid, "reason": why} for cid, why in mismatches],
    }
    return (0 if not mismatches else 1), report


def fixtures(args) -> tuple[int, dict | None]:
    if args.name is None:
        return 0, {"fixtures": sorted(FIXTURES)}
    if args.name not in FIXTURES:
        raise InvalidInput("NoSuchFixture", (args.name,))
    return 0, fixture_document(args.name)


class Parser(argparse.ArgumentParser):
    """Usage errors are invalid input (exit 3); exit 2 is reserved for bounds."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def parser() -> argparse.ArgumentParser:
    p = Parser(prog="famcat", description="Decide familial representability on finite data.")
    p.add_argument("--verify", metavar="WITNESS", help="replay a witness document and exit")
    sub = p.add_subparsers(dest="verb")
    for verb in VERBS:
        s = sub.add_parser(verb)
        s.add_argument("input", help="input document path or built-in fixture name")
        s.add_argument("--bound-objects", type=int, default=8, help="max objects per input category (8)")
        s.add_argument("--bound-hom", type=int, default=24, help="max morphisms per input hom (24)")
        s.add_argument("--all-witnesses", action="store_true", help="enumerate every witness instead of stopping early")
        s.add_argument("--seed", type=int, help=f"seed for the {RANDOM_INPUT} input")
        s.add_argument("--out", help="write the witness here instead of standard output")
        if verb == "factor":
            s.add_argument("--one-cell", type=json.loads, metavar='\'["X","W","f"]\'',
                           help="factor only f: X → TW, given as a JSON triple")
        else:
            s.set_defaults(one_cell=None)
    f = sub.add_parser("fixtures", help="list built-in fixtures, or print one as an input document")
    f.add_argument("name", nargs="?")
    f.add_argument("--out")
    return p


def emit(doc, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def error_document(kind: str, diagnostics: list) -> dict:
    return {"error": kind, "diagnostics": [d.to_json() for d in diagnostics]}


def main(argv: list[str] | None = None) -> int:
    p = parser()
    args = p.parse_args(argv)
    try:
        if args.verify:
            code, doc = verify(args.verify)
            emit(doc, None)
            return code
        if args.verb is None:
            p.print_usage(sys.stderr)
            return 3
        if args.verb == "fixtures":
            code, doc = fixtures(args)
            emit(doc, args.out)
            return code
        if args.one_cell is not None:
            if not (isinstance(args.one_cell, list) and len(args.one_cell) == 3):
                raise InvalidInput("MalformedOneCell", (), "--one-cell takes a JSON triple [X, W, f]")
            args.one_cell = tuple(from_jsonable(x) for x in args.one_cell)
        code, doc = run(args)
        emit(doc, args.out)
        return code
    except (BoundExceeded, CapExceeded) as exc:
        emit(error_document(type(exc).__name__, [Diagnostic(type(exc).__name__, (), str(exc))]), None)
        return 2
    except ValidationError as exc:
        emit(error_document("InvalidInput", exc.diagnostics), None)
        return 3
    except InvalidInput as exc:
        emit(error_document("InvalidInput", [exc.diagnostic]), None)
        return 3
    except DecisionFailure as exc:
        if exc.kind == "NoTerminalObject":
            emit(error_document("NoTerminalObject", [Diagnostic(exc.kind, (exc.witness,), exc.message)]), None)
            return 3
        raise
    except json.JSONDecodeError as exc:
        emit(error_document("InvalidInput", [Diagnostic("JSONSyntax", (exc.lineno, exc.colno), exc.msg)]), None)
        return 3


if __name__ == "__main__":
    sys.exit(main())
