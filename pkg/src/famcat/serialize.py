"""Input documents, built-in fixtures, digests and input bounds for the CLI."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import jsonschema

from famcat.bicat import (
    Bicat,
    LocallyDiscrete,
    bicat_from_json,
    check_bicategory,
    check_pseudofunctor,
    identity_pseudofunctor,
    locally_discrete,
    locally_discrete_functor,
    pseudofunctor_from_json,
)
from famcat.diers1d import check_copresheaf, copresheaf_from_json
from famcat.errors import BoundExceeded, Diagnostic, ValidationError
from famcat.fincat import (
    FinCat,
    category_from_json,
    check_functor,
    constant_functor,
    identity_functor,
    terminal_category,
    validate_category,
    walking_cospan,
)

SCHEMA_VERSION = "famcat-schema/1"
WITNESS_VERSION = "famcat-witness/1"


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def load_schema(name: str) -> dict:
    return json.loads(resources.files("famcat.schema").joinpath(name).read_text())


@dataclass
class Loaded:
    """A parsed input: ``kind`` is "functor", "copresheaf", "pseudofunctor" or "fam"."""

    name: str
    kind: str
    value: Any
    digest: str
    doc: dict | None = None
    focus: tuple | None = None


@dataclass
class FamInput:
    """Fam_{≤N} over a finite universe of categories."""

    universe: Any
    N: int


def parse_json_text(text: str, name: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([Diagnostic("JSONSyntax", (name, exc.lineno, exc.colno), exc.msg)]) from exc


def validate_against_schema(doc: dict, name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema("input.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise ValidationError([
            Diagnostic("SchemaViolation", (name, "/" + "/".join(map(str, e.absolute_path))), e.message) for e in errors
        ])


def _raise_if(diags: list) -> None:
    if diags:
        raise ValidationError(diags)


def _bicat(doc: dict) -> Bicat:
    if "locally_discrete" in doc:
        return locally_discrete(validate_category(category_from_json(doc["locally_discrete"])))
    B = bicat_from_json(doc)
    _raise_if(check_bicategory(B, stop_after=5))
    return B


def build_from_doc(doc: dict) -> tuple[str, Any]:
    kind = doc["kind"]
    if kind == "functor":
        A = validate_category(category_from_json(doc["source"]))
        B = validate_category(category_from_json(doc["target"]))
        from famcat.fincat import functor_from_json

        T = functor_from_json(doc["functor"], A, B)
        _raise_if(check_functor(T))
        return kind, T
    if kind == "copresheaf":
        C = validate_category(category_from_json(doc["base"]))
        F = copresheaf_from_json(doc["copresheaf"], C)
        _raise_if(check_copresheaf(F))
        return kind, F
    if kind == "span":
        from famcat.constructions import span_bicategory
        from famcat.errors import DecisionFailure

        E = validate_category(category_from_json(doc["base"]))
        try:
            fix = span_bicategory(E, partial=doc.get("partial", False), name=E.name)
        except DecisionFailure as exc:
            raise ValidationError([Diagnostic(exc.kind, exc.witness, "base lacks a pullback")]) from exc
        return "pseudofunctor", fix.inclusion
    if kind == "fam":
        from famcat.constructions import CategoryUniverse

        cats = {name: validate_category(category_from_json(c)) for name, c in sorted(doc["universe"].items())}
        return kind, FamInput(CategoryUniverse(cats), doc["N"])
    A, B = _bicat(doc["source"]), _bicat(doc["target"])
    if "strict_functor" in doc:
        if not (isinstance(A, LocallyDiscrete) and isinstance(B, LocallyDiscrete)):
            raise ValidationError([Diagnostic("StrictFunctorNeedsLocallyDiscrete", ())])
        from famcat.fincat import functor_from_json

        F = functor_from_json(doc["strict_functor"], A.cat, B.cat)
        _raise_if(check_functor(F))
        T = locally_discrete_functor(F, A, B)
    else:
        T = pseudofunctor_from_json(doc["pseudofunctor"], A, B)
    try:
        _raise_if(check_pseudofunctor(T, stop_after=5))
    except (KeyError, TypeError) as exc:
        raise ValidationError([Diagnostic("MalformedDocument", (), f"pseudofunctor table incomplete: {exc}")]) from exc
    return "pseudofunctor", T


# ---------------------------------------------------------------------------
# built-in fixtures


def _span_doc(make: Callable, partial: bool = False, focus: dict | None = None) -> Callable:
    def doc():
        doc = {"kind": "span", "schema": SCHEMA_VERSION, "base": make().to_json(), "partial": partial}
        if focus:
            doc["focus"] = focus
        return doc

    return doc


def _bicat_doc(make: Callable) -> Callable:
    def doc():
        from famcat.bicat import bicat_to_json

        T = make()

        def side(B):
            if isinstance(B, LocallyDiscrete):
                return {"locally_discrete": B.cat.to_json()}
            return bicat_to_json(B)

        return {"kind": "pseudofunctor", "schema": SCHEMA_VERSION, "source": side(T.source),
                "target": side(T.target), "pseudofunctor": T.to_json()}

    return doc


def _square_poset():
    from famcat.fincat import square_poset

    return square_poset()


def _bz2():
    from famcat.constructions import bz2

    return bz2()


def _finset2():
    from famcat.constructions import finset_upto

    return finset_upto(2)


def _identity_cospan():
    return identity_pseudofunctor(locally_discrete(walking_cospan()))


def _cospan_constant():
    return locally_discrete_functor(constant_functor(walking_cospan(), terminal_category(), "*"))


def _identity_functor_doc():
    from famcat.fincat import walking_arrow

    C = walking_arrow()
    return {"kind": "functor", "schema": SCHEMA_VERSION, "source": C.to_json(), "target": C.to_json(),
            "functor": identity_functor(C).to_json()}


def fam_universe() -> dict:
    from famcat.fincat import discrete, walking_arrow

    return {"0": discrete([], name="0"), "1": terminal_category(), "I": discrete([0, 1], name="I"), "2": walking_arrow()}


def _fam_trunc_doc():
    return {"kind": "fam", "schema": SCHEMA_VERSION, "N": 2,
            "universe": {n: C.to_json() for n, C in sorted(fam_universe().items())}}


FIXTURES: dict[str, Callable[[], dict]] = {
    "span-square-poset": _span_doc(_square_poset),
    "span-bz2": _span_doc(_bz2),
    "swap": _span_doc(_finset2, partial=True, focus={"X": "1", "W": "2", "f": "(2>1:00,2>2:10)"}),
    "fam-trunc": _fam_trunc_doc,
    "identity-cospan": _bicat_doc(_identity_cospan),
    "cospan-constant": _bicat_doc(_cospan_constant),
    "identity-arrow-1d": _identity_functor_doc,
}


def fixture_document(name: str) -> dict:
    """The input document of a built-in fixture."""
    return FIXTURES[name]()


def load_document(doc: dict, name: str) -> Loaded:
    validate_against_schema(doc, name)
    kind, value = build_from_doc(doc)
    focus = None
    if "focus" in doc:
        from famcat.ids import from_jsonable

        focus = tuple(from_jsonable(doc["focus"][k]) for k in ("X", "W", "f"))
    return Loaded(name, kind, value, digest(doc), doc, focus)


def load_input(path_or_name: str) -> Loaded:
    """A file path, or the name of a built-in fixture."""
    p = Path(path_or_name)
    if path_or_name in FIXTURES and not p.exists():
        return load_document(fixture_document(path_or_name), path_or_name)
    if not p.exists():
        raise ValidationError([Diagnostic("NoSuchInput", (path_or_name,), "not a file or built-in fixture")])
    return load_document(parse_json_text(p.read_text(), path_or_name), path_or_name)


# ---------------------------------------------------------------------------
# bounds


def _category_bounds(C: FinCat, max_objects: int, max_hom: int, label: str) -> None:
    if len(C.objects) > max_objects:
        raise BoundExceeded(f"{label}: {len(C.objects)} objects > {max_objects}")
    for a in C.objects:
        for b in C.objects:
            if len(C.hom(a, b)) > max_hom:
                raise BoundExceeded(f"{label}: hom({a},{b}) has {len(C.hom(a, b))} morphisms > {max_hom}")


def _bicat_bounds(B: Bicat, max_objects: int, max_hom: int, label: str) -> None:
    if len(B.objects) > max_objects:
        raise BoundExceeded(f"{label}: {len(B.objects)} objects > {max_objects}")
    for a in B.objects:
        for b in B.objects:
            H = B.hom(a, b)
            if len(H.objects) > max_hom or len(H.morphisms) > max_hom:
                raise BoundExceeded(f"{label}: hom({a},{b}) has {len(H.objects)} 1-cells, {len(H.morphisms)} 2-cells > {max_hom}")


def check_bounds(loaded: Loaded, max_objects: int, max_hom: int) -> None:
    """Raises BoundExceeded.  Bounds apply to the input document; derived structures are never truncated."""
    v, kind = loaded.value, loaded.doc["kind"]
    if kind == "functor":
        _category_bounds(v.source, max_objects, max_hom, "source")
        _category_bounds(v.target, max_objects, max_hom, "target")
    elif kind == "copresheaf":
        _category_bounds(v.base, max_objects, max_hom, "base")
    elif kind == "span":
        _category_bounds(v.target.E, max_objects, max_hom, "base")
    elif kind == "fam":
        if len(v.universe.cats) > max_objects:
            raise BoundExceeded(f"universe: {len(v.universe.cats)} categories > {max_objects}")
        for name, C in v.universe.cats.items():
            _category_bounds(C, max_objects, max_hom, f"universe[{name}]")
    else:
        for side, B in (("source", v.source), ("target", v.target)):
            if isinstance(B, LocallyDiscrete):
                _category_bounds(B.cat, max_objects, max_hom, side)
            else:
                _bicat_bounds(B, max_objects, max_hom, side)
