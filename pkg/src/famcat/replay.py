"""Re-checking witness documents.

Positive certificates are checked locally: the claimed factorization, lift,
table or equivalence is tested directly, with no search for it.  Negative
certificates are checked by enumerating the finitely many candidates they
rule out.  Structural certificates (fibers, reindexings, classifications) are
rebuilt deterministically from the input and compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from famcat.bicat import Cell2
from famcat.errors import DecisionFailure
from famcat.fincat import NatTrans, category_from_json, functor_from_json, slice_category
from famcat.ids import from_jsonable as fj
from famcat.ids import idkey, to_jsonable
from famcat.serialize import Loaded


@dataclass
class Replay:
    verb: str
    loaded: Loaded
    all_witnesses: bool
    mismatches: list = field(default_factory=list)
    generic_keys: set = field(default_factory=set)

    @property
    def T(self):
        return self.loaded.value

    @cached_property
    def outcome(self):
        from famcat.cli import build_outcome

        return build_outcome(self.verb, self.loaded, self.all_witnesses)

    @cached_property
    def recomputed(self) -> dict:
        return {c["id"]: c for c in self.outcome.certificates}

    @cached_property
    def spec(self):
        from famcat.spectrum import spectrum

        return spectrum(self.T)

    @cached_property
    def el(self):
        from famcat.spectrum import spectrum_el

        return spectrum_el(self.T, self.spec)

    @cached_property
    def G(self):
        from famcat.factorization import build_G, identity_factorizations

        return build_G(self.el, identity_factorizations(self.T))

    @cached_property
    def slices(self):
        from famcat.bicat import OplaxSlice
        from famcat.factorization import sliced
        from famcat.spectrum import bicat_terminal_objects

        one = bicat_terminal_objects(self.T.source)[0]
        SA, SB = OplaxSlice(self.T.source, one), OplaxSlice(self.T.target, self.T.ob(one))
        return SA, SB, sliced(self.T, SA, SB)

    @cached_property
    def fam_el(self):
        from famcat.constructions import fam_copresheaf
        from famcat.elbicat import ElBicat

        return ElBicat(fam_copresheaf(self.T.universe, self.T.N))

    def bad(self, cid: str, reason: str) -> None:
        self.mismatches.append((cid, reason))


def _cell(B, src, tgt, mor) -> Cell2 | None:
    """The 2-cell ``mor: src ⇒ tgt`` when it exists."""
    for c in B.cells(src, tgt):
        if c.mor == mor:
            return c
    return None


def _square(T, X, a, delta, f, g, z, alpha):
    from famcat.laxfam import Square

    B = T.target
    cell = _cell(B, B.comp1(T.one(f), delta), B.comp1(T.one(g), z), alpha)
    if cell is None:
        return None
    return Square(delta, a, f, g, z, cell)


# ---------------------------------------------------------------------------
# per-type checks; each returns a reason string or None


def check_decomposition_cert(r: Replay, c: dict) -> str | None:
    from famcat.diers1d import Decomposition1, check_decomposition
    from famcat.witness import copresheaves_1d

    F = dict(copresheaves_1d(r.T, r.loaded.kind)).get(fj(c["X"]))
    if F is None:
        return "unknown X"
    dec = Decomposition1([fj(x) for x in c["index"]], {fj(k): fj(v) for k, v in c["witness"]})
    diags = check_decomposition(F, dec)
    return str(diags[0]) if diags else None


def check_component_cert(r: Replay, c: dict) -> str | None:
    from famcat.diers1d import category_of_elements
    from famcat.witness import copresheaves_1d

    F = dict(copresheaves_1d(r.T, r.loaded.kind)).get(fj(c["X"]))
    if F is None:
        return "unknown X"
    el = category_of_elements(F).cat
    comp = {fj(o) for o in c["component"]}
    if not comp or not comp <= set(el.objects):
        return "component not in el"
    for o in comp:
        for m in el.out_of(o) + el.into(o):
            if el.dom(m) not in comp or el.cod(m) not in comp:
                return "component not closed"
    blockers = {fj(o): (fj(p), n) for o, p, n in c["blockers"]}
    if set(blockers) != comp:
        return "blockers do not cover the component"
    for o, (p, n) in blockers.items():
        if p not in comp or n == 1 or len(el.hom(o, p)) != n:
            return f"blocker for {o} is wrong"
    return None


def check_lax_generic_cert(r: Replay, c: dict) -> str | None:
    from famcat.laxfam import factorization_fault, squares_from

    T = r.T
    A, B = T.source, T.target
    X, a, delta = fj(c["X"]), fj(c["A"]), fj(c["delta"])
    listed = [fj(s) for s in c["squares"]]
    expected = {(sq.f, sq.g, sq.z, sq.alpha.mor) for sq in squares_from(T, delta, a)}
    if {s[:4] for s in listed} != expected or len(listed) != len(expected):
        return "square set differs"
    for f, g, z, alpha, h, gamma, nu, flag in listed:
        sq = _square(T, X, a, delta, f, g, z, alpha)
        gcell = _cell(B, B.comp1(T.one(h), delta), z, gamma) if A.ends(h)[0] == a else None
        ncell = _cell(A, f, A.comp1(g, h), nu) if gcell is not None else None
        if ncell is None:
            return f"not a factorization of {alpha}"
        fault = factorization_fault(T, sq, h, gcell, ncell)
        if fault:
            return f"condition {fault} fails at {alpha}"
        if flag != (B.is_invertible(gcell) and A.is_invertible(ncell)):
            return f"invertibility flag wrong at {alpha}"
    return None


def check_not_lax_generic_cert(r: Replay, c: dict) -> str | None:
    from famcat.laxfam import universal_factorization

    T = r.T
    B = T.target
    f, g, z, alpha = fj(c["square"])
    sq = _square(T, fj(c["X"]), fj(c["A"]), fj(c["delta"]), f, g, z, alpha)
    if sq is None:
        return "not a square"
    try:
        uf = universal_factorization(T, sq)
    except DecisionFailure as exc:
        return None if exc.witness[0] == c["clause"] else f"fails clause {exc.witness[0]}, not {c['clause']}"
    if c["clause"] == "3" and B.is_invertible(sq.alpha) and not (
            B.is_invertible(uf.gamma) and T.source.is_invertible(uf.nu)):
        return None
    return "square has a universal factorization"


def _generic_in_witness(r: Replay, X, a, delta) -> bool:
    key = (fj(X), fj(a), fj(delta))
    if key in r.generic_keys:
        return True
    from famcat.laxfam import is_lax_generic

    return is_lax_generic(r.T, key[2], key[1]) is not None


def check_generic_factorization_cert(r: Replay, c: dict) -> str | None:
    T = r.T
    B = T.target
    f, fbar, delta = fj(c["f"]), fj(c["fbar"]), fj(c["delta"])
    if T.source.ends(fbar) != (fj(c["A"]), fj(c.get("W", T.source.tgt(fbar)))):
        return "f̄ has the wrong ends"
    theta = _cell(B, B.comp1(T.one(fbar), delta), f, fj(c["theta"]))
    if theta is None:
        return "θ is not a 2-cell Tf̄∘δ ⇒ f"
    if c["theta_invertible"] != B.is_invertible(theta) or not c["theta_invertible"]:
        return "θ invertibility flag wrong or θ not invertible"
    if not _generic_in_witness(r, B.src(delta), c["A"], c["delta"]):
        return "δ is not lax generic"
    return None


def check_chosen_factorization_cert(r: Replay, c: dict) -> str | None:
    """The choice for (object (A', δ'), f) factors δ'∘f."""
    _, outer = fj(c["object"])
    doc = dict(c, f=to_jsonable(r.T.target.comp1(outer, fj(c["f"]))))
    return check_generic_factorization_cert(r, doc)


def check_identity_factorization_cert(r: Replay, c: dict) -> str | None:
    T = r.T
    a = fj(c["A"])
    doc = {"f": to_jsonable(T.target.unit(T.ob(a))), "fbar": c["e"], "delta": c["delta"], "A": c["Abar"],
           "W": c["A"], "theta": c["theta"], "theta_invertible": c.get("theta_invertible", True)}
    return check_generic_factorization_cert(r, doc)


def check_no_factorization_cert(r: Replay, c: dict) -> str | None:
    from famcat.laxfam import lax_generics_out

    T = r.T
    A, B = T.source, T.target
    X, W, f = fj(c["X"]), fj(c["W"]), fj(c["f"])
    for a, delta in lax_generics_out(T, X):
        for fbar in A.one_cells(a, W):
            if any(B.is_invertible(t) for t in B.cells(B.comp1(T.one(fbar), delta), f)):
                return f"factors through {delta}"
    return None


def check_distinct_cert(r: Replay, c: dict, doc: dict) -> str | None:
    from famcat.witness import distinctness_certificate

    facs = [x for x in doc["certificates"] if x["type"] == "generic-factorization"]
    return None if distinctness_certificate(r.T, facs) == c else "distinctness table differs"


def check_slice_cert(r: Replay, c: dict, doc: dict) -> str | None:
    from famcat.equiv import Equivalence, check_equivalence
    from famcat.witness import span_base

    E = span_base(r.T)
    fibers = {x["id"]: x for x in doc["certificates"] if x["type"] == "spectrum-fiber"}
    fiber = fibers.get(f"fiber:{c['id'].split(':', 1)[1]}")
    if E is None or fiber is None:
        return "no span base or fiber"
    if c["status"] != "equivalent":
        return None if r.recomputed.get(c["id"]) == c else "status differs from exhaustive search"
    S, _ = slice_category(E, fj(c["X"]))
    M = category_from_json(fiber["category"])
    try:
        fwd, bwd = functor_from_json(c["forward"], S, M), functor_from_json(c["backward"], M, S)
        unit = NatTrans(identity_of(S), compose_pair(bwd, fwd), {fj(a): fj(m) for a, m in c["unit"]["components"]})
        counit = NatTrans(compose_pair(fwd, bwd), identity_of(M), {fj(a): fj(m) for a, m in c["counit"]["components"]})
        ok = check_equivalence(Equivalence(fwd, bwd, unit, counit))
    except (KeyError, TypeError, ValueError) as exc:
        return f"malformed equivalence: {exc}"
    return None if ok else "not an equivalence"


def compose_pair(g, f):
    from famcat.fincat import compose_functors

    return compose_functors(g, f)


def identity_of(C):
    from famcat.fincat import identity_functor

    return identity_functor(C)


def check_universal_arrow_cert(r: Replay, c: dict) -> str | None:
    from famcat.universal import check_universal_arrow, is_bijective_table, universal_pair_table

    if c["type"] == "slice-universal-arrow":
        SA, SB, G = r.slices
        tight_target, tight_source = SB.is_tight, SA.is_tight
    else:
        G = r.G
        tight_target, tight_source = r.el.is_cartesian, (lambda h: True)
    m, eta, F = fj(c["m"]), fj(c["eta"]), fj(c["F"])
    Tgt = G.target
    if eta not in Tgt.one_cells(m, G.ob(F)):
        return "η is not a 1-cell m → GF"
    for A, f, fbar, gamma, table in c["pairs"]:
        A, f, fbar = fj(A), fj(f), fj(fbar)
        gcell = _cell(Tgt, Tgt.comp1(G.one(fbar), eta), f, fj(gamma))
        if gcell is None:
            return f"γ for {f} is not a 2-cell"
        got = universal_pair_table(G, eta, F, A, f, fbar, gcell)
        listed = {(fj(gb), fj(b)): fj(lam) for gb, b, lam in table}
        if got != listed or not is_bijective_table(G, fbar, got):
            return f"β ↦ β̃ table for {f} is wrong"
    rep = check_universal_arrow(G, m, eta, F, tight_target, tight_source, stop_early=False)
    if dict(sorted(rep.axioms.items())) != c["axioms"]:
        return "axiom outcomes differ"
    if {(A, f) for A, f in rep.pairs} != {(fj(p[0]), fj(p[1])) for p in c["pairs"]}:
        return "pairs do not cover every f"
    return None


def check_lift_cert(r: Replay, c: dict) -> str | None:
    from famcat.factorization import lift_2cell

    B = r.T.target
    src, tgt, mor = (fj(x) for x in c["alpha"])
    alpha = _cell(B, src, tgt, mor)
    if alpha is None:
        return "α is not a 2-cell"
    try:
        lift = lift_2cell(r.el, alpha, fj(c["target"]))
    except DecisionFailure as exc:
        return exc.kind
    return None if (lift.hat, lift.bar.mor) == (fj(c["hat"]), fj(c["bar"])) else "lift differs"


def check_relative_generic_cert(r: Replay, c: dict) -> str | None:
    from famcat.elbicat import is_lax_el_generic

    ok = c["scope"] == "relative" and is_lax_el_generic(r.fam_el, fj(c["element"]))
    return None if ok else "not relatively generic"


def check_cover_cert(r: Replay, c: dict, doc: dict) -> str | None:
    E = r.fam_el
    o, m = fj(c["element"]), fj(c["morphism"])
    gens = {fj(x["element"]) for x in doc["certificates"] if x["type"] == "relative-generic"}
    if m is None:
        return None if r.recomputed.get(c["id"]) == c else "a cover exists"
    src = next((g for g in gens if m in E.one_cells(g, o)), None)
    if src is None or not E.is_opcartesian(m):
        return "not an opcartesian morphism from a listed generic"
    return None


def check_terminal_cert(r: Replay, c: dict) -> str | None:
    from famcat.spectrum import terminal_comparison

    tc = terminal_comparison(r.spec, fj(c["X"]), fj(c["terminal"]))
    if tc.functor.to_json() != c["functor"]:
        return "comparison functor differs"
    if c["equivalence"] != (tc.equivalence is not None) or c["isomorphism"] != tc.isomorphism:
        return "equivalence/isomorphism flag wrong"
    return None


def check_by_recomputation(r: Replay, c: dict) -> str | None:
    return None if r.recomputed.get(c["id"]) == c else "differs from the rebuilt certificate"


LOCAL: dict[str, Callable] = {
    "decomposition": check_decomposition_cert,
    "component-without-initial": check_component_cert,
    "lax-generic": check_lax_generic_cert,
    "not-lax-generic": check_not_lax_generic_cert,
    "generic-factorization": check_generic_factorization_cert,
    "chosen-factorization": check_chosen_factorization_cert,
    "identity-factorization": check_identity_factorization_cert,
    "no-generic-factorization": check_no_factorization_cert,
    "universal-arrow": check_universal_arrow_cert,
    "slice-universal-arrow": check_universal_arrow_cert,
    "lift": check_lift_cert,
    "relative-generic": check_relative_generic_cert,
    "terminal-comparison": check_terminal_cert,
}
WITH_DOC: dict[str, Callable] = {
    "distinct-factorizations": check_distinct_cert,
    "slice-equivalence": check_slice_cert,
    "opcartesian-cover": check_cover_cert,
}


# ---------------------------------------------------------------------------
# completeness and verdicts


def expected_generic_ids(T, objects=None) -> set:
    A, B = T.source, T.target
    return {f"generic:{X}|{a}|{d}" for X in (B.objects if objects is None else objects)
            for a in A.objects for d in B.one_cells(X, T.ob(a))}


def verdict_from_certificates(verb: str, kind: str, certs: list) -> str | None:
    """The verdict the certificates support, or None when they are silent."""
    types = [c["type"] for c in certs]
    if not certs:
        return None
    if verb == "familial1d":
        return "no" if "component-without-initial" in types else "yes"
    if kind == "fam":
        return "no" if any(c["type"] == "opcartesian-cover" and c["morphism"] is None for c in certs) else "yes"
    if verb in ("familial", "factor"):
        if "no-generic-factorization" in types:
            return "no"
        if any(c["type"] == "generic-pastings" and c["failures"] for c in certs):
            return "no"
        return "yes"
    if verb == "spectrum":
        return "no" if any(c.get("components", 0) is None for c in certs) else "yes"
    if verb == "spec-factor":
        failing = any(c["type"] in ("fibration", "composite-condition") and c["failures"] for c in certs)
        return "no" if failing else "yes"
    if verb == "pra-check":
        failing = "no-universal-arrow" in types or any(
            c["type"] == "composite-condition" and c["failures"] for c in certs)
        return "no" if failing else "yes"
    return None


def _ids(*keys: str, prefix: str):
    def expected(c: dict) -> str:
        return prefix + "|".join(str(fj(c[k])) for k in keys)
    return expected


DERIVED_ID: dict[str, Callable] = {
    "lax-generic": _ids("X", "A", "delta", prefix="generic:"),
    "not-lax-generic": _ids("X", "A", "delta", prefix="generic:"),
    "no-generic-factorization": _ids("X", "W", "f", prefix="missing:"),
    "spectrum-fiber": _ids("X", prefix="fiber:"),
    "slice-equivalence": _ids("X", prefix="slice:"),
    "reindexing": _ids("f", prefix="reindex:"),
    "chosen-factorization": _ids("object", "f", prefix="choice:"),
    "reindexing-unit": _ids("X", prefix="unit:"),
    "reindexing-comparison": _ids("g", "f", prefix="comp:"),
    "terminal-comparison": _ids("X", prefix="terminal:"),
    "identity-factorization": _ids("A", prefix="identity:"),
    "G-one-cell": _ids("h", prefix="G:"),
    "relative-generic": _ids("element", prefix="generic:"),
    "opcartesian-cover": _ids("element", prefix="cover:"),
}


def id_mismatch(c: dict) -> str | None:
    """Certificates whose id is derived from their fields must carry that id."""
    if c["type"] == "generic-factorization":
        stem = _ids("X", "W", "f", prefix="factor:")(c) + "|"
        ok = c["id"].startswith(stem) and c["id"][len(stem):].isdigit()
    elif c["type"] in DERIVED_ID:
        ok = c["id"] == DERIVED_ID[c["type"]](c)
    else:
        return None
    return None if ok else "id does not match the certificate's fields"


def counterexample_mismatch(r: Replay, doc: dict) -> str | None:
    """A yes carries no counterexample; a no carries one backed by a certificate or by recomputation."""
    ce = doc["counterexample"]
    if doc["verdict"] == "yes":
        return None if ce is None else "a yes verdict carries a counterexample"
    if not isinstance(ce, dict):
        return "a no verdict needs a counterexample"
    certs = doc["certificates"]
    if ce.get("kind") in ("NoGenericFactorization", "NoFactorization"):
        W, f = ce.get("element", [None, None])
        backed = any(c["type"] == "no-generic-factorization" and (c["X"], c["W"], c["f"]) == (ce.get("X"), W, f)
                     for c in certs)
    elif ce.get("kind") == "NoGenericCover" and r.loaded.kind == "fam":
        backed = any(c["type"] == "opcartesian-cover" and c["morphism"] is None and c["element"] == ce.get("element")
                     for c in certs)
    else:
        backed = to_jsonable(r.outcome.counterexample) == ce
    return None if backed else "counterexample is not backed by the certificates"


def completeness(r: Replay, doc: dict) -> list:
    certs = doc["certificates"]
    ids = [c["id"] for c in certs]
    out = []
    if len(set(ids)) != len(ids):
        out.append(("certificates", "duplicate ids"))
    if [(c["type"], c["id"]) for c in certs] != sorted((c["type"], c["id"]) for c in certs):
        out.append(("certificates", "not in canonical order"))
    kind = r.loaded.kind
    if r.verb in ("familial", "factor") and kind == "pseudofunctor":
        objects = None if r.verb == "familial" or r.loaded.focus is None else [r.loaded.focus[0]]
        got = {c["id"] for c in certs if c["type"] in ("lax-generic", "not-lax-generic")}
        if got != expected_generic_ids(r.T, objects):
            out.append(("certificates", "genericity is not decided for every δ"))
        if doc["verdict"] == "yes":
            T = r.T
            if r.verb == "factor" and r.loaded.focus is not None:
                need = {r.loaded.focus}
            else:
                need = {(X, W, f) for X in T.target.objects for W in T.source.objects
                        for f in T.target.one_cells(X, T.ob(W))}
            facs = [c for c in certs if c["type"] == "generic-factorization"]
            if need != {(fj(c["X"]), fj(c["W"]), fj(c["f"])) for c in facs}:
                out.append(("certificates", "some f has no factorization certificate"))
            if r.verb == "familial":
                from famcat.witness import span_base

                want = {"pastings"} | {f"fiber:{X}" for X in T.target.objects}
                if span_base(T) is not None:
                    want |= {f"slice:{X}" for X in T.target.objects}
                if not want <= set(ids):
                    out.append(("certificates", "pasting, fiber or slice certificates missing"))
            distinct = r.verb == "factor" and r.loaded.focus is not None and len(facs) > 1
            if distinct != any(c["type"] == "distinct-factorizations" for c in certs):
                out.append(("certificates", "distinctness certificate missing or unexpected"))
    elif set(ids) != set(r.recomputed):
        out.append(("certificates", "certificate set differs from the input's"))
    return out


def replay(doc: dict, loaded: Loaded) -> list:
    """Every mismatch as (certificate id, reason); empty when the witness checks."""
    r = Replay(doc["verb"], loaded, doc["all_witnesses"])
    r.generic_keys = {(fj(c["X"]), fj(c["A"]), fj(c["delta"])) for c in doc["certificates"] if c["type"] == "lax-generic"}
    for c in doc["certificates"]:
        try:
            if c["type"] in LOCAL:
                reason = LOCAL[c["type"]](r, c)
            elif c["type"] in WITH_DOC:
                reason = WITH_DOC[c["type"]](r, c, doc)
            else:
                reason = check_by_recomputation(r, c)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            reason = f"malformed certificate: {type(exc).__name__} {exc}"
        except DecisionFailure as exc:
            reason = f"{exc.kind}"
        if not reason:
            try:
                reason = id_mismatch(c)
            except (KeyError, TypeError, ValueError) as exc:
                reason = f"malformed certificate: {type(exc).__name__} {exc}"
        if reason:
            r.bad(c.get("id", "?"), reason)
    r.mismatches += completeness(r, doc)
    ce_reason = counterexample_mismatch(r, doc)
    if ce_reason:
        r.bad("counterexample", ce_reason)
    supported = verdict_from_certificates(r.verb, loaded.kind, doc["certificates"])
    if supported is None:
        if (r.outcome.verdict, to_jsonable(r.outcome.counterexample)) != (doc["verdict"], doc["counterexample"]):
            r.bad("verdict", "verdict differs")
    elif supported != doc["verdict"]:
        r.bad("verdict", f"certificates support {supported!r}")
    return sorted(r.mismatches, key=lambda m: idkey(m))
