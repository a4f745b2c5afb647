"""Witness documents: one builder per CLI verb.

A witness carries the verdict, typed certificates and deterministic work
counters.  ``replay`` re-checks the certificates.  Lists are emitted in
canonical id order and keys are sorted on output, so two runs on the same
input are byte-identical.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from famcat.bicat import Cell2, PseudoFunctor
from famcat.diers1d import SetCopresheaf, category_of_elements, decompose_coproduct, hom_copresheaf_1d
from famcat.errors import DecisionFailure
from famcat.ids import from_jsonable, idkey, sorted_ids, to_jsonable

j = to_jsonable


def cell_json(c: Cell2) -> list:
    return [j(c.src), j(c.tgt), j(c.mor)]


@dataclass
class Outcome:
    verdict: str
    certificates: list = field(default_factory=list)
    counterexample: Any = None
    work: dict = field(default_factory=dict)


def sort_certs(certs: list) -> list:
    return sorted(certs, key=lambda c: (c["type"], c["id"]))


# ---------------------------------------------------------------------------
# familial1d


def copresheaves_1d(value, kind: str) -> list:
    """(label, copresheaf) pairs: one per object X for a functor, one for a copresheaf."""
    if kind == "copresheaf":
        return [(None, value)]
    return [(X, hom_copresheaf_1d(value, X)) for X in value.target.objects]


def component_blockers(F: SetCopresheaf, component: list) -> list:
    """For each element o, some p in its component with |el(o, p)| ≠ 1."""
    el = category_of_elements(F).cat
    out = []
    for o in component:
        for p in component:
            n = len(el.hom(o, p))
            if n != 1:
                out.append([j(o), j(p), n])
                break
    return out


def _decompose(F: SetCopresheaf):
    try:
        return decompose_coproduct(F)
    except DecisionFailure as exc:
        return exc


def build_familial1d(value, kind: str, all_witnesses: bool, threads: int = 1) -> Outcome:
    """Independent objects X may be decided on ``threads`` workers; assembly is sequential."""
    pairs = copresheaves_1d(value, kind)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_decompose, [F for _, F in pairs]))
    else:
        results = None
    out = Outcome("yes")
    for i, (X, F) in enumerate(pairs):
        label = "-" if X is None else str(X)
        res = results[i] if results is not None else _decompose(F)
        if isinstance(res, DecisionFailure):
            out.verdict = "no"
            for n, comp in enumerate(res.witness):
                comp = sorted_ids(comp)
                out.certificates.append({
                    "id": f"no-initial:{label}:{n}", "type": "component-without-initial", "X": j(X),
                    "component": j(comp), "blockers": component_blockers(F, comp),
                })
            if out.counterexample is None:
                out.counterexample = {"kind": res.kind, "X": j(X), "element": j(sorted_ids(res.witness[0])[0])}
            if not all_witnesses:
                break
            continue
        out.certificates.append({"id": f"decomposition:{label}", "type": "decomposition", "X": j(X), **res.to_json()})
    out.work = {"copresheaves": len(out.certificates)}
    out.certificates = sort_certs(out.certificates)
    return out


# ---------------------------------------------------------------------------
# lax familiality


def generic_certificates(T: PseudoFunctor, objects: list | None = None) -> tuple[list, dict]:
    """Certificates deciding lax-genericity of every δ: X → TA, and the generics per X."""
    from famcat.laxfam import is_lax_generic

    A, B = T.source, T.target
    objects = B.objects if objects is None else objects
    certs, gens = [], {X: [] for X in objects}
    for X in objects:
        for a in A.objects:
            for delta in B.one_cells(X, T.ob(a)):
                failure: list = []
                cert = is_lax_generic(T, delta, a, failure=failure)
                head = {"id": f"generic:{X}|{a}|{delta}", "X": j(X), "A": j(a), "delta": j(delta)}
                if cert is not None:
                    gens[X].append((a, delta))
                    squares = [
                        [j(uf.square.f), j(uf.square.g), j(uf.square.z), j(uf.square.alpha.mor),
                         j(uf.h), j(uf.gamma.mor), j(uf.nu.mor),
                         B.is_invertible(uf.gamma) and A.is_invertible(uf.nu)]
                        for uf in cert.factorizations
                    ]
                    certs.append({**head, "type": "lax-generic", "squares": sorted(squares, key=idkey_json)})
                else:
                    exc = failure[0]
                    sq = exc.extra["square"]
                    certs.append({**head, "type": "not-lax-generic", "clause": exc.witness[0],
                                  "square": [j(sq.f), j(sq.g), j(sq.z), j(sq.alpha.mor)]})
    return certs, gens


def idkey_json(x):
    return idkey(from_jsonable(x))


def factorization_certificates(T: PseudoFunctor, all_witnesses: bool, only: tuple | None = None) -> tuple[list, list]:
    """One certificate per f: X → TW (all of them with ``all_witnesses``); failures listed separately."""
    from famcat.laxfam import lax_generic_factorizations

    A, B = T.source, T.target
    certs, failures = [], []
    targets = [only] if only else [(X, W, f) for X in B.objects for W in A.objects for f in B.one_cells(X, T.ob(W))]
    for X, W, f in targets:
        facs = lax_generic_factorizations(T, f, W)
        if not facs:
            failures.append({"id": f"missing:{X}|{W}|{f}", "type": "no-generic-factorization", "X": j(X), "W": j(W), "f": j(f)})
            if not all_witnesses:
                break
            continue
        for i, fac in enumerate(facs if all_witnesses else facs[:1]):
            certs.append({"id": f"factor:{X}|{W}|{f}|{i}", "type": "generic-factorization", "X": j(X), "W": j(W), "f": j(f),
                          "A": j(fac.A), "delta": j(fac.delta), "fbar": j(fac.fbar), "theta": j(fac.theta.mor),
                          "theta_invertible": T.target.is_invertible(fac.theta)})
    return certs, failures


def span_base(T: PseudoFunctor):
    """The base category when T is a span inclusion, else None."""
    from famcat.bicat import LocallyDiscrete
    from famcat.constructions import SpanBicat

    if isinstance(T.target, SpanBicat) and isinstance(T.source, LocallyDiscrete) and T.source.cat is T.target.E:
        return T.target.E
    return None


def slice_certificates(spec, E) -> list:
    from famcat.spectrum import slice_comparison

    certs = []
    for X in E.objects:
        res = slice_comparison(spec, E, X)
        cert = {"id": f"slice:{X}", "type": "slice-equivalence", "X": j(X), "status": res.status}
        if res.witness is not None:
            eq = res.witness
            cert.update({"forward": eq.forward.to_json(), "backward": eq.backward.to_json(),
                         "unit": eq.unit.to_json(), "counit": eq.counit.to_json()})
        certs.append(cert)
    return certs


def fiber_certificates(spec) -> list:
    return [{"id": f"fiber:{X}", "type": "spectrum-fiber", "X": j(X), "category": M.to_json()}
            for X, M in spec.fibers.items()]


def build_familial(T: PseudoFunctor, all_witnesses: bool) -> Outcome:
    from famcat.laxfam import check_generic_pastings
    from famcat.spectrum import spectrum

    out = Outcome("yes")
    gcerts, gens = generic_certificates(T)
    out.certificates += gcerts
    facs, missing = factorization_certificates(T, all_witnesses)
    out.certificates += facs + missing
    out.work = {"generics": sum(len(v) for v in gens.values()),
                "squares": sum(len(c.get("squares", ())) for c in gcerts), "factorizations": len(facs)}
    if missing:
        out.verdict = "no"
        m = missing[0]
        out.counterexample = {"kind": "NoGenericFactorization", "X": m["X"], "element": [m["W"], m["f"]]}
        out.certificates = sort_certs(out.certificates)
        return out
    counter: list = []
    bad = check_generic_pastings(T, all_witnesses, counter)
    out.certificates.append({"id": "pastings", "type": "generic-pastings", "checked": counter[0],
                             "failures": j(bad)})
    out.work["pastings"] = counter[0]
    if bad:
        out.verdict = "no"
        out.counterexample = {"kind": "PastingNotGeneric", "pair": j(bad[0][1:])}
    else:
        spec = spectrum(T)
        out.certificates += fiber_certificates(spec)
        E = span_base(T)
        if E is not None:
            out.certificates += slice_certificates(spec, E)
    out.certificates = sort_certs(out.certificates)
    return out


def build_factor(T: PseudoFunctor, all_witnesses: bool, only: tuple | None) -> Outcome:
    out = Outcome("yes")
    gcerts, gens = generic_certificates(T, None if only is None else [only[0]])
    facs, missing = factorization_certificates(T, all_witnesses or only is not None, only)
    out.certificates = sort_certs(gcerts + facs + missing)
    out.work = {"factorizations": len(facs)}
    if missing:
        out.verdict = "no"
        out.counterexample = {"kind": "NoFactorization", "X": missing[0]["X"], "element": [missing[0]["W"], missing[0]["f"]]}
    elif only is not None and len(facs) > 1:
        out.certificates = sort_certs(out.certificates + [distinctness_certificate(T, facs)])
    return out


def distinctness_certificate(T: PseudoFunctor, facs: list) -> dict:
    """Pairs of factorizations through the same δ that no invertible 2-cell f̄ ⇒ f̄' identifies."""
    from famcat.laxfam import paster

    A = T.source
    P = paster(T)
    B = T.target
    pairs = []
    for i, c1 in enumerate(facs):
        for c2 in facs[i + 1:]:
            if c1["delta"] != c2["delta"]:
                continue
            d = from_jsonable(c1["delta"])
            f1, f2 = from_jsonable(c1["fbar"]), from_jsonable(c2["fbar"])
            t1 = Cell2(B.comp1(T.one(f1), d), from_jsonable(c1["f"]), from_jsonable(c1["theta"]))
            t2 = Cell2(B.comp1(T.one(f2), d), from_jsonable(c2["f"]), from_jsonable(c2["theta"]))
            equal = A.ends(f1) == A.ends(f2) and any(
                A.is_invertible(e) and P.after(t2, e, d) == t1 for e in A.cells(f1, f2))
            pairs.append([c1["id"], c2["id"], not equal])
    return {"id": "distinct", "type": "distinct-factorizations", "pairs": pairs}


# ---------------------------------------------------------------------------
# spectrum


def build_spectrum(T: PseudoFunctor, all_witnesses: bool) -> Outcome:
    from famcat.laxfam import is_lax_familial
    from famcat.spectrum import bicat_terminal_objects, cartesian_mismatches, spectrum_el, terminal_comparison

    verdict = is_lax_familial(T, all_witnesses=all_witnesses)
    if not verdict.familial:
        return _not_familial(verdict)
    spec = verdict.spectrum
    B = T.target
    out = Outcome("yes")
    out.certificates += fiber_certificates(spec)
    n_reindex = 0
    for f in B.all_one_cells():
        F = spec.reindex(f)
        n_reindex += 1
        out.certificates.append({"id": f"reindex:{f}", "type": "reindexing", "f": j(f), "functor": F.to_json()})
    for (obj, f), fac in sorted(spec.chosen.items(), key=lambda kv: idkey(kv[0])):
        out.certificates.append({"id": f"choice:{obj}|{f}", "type": "chosen-factorization", "object": j(obj), "f": j(f),
                                 "A": j(fac.A), "delta": j(fac.delta), "fbar": j(fac.fbar), "theta": j(fac.theta.mor),
                          "theta_invertible": T.target.is_invertible(fac.theta)})
    for X in B.objects:
        nat = spec.unit_comparison(X)
        out.certificates.append({"id": f"unit:{X}", "type": "reindexing-unit", "X": j(X),
                                 "components": None if nat is None else nat.to_json()["components"]})
    for g, f in B.composable_paths(2):
        nat = spec.comparison(g, f)
        out.certificates.append({"id": f"comp:{g}|{f}", "type": "reindexing-comparison", "g": j(g), "f": j(f),
                                 "components": None if nat is None else nat.to_json()["components"]})
    E = spectrum_el(T, spec)
    cart = []
    total = 0
    for o1 in E.objects:
        for o2 in E.objects:
            for m in E.one_cells(o1, o2):
                total += 1
                if E.gamma_invertible(m):
                    cart.append(j(m))
    out.certificates.append({"id": "cartesian", "type": "cartesian-classification", "cartesian": cart, "total": total,
                             "mismatches": j(cartesian_mismatches(E))})
    terms = bicat_terminal_objects(T.source)
    if terms:
        for X in B.objects:
            tc = terminal_comparison(spec, X, terms[0])
            out.certificates.append({"id": f"terminal:{X}", "type": "terminal-comparison", "X": j(X),
                                     "terminal": j(terms[0]), "functor": tc.functor.to_json(),
                                     "equivalence": tc.equivalence is not None, "isomorphism": tc.isomorphism})
    out.work = {"fibers": len(spec.fibers), "reindexings": n_reindex, "el_one_cells": total}
    if any(c["type"] in ("reindexing-unit", "reindexing-comparison") and c["components"] is None for c in out.certificates):
        out.verdict = "no"
        out.counterexample = {"kind": "ReindexingNotCoherent"}
    out.certificates = sort_certs(out.certificates)
    return out


def _not_familial(verdict) -> Outcome:
    kind, *rest = verdict.failures[0]
    return Outcome("no", [], {"kind": kind, "detail": j(rest)}, {})


# ---------------------------------------------------------------------------
# spectrum factorization and oplax slices


def arrow_certificate(cid: str, rep, kind: str = "universal-arrow") -> dict:
    pairs = []
    for (A, f), pair in sorted(rep.pairs.items(), key=lambda kv: idkey(kv[0])):
        table = [[j(gb), j(beta), j(lam)] for (gb, beta), lam in sorted(pair.table.items(), key=lambda kv: idkey(kv[0]))]
        pairs.append([j(A), j(f), j(pair.fbar), j(pair.gamma.mor), table])
    return {"id": cid, "type": kind, "m": j(rep.m), "eta": j(rep.eta), "F": j(rep.F),
            "axioms": dict(sorted(rep.axioms.items())), "pairs": pairs}


def build_spec_factor(T: PseudoFunctor, all_witnesses: bool) -> Outcome:
    from famcat.factorization import lift_2cell, spectrum_factorization
    from famcat.laxfam import is_lax_familial

    verdict = is_lax_familial(T, all_witnesses=all_witnesses, build_spectrum=False)
    if not verdict.familial:
        return _not_familial(verdict)
    sf = spectrum_factorization(T)
    E, G = sf.el, sf.G
    B = T.target
    out = Outcome("yes" if sf.ok else "no")
    for a, fac in sf.identity_factorizations.items():
        out.certificates.append({"id": f"identity:{a}", "type": "identity-factorization", "A": j(a), "Abar": j(fac.A),
                                 "delta": j(fac.delta), "e": j(fac.fbar), "theta": j(fac.theta.mor),
                                 "theta_invertible": B.is_invertible(fac.theta)})
    for h in T.source.all_one_cells():
        out.certificates.append({"id": f"G:{h}", "type": "G-one-cell", "h": j(h), "image": j(G.one(h))})
    out.certificates.append({"id": "fibration", "type": "fibration", "failures": j(sf.fibration_failures)})
    n = 0
    for target in E.objects:
        for X in B.objects:
            for f in B.one_cells(X, target[0]):
                for g in B.one_cells(X, target[0]):
                    for alpha in B.cells(f, g):
                        lift = lift_2cell(E, alpha, target)
                        out.certificates.append({"id": f"lift:{n:04d}", "type": "lift", "target": j(target),
                                                 "alpha": cell_json(alpha), "hat": j(lift.hat),
                                                 "bar": j(lift.bar.mor)})
                        n += 1
    for i, (m, rep) in enumerate(sorted(sf.universal_arrows.items(), key=lambda kv: idkey(kv[0]))):
        out.certificates.append(arrow_certificate(f"eta:{i:03d}", rep))
    out.certificates.append({"id": "composite", "type": "composite-condition", "failures": j(sf.composite_failures)})
    out.work = {"lifts": n, "universal_arrows": len(sf.universal_arrows)}
    if not sf.ok:
        out.counterexample = {"kind": "FactorizationCheckFailed",
                              "detail": j((sf.fibration_failures + sf.lift_failures + sf.composite_failures)[:1])}
    out.certificates = sort_certs(out.certificates)
    return out


def build_pra(T: PseudoFunctor, all_witnesses: bool) -> Outcome:
    from famcat.factorization import pra_check

    v = pra_check(T)
    out = Outcome("yes" if v.holds else "no")
    out.certificates.append({"id": "terminal", "type": "terminal-object", "object": j(v.terminal)})
    for i, (m, rep) in enumerate(sorted(v.universal_arrows.items(), key=lambda kv: idkey(kv[0]))):
        out.certificates.append(arrow_certificate(f"eta:{i:03d}", rep, "slice-universal-arrow"))
    for m in v.missing:
        out.certificates.append({"id": f"missing:{m}", "type": "no-universal-arrow", "m": j(m)})
    if not v.missing:
        out.certificates.append({"id": "composite", "type": "composite-condition", "failures": j(v.composite_failures)})
    out.work = {"slice_objects": len(v.universal_arrows) + len(v.missing)}
    if not v.holds:
        out.counterexample = {"kind": "UniversalArrowMissing" if v.missing else "CompositeNotUniversal",
                              "m": j(v.missing[0]) if v.missing else j(v.composite_failures[0])}
    out.certificates = sort_certs(out.certificates)
    return out


# ---------------------------------------------------------------------------
# Fam over a finite universe


def build_fam(fam, all_witnesses: bool) -> Outcome:
    """Lax familiality of Fam_{≤N}, quantifying only over the given universe."""
    from famcat.constructions import fam_copresheaf
    from famcat.elbicat import ElBicat, generic_covers, generics_index, lax_el_generics

    E = ElBicat(fam_copresheaf(fam.universe, fam.N))
    gens = sorted_ids(lax_el_generics(E))
    out = Outcome("yes")
    for g in gens:
        out.certificates.append({"id": f"generic:{g}", "type": "relative-generic", "element": j(g), "scope": "relative"})
    covers = generic_covers(E, gens)
    for o in sorted_ids(E.objects):
        m = covers.get(o)
        out.certificates.append({"id": f"cover:{o}", "type": "opcartesian-cover", "element": j(o), "morphism": j(m)})
        if m is None and out.counterexample is None:
            out.verdict = "no"
            out.counterexample = {"kind": "NoGenericCover", "element": j(o)}
    if out.verdict == "yes":
        idx = generics_index(E, gens)
        out.certificates.append({"id": "index", "type": "generics-index", "category": idx.cat.to_json()})
    out.work = {"elements": len(E.objects), "generics": len(gens)}
    out.certificates = sort_certs(out.certificates)
    return out
