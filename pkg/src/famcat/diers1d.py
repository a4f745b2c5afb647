"""One-dimensional familial representability.

Set-valued copresheaves on a finite category, their categories of
elements, el-generic objects, decompositions into coproducts of
representables, generic morphisms for a functor ``T: A → B`` and the
factorization of a familial ``T`` as a right adjoint followed by a
discrete fibration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

from famcat.errors import DecisionFailure, Diagnostic, ValidationError
from famcat.fincat import (
    FinCat,
    FinFunctor,
    check_functor,
    components_and_initials,
)
from famcat.ids import from_jsonable, idkey, sorted_ids, to_jsonable

Id = Hashable


class SetCopresheaf:
    """F: base → Set given by element sets and action tables ``action[f][x] = F(f)(x)``."""

    def __init__(self, base: FinCat, sets: Mapping[Id, list], action: Mapping[Id, Mapping], name=None):
        self.base = base
        self.sets = {a: tuple(sorted_ids(sets.get(a, ()))) for a in base.objects}
        self.action = {f: dict(action.get(f, {})) for f in base.morphisms}
        self.name = name

    def __call__(self, f: Id, x: Id) -> Id:
        return self.action[f][x]

    def size(self) -> int:
        return sum(len(s) for s in self.sets.values())

    def to_json(self) -> dict:
        return {
            "sets": [[to_jsonable(a), to_jsonable(list(self.sets[a]))] for a in self.base.objects],
            "actions": [
                [to_jsonable(f), [[to_jsonable(x), to_jsonable(self.action[f][x])] for x in sorted_ids(self.action[f])]]
                for f in self.base.morphisms
            ],
        }


def copresheaf_from_json(doc: Mapping, base: FinCat) -> SetCopresheaf:
    def pairs(x):
        return x.items() if isinstance(x, Mapping) else x

    sets = {from_jsonable(a): [from_jsonable(x) for x in xs] for a, xs in pairs(doc["sets"])}
    actions = {
        from_jsonable(f): {from_jsonable(x): from_jsonable(y) for x, y in pairs(table)}
        for f, table in pairs(doc["actions"])
    }
    return SetCopresheaf(base, sets, actions)


def check_copresheaf(F: SetCopresheaf) -> list[Diagnostic]:
    C = F.base
    out = []
    for f in C.morphisms:
        a, b = C.ends[f]
        for x in F.sets[a]:
            if F.action[f].get(x) not in F.sets[b]:
                out.append(Diagnostic("ActionNotTotal", (f, x)))
    if out:
        return out
    for a in C.objects:
        i = C.identity[a]
        if any(F(i, x) != x for x in F.sets[a]):
            out.append(Diagnostic("IdentityNotPreserved", (a,)))
    for (g, f), gf in C.table.items():
        if any(F(g, F(f, x)) != F(gf, x) for x in F.sets[C.dom(f)]):
            out.append(Diagnostic("CompositionNotPreserved", (g, f)))
    return out


def validate_copresheaf(F: SetCopresheaf) -> SetCopresheaf:
    problems = check_copresheaf(F)
    if problems:
        raise ValidationError(problems)
    return F


def representable(C: FinCat, P: Id) -> SetCopresheaf:
    """C(P, −) with elements the morphisms out of P."""
    sets = {b: list(C.hom(P, b)) for b in C.objects}
    action = {g: {x: C.compose(g, x) for x in C.hom(P, C.dom(g))} for g in C.morphisms}
    return SetCopresheaf(C, sets, action, name=f"hom({P},-)")


def constant_copresheaf(C: FinCat, elements=("*",)) -> SetCopresheaf:
    return SetCopresheaf(
        C, {a: list(elements) for a in C.objects}, {f: {x: x for x in elements} for f in C.morphisms}, name="const"
    )


def sum_of_representables(C: FinCat, family: list[Id]) -> SetCopresheaf:
    """Σ_m C(P_m, −); elements are ``"m:f"`` strings."""
    sets = {b: [f"{m}:{x}" for m, P in enumerate(family) for x in C.hom(P, b)] for b in C.objects}
    action = {}
    for g in C.morphisms:
        table = {}
        for m, P in enumerate(family):
            for x in C.hom(P, C.dom(g)):
                table[f"{m}:{x}"] = f"{m}:{C.compose(g, x)}"
        action[g] = table
    return SetCopresheaf(C, sets, action, name="sum")


# ---------------------------------------------------------------------------
# category of elements


@dataclass
class ElCat1:
    cat: FinCat
    projection: FinFunctor


def category_of_elements(F: SetCopresheaf) -> ElCat1:
    """Objects (A, x); a morphism (f, x): (A, x) → (B, F(f)(x)) for each f out of A."""
    C = F.base
    objects = [(a, x) for a in C.objects for x in F.sets[a]]
    morphisms = {}
    for f in C.morphisms:
        a, b = C.ends[f]
        for x in F.sets[a]:
            morphisms[(f, x)] = ((a, x), (b, F(f, x)))
    identity = {(a, x): (C.identity[a], x) for a, x in objects}
    table = {}
    for (f, x), (_, (b, y)) in morphisms.items():
        for g in C.out_of(b):
            table[((g, y), (f, x))] = (C.compose(g, f), x)
    el = FinCat(objects, morphisms, identity, table, name="el")
    proj = FinFunctor(el, C, {o: o[0] for o in objects}, {m: m[0] for m in morphisms}, name="proj")
    return ElCat1(el, proj)


def el_generics_1d(F: SetCopresheaf) -> list:
    """Every (A, x) with a unique morphism to the source of each cospan out of it."""
    el = category_of_elements(F).cat
    result = []
    for o in el.objects:
        if is_el_generic_1d(el, o):
            result.append(o)
    return result


def is_el_generic_1d(el: FinCat, o: Id) -> bool:
    for f in el.out_of(o):
        target = el.cod(f)
        for g in el.into(target):
            if len(el.hom(o, el.dom(g))) != 1:
                return False
    return True


def is_candidate_generic_1d(el: FinCat, o: Id) -> bool:
    """The weaker predicate: each cospan out of ``o`` has exactly one lifting."""
    for f in el.out_of(o):
        target = el.cod(f)
        for g in el.into(target):
            lifts = [h for h in el.hom(o, el.dom(g)) if el.compose(g, h) == f]
            if len(lifts) != 1:
                return False
    return True


def candidate_generics_1d(F: SetCopresheaf) -> list:
    el = category_of_elements(F).cat
    return [o for o in el.objects if is_candidate_generic_1d(el, o)]


def has_candidate_cover_1d(F: SetCopresheaf) -> bool:
    """Every element receives a morphism from a candidate generic."""
    el = category_of_elements(F).cat
    cands = candidate_generics_1d(F)
    return all(any(el.hom(c, o) for c in cands) for o in el.objects)


# ---------------------------------------------------------------------------
# coproducts of representables


@dataclass
class Decomposition1:
    """F ≅ Σ_m hom(P_m, −).

    ``index`` lists the representative elements (P_m, x_m); ``witness`` sends
    each element (B, y) to (m, f) with F(f)(x_m) = y.
    """

    index: list
    witness: dict = field(default_factory=dict)

    def family(self) -> list:
        return [p for p, _ in self.index]

    def to_json(self) -> dict:
        return {
            "index": to_jsonable(self.index),
            "witness": [[to_jsonable(k), to_jsonable(v)] for k, v in sorted(self.witness.items(), key=lambda kv: idkey(kv[0]))],
        }


def decompose_coproduct(F: SetCopresheaf) -> Decomposition1:
    """Decompose via initial objects of the components of el F.

    Raises ``DecisionFailure("ComponentWithoutInitial", [component, ...])``.
    """
    el = category_of_elements(F).cat
    report = components_and_initials(el)
    missing = [comp for comp, inits in zip(report.components, report.initials) if not inits]
    if missing:
        raise DecisionFailure("ComponentWithoutInitial", missing, f"{len(missing)} component(s) without an initial object")
    index = [inits[0] for inits in report.initials]
    witness = {}
    for m, (rep, comp) in enumerate(zip(index, report.components)):
        for o in comp:
            (arrow,) = el.hom(rep, o)
            witness[o] = (m, arrow[0])
    return Decomposition1(index, witness)


def has_decomposition(F: SetCopresheaf) -> bool:
    try:
        decompose_coproduct(F)
    except DecisionFailure:
        return False
    return True


def check_decomposition(F: SetCopresheaf, dec: Decomposition1) -> list[Diagnostic]:
    """Rebuild Σ_m hom(P_m, −) → F elementwise and check it is a natural bijection."""
    C = F.base
    out = []
    el = category_of_elements(F).cat
    for m, (P, x) in enumerate(dec.index):
        if x not in F.sets.get(P, ()):
            out.append(Diagnostic("NotAnElement", (m, P, x)))
        elif not is_el_generic_1d(el, (P, x)):
            out.append(Diagnostic("RepresentativeNotGeneric", (m, P, x)))
    if out:
        return out
    for b in C.objects:
        image = {}
        for m, (P, x) in enumerate(dec.index):
            for f in C.hom(P, b):
                y = F(f, x)
                if y in image:
                    out.append(Diagnostic("NotInjective", (b, image[y], (m, f))))
                image[y] = (m, f)
        for y in F.sets[b]:
            if y not in image:
                out.append(Diagnostic("NotSurjective", (b, y)))
            elif dec.witness.get((b, y)) != image[y]:
                out.append(Diagnostic("WitnessMismatch", (b, y)))
    # naturality: F(g)(F(f)(x_m)) = F(g∘f)(x_m) for every g out of b
    for m, (P, x) in enumerate(dec.index):
        for f in C.out_of(P):
            for g in C.out_of(C.cod(f)):
                if F(g, F(f, x)) != F(C.compose(g, f), x):
                    out.append(Diagnostic("NaturalityFails", (m, f, g)))
    return out


# ---------------------------------------------------------------------------
# functors T: A → B


def hom_copresheaf_1d(T: FinFunctor, X: Id) -> SetCopresheaf:
    """B(X, T−) on the domain of T."""
    A, B = T.source, T.target
    sets = {a: list(B.hom(X, T.ob(a))) for a in A.objects}
    action = {f: {x: B.compose(T(f), x) for x in sets[A.dom(f)]} for f in A.morphisms}
    return SetCopresheaf(A, sets, action, name=f"hom({X},T-)")


def is_generic_1d(T: FinFunctor, X: Id, a: Id, x: Id) -> bool:
    """x: X → Ta is generic: each square Tf∘x = Tg∘z has a unique h with Th∘x = z."""
    A, B = T.source, T.target
    for f in A.out_of(a):
        c = A.cod(f)
        tfx = B.compose(T(f), x)
        for g in A.into(c):
            b = A.dom(g)
            for z in B.hom(X, T.ob(b)):
                if B.compose(T(g), z) != tfx:
                    continue
                count = sum(1 for h in A.hom(a, b) if B.compose(T(h), x) == z)
                if count != 1:
                    return False
    return True


@dataclass(frozen=True)
class GenericFactorization1:
    source: Id
    apex: Id
    generic: Id
    factor: Id


def generic_factorization_1d(T: FinFunctor, f: Id, W: Id) -> GenericFactorization1:
    """Least (A, δ, f̄) with T(f̄)∘δ = f and δ generic.

    ``W`` disambiguates the object with ``T(W) = cod f``.  Raises
    ``DecisionFailure("NoGenericFactorization", f)``.
    """
    A, B = T.source, T.target
    X = B.dom(f)
    if T.ob(W) != B.cod(f):
        raise ValueError("f must land in T(W)")
    for a in A.objects:
        for d in B.hom(X, T.ob(a)):
            for fbar in A.hom(a, W):
                if B.compose(T(fbar), d) == f and is_generic_1d(T, X, a, d):
                    return GenericFactorization1(X, a, d, fbar)
    raise DecisionFailure("NoGenericFactorization", (f, W))


def check_generic_factorization_1d(T: FinFunctor, f: Id, W: Id, fac: GenericFactorization1) -> list[Diagnostic]:
    A, B = T.source, T.target
    out = []
    if B.compose(T(fac.factor), fac.generic) != f or A.cod(fac.factor) != W:
        out.append(Diagnostic("FactorizationDoesNotCompose", (f, W)))
    if not is_generic_1d(T, fac.source, fac.apex, fac.generic):
        out.append(Diagnostic("NotGeneric", (fac.generic,)))
    return out


def admits_generic_factorizations(T: FinFunctor) -> bool:
    A, B = T.source, T.target
    for W in A.objects:
        for X in B.objects:
            for f in B.hom(X, T.ob(W)):
                try:
                    generic_factorization_1d(T, f, W)
                except DecisionFailure:
                    return False
    return True


@dataclass
class FamilialVerdict1:
    familial: bool
    decompositions: dict
    failures: dict


def is_familial_1d(T: FinFunctor, all_witnesses: bool = False) -> FamilialVerdict1:
    """Decompose B(X, T−) for every X; stops at the first failure unless ``all_witnesses``."""
    decs, fails = {}, {}
    for X in T.target.objects:
        try:
            decs[X] = decompose_coproduct(hom_copresheaf_1d(T, X))
        except DecisionFailure as exc:
            fails[X] = exc.witness
            if not all_witnesses:
                break
    return FamilialVerdict1(not fails, decs, fails)


@dataclass
class DiersFactorization:
    mid: FinCat
    G: FinFunctor
    V: FinFunctor
    left_adjoint: dict
    unit: dict


def diers_factorization(T: FinFunctor) -> DiersFactorization:
    """T = V∘G with V a discrete fibration and G a right adjoint.

    Objects of the middle category are (X, A, δ), one least representative
    generic δ: X → TA per component of el B(X, T−).  A morphism
    (X, δ) → (Y, σ) is a u: X → Y with σ∘u in the component of δ.
    Raises ``DecisionFailure("NotFamilial", (X, components))``.
    """
    A, B = T.source, T.target
    verdict = is_familial_1d(T)
    if not verdict.familial:
        X = next(iter(verdict.failures))
        raise DecisionFailure("NotFamilial", (X, verdict.failures[X]))
    decs = verdict.decompositions

    def rep(X, m):
        P, d = decs[X].index[m]
        return ("gen", X, P, d)

    def component(X, a, y):
        return decs[X].witness[(a, y)][0]

    objects = [rep(X, m) for X in B.objects for m in range(len(decs[X].index))]
    morphisms = {}
    for src in objects:
        X = src[1]
        for tgt in objects:
            _, Y, Pt, s = tgt
            for u in B.hom(X, Y):
                if rep(X, component(X, Pt, B.compose(s, u))) == src:
                    morphisms[("m", u, src, tgt)] = (src, tgt)
    identity = {o: ("m", B.identity[o[1]], o, o) for o in objects}
    table = {}
    for g in morphisms:
        for f in morphisms:
            if f[3] == g[2]:
                table[(g, f)] = ("m", B.compose(g[1], f[1]), f[2], g[3])
    mid = FinCat(objects, morphisms, identity, table, name="M")
    V = FinFunctor(mid, B, {o: o[1] for o in objects}, {m: m[1] for m in morphisms}, name="V")

    def G_ob(a):
        TA = T.ob(a)
        return rep(TA, component(TA, a, B.identity[TA]))

    G = FinFunctor(
        A,
        mid,
        {a: G_ob(a) for a in A.objects},
        {h: ("m", T(h), G_ob(A.dom(h)), G_ob(A.cod(h))) for h in A.morphisms},
        name="G",
    )
    left = {o: o[2] for o in objects}
    unit = {o: ("m", o[3], o, G_ob(o[2])) for o in objects}
    return DiersFactorization(mid, G, V, left, unit)


def check_diers_factorization(T: FinFunctor, fac: DiersFactorization) -> list[Diagnostic]:
    A, B, M = T.source, T.target, fac.mid
    out = []
    for name, F in (("G", fac.G), ("V", fac.V)):
        for d in check_functor(F):
            out.append(Diagnostic(f"{name}NotAFunctor", (d.kind,) + d.detail))
    if out:
        return out
    for a in A.objects:
        if fac.V.ob(fac.G.ob(a)) != T.ob(a):
            out.append(Diagnostic("VGNotT", (a,)))
    for h in A.morphisms:
        if fac.V(fac.G(h)) != T(h):
            out.append(Diagnostic("VGNotT", (h,)))
    # discrete fibration: each v into V(m) has exactly one lift ending at m
    for m in M.objects:
        for v in B.into(fac.V.ob(m)):
            lifts = [k for k in M.into(m) if fac.V(k) == v]
            if len(lifts) != 1:
                out.append(Diagnostic("NotDiscreteFibration", (m, v, len(lifts))))
    # unit components are universal arrows from m to G
    for m in M.objects:
        P = fac.left_adjoint[m]
        eta = fac.unit[m]
        if eta not in M.ends or M.ends[eta] != (m, fac.G.ob(P)):
            out.append(Diagnostic("UnitWrongType", (m,)))
            continue
        for a in A.objects:
            for k in M.hom(m, fac.G.ob(a)):
                solutions = [h for h in A.hom(P, a) if M.compose(fac.G(h), eta) == k]
                if len(solutions) != 1:
                    out.append(Diagnostic("UnitNotUniversal", (m, k, len(solutions))))
    return out
