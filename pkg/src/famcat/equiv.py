"""Constructive equivalence of finite categories.

A search enumerates functors C → D, keeps one that is fully faithful and
essentially surjective, then builds the pseudo-inverse and both invertible
transformations explicitly and re-checks them.  Hitting the enumeration
bound is reported as undecided rather than as a refutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from famcat.fincat import FinCat, FinFunctor, NatTrans, check_functor, check_nat, compose_functors, enumerate_functors
from famcat.ids import sorted_ids

Status = Literal["equivalent", "not-equivalent", "undecided-at-bound"]


@dataclass
class Equivalence:
    forward: FinFunctor
    backward: FinFunctor
    unit: NatTrans
    counit: NatTrans


@dataclass
class EquivalenceResult:
    status: Status
    witness: Equivalence | None = None
    searched: int = 0


def is_fully_faithful(F: FinFunctor) -> bool:
    C, D = F.source, F.target
    for a in C.objects:
        for b in C.objects:
            images = [F(f) for f in C.hom(a, b)]
            if len(set(images)) != len(images) or len(images) != len(D.hom(F.ob(a), F.ob(b))):
                return False
    return True


def essential_preimages(F: FinFunctor) -> dict | None:
    """For each object d of D, a pair (c, iso F c → d), or None if some d is missed."""
    C, D = F.source, F.target
    out = {}
    for d in D.objects:
        hit = None
        for c in C.objects:
            isos = [i for i in D.hom(F.ob(c), d) if D.is_iso(i)]
            if isos:
                hit = (c, isos[0])
                break
        if hit is None:
            return None
        out[d] = hit
    return out


def pseudo_inverse(F: FinFunctor) -> Equivalence | None:
    """G with invertible η: 1 ⇒ GF and ε: FG ⇒ 1, for F fully faithful and essentially surjective."""
    C, D = F.source, F.target
    if not is_fully_faithful(F):
        return None
    pre = essential_preimages(F)
    if pre is None:
        return None
    # the unique morphism of C over a given D-morphism between images
    lift = {}
    for a in C.objects:
        for b in C.objects:
            for f in C.hom(a, b):
                lift[(a, b, F(f))] = f
    on_obj = {d: pre[d][0] for d in D.objects}
    on_mor = {}
    for g in D.morphisms:
        d1, d2 = D.ends[g]
        c1, i1 = pre[d1]
        c2, i2 = pre[d2]
        on_mor[g] = lift[(c1, c2, D.compose(D.inverse(i2), g, i1))]
    G = FinFunctor(D, C, on_obj, on_mor, name="pseudo-inverse")
    counit = NatTrans(compose_functors(F, G), _identity(D), {d: pre[d][1] for d in D.objects})
    unit_comps = {}
    for c in C.objects:
        d = F.ob(c)
        c2, i = pre[d]
        unit_comps[c] = lift[(c, c2, D.inverse(i))]
    unit = NatTrans(_identity(C), compose_functors(G, F), unit_comps)
    eq = Equivalence(F, G, unit, counit)
    return eq if check_equivalence(eq) else None


def _identity(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {a: a for a in C.objects}, {f: f for f in C.morphisms}, name="id")


def check_equivalence(eq: Equivalence) -> bool:
    """Re-check every component: functors, naturality and invertibility."""
    if check_functor(eq.forward) or check_functor(eq.backward):
        return False
    if check_nat(eq.unit) or check_nat(eq.counit):
        return False
    C, D = eq.forward.source, eq.forward.target
    return all(C.is_iso(m) for m in eq.unit.components.values()) and all(D.is_iso(m) for m in eq.counit.components.values())


def skeleton_profile(C: FinCat) -> tuple:
    """An invariant of equivalence: sorted hom sizes between isomorphism-class representatives."""
    reps = []
    for a in C.objects:
        if not any(C.isomorphic(a, r) for r in reps):
            reps.append(a)
    sizes = sorted(sorted(len(C.hom(a, b)) for b in reps) for a in reps)
    return (len(reps), tuple(map(tuple, sizes)), sum(len(C.hom(a, b)) for a in reps for b in reps))


def find_equivalence(C: FinCat, D: FinCat, bound: int = 20000) -> EquivalenceResult:
    if skeleton_profile(C) != skeleton_profile(D):
        return EquivalenceResult("not-equivalent")
    functors = enumerate_functors(C, D, limit=bound + 1)
    for n, F in enumerate(functors[:bound], start=1):
        eq = pseudo_inverse(F)
        if eq is not None:
            return EquivalenceResult("equivalent", eq, n)
    if len(functors) > bound:
        return EquivalenceResult("undecided-at-bound", None, bound)
    return EquivalenceResult("not-equivalent", None, len(functors))


def core_objects(C: FinCat) -> list:
    return sorted_ids(C.objects)
