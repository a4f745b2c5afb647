"""Lax-generic 1-cells, universal factorizations, generic cells and lax
familiality of a pseudofunctor T: A → B.

Everything here works directly with pastings in B.  The same notions are
reachable through ``elbicat`` applied to the hom copresheaves B(X, T−);
the tests compare both routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from famcat.bicat import Bicat, Cell2, PseudoFunctor
from famcat.elbicat import CatCopresheaf
from famcat.errors import DecisionFailure
from famcat.fincat import FinCat, FinFunctor, NatTrans, compose_functors, identity_functor, validate_category
from famcat.ids import idkey, sorted_ids

Id = Hashable


# ---------------------------------------------------------------------------
# hom copresheaves


def hom_copresheaf(T: PseudoFunctor, X: Id) -> CatCopresheaf:
    """A ↦ B(X, TA), acting by postcomposition with T-images."""
    A, B = T.source, T.target

    def cat(a):
        return B.hom(X, T.ob(a))

    def act(f):
        a, b = A.ends(f)
        S, D = cat(a), cat(b)
        Tf = T.one(f)
        on_obj = {k: B.comp1(Tf, k) for k in S.objects}
        on_mor = {m: B.wl(Tf, Cell2(S.dom(m), S.cod(m), m)).mor for m in S.morphisms}
        return FinFunctor(S, D, on_obj, on_mor)

    def act2(c):
        S = cat(A.src(c.src))
        Tc = T.two(c)
        return NatTrans(F.act(c.src), F.act(c.tgt), {k: B.wr(Tc, k).mor for k in S.objects})

    def comp(g, f):
        S = cat(A.src(f))
        Tg, Tf = T.one(g), T.one(f)
        phi = T.comp_cell(g, f)
        comps = {k: B.vcomp(B.wr(phi, k), B.assoc_inv(Tg, Tf, k)).mor for k in S.objects}
        return NatTrans(compose_functors(F.act(g), F.act(f)), F.act(A.comp1(g, f)), comps)

    def unit(a):
        S = cat(a)
        iota = T.unit_cell(a)
        comps = {k: B.vcomp(B.wr(iota, k), B.lunitor_inv(k)).mor for k in S.objects}
        return NatTrans(identity_functor(S), F.act(A.unit(a)), comps)

    F = CatCopresheaf(A, cat, act, act2, comp, unit, name=f"hom({X},T-)")
    return F


# ---------------------------------------------------------------------------
# pasting helpers


class Paster:
    """Memoized pastings for a fixed T."""

    def __init__(self, T: PseudoFunctor):
        self.T = T
        self.A: Bicat = T.source
        self.B: Bicat = T.target
        self._whisk: dict = {}

    def whisk(self, lam: Cell2, delta: Id) -> Cell2:
        """Tλ * δ."""
        key = (lam, delta)
        r = self._whisk.get(key)
        if r is None:
            r = self.B.wr(self.T.two(lam), delta)
            self._whisk[key] = r
        return r

    def square(self, delta, h, gamma: Cell2, g, nu: Cell2) -> Cell2:
        """The cell Tf∘δ ⇒ Tg∘z pasted from γ: Th∘δ ⇒ z and ν: f ⇒ g∘h."""
        B, T = self.B, self.T
        Tg, Th = T.one(g), T.one(h)
        return B.vcomp(B.wl(Tg, gamma), B.assoc(Tg, Th, delta), B.wr(T.comp_inv(g, h), delta), self.whisk(nu, delta))

    def after(self, gamma: Cell2, lam: Cell2, delta) -> Cell2:
        """γ · (Tλ * δ)."""
        return self.B.vcomp(gamma, self.whisk(lam, delta))

    def stack(self, delta, h, gamma: Cell2, k, phi: Cell2) -> Cell2:
        """T(kh)∘δ ⇒ w from γ: Th∘δ ⇒ σ and φ: Tk∘σ ⇒ w."""
        B, T = self.B, self.T
        Tk, Th = T.one(k), T.one(h)
        return B.vcomp(phi, B.wl(Tk, gamma), B.assoc(Tk, Th, delta), B.wr(T.comp_inv(k, h), delta))

    def unit_cell(self, delta, a) -> Cell2:
        """T(1_A)∘δ ⇒ δ."""
        B, T = self.B, self.T
        return B.vcomp(B.lunitor(delta), B.wr(T.unit_inv(a), delta))


_PASTERS: dict = {}


def paster(T: PseudoFunctor) -> Paster:
    p = _PASTERS.get(id(T))
    if p is None or p.T is not T:
        p = Paster(T)
        _PASTERS[id(T)] = p
    return p


def codomain_object(T: PseudoFunctor, delta: Id, hint: Id | None = None) -> Id:
    """The A with δ: X → TA (the hint disambiguates when T is not injective on objects)."""
    if hint is not None:
        return hint
    tgt = T.target.tgt(delta)
    options = [a for a in T.source.objects if T.ob(a) == tgt]
    if len(options) != 1:
        raise ValueError(f"cannot recover the A of {delta!r}; pass it explicitly")
    return options[0]


# ---------------------------------------------------------------------------
# universal factorizations


@dataclass
class Square:
    """α: Tf∘δ ⇒ Tg∘z for f: A → C, g: B → C, z: X → TB."""

    delta: Id
    A: Id
    f: Id
    g: Id
    z: Id
    alpha: Cell2


@dataclass
class UniversalFactorization:
    square: Square
    h: Id
    gamma: Cell2
    nu: Cell2
    psi_bars: dict = field(default_factory=dict)


def _cancellative(P: Paster, delta, h, gamma: Cell2) -> bool:
    """Condition (1): λ ↦ γ·(Tλ*δ) is injective on each A(k, h)."""
    A = P.A
    a, b = A.ends(h)
    for k in A.one_cells(a, b):
        seen = set()
        for lam in A.cells(k, h):
            v = P.after(gamma, lam, delta)
            if v in seen:
                return False
            seen.add(v)
    return True


def _competitors(P: Paster, sq: Square):
    """Every (k, φ, ψ) pasting to α."""
    A, B, T = P.A, P.B, P.T
    b = A.src(sq.g)
    for k in A.one_cells(sq.A, b):
        for phi in B.cells(B.comp1(T.one(k), sq.delta), sq.z):
            for psi in A.cells(sq.f, A.comp1(sq.g, k)):
                if P.square(sq.delta, k, phi, sq.g, psi) == sq.alpha:
                    yield k, phi, psi


def _factors_through(P: Paster, sq: Square, h, gamma, nu, competitors) -> dict | None:
    """Condition (2): each competitor has exactly one ψ̄ (uniqueness is re-checked, not assumed)."""
    A = P.A
    out = {}
    for k, phi, psi in competitors:
        hits = [lam for lam in A.cells(k, h)
                if P.after(gamma, lam, sq.delta) == phi and A.vcomp(A.wl(sq.g, lam), psi) == nu]
        if len(hits) != 1:
            return None
        out[(k, phi.mor, psi.mor)] = hits[0].mor
    return out


def universal_factorization(T: PseudoFunctor, sq: Square) -> UniversalFactorization:
    """The least (h, γ, ν) pasting to α and satisfying conditions (1) and (2).

    Raises ``DecisionFailure("NoUniversalFactorization", (clause, α))`` where
    the clause is ``"pasting"``, ``"1"`` or ``"2"``: the first clause no candidate meets.
    """
    P = paster(T)
    comps = list(_competitors(P, sq))
    if not comps:
        raise DecisionFailure("NoUniversalFactorization", ("pasting", sq.alpha), extra={"square": sq})
    reached = "1"
    for h, gamma, nu in comps:
        if not _cancellative(P, sq.delta, h, gamma):
            continue
        reached = "2"
        bars = _factors_through(P, sq, h, gamma, nu, comps)
        if bars is not None:
            return UniversalFactorization(sq, h, gamma, nu, bars)
    raise DecisionFailure("NoUniversalFactorization", (reached, sq.alpha), extra={"square": sq})


def factorization_fault(T: PseudoFunctor, sq: Square, h: Id, gamma: Cell2, nu: Cell2) -> str | None:
    """The first clause a proposed (h, γ, ν) fails for ``sq``, or None.  No search over (h, γ, ν)."""
    P = paster(T)
    A, B = P.A, P.B
    if (gamma.src, gamma.tgt) != (B.comp1(T.one(h), sq.delta), sq.z) or (nu.src, nu.tgt) != (sq.f, A.comp1(sq.g, h)):
        return "shape"
    if P.square(sq.delta, h, gamma, sq.g, nu) != sq.alpha:
        return "pasting"
    if not _cancellative(P, sq.delta, h, gamma):
        return "1"
    if _factors_through(P, sq, h, gamma, nu, _competitors(P, sq)) is None:
        return "2"
    if B.is_invertible(sq.alpha) and not (B.is_invertible(gamma) and A.is_invertible(nu)):
        return "3"
    return None


def squares_from(T: PseudoFunctor, delta: Id, a: Id):
    """Every square α: Tf∘δ ⇒ Tg∘z with δ: X → TA."""
    A, B = T.source, T.target
    X = B.src(delta)
    for c in A.objects:
        for f in A.one_cells(a, c):
            Tfd = B.comp1(T.one(f), delta)
            for b in A.objects:
                for g in A.one_cells(b, c):
                    Tg = T.one(g)
                    for z in B.one_cells(X, T.ob(b)):
                        for alpha in B.cells(Tfd, B.comp1(Tg, z)):
                            yield Square(delta, a, f, g, z, alpha)


@dataclass
class LaxGenericCert:
    delta: Id
    A: Id
    factorizations: list
    invertible_cases: int


_GENERIC_MEMO: dict = {}


def is_lax_generic(T: PseudoFunctor, delta: Id, a: Id | None = None, failure: list | None = None) -> LaxGenericCert | None:
    """Quantify over every square out of δ; condition (3) checked on the chosen factorizations."""
    a = codomain_object(T, delta, a)
    key = (id(T), delta, a)
    if failure is None and key in _GENERIC_MEMO and _GENERIC_MEMO[key][0] is T:
        return _GENERIC_MEMO[key][1]
    B = T.target
    facs, inv = [], 0
    result = None
    try:
        for sq in squares_from(T, delta, a):
            uf = universal_factorization(T, sq)
            if B.is_invertible(sq.alpha):
                inv += 1
                if not (B.is_invertible(uf.gamma) and T.source.is_invertible(uf.nu)):
                    raise DecisionFailure("NoUniversalFactorization", ("3", sq.alpha), extra={"square": sq})
            facs.append(uf)
        result = LaxGenericCert(delta, a, facs, inv)
    except DecisionFailure as exc:
        if failure is not None:
            failure.append(exc)
    _GENERIC_MEMO[key] = (T, result)
    return result


def lax_generics_out(T: PseudoFunctor, X: Id) -> list:
    """Pairs (A, δ: X → TA) with δ lax-generic, in canonical order."""
    B = T.target
    return sorted_ids((a, d) for a in T.source.objects for d in B.one_cells(X, T.ob(a)) if is_lax_generic(T, d, a))


# ---------------------------------------------------------------------------
# generic cells


@dataclass
class GenericCellCert:
    delta: Id
    h: Id
    gamma: Cell2
    cancellations: dict


def is_generic_cell(T: PseudoFunctor, delta: Id, h: Id, gamma: Cell2, a: Id | None = None,
                    source_checked: bool = False) -> GenericCellCert | None:
    """Conditions (1) and (2) for (h, γ: Th∘δ ⇒ z) by enumeration over (k, φ, λ)."""
    a = codomain_object(T, delta, a)
    if not source_checked and is_lax_generic(T, delta, a) is None:
        raise DecisionFailure("SourceNotLaxGeneric", delta)
    P = paster(T)
    A, B = T.source, T.target
    if not _cancellative(P, delta, h, gamma):
        return None
    b = A.tgt(h)
    z = gamma.tgt
    table = {}
    for k in A.one_cells(a, b):
        for phi in B.cells(B.comp1(T.one(k), delta), z):
            for lam in A.cells(h, k):
                if P.after(phi, lam, delta) != gamma:
                    continue
                stars = [s for s in A.cells(k, h)
                         if P.after(gamma, s, delta) == phi and A.vcomp(s, lam) == A.idc(h)]
                if len(stars) != 1:
                    return None
                table[(k, phi.mor, lam.mor)] = stars[0].mor
    return GenericCellCert(delta, h, gamma, table)


_CELLS_MEMO: dict = {}


def generic_cells(T: PseudoFunctor, delta: Id, a: Id, z: Id) -> list:
    """Every generic cell (h, γ: Th∘δ ⇒ z), in canonical order."""
    key = (id(T), delta, a, z)
    hit = _CELLS_MEMO.get(key)
    if hit is not None and hit[0] is T:
        return hit[1]
    A, B = T.source, T.target
    out = []
    for b in A.objects:
        if T.ob(b) != B.tgt(z):
            continue
        for h in A.one_cells(a, b):
            for gamma in B.cells(B.comp1(T.one(h), delta), z):
                if is_generic_cell(T, delta, h, gamma, a, source_checked=True) is not None:
                    out.append((h, gamma))
    out.sort(key=lambda c: idkey((c[0], c[1].mor)))
    _CELLS_MEMO[key] = (T, out)
    return out


def representative_cells(T: PseudoFunctor, delta: Id, a: Id, z: Id) -> list:
    """One generic cell per isomorphism class: the least by id."""
    reps = []
    for cell in generic_cells(T, delta, a, z):
        if not any(cells_isomorphic(T, delta, cell, r) is not None for r in reps):
            reps.append(cell)
    return reps


def cells_isomorphic(T: PseudoFunctor, delta, first: tuple, second: tuple) -> Cell2 | None:
    """An invertible ε: h ⇒ h' with γ'·(Tε*δ) = γ, if any."""
    A = T.source
    (h, gamma), (h2, gamma2) = first, second
    if A.ends(h) != A.ends(h2):
        return None
    P = paster(T)
    for eps in A.cells(h, h2):
        if A.is_invertible(eps) and P.after(gamma2, eps, delta) == gamma:
            return eps
    return None


def representative_cell(T: PseudoFunctor, delta, a, cell: tuple, pool: list | None = None) -> tuple:
    """(least isomorphic generic cell, the iso ε from ``cell`` to it)."""
    pool = pool if pool is not None else generic_cells(T, delta, a, cell[1].tgt)
    best = None
    for cand in pool:
        eps = cells_isomorphic(T, delta, cell, cand)
        if eps is not None:
            best = (cand, eps)
            break
    if best is None:
        raise DecisionFailure("PastingNotGeneric", (delta, cell[0], cell[1].mor))
    return best


# ---------------------------------------------------------------------------
# generic factorizations


@dataclass
class GenericFactorization:
    """f ≅ T f̄ ∘ δ with δ: X → TA lax-generic and θ: Tf̄∘δ ⇒ f invertible."""

    f: Id
    A: Id
    delta: Id
    fbar: Id
    theta: Cell2


def lax_generic_factorizations(T: PseudoFunctor, f: Id, W: Id) -> list:
    A, B = T.source, T.target
    X = B.src(f)
    out = []
    for a, delta in lax_generics_out(T, X):
        for fbar in A.one_cells(a, W):
            for theta in B.cells(B.comp1(T.one(fbar), delta), f):
                if B.is_invertible(theta):
                    out.append(GenericFactorization(f, a, delta, fbar, theta))
    return out


def lax_generic_factorization(T: PseudoFunctor, f: Id, W: Id) -> GenericFactorization:
    """The least factorization; raises ``DecisionFailure("NoFactorization", f)``."""
    facs = lax_generic_factorizations(T, f, W)
    if not facs:
        raise DecisionFailure("NoFactorization", f)
    return facs[0]


def check_generic_factorization(T: PseudoFunctor, fac: GenericFactorization) -> bool:
    B = T.target
    return (
        is_lax_generic(T, fac.delta, fac.A) is not None
        and fac.theta.src == B.comp1(T.one(fac.fbar), fac.delta)
        and fac.theta.tgt == fac.f
        and B.is_invertible(fac.theta)
    )


def factor_2cell(T: PseudoFunctor, sq: Square) -> tuple:
    """(h, γ, ν) for a square between lax-generics; (h, γ) is a generic cell."""
    uf = universal_factorization(T, sq)
    return uf.h, uf.gamma, uf.nu


# ---------------------------------------------------------------------------
# lax familiality


@dataclass
class FamilialVerdict:
    familial: bool
    generics: dict
    failures: list = field(default_factory=list)
    spectrum: object | None = None


def check_generic_cover(T: PseudoFunctor, all_witnesses: bool = False) -> list:
    """Condition (a): the 1-cells X → TW with no lax generic factorization."""
    A, B = T.source, T.target
    missing = []
    for X in B.objects:
        for W in A.objects:
            for f in B.one_cells(X, T.ob(W)):
                if not lax_generic_factorizations(T, f, W):
                    missing.append(("NoGenericFactorization", f, W))
                    if not all_witnesses:
                        return missing
    return missing


def generic_pasting_instances(T: PseudoFunctor):
    """Every (first cell, second cell, pasted cell) across adjacent squares."""
    A, B = T.source, T.target
    P = paster(T)
    gens = {X: lax_generics_out(T, X) for X in B.objects}
    for X in B.objects:
        for Y in B.objects:
            for f in B.one_cells(X, Y):
                for a, delta in gens[X]:
                    for b, sigma in gens[Y]:
                        firsts = generic_cells(T, delta, a, B.comp1(sigma, f))
                        if not firsts:
                            continue
                        for Z in B.objects:
                            for g in B.one_cells(Y, Z):
                                for c, omega in gens[Z]:
                                    for k, phi in generic_cells(T, sigma, b, B.comp1(omega, g)):
                                        for h, theta in firsts:
                                            pasted = _paste_pair(P, delta, h, theta, f, sigma, k, phi, g, omega)
                                            yield (a, delta, h, theta), (b, sigma, k, phi), A.comp1(k, h), pasted


def check_generic_pastings(T: PseudoFunctor, all_witnesses: bool = False, counter: list | None = None) -> list:
    """Condition (b): generic cells across adjacent squares paste to generic cells."""
    bad = []
    n = 0
    for (a, delta, h, theta), (b, sigma, k, phi), kh, pasted in generic_pasting_instances(T):
        n += 1
        if is_generic_cell(T, delta, kh, pasted, a, source_checked=True) is None:
            bad.append(("PastingNotGeneric", (delta, h, theta.mor), (sigma, k, phi.mor)))
            if not all_witnesses:
                break
    if counter is not None:
        counter.append(n)
    return bad


def _paste_pair(P: Paster, delta, h, theta: Cell2, f, sigma, k, phi: Cell2, g, omega) -> Cell2:
    """(kh, φf·θ): T(kh)∘δ ⇒ ω∘(g∘f)."""
    B, T = P.B, P.T
    Tk, Th = T.one(k), T.one(h)
    return B.vcomp(
        B.assoc(omega, g, f),
        B.wr(phi, f),
        B.assoc_inv(Tk, sigma, f),
        B.wl(Tk, theta),
        B.assoc(Tk, Th, delta),
        B.wr(T.comp_inv(k, h), delta),
    )


def is_lax_familial(T: PseudoFunctor, all_witnesses: bool = False, build_spectrum: bool = True) -> FamilialVerdict:
    """Conditions (a) and (b); on success the spectrum and P are built and P is validated."""
    B = T.target
    gens = {X: lax_generics_out(T, X) for X in B.objects}
    failures = check_generic_cover(T, all_witnesses)
    if failures and not all_witnesses:
        return FamilialVerdict(False, gens, failures)
    failures += check_generic_pastings(T, all_witnesses)
    if failures:
        return FamilialVerdict(False, gens, failures)
    verdict = FamilialVerdict(True, gens)
    if build_spectrum:
        from famcat.spectrum import spectrum

        verdict.spectrum = spectrum(T)
    return verdict


def generic_index_category(T: PseudoFunctor, X: Id) -> FinCat:
    """M_X: lax-generics out of X and representative generic cells between them."""
    B = T.target
    gens = lax_generics_out(T, X)
    objects = gens
    morphisms, reps = {}, {}
    for a, delta in gens:
        for b, sigma in gens:
            reps[(delta, sigma)] = representative_cells(T, delta, a, sigma)
            for cell in reps[(delta, sigma)]:
                morphisms[gc_id((a, delta), (b, sigma), cell)] = ((a, delta), (b, sigma))
    P = paster(T)
    identity, table = {}, {}
    for a, delta in gens:
        cell = (T.source.unit(a), P.unit_cell(delta, a))
        identity[(a, delta)] = gc_id((a, delta), (a, delta), _rep_of(T, delta, a, cell, reps[(delta, delta)]))
    for m1, (s, t) in morphisms.items():
        for m2, (t2, w) in morphisms.items():
            if t2 != t:
                continue
            h, gamma = m1[3], Cell2(B.comp1(T.one(m1[3]), s[1]), t[1], m1[4])
            k, phi = m2[3], Cell2(B.comp1(T.one(m2[3]), t[1]), w[1], m2[4])
            stacked = (T.source.comp1(k, h), P.stack(s[1], h, gamma, k, phi))
            table[(m2, m1)] = gc_id(s, w, _rep_of(T, s[1], s[0], stacked, reps.get((s[1], w[1]), [])))
    return validate_category(FinCat(objects, morphisms, identity, table, name=f"M({X})"))


def _rep_of(T, delta, a, cell, reps) -> tuple:
    for r in reps:
        if cells_isomorphic(T, delta, cell, r) is not None:
            return r
    raise DecisionFailure("PastingNotGeneric", (delta, cell[0], cell[1].mor))


def gc_id(src, tgt, cell) -> tuple:
    """Mirrors the element-bicategory 1-cell id so both routes pick the same representatives."""
    return ("e1", src, tgt, cell[0], cell[1].mor)
