"""The spectrum of a lax familial pseudofunctor T: A → B.

M_X collects the lax-generic 1-cells out of X with representative generic
cells between them; reindexing along f: Y → X goes through chosen generic
factorizations.  ``SpectrumEl`` is its Grothendieck construction, built
directly from triples (f, h, γ), and ``spectrum_projection`` is the
pseudofunctor P to A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from famcat.bicat import Bicat, Cell2, PseudoFunctor
from famcat.equiv import EquivalenceResult, find_equivalence, pseudo_inverse
from famcat.errors import DecisionFailure
from famcat.fincat import (
    FinCat,
    FinFunctor,
    check_functor,
    compose_functors,
    enumerate_nats,
    identity_functor,
    slice_category,
)
from famcat.ids import sorted_ids
from famcat.laxfam import (
    GenericFactorization,
    Square,
    _paste_pair,
    cells_isomorphic,
    generic_index_category,
    hom_copresheaf,
    lax_generic_factorization,
    paster,
    representative_cells,
    universal_factorization,
)

Id = Hashable


# ---------------------------------------------------------------------------
# M_X and reindexing


@dataclass
class Spectrum:
    T: PseudoFunctor
    fibers: dict
    chosen: dict = field(default_factory=dict)
    _reindex: dict = field(default_factory=dict)
    _compare: dict = field(default_factory=dict)

    def fiber(self, X: Id) -> FinCat:
        return self.fibers[X]

    def choice(self, obj: tuple, f: Id) -> GenericFactorization:
        """The chosen generic factorization of δ∘f, fixed once per (δ, f)."""
        key = (obj, f)
        fac = self.chosen.get(key)
        if fac is None:
            B = self.T.target
            a, delta = obj
            fac = lax_generic_factorization(self.T, B.comp1(delta, f), a)
            self.chosen[key] = fac
        return fac

    def reindex(self, f: Id) -> FinFunctor:
        """M_f: M_X → M_Y for f: Y → X."""
        F = self._reindex.get(f)
        if F is None:
            F = _build_reindex(self, f)
            self._reindex[f] = F
        return F

    def comparison(self, f: Id, g: Id):
        """An invertible M_g∘M_f ⇒ M_{fg}, or None."""
        key = (f, g)
        if key not in self._compare:
            B = self.T.target
            lhs = compose_functors(self.reindex(g), self.reindex(f))
            rhs = self.reindex(B.comp1(f, g))
            self._compare[key] = _invertible_nat(lhs, rhs)
        return self._compare[key]

    def unit_comparison(self, X: Id):
        """An invertible id ⇒ M_{1_X}, or None."""
        key = ("unit", X)
        if key not in self._compare:
            M = self.fiber(X)
            self._compare[key] = _invertible_nat(identity_functor(M), self.reindex(self.T.target.unit(X)))
        return self._compare[key]


def _invertible_nat(F: FinFunctor, G: FinFunctor):
    D = F.target
    for alpha in enumerate_nats(F, G):
        if all(D.is_iso(m) for m in alpha.components.values()):
            return alpha
    return None


def _build_reindex(spec: Spectrum, f: Id) -> FinFunctor:
    T = spec.T
    A, B = T.source, T.target
    Y, X = B.ends(f)
    MX, MY = spec.fiber(X), spec.fiber(Y)
    on_obj = {}
    for obj in MX.objects:
        fac = spec.choice(obj, f)
        on_obj[obj] = (fac.A, fac.delta)
    on_mor = {}
    for m in MX.morphisms:
        src, tgt = MX.ends[m]
        h, gamma = m[3], Cell2(B.comp1(T.one(m[3]), src[1]), tgt[1], m[4])
        f1, f2 = spec.choice(src, f), spec.choice(tgt, f)
        d1, d2 = f1.delta, f2.delta
        Th = T.one(h)
        # T(h u1) δ1' ⇒ Th (Tu1 δ1') ⇒ Th (δ1 f) ⇒ (Th δ1) f ⇒ σ f ⇒ Tu2 δ2'
        alpha = B.vcomp(
            B.must_inv(f2.theta),
            B.wr(gamma, f),
            B.assoc_inv(Th, src[1], f),
            B.wl(Th, f1.theta),
            B.assoc(Th, T.one(f1.fbar), d1),
            B.wr(T.comp_inv(h, f1.fbar), d1),
        )
        uf = universal_factorization(T, Square(d1, f1.A, A.comp1(h, f1.fbar), f2.fbar, d2, alpha))
        cell = (uf.h, uf.gamma)
        rep = _class_rep(T, d1, f1.A, cell, d2)
        on_mor[m] = ("e1", (f1.A, d1), (f2.A, d2), rep[0], rep[1].mor)
    F = FinFunctor(MX, MY, on_obj, on_mor, name=f"M({f})")
    bad = check_functor(F)
    if bad:
        raise DecisionFailure("ReindexNotFunctor", f, str(bad[0]))
    return F


def _class_rep(T, delta, a, cell, z) -> tuple:
    for r in representative_cells(T, delta, a, z):
        if cells_isomorphic(T, delta, cell, r) is not None:
            return r
    raise DecisionFailure("PastingNotGeneric", (delta, cell[0], cell[1].mor))


def spectrum(T: PseudoFunctor, check_prerequisite: bool = False) -> Spectrum:
    """Build every M_X.  With ``check_prerequisite`` each B(X, T−) must first pass
    the elements-route decision; raises ``DecisionFailure("PrerequisiteFailed", X)``."""
    B = T.target
    if check_prerequisite:
        from famcat.elbicat import decide_lax_colimit_of_reps

        for X in B.objects:
            try:
                decide_lax_colimit_of_reps(hom_copresheaf(T, X))
            except DecisionFailure as exc:
                raise DecisionFailure("PrerequisiteFailed", X, str(exc)) from exc
    return Spectrum(T, {X: generic_index_category(T, X) for X in B.objects})


def check_reindexing(spec: Spectrum) -> list:
    """Every composable pair and every identity has an invertible comparison."""
    B = spec.T.target
    missing = []
    for X in B.objects:
        if spec.unit_comparison(X) is None:
            missing.append(("unit", X))
    for Z in B.objects:
        for Y in B.objects:
            for g in B.one_cells(Z, Y):
                for X in B.objects:
                    for f in B.one_cells(Y, X):
                        if spec.comparison(f, g) is None:
                            missing.append(("comp", f, g))
    return missing


# ---------------------------------------------------------------------------
# the Grothendieck construction, built directly


def sp1(src, tgt, f, h, gamma_mor) -> tuple:
    return ("sp", src, tgt, f, h, gamma_mor)


class SpectrumEl(Bicat):
    """Objects (X, (A, δ)); 1-cells (f, h, γ: Th∘δ ⇒ σ∘f) with (h, γ) a
    representative generic cell; 2-cells ν: f ⇒ g admitting ν̄: h ⇒ k with
    (σ*ν)·γ = φ·(Tν̄*δ)."""

    def __init__(self, spec: Spectrum):
        super().__init__()
        self.spec = spec
        self.T = spec.T
        self.base: Bicat = spec.T.target
        self.bar: dict = {}
        self.name = "el(M)"

    @property
    def objects(self):
        return tuple(sorted_ids((X, o) for X in self.base.objects for o in self.spec.fiber(X).objects))

    def gamma(self, m) -> Cell2:
        _, src, tgt, f, h, g = m
        B = self.base
        return Cell2(B.comp1(self.T.one(h), src[1][1]), B.comp1(tgt[1][1], f), g)

    def _hom(self, o1, o2):
        B, T = self.base, self.T
        (X, (a, delta)), (Y, (_, sigma)) = o1, o2
        ones = []
        for f in B.one_cells(X, Y):
            for h, gamma in representative_cells(T, delta, a, B.comp1(sigma, f)):
                ones.append(sp1(o1, o2, f, h, gamma.mor))
        P = paster(T)
        morphisms, identity, table = {}, {}, {}
        for m in ones:
            identity[m] = ("sp2", B.idc(m[3]).mor, m, m)
        for m in ones:
            for n in ones:
                for nu in B.cells(m[3], n[3]):
                    lhs = B.vcomp(B.wl(sigma, nu), self.gamma(m))
                    hits = [lam for lam in T.source.cells(m[4], n[4]) if P.after(self.gamma(n), lam, delta) == lhs]
                    if len(hits) == 1:
                        c = ("sp2", nu.mor, m, n)
                        morphisms[c] = (m, n)
                        self.bar[c] = hits[0]
                    elif hits:
                        raise DecisionFailure("BarNotUnique", (m, n, nu.mor))
        for c1, (m, n) in morphisms.items():
            for c2, (n2, p) in morphisms.items():
                if n2 == n:
                    mor = B.vcomp(Cell2(n[3], p[3], c2[1]), Cell2(m[3], n[3], c1[1])).mor
                    table[(c2, c1)] = ("sp2", mor, m, p)
        return FinCat(ones, morphisms, identity, table, name=f"el({o1},{o2})")

    def _rep(self, src, tgt, f, cell) -> tuple:
        a, delta = src[1]
        sigma = tgt[1][1]
        r = _class_rep(self.T, delta, a, cell, self.base.comp1(sigma, f))
        return sp1(src, tgt, f, r[0], r[1].mor)

    def _unit(self, o):
        B = self.base
        X, (a, delta) = o
        cell = paster(self.T).unit_cell(delta, a)
        cell = B.vcomp(B.runitor_inv(delta), cell)
        return self._rep(o, o, B.unit(X), (self.T.source.unit(a), cell))

    def _comp1(self, n, m):
        B = self.base
        src, mid, tgt = m[1], m[2], n[2]
        pasted = _paste_pair(paster(self.T), src[1][1], m[4], self.gamma(m), m[3],
                             mid[1][1], n[4], self.gamma(n), n[3], tgt[1][1])
        return self._rep(src, tgt, B.comp1(n[3], m[3]), (self.T.source.comp1(n[4], m[4]), pasted))

    def _cell(self, src1, tgt1, under: Cell2) -> Id:
        c = ("sp2", under.mor, src1, tgt1)
        if c not in self.hom(src1[1], src1[2]).ends:
            raise DecisionFailure("NotASpectrumCell", c)
        return c

    def under(self, c: Cell2) -> Cell2:
        return Cell2(c.src[3], c.tgt[3], c.mor[1])

    def _hcomp(self, beta, alpha):
        B = self.base
        return self._cell(self.comp1(beta.src, alpha.src), self.comp1(beta.tgt, alpha.tgt),
                          B.hcomp(self.under(beta), self.under(alpha)))

    def _assoc_mor(self, h, g, f):
        return self._cell(self.comp1(self.comp1(h, g), f), self.comp1(h, self.comp1(g, f)),
                          self.base.assoc(h[3], g[3], f[3]))

    def _lunitor_mor(self, f):
        return self._cell(self.comp1(self.unit(f[2]), f), f, self.base.lunitor(f[3]))

    def _runitor_mor(self, f):
        return self._cell(self.comp1(f, self.unit(f[1])), f, self.base.runitor(f[3]))

    # cartesian classification, two ways

    def reindexing_morphism(self, m) -> Id:
        """The morphism δ → M_f(σ) of M_X that m corresponds to."""
        T, B = self.T, self.base
        _, src, tgt, f, h, _ = m
        fac = self.spec.choice(tgt[1], f)
        alpha = B.vcomp(B.must_inv(fac.theta), self.gamma(m))
        uf = universal_factorization(T, Square(src[1][1], src[1][0], h, fac.fbar, fac.delta, alpha))
        r = _class_rep(T, src[1][1], src[1][0], (uf.h, uf.gamma), fac.delta)
        return ("e1", src[1], (fac.A, fac.delta), r[0], r[1].mor)

    def is_cartesian(self, m) -> bool:
        return self.spec.fiber(m[1][0]).is_iso(self.reindexing_morphism(m))

    def gamma_invertible(self, m) -> bool:
        return self.base.is_invertible(self.gamma(m))


def spectrum_el(T: PseudoFunctor, spec: Spectrum | None = None) -> SpectrumEl:
    return SpectrumEl(spec or spectrum(T))


def cartesian_mismatches(E: SpectrumEl) -> list:
    """1-cells where 'reindexing iso' and 'γ invertible' disagree."""
    out = []
    for o1 in E.objects:
        for o2 in E.objects:
            for m in E.one_cells(o1, o2):
                if E.is_cartesian(m) != E.gamma_invertible(m):
                    out.append(m)
    return out


def spectrum_projection(E: SpectrumEl) -> PseudoFunctor:
    """P: el(M) → A, (X, (A, δ)) ↦ A, (f, h, γ) ↦ h, ν ↦ ν̄."""
    T = E.T
    A = T.source

    def two(c):
        E.hom(*E.ends(c.src))
        return E.bar[c.mor]

    def comp(n, m):
        composite = E.comp1(n, m)
        pasted = _paste_pair(paster(T), m[1][1][1], m[4], E.gamma(m), m[3],
                             m[2][1][1], n[4], E.gamma(n), n[3], n[2][1][1])
        eps = cells_isomorphic(T, m[1][1][1], (A.comp1(n[4], m[4]), pasted), (composite[4], E.gamma(composite)))
        return eps.mor

    def unit(o):
        B = E.base
        X, (a, delta) = o
        u = E.unit(o)
        cell = B.vcomp(B.runitor_inv(delta), paster(T).unit_cell(delta, a))
        return cells_isomorphic(T, delta, (A.unit(a), cell), (u[4], E.gamma(u))).mor

    return PseudoFunctor(E, A, lambda o: o[1][0], lambda m: m[4], lambda c: two(c).mor, comp, unit, name="P")


# ---------------------------------------------------------------------------
# comparisons


def bicat_terminal_objects(A: Bicat) -> list:
    """Objects t where every A(a, t) is equivalent to the terminal category."""
    out = []
    for t in A.objects:
        ok = True
        for a in A.objects:
            ones = A.one_cells(a, t)
            if not ones or any(len(A.cells(f, g)) != 1 for f in ones for g in ones):
                ok = False
                break
        if ok:
            out.append(t)
    return out


@dataclass
class TerminalComparison:
    X: Id
    functor: FinFunctor
    equivalence: object
    isomorphism: bool


def terminal_comparison(spec: Spectrum, X: Id, terminal: Id) -> TerminalComparison:
    """M_X → B(X, T1): δ ↦ T!∘δ, checked to be an equivalence."""
    T = spec.T
    A, B = T.source, T.target
    P = paster(T)
    M = spec.fiber(X)
    H = B.hom(X, T.ob(terminal))
    bang = {a: A.one_cells(a, terminal)[0] for a in A.objects}
    on_obj = {o: B.comp1(T.one(bang[o[0]]), o[1]) for o in M.objects}
    on_mor = {}
    for m in M.morphisms:
        (a, delta), (b, sigma) = M.ends[m]
        h = m[3]
        gamma = Cell2(B.comp1(T.one(h), delta), sigma, m[4])
        tau = A.cells(bang[a], A.comp1(bang[b], h))[0]
        on_mor[m] = P.square(delta, h, gamma, bang[b], tau).mor
    F = FinFunctor(M, H, on_obj, on_mor, name=f"M({X})->hom")
    if check_functor(F):
        raise DecisionFailure("TerminalComparisonNotFunctor", X)
    eq = pseudo_inverse(F)
    iso = eq is not None and len(set(on_obj.values())) == len(on_obj) == len(H.objects)
    return TerminalComparison(X, F, eq, iso)


def slice_comparison(spec: Spectrum, E: FinCat, X: Id, bound: int = 20000) -> EquivalenceResult:
    """M_X against the slice E/X, by explicit equivalence search."""
    S, _ = slice_category(E, X)
    return find_equivalence(S, spec.fiber(X), bound=bound)
