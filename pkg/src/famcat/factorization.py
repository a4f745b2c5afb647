"""Factoring a lax familial T: A → B as V∘G through the elements of its
spectrum, checking that V is a locally discrete fibration and that G has
F-universal arrows; and the oplax-slice check for T with a terminal object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from famcat.bicat import Bicat, Cell2, OplaxSlice, PseudoFunctor, check_pseudofunctor
from famcat.errors import DecisionFailure
from famcat.laxfam import is_lax_familial, lax_generic_factorization
from famcat.spectrum import SpectrumEl, bicat_terminal_objects, spectrum_el, spectrum_projection
from famcat.universal import composite_failures, find_universal_arrow, is_bijective_table

Id = Hashable


@dataclass
class SpecFactorization:
    T: PseudoFunctor
    el: SpectrumEl
    G: PseudoFunctor
    V: PseudoFunctor
    identity_factorizations: dict
    fibration_failures: list = field(default_factory=list)
    lift_failures: list = field(default_factory=list)
    composite_failures: list = field(default_factory=list)
    universal_arrows: dict = field(default_factory=dict)
    lifts_checked: int = 0

    @property
    def ok(self) -> bool:
        return not (self.fibration_failures or self.lift_failures or self.composite_failures)


def projection(E: SpectrumEl) -> PseudoFunctor:
    """V: (X, o) ↦ X, (f, h, γ) ↦ f, strict."""
    B = E.base
    return PseudoFunctor(
        E, B, lambda o: o[0], lambda m: m[3], lambda c: c.mor[1],
        lambda n, m: B.idc(B.comp1(n[3], m[3])).mor,
        lambda o: B.idc(B.unit(o[0])).mor, name="V",
    )


def build_G(E: SpectrumEl, identities: dict) -> PseudoFunctor:
    """A ↦ (TA, δ_A), h ↦ the cartesian 1-cell over Th, λ ↦ Tλ."""
    T = E.T
    A = T.source

    def ob(a):
        fac = identities[a]
        return (T.ob(a), (fac.A, fac.delta))

    def one(h):
        a, b = A.ends(h)
        Th = T.one(h)
        lifts = [m for m in E.one_cells(ob(a), ob(b)) if m[3] == Th and E.gamma_invertible(m)]
        if not lifts:
            raise DecisionFailure("FibrationFails", ("no cartesian lift", h))
        return lifts[0]

    def cell(src, tgt, under: Cell2):
        return E._cell(src, tgt, under)

    return PseudoFunctor(
        A, E, ob, one,
        lambda c: cell(one(c.src), one(c.tgt), T.two(c)),
        lambda g, f: cell(E.comp1(one(g), one(f)), one(A.comp1(g, f)), T.comp_cell(g, f)),
        lambda a: cell(E.unit(ob(a)), one(A.unit(a)), T.unit_cell(a)),
        name="G",
    )


def composite_matches(T: PseudoFunctor, G: PseudoFunctor, V: PseudoFunctor) -> list:
    """Where V∘G differs from T; V is strict, so equality is checked on the nose."""
    A = T.source
    bad = []
    for a in A.objects:
        if V.ob(G.ob(a)) != T.ob(a):
            bad.append(("object", a))
        if V.two(G.unit_cell(a)) != T.unit_cell(a):
            bad.append(("unit", a))
    for a in A.objects:
        for b in A.objects:
            for h in A.one_cells(a, b):
                if V.one(G.one(h)) != T.one(h):
                    bad.append(("one", h))
            for c in A.all_cells_in(a, b):
                if V.two(G.two(c)) != T.two(c):
                    bad.append(("two", c.mor))
    for g, f in A.composable_paths(2):
        if V.two(G.comp_cell(g, f)) != T.comp_cell(g, f):
            bad.append(("comp", (g, f)))
    return bad


def fibration_failures(E: SpectrumEl, V: PseudoFunctor) -> list:
    """Each hom-functor lifts 2-cells uniquely (given their source 1-cell, the
    orientation of the lax Grothendieck construction), compatibly with
    precomposition; and every 1-cell into a V-image has a cartesian lift."""
    B = E.base
    bad = []
    objs = E.objects
    for o1 in objs:
        for o2 in objs:
            H = E.hom(o1, o2)
            for u in H.objects:
                for alpha in _cells_out_of(B, V.one(u)):
                    lifts = [c for c in H.out_of(u) if c[1] == alpha.mor]
                    if len(lifts) != 1:
                        bad.append(("FibrationFails", (o1, o2), u, alpha.mor, len(lifts)))
    for o0 in objs:
        for o1 in objs:
            for w in E.one_cells(o0, o1):
                for o2 in objs:
                    for c in E.all_cells_in(o1, o2):
                        if V.two(E.wr(c, w)) != B.wr(V.two(c), V.one(w)):
                            bad.append(("FibrationFails", "precomposition", w, c.mor))
    for o2 in objs:
        for X in B.objects:
            for f in B.one_cells(X, o2[0]):
                if cartesian_lift(E, f, o2) is None:
                    bad.append(("FibrationFails", "no cartesian lift", f, o2))
    return bad


def _cells_out_of(B: Bicat, f: Id) -> list:
    a, b = B.ends(f)
    return [c for g in B.one_cells(a, b) for c in B.cells(f, g)]


def cartesian_lift(E: SpectrumEl, f: Id, target: tuple):
    """The least cartesian 1-cell into ``target`` over f."""
    X = E.base.src(f)
    for o in E.objects:
        if o[0] != X:
            continue
        for m in E.one_cells(o, target):
            if m[3] == f and E.is_cartesian(m):
                return m
    return None


@dataclass
class TwoCellLift:
    alpha: Cell2
    hat: Id
    bar: Cell2
    candidates: int


def lift_2cell(E: SpectrumEl, alpha: Cell2, target: tuple) -> TwoCellLift:
    """For α: f ⇒ g into V(target): the unique (α̂ over 1_X, ᾱ: f_c ⇒ g_c∘α̂ over α)."""
    B = E.base
    f, g = alpha.src, alpha.tgt
    fc, gc = cartesian_lift(E, f, target), cartesian_lift(E, g, target)
    if fc is None or gc is None:
        raise DecisionFailure("FibrationFails", ("no cartesian lift", f if fc is None else g))
    X = B.src(f)
    under = B.vcomp(B.runitor_inv(g), alpha).mor
    found = []
    for hat in E.one_cells(fc[1], gc[1]):
        if hat[3] != B.unit(X):
            continue
        for c in E.cells(fc, E.comp1(gc, hat)):
            if c.mor[1] == under:
                found.append((hat, c))
    if len(found) != 1:
        raise DecisionFailure("LiftNotUnique", (alpha.mor, target), f"{len(found)} pairs")
    hat, bar = found[0]
    return TwoCellLift(alpha, hat, bar, len(found))


def lift_failures(E: SpectrumEl) -> tuple[list, int]:
    """Every 2-cell into every V-image: a unique pair, invertible when α is."""
    B = E.base
    bad, n = [], 0
    for target in E.objects:
        for X in B.objects:
            for f in B.one_cells(X, target[0]):
                for g in B.one_cells(X, target[0]):
                    for alpha in B.cells(f, g):
                        n += 1
                        try:
                            lift = lift_2cell(E, alpha, target)
                        except DecisionFailure as exc:
                            bad.append((exc.kind, exc.witness))
                            continue
                        if B.is_invertible(alpha) and not (E.is_equivalence(lift.hat) and E.is_invertible(lift.bar)):
                            bad.append(("LiftNotInvertible", (alpha.mor, target)))
    return bad, n


def identity_factorizations(T: PseudoFunctor) -> dict:
    """δ_A from the generic factorization TA → TĀ → TA of the identity."""
    B = T.target
    return {a: lax_generic_factorization(T, B.unit(T.ob(a)), a) for a in T.source.objects}


def spectrum_factorization(T: PseudoFunctor, check_lifts: bool = True) -> SpecFactorization:
    verdict = is_lax_familial(T)
    if not verdict.familial:
        raise DecisionFailure("NotLaxFamilial", verdict.failures[:1])
    E = spectrum_el(T, verdict.spectrum)
    V = projection(E)
    ids = identity_factorizations(T)
    G = build_G(E, ids)
    out = SpecFactorization(T, E, G, V, ids)
    for name, F in (("G", G), ("V", V)):
        diags = check_pseudofunctor(F)
        if diags:
            raise DecisionFailure("NotPseudofunctor", name, str(diags[0]))
    mismatch = composite_matches(T, G, V)
    if mismatch:
        raise DecisionFailure("CompositeNotT", mismatch[:3])
    out.fibration_failures = fibration_failures(E, V)
    if check_lifts:
        out.lift_failures, out.lifts_checked = lift_failures(E)
    P = spectrum_projection(E)
    for m in E.objects:
        others = [a for a in T.source.objects if a != P.ob(m)]
        rep = find_universal_arrow(G, m, [P.ob(m)] + others, E.is_cartesian, lambda h: True)
        if rep is None:
            raise DecisionFailure("UniversalArrowMissing", m)
        out.universal_arrows[m] = rep
    out.composite_failures = composite_failures(G, out.universal_arrows)
    return out


def bijection_failures(G: PseudoFunctor, reports: dict) -> list:
    return [(m, key) for m, rep in reports.items() for key, pair in rep.pairs.items()
            if not is_bijective_table(G, pair.fbar, pair.table)]


# ---------------------------------------------------------------------------
# oplax slices


def sliced(T: PseudoFunctor, SA: OplaxSlice, SB: OplaxSlice) -> PseudoFunctor:
    """T₁: A⫽1 → B⫽T1, (m, α) ↦ (Tm, φ⁻¹·Tα)."""
    B = T.target

    def one(u):
        _, p, q, h, a_mor = u
        alpha = Cell2(p, SA.base.comp1(q, h), a_mor)
        cell = B.vcomp(T.comp_inv(q, h), T.two(alpha))
        return ("sl", T.one(p), T.one(q), T.one(h), cell.mor)

    def two(c):
        u, v, sigma = c.mor[1], c.mor[2], c.mor[3]
        return ("sl2", one(u), one(v), T.two(Cell2(u[3], v[3], sigma)).mor)

    def comp(v, u):
        return ("sl2", SB.comp1(one(v), one(u)), one(SA.comp1(v, u)), T.comp_cell(v[3], u[3]).mor)

    def unit(p):
        return ("sl2", SB.unit(T.one(p)), one(SA.unit(p)), T.unit_cell(SA.base.src(p)).mor)

    return PseudoFunctor(SA, SB, T.one, one, two, comp, unit, name="T1")


@dataclass
class PraVerdict:
    holds: bool
    terminal: Id
    universal_arrows: dict
    missing: list
    composite_failures: list


def pra_check(T: PseudoFunctor) -> PraVerdict:
    """F-universal arrows for T₁: A⫽1 → B⫽T1, tight maps being those with invertible 2-cell."""
    A = T.source
    terms = bicat_terminal_objects(A)
    if not terms:
        raise DecisionFailure("NoTerminalObject", getattr(A, "name", ""))
    one = terms[0]
    SA, SB = OplaxSlice(A, one), OplaxSlice(T.target, T.ob(one))
    T1 = sliced(T, SA, SB)
    diags = check_pseudofunctor(T1)
    if diags:
        raise DecisionFailure("NotPseudofunctor", "T1", str(diags[0]))
    found, missing = {}, []
    for m in SB.objects:
        rep = find_universal_arrow(T1, m, list(SA.objects), SB.is_tight, SA.is_tight)
        if rep is None:
            missing.append(m)
        else:
            found[m] = rep
    comp = composite_failures(T1, found) if not missing else []
    return PraVerdict(not missing and not comp, one, found, missing, comp)
