"""Universal pairs and F-universal arrows for a pseudofunctor G: A → M.

A universal pair for f: m → GA along η: m → GF is (f̄: F → A, γ: Gf̄∘η ⇒ f)
such that every β: Gḡ∘η ⇒ f is γ·(Gβ̃*η) for exactly one β̃: ḡ ⇒ f̄.
η is F-universal when every f has a universal pair and

  (i)   η is tight;
  (ii)  for tight f the pair has γ invertible and f̄ tight;
  (iii) (1_F, the unit cell) is a universal pair for η itself;
  (iv)  whiskering a universal pair by a tight g: A → B gives a universal pair for Gg∘f.

The axioms are checked independently and each outcome is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable

from famcat.bicat import Cell2, PseudoFunctor
from famcat.laxfam import _paste_pair, paster

Id = Hashable


@dataclass
class UniversalPair:
    f: Id
    A: Id
    fbar: Id
    gamma: Cell2
    table: dict


def universal_pair_table(G: PseudoFunctor, eta: Id, F: Id, A: Id, f: Id, fbar: Id, gamma: Cell2) -> dict | None:
    """The β ↦ β̃ table, or None when some β has zero or several β̃."""
    Src, Tgt = G.source, G.target
    P = paster(G)
    table = {}
    for gbar in Src.one_cells(F, A):
        for beta in Tgt.cells(Tgt.comp1(G.one(gbar), eta), f):
            hits = [lam for lam in Src.cells(gbar, fbar) if P.after(gamma, lam, eta) == beta]
            if len(hits) != 1:
                return None
            table[(gbar, beta.mor)] = hits[0].mor
    return table


def is_bijective_table(G: PseudoFunctor, fbar: Id, table: dict) -> bool:
    """β ↦ β̃ hits every 2-cell into f̄ exactly once, per ḡ."""
    Src = G.source
    by_source: dict = {}
    for (gbar, _), lam in table.items():
        by_source.setdefault(gbar, []).append(lam)
    for gbar, lams in by_source.items():
        if len(set(lams)) != len(lams) or set(lams) != {c.mor for c in Src.cells(gbar, fbar)}:
            return False
    return True


def find_universal_pair(G: PseudoFunctor, eta: Id, F: Id, A: Id, f: Id) -> UniversalPair | None:
    Src, Tgt = G.source, G.target
    for fbar in Src.one_cells(F, A):
        for gamma in Tgt.cells(Tgt.comp1(G.one(fbar), eta), f):
            table = universal_pair_table(G, eta, F, A, f, fbar, gamma)
            if table is not None:
                return UniversalPair(f, A, fbar, gamma, table)
    return None


@dataclass
class UniversalArrowReport:
    m: Id
    eta: Id
    F: Id
    pairs: dict = field(default_factory=dict)
    axioms: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_universal_arrow(G: PseudoFunctor, m: Id, eta: Id, F: Id, tight_target: Callable, tight_source: Callable,
                          stop_early: bool = True) -> UniversalArrowReport:
    Src, Tgt = G.source, G.target
    P = paster(G)
    rep = UniversalArrowReport(m, eta, F)

    def fail(kind, detail):
        rep.failures.append((kind, detail))
        return stop_early

    for A in Src.objects:
        for f in Tgt.one_cells(m, G.ob(A)):
            pair = find_universal_pair(G, eta, F, A, f)
            if pair is None:
                if fail("NoUniversalPair", f):
                    return rep
                continue
            rep.pairs[(A, f)] = pair
    rep.axioms["i"] = bool(tight_target(eta))
    if not rep.axioms["i"] and fail("AxiomI", eta):
        return rep
    ok = True
    for (A, f), pair in rep.pairs.items():
        if tight_target(f) and not (Tgt.is_invertible(pair.gamma) and tight_source(pair.fbar)):
            ok = False
            if fail("AxiomII", f):
                rep.axioms["ii"] = False
                return rep
    rep.axioms["ii"] = ok
    unit_cell = P.unit_cell(eta, F)
    rep.axioms["iii"] = universal_pair_table(G, eta, F, F, eta, Src.unit(F), unit_cell) is not None
    if not rep.axioms["iii"] and fail("AxiomIII", eta):
        return rep
    ok = True
    for (A, f), pair in rep.pairs.items():
        for B in Src.objects:
            for g in Src.one_cells(A, B):
                if not tight_source(g):
                    continue
                Gg = G.one(g)
                cell = P.stack(eta, pair.fbar, pair.gamma, g, Tgt.idc(Tgt.comp1(Gg, f)))
                if universal_pair_table(G, eta, F, B, Tgt.comp1(Gg, f), Src.comp1(g, pair.fbar), cell) is None:
                    ok = False
                    if fail("AxiomIV", (f, g)):
                        rep.axioms["iv"] = False
                        return rep
    rep.axioms["iv"] = ok
    return rep


def find_universal_arrow(G: PseudoFunctor, m: Id, candidates: list, tight_target: Callable,
                         tight_source: Callable) -> UniversalArrowReport | None:
    """The first η: m → GF (F in ``candidates`` order, then η by id) passing every check."""
    Tgt = G.target
    for F in candidates:
        for eta in Tgt.one_cells(m, G.ob(F)):
            rep = check_universal_arrow(G, m, eta, F, tight_target, tight_source)
            if rep.ok:
                return rep
    return None


def composite_failures(G: PseudoFunctor, reports: dict, stop_early: bool = False) -> list:
    """Pastings of the pairs of η_n∘μ and η_k∘ν must be universal for η_k∘(ν∘μ)."""
    Src, Tgt = G.source, G.target
    P = paster(G)
    bad = []
    objs = list(reports)
    for m in objs:
        rm = reports[m]
        for n in objs:
            rn = reports[n]
            for mu in Tgt.one_cells(m, n):
                p1 = rm.pairs[(rn.F, Tgt.comp1(rn.eta, mu))]
                for k in objs:
                    rk = reports[k]
                    for nu in Tgt.one_cells(n, k):
                        p2 = rn.pairs[(rk.F, Tgt.comp1(rk.eta, nu))]
                        cell = _paste_pair(P, rm.eta, p1.fbar, p1.gamma, mu, rn.eta, p2.fbar, p2.gamma, nu, rk.eta)
                        f = Tgt.comp1(rk.eta, Tgt.comp1(nu, mu))
                        if universal_pair_table(G, rm.eta, rm.F, rk.F, f, Src.comp1(p2.fbar, p1.fbar), cell) is None:
                            bad.append(("CompositeNotUniversal", (mu, nu)))
                            if stop_early:
                                return bad
    return bad
