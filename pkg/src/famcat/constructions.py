"""Concrete fixtures: span bicategories, the span inclusion, span composition,
the swap fragment of spans of small finite sets, and truncated families
over a finite universe of categories.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable

from famcat.bicat import Bicat, Cell2, LocallyDiscrete, PseudoFunctor, locally_discrete
from famcat.errors import CapExceeded, DecisionFailure
from famcat.fincat import (
    FinCat,
    FinFunctor,
    NatTrans,
    Pullback,
    compose_functors,
    enumerate_functors,
    enumerate_nats,
    from_monoid,
    identity_functor,
    product,
    universal_cones,
)
from famcat.ids import show

Id = Hashable


# ---------------------------------------------------------------------------
# spans


def span_id(l: Id, r: Id) -> str:
    return f"({show(l)},{show(r)})"


def span_map_id(u: Id, s: str, t: str) -> str:
    return f"{show(u)}:{s}=>{t}"


class PullbackChoice:
    """A chosen pullback for every cospan, computed on demand.

    ``pick`` selects one of the universal cones (listed in canonical order);
    the default takes the first.
    """

    def __init__(self, E: FinCat, pick: Callable[[list], int] | None = None, partial: bool = False):
        self.E = E
        self.pick = pick
        self.partial = partial
        self._memo: dict = {}

    def __call__(self, f: Id, g: Id) -> Pullback:
        key = (f, g)
        if key not in self._memo:
            cones = universal_cones(self.E, f, g, first_only=self.pick is None)
            if not cones:
                if self.partial:
                    raise CapExceeded(f"pullback of {f!r}, {g!r} is outside the represented fragment")
                raise DecisionFailure("MissingPullback", (f, g))
            self._memo[key] = cones[self.pick(cones) if self.pick else 0]
        return self._memo[key]

    def check_total(self) -> None:
        E = self.E
        for c in E.objects:
            for f in E.into(c):
                for g in E.into(c):
                    self(f, g)


class SpanBicat(Bicat):
    """Span(E): 1-cells X ↛ Y are spans X ← S → Y with id ``"(l,r)"``;
    2-cells are span maps with id ``"u:(l,r)=>(l',r')"``.
    """

    def __init__(self, E: FinCat, choice: PullbackChoice | None = None, partial: bool = False, name: str | None = None):
        super().__init__()
        self.E = E
        self.choice = choice or PullbackChoice(E, partial=partial)
        self.name = name or f"Span({E.name or 'E'})"
        self.legs: dict = {}
        self.under: dict = {}
        self._proj: dict = {}

    @property
    def objects(self):
        return self.E.objects

    def span(self, l: Id, r: Id) -> str:
        s = span_id(l, r)
        self.legs.setdefault(s, (l, r))
        return s

    def apex(self, s: str) -> Id:
        return self.E.dom(self.legs[s][0])

    def _hom(self, X, Y):
        E = self.E
        spans = []
        for S in E.objects:
            for l in E.hom(S, X):
                for r in E.hom(S, Y):
                    spans.append(self.span(l, r))
        morphisms, identity, table = {}, {}, {}
        for s in spans:
            l, r = self.legs[s]
            for t in spans:
                l2, r2 = self.legs[t]
                for u in E.hom(E.dom(l), E.dom(l2)):
                    if E.compose(l2, u) == l and E.compose(r2, u) == r:
                        m = span_map_id(u, s, t)
                        morphisms[m] = (s, t)
                        self.under[m] = u
            identity[s] = span_map_id(E.identity[E.dom(l)], s, s)
        by_src: dict = {}
        for m, (s, t) in morphisms.items():
            by_src.setdefault(s, []).append(m)
        for m, (s, t) in morphisms.items():
            for n in by_src.get(t, ()):
                w = morphisms[n][1]
                table[(n, m)] = span_map_id(E.compose(self.under[n], self.under[m]), s, w)
        return FinCat(spans, morphisms, identity, table, name=f"Span({X},{Y})")

    def map_of(self, c: Cell2) -> Id:
        """The E-morphism underlying a span map."""
        if c.mor not in self.under:
            self.hom(*self.ends(c.src))
        return self.under[c.mor]

    def _unit(self, X):
        i = self.E.identity[X]
        return self.span(i, i)

    def composite_data(self, g: str, f: str):
        """(apex, p: M → apex f, q: M → apex g) for the chosen pullback."""
        key = (g, f)
        r = self._proj.get(key)
        if r is None:
            _, b = self.legs[f]
            c, _ = self.legs[g]
            pb = self.choice(b, c)
            r = (pb.span.apex, pb.span.left, pb.span.right, pb)
            self._proj[key] = r
        return r

    def _comp1(self, g, f):
        E = self.E
        a, _ = self.legs[f]
        _, d = self.legs[g]
        M, p, q, _ = self.composite_data(g, f)
        return self.span(E.compose(a, p), E.compose(d, q))

    def _hcomp(self, beta, alpha):
        E = self.E
        u = self.map_of(alpha)
        v = self.map_of(beta)
        M, p, q, _ = self.composite_data(beta.src, alpha.src)
        M2, p2, q2, pb2 = self.composite_data(beta.tgt, alpha.tgt)
        cone = (M, E.compose(u, p), E.compose(v, q))
        m = pb2.mediators[cone]
        return span_map_id(m, self.comp1(beta.src, alpha.src), self.comp1(beta.tgt, alpha.tgt))

    def _assoc_mor(self, h, g, f):
        E = self.E
        # left: ((h g) f); projections of its apex to the apexes of f, g, h
        L, pL, qL, _ = self.composite_data(self.comp1(h, g), f)
        M1, p1, q1, _ = self.composite_data(h, g)
        to_left = (pL, E.compose(p1, qL), E.compose(q1, qL))
        R, pR, qR, _ = self.composite_data(h, self.comp1(g, f))
        M2, p2, q2, _ = self.composite_data(g, f)
        candidates = [
            m for m in E.hom(L, R)
            if (E.compose(p2, pR, m), E.compose(q2, pR, m), E.compose(qR, m)) == to_left
        ]
        if len(candidates) != 1:
            raise ValueError(f"associator mediator not unique for {(h, g, f)}")
        return span_map_id(candidates[0], self.comp1(self.comp1(h, g), f), self.comp1(h, self.comp1(g, f)))

    def _lunitor_mor(self, f):
        M, p, q, _ = self.composite_data(self.unit(self.tgt(f)), f)
        return span_map_id(p, self.comp1(self.unit(self.tgt(f)), f), f)

    def _runitor_mor(self, f):
        M, p, q, _ = self.composite_data(f, self.unit(self.src(f)))
        return span_map_id(q, self.comp1(f, self.unit(self.src(f))), f)


def span_inclusion(B: SpanBicat, source: LocallyDiscrete | None = None) -> PseudoFunctor:
    """E → Span(E), f ↦ (1, f); comparison cells are the chosen pullback projections."""
    E = B.E
    A = source or locally_discrete(E)

    def one(f):
        return B.span(E.identity[E.dom(f)], f)

    def comp(g, f):
        Tg, Tf = one(g), one(f)
        M, p, q, _ = B.composite_data(Tg, Tf)
        return span_map_id(p, B.comp1(Tg, Tf), one(E.compose(g, f)))

    def unit(a):
        return B.idc(B.unit(a)).mor

    return PseudoFunctor(A, B, lambda a: a, one, lambda c: B.idc(one(c.src)).mor, comp, unit, name="span-inclusion")


def span_composition_functor(B: SpanBicat, X: Id, Y: Id, Z: Id) -> FinFunctor:
    """c_{X,Y,Z}: Span(Y,Z) × Span(X,Y) → Span(X,Z)."""
    H1, H2, H3 = B.hom(Y, Z), B.hom(X, Y), B.hom(X, Z)
    P = product(H1, H2)
    on_obj = {(g, f): B.comp1(g, f) for g, f in P.objects}
    on_mor = {}
    for (bm, am), ((g, f), (g2, f2)) in P.ends.items():
        on_mor[(bm, am)] = B.hcomp(Cell2(g, g2, bm), Cell2(f, f2, am)).mor
    return FinFunctor(P, H3, on_obj, on_mor, name=f"c({X},{Y},{Z})")


# ---------------------------------------------------------------------------
# bases


def bz2() -> FinCat:
    """The one-object groupoid Z/2 with elements e, s."""
    return from_monoid(["e", "s"], "e", lambda g, f: "e" if g == f else "s", name="BZ2")


def finset_upto(n: int = 2) -> FinCat:
    """Finite sets {0..k-1} for k ≤ n with all functions; ids "k>m:images"."""
    from famcat.corpus import concrete_from_generators

    sizes = {str(k): k for k in range(n + 1)}
    gens = []
    for a in sizes:
        for b in sizes:
            for fn in itertools.product(range(sizes[b]), repeat=sizes[a]):
                gens.append((a, b, fn))
    C = concrete_from_generators(sizes, gens)
    C.name = f"FinSet<={n}"
    return C


def finset_morphism(a: int, b: int, images) -> str:
    return f"{a}>{b}:{''.join(str(i) for i in images)}"


@dataclass
class SpanFixture:
    base: FinCat
    choice: PullbackChoice
    bicat: SpanBicat
    inclusion: PseudoFunctor
    name: str = ""


def span_bicategory(E: FinCat, partial: bool = False, pick: Callable | None = None, name: str | None = None) -> SpanFixture:
    """Span(E) with its inclusion; raises ``DecisionFailure("MissingPullback", cospan)`` unless ``partial``."""
    choice = PullbackChoice(E, pick=pick, partial=partial)
    if not partial:
        choice.check_total()
    B = SpanBicat(E, choice, partial=partial)
    return SpanFixture(E, choice, B, span_inclusion(B), name=name or B.name)


def span_square_poset() -> SpanFixture:
    from famcat.fincat import square_poset

    return span_bicategory(square_poset(), name="span-square-poset")


def span_bz2() -> SpanFixture:
    return span_bicategory(bz2(), name="span-bz2")


@dataclass
class SwapFixture:
    fixture: SpanFixture
    target: str
    generic: str
    factorizations: list = field(default_factory=list)


def swap_fixture() -> SwapFixture:
    """Spans of finite sets of size ≤ 2; composites needing a larger pullback raise CapExceeded.

    The target is (!, σ): 1 ↛ 2.  The two displayed factorizations through
    δ = (!, 1) are (f̄ = 1, θ = σ) and (f̄ = σ, θ = id).
    """
    E = finset_upto(2)
    fix = span_bicategory(E, partial=True, name="swap")
    B = fix.bicat
    bang = finset_morphism(2, 1, (0, 0))
    one2 = finset_morphism(2, 2, (0, 1))
    swap = finset_morphism(2, 2, (1, 0))
    B.hom("1", "2")
    target = B.span(bang, swap)
    delta = B.span(bang, one2)
    T = fix.inclusion
    facs = []
    for fbar in (one2, swap):
        composite = B.comp1(T.one(fbar), delta)
        H = B.hom("1", "2")
        for theta in H.hom(composite, target):
            if H.inverse(theta) is not None:
                facs.append((fbar, Cell2(composite, target, theta)))
    return SwapFixture(fix, target, delta, facs)


# ---------------------------------------------------------------------------
# truncated families


def fam_truncated(C: FinCat, N: int) -> FinCat:
    """Fam_{≤N}(C): families (c_0, …, c_{n-1}) with n ≤ N; a morphism is an
    index function u with maps c_i → d_{u(i)}.  Ids ``("fam", cs)`` and
    ``("fm", cs, ds, u, fs)``."""
    objects = [("fam", cs) for n in range(N + 1) for cs in itertools.product(C.objects, repeat=n)]
    morphisms, identity = {}, {}
    for s in objects:
        cs = s[1]
        for t in objects:
            ds = t[1]
            for u in itertools.product(range(len(ds)), repeat=len(cs)):
                for fs in itertools.product(*(C.hom(c, ds[j]) for c, j in zip(cs, u))):
                    morphisms[("fm", cs, ds, u, fs)] = (s, t)
        identity[s] = ("fm", cs, cs, tuple(range(len(cs))), tuple(C.identity[c] for c in cs))
    table = {}
    by_src: dict = {}
    for m, (s, t) in morphisms.items():
        by_src.setdefault(s, []).append(m)
    for m, (s, t) in morphisms.items():
        for n in by_src[t]:
            w = morphisms[n][1]
            u, fs = m[3], m[4]
            v, gs = n[3], n[4]
            table[(n, m)] = ("fm", s[1], w[1], tuple(v[j] for j in u), tuple(C.compose(gs[j], f) for j, f in zip(u, fs)))
    return FinCat(objects, morphisms, identity, table, name=f"Fam<={N}({C.name or 'C'})")


class CategoryUniverse(Bicat):
    """A finite strict 2-category: the given categories, every functor and every
    transformation between them.  Functor ids ``"A>B#i"``; transformation ids
    ``("nt", F, G, components)``."""

    def __init__(self, cats: dict, name: str = "universe"):
        super().__init__()
        self.cats = dict(cats)
        self.functor: dict = {}
        self._by_key: dict = {}
        self.name = name

    @property
    def objects(self):
        return tuple(self.cats)

    def _functors(self, a, b):
        key = ("list", a, b)
        if key not in self._by_key:
            ids = []
            for i, F in enumerate(enumerate_functors(self.cats[a], self.cats[b])):
                fid = f"{a}>{b}#{i}"
                self.functor[fid] = F
                self._by_key[(a, b, F.key())] = fid
                ids.append(fid)
            self._by_key[key] = ids
        return self._by_key[key]

    def functor_id(self, a, b, F: FinFunctor) -> str:
        self._functors(a, b)
        return self._by_key[(a, b, F.key())]

    def nat_id(self, fid, gid, components: dict) -> tuple:
        C = self.functor[fid].source
        return ("nt", fid, gid, tuple(components[c] for c in C.objects))

    def _hom(self, a, b):
        D = self.cats[b]
        ones = self._functors(a, b)
        morphisms, identity, table = {}, {}, {}
        for f in ones:
            F = self.functor[f]
            identity[f] = self.nat_id(f, f, {c: D.identity[F.ob(c)] for c in F.source.objects})
            for g in ones:
                for nat in enumerate_nats(F, self.functor[g]):
                    morphisms[self.nat_id(f, g, nat.components)] = (f, g)
        objs = self.cats[a].objects
        for m, (f, g) in morphisms.items():
            for n, (g2, h) in morphisms.items():
                if g2 == g:
                    comps = {c: D.compose(n[3][i], m[3][i]) for i, c in enumerate(objs)}
                    table[(n, m)] = self.nat_id(f, h, comps)
        return FinCat(ones, morphisms, identity, table, name=f"[{a},{b}]")

    def _unit(self, a):
        C = self.cats[a]
        return self.functor_id(a, a, FinFunctor(C, C, {x: x for x in C.objects}, {m: m for m in C.morphisms}))

    def _comp1(self, g, f):
        a, c = self.src(f), self.tgt(g)
        F, G = self.functor[f], self.functor[g]
        GF = FinFunctor(F.source, G.target, {x: G.ob(F.ob(x)) for x in F.source.objects},
                        {m: G(F(m)) for m in F.source.morphisms})
        return self.functor_id(a, c, GF)

    def _hcomp(self, beta, alpha):
        F = self.functor[alpha.src]
        G2 = self.functor[beta.tgt]
        E = G2.target
        objs = F.source.objects
        acomp = dict(zip(objs, alpha.mor[3]))
        bcomp = dict(zip(self.functor[beta.src].source.objects, beta.mor[3]))
        comps = {x: E.compose(G2(acomp[x]), bcomp[F.ob(x)]) for x in objs}
        return self.nat_id(self.comp1(beta.src, alpha.src), self.comp1(beta.tgt, alpha.tgt), comps)

    def _identity_on(self, f):
        return self.hom(self.src(f), self.tgt(f)).identity[f]

    def _assoc_mor(self, h, g, f):
        return self._identity_on(self.comp1(self.comp1(h, g), f))

    def _lunitor_mor(self, f):
        return self._identity_on(f)

    def _runitor_mor(self, f):
        return self._identity_on(f)


def fam_copresheaf(U: CategoryUniverse, N: int):
    """Fam_{≤N} as a strict functor from the universe to categories."""
    from famcat.elbicat import CatCopresheaf

    def cat(a):
        return fam_truncated(U.cats[a], N)

    def act(fid):
        F = U.functor[fid]
        S, D = cat(U.src(fid)), cat(U.tgt(fid))
        on_obj = {o: ("fam", tuple(F.ob(c) for c in o[1])) for o in S.objects}
        on_mor = {m: ("fm", on_obj[("fam", m[1])][1], on_obj[("fam", m[2])][1], m[3], tuple(F(f) for f in m[4]))
                  for m in S.morphisms}
        return FinFunctor(S, D, on_obj, on_mor, name=f"Fam({fid})")

    def act2(c):
        S = cat(U.src(c.src))
        F = U.functor[c.src]
        comps = dict(zip(F.source.objects, c.mor[3]))
        Ff, Fg = fam.act(c.src), fam.act(c.tgt)
        out = {}
        for o in S.objects:
            cs = o[1]
            out[o] = ("fm", Ff.ob(o)[1], Fg.ob(o)[1], tuple(range(len(cs))), tuple(comps[x] for x in cs))
        return NatTrans(Ff, Fg, out)

    def comp(g, f):
        G = fam.act(U.comp1(g, f))
        return identity_nat_between(compose_functors(fam.act(g), fam.act(f)), G)

    def unit(a):
        S = cat(a)
        return identity_nat_between(identity_functor(S), fam.act(U.unit(a)))

    fam = CatCopresheaf(U, cat, act, act2, comp, unit, name=f"Fam<={N}")
    return fam


def identity_nat_between(F: FinFunctor, G: FinFunctor) -> NatTrans:
    """The identity transformation between two functors that agree on objects."""
    D = F.target
    return NatTrans(F, G, {a: D.identity[F.ob(a)] for a in F.source.objects})


@dataclass
class RelativeGenericCheck:
    """A genericity verdict that only quantifies over the supplied universe."""

    element: tuple
    universe: tuple
    N: int
    generic: bool
    scope: str = "relative"


def fam_relative_generic(U: CategoryUniverse, N: int, element: tuple) -> RelativeGenericCheck:
    """Lax el-genericity of (A, family) in el Fam_{≤N}, relative to U."""
    from famcat.elbicat import el_bicategory, is_lax_el_generic

    E = el_bicategory(fam_copresheaf(U, N))
    return RelativeGenericCheck(element, tuple(U.objects), N, is_lax_el_generic(E, element))


def small_universe() -> CategoryUniverse:
    """The terminal category, the discrete 2-element set and the walking arrow."""
    from famcat.fincat import discrete, terminal_category, walking_arrow

    return CategoryUniverse({"1": terminal_category(), "I": discrete([0, 1], name="I"), "2": walking_arrow()})
