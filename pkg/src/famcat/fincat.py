"""Finite categories given by explicit composition tables.

A :class:`FinCat` stores objects, the (dom, cod) of every morphism, the
identity of every object and a dense table of composites ``(g, f) -> g∘f``.
Construction does not validate; :func:`validate_category` checks every law
instance and reports all violations at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

import networkx as nx

from famcat.errors import Diagnostic, ValidationError
from famcat.ids import from_jsonable, idkey, least, sorted_ids, to_jsonable

Id = Hashable


class FinCat:
    """A finite category.  Morphism ids are global; ``compose(g, f)`` is g after f."""

    def __init__(
        self,
        objects: Iterable[Id],
        morphisms: Mapping[Id, tuple[Id, Id]],
        identity: Mapping[Id, Id],
        table: Mapping[tuple[Id, Id], Id],
        name: str | None = None,
    ):
        self.objects: tuple = tuple(sorted_ids(objects))
        self.ends: dict = dict(morphisms)
        self.morphisms: tuple = tuple(sorted_ids(self.ends))
        self.identity: dict = dict(identity)
        self.table: dict = dict(table)
        self.name = name
        self._homs: dict | None = None
        self._inverse: dict = {}

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FinCat{label} |ob|={len(self.objects)} |mor|={len(self.morphisms)}>"

    def dom(self, f: Id) -> Id:
        return self.ends[f][0]

    def cod(self, f: Id) -> Id:
        return self.ends[f][1]

    def _build_homs(self) -> dict:
        homs: dict = {}
        for f in self.morphisms:
            homs.setdefault(self.ends[f], []).append(f)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        return self._homs

    def hom(self, a: Id, b: Id) -> tuple:
        homs = self._homs if self._homs is not None else self._build_homs()
        return homs.get((a, b), ())

    def out_of(self, a: Id) -> list:
        return [f for f in self.morphisms if self.ends[f][0] == a]

    def into(self, b: Id) -> list:
        return [f for f in self.morphisms if self.ends[f][1] == b]

    def compose(self, *fs: Id) -> Id:
        """``compose(h, g, f)`` is h∘g∘f."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.table[(g, result)]
        return result

    def composable(self, g: Id, f: Id) -> bool:
        return self.ends[f][1] == self.ends[g][0]

    def is_identity(self, f: Id) -> bool:
        a, b = self.ends[f]
        return a == b and self.identity[a] == f

    def inverse(self, f: Id) -> Id | None:
        if f in self._inverse:
            return self._inverse[f]
        a, b = self.ends[f]
        found = None
        for g in self.hom(b, a):
            if self.table[(g, f)] == self.identity[a] and self.table[(f, g)] == self.identity[b]:
                found = g
                break
        self._inverse[f] = found
        return found

    def is_iso(self, f: Id) -> bool:
        return self.inverse(f) is not None

    def isomorphic(self, a: Id, b: Id) -> bool:
        return any(self.is_iso(f) for f in self.hom(a, b))

    def to_json(self) -> dict:
        return {
            "objects": to_jsonable(list(self.objects)),
            "morphisms": [
                {"id": to_jsonable(f), "dom": to_jsonable(self.ends[f][0]), "cod": to_jsonable(self.ends[f][1])}
                for f in self.morphisms
            ],
            "identities": [[to_jsonable(a), to_jsonable(self.identity[a])] for a in self.objects],
            "compose": [
                [to_jsonable(g), to_jsonable(f), to_jsonable(gf)]
                for (g, f), gf in sorted(self.table.items(), key=lambda kv: idkey(kv[0]))
            ],
        }


def category_from_json(doc: Mapping) -> FinCat:
    """Read the JSON table form without validating the laws (see :func:`validate_category`)."""
    diagnostics = []
    try:
        objects = [from_jsonable(a) for a in doc["objects"]]
        morphisms = {}
        for entry in doc["morphisms"]:
            if isinstance(entry, Mapping):
                mid, dom, cod = entry["id"], entry["dom"], entry["cod"]
            else:
                mid, dom, cod = entry
            mid = from_jsonable(mid)
            if mid in morphisms:
                diagnostics.append(Diagnostic("DuplicateId", (mid,)))
            morphisms[mid] = (from_jsonable(dom), from_jsonable(cod))
        raw_ids = doc.get("identities", {})
        pairs = raw_ids.items() if isinstance(raw_ids, Mapping) else raw_ids
        identity = {from_jsonable(a): from_jsonable(f) for a, f in pairs}
        table = {}
        for g, f, gf in doc.get("compose", []):
            key = (from_jsonable(g), from_jsonable(f))
            if key in table and table[key] != from_jsonable(gf):
                diagnostics.append(Diagnostic("ConflictingComposite", key))
            table[key] = from_jsonable(gf)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError([Diagnostic("MalformedDocument", (), str(exc))]) from exc
    if len(set(objects)) != len(objects):
        diagnostics.append(Diagnostic("DuplicateId", tuple(a for a in objects if objects.count(a) > 1)))
    if diagnostics:
        raise ValidationError(diagnostics)
    return FinCat(objects, morphisms, identity, table, name=doc.get("name"))


def check_category(cat: FinCat) -> list[Diagnostic]:
    """Every violated structural or law instance of ``cat``."""
    out: list[Diagnostic] = []
    obs = set(cat.objects)
    for f in cat.morphisms:
        a, b = cat.ends[f]
        if a not in obs or b not in obs:
            out.append(Diagnostic("UnknownObject", (f,), "dom/cod not a declared object"))
    for a in cat.objects:
        i = cat.identity.get(a)
        if i is None or i not in cat.ends:
            out.append(Diagnostic("IdentityMissing", (a,)))
        elif cat.ends[i] != (a, a):
            out.append(Diagnostic("IdentityViolation", (i,), "identity has wrong ends"))
    for key in cat.table:
        g, f = key
        if f not in cat.ends or g not in cat.ends or not cat.composable(g, f):
            out.append(Diagnostic("ExtraComposite", key, "entry for a non-composable pair"))
    if out:
        return out
    for f in cat.morphisms:
        for g in cat.out_of(cat.cod(f)):
            gf = cat.table.get((g, f))
            if gf is None:
                out.append(Diagnostic("MissingComposite", (g, f)))
            elif gf not in cat.ends or cat.ends[gf] != (cat.dom(f), cat.cod(g)):
                out.append(Diagnostic("CompositeWrongEnds", (g, f, gf)))
    if out:
        return out
    for f in cat.morphisms:
        a, b = cat.ends[f]
        if cat.table[(f, cat.identity[a])] != f or cat.table[(cat.identity[b], f)] != f:
            out.append(Diagnostic("IdentityViolation", (f,)))
    for f in cat.morphisms:
        for g in cat.out_of(cat.cod(f)):
            gf = cat.table[(g, f)]
            for h in cat.out_of(cat.cod(g)):
                if cat.table[(cat.table[(h, g)], f)] != cat.table[(h, gf)]:
                    out.append(Diagnostic("AssociativityViolation", (f, g, h), "(h∘g)∘f != h∘(g∘f)"))
    return out


def validate_category(raw: FinCat | Mapping) -> FinCat:
    cat = raw if isinstance(raw, FinCat) else category_from_json(raw)
    problems = check_category(cat)
    if problems:
        raise ValidationError(problems)
    return cat


class FinFunctor:
    def __init__(self, source: FinCat, target: FinCat, on_objects: Mapping, on_morphisms: Mapping, name=None):
        self.source = source
        self.target = target
        self.on_objects = dict(on_objects)
        self.on_morphisms = dict(on_morphisms)
        self.name = name

    def __repr__(self) -> str:
        return f"<FinFunctor {self.name or ''} {self.source!r} -> {self.target!r}>"

    def ob(self, a: Id) -> Id:
        return self.on_objects[a]

    def __call__(self, f: Id) -> Id:
        return self.on_morphisms[f]

    def key(self) -> tuple:
        """Hashable summary used to compare functors with the same source."""
        return (
            tuple(self.on_objects[a] for a in self.source.objects),
            tuple(self.on_morphisms[f] for f in self.source.morphisms),
        )

    def to_json(self) -> dict:
        return {
            "objects": [[to_jsonable(a), to_jsonable(self.on_objects[a])] for a in self.source.objects],
            "morphisms": [[to_jsonable(f), to_jsonable(self.on_morphisms[f])] for f in self.source.morphisms],
        }


def functor_from_json(doc: Mapping, source: FinCat, target: FinCat) -> FinFunctor:
    def pairs(x):
        return x.items() if isinstance(x, Mapping) else x

    return FinFunctor(
        source,
        target,
        {from_jsonable(a): from_jsonable(b) for a, b in pairs(doc["objects"])},
        {from_jsonable(a): from_jsonable(b) for a, b in pairs(doc["morphisms"])},
    )


def check_functor(F: FinFunctor) -> list[Diagnostic]:
    C, D = F.source, F.target
    out = []
    for a in C.objects:
        if F.on_objects.get(a) not in D.identity:
            out.append(Diagnostic("UnknownObject", (a,), "object image missing or not in target"))
    for f in C.morphisms:
        if F.on_morphisms.get(f) not in D.ends:
            out.append(Diagnostic("UnknownMorphism", (f,), "morphism image missing or not in target"))
    if out:
        return out
    for f in C.morphisms:
        a, b = C.ends[f]
        if D.ends[F(f)] != (F.ob(a), F.ob(b)):
            out.append(Diagnostic("DomCodNotPreserved", (f,)))
    if out:
        return out
    for a in C.objects:
        if F(C.identity[a]) != D.identity[F.ob(a)]:
            out.append(Diagnostic("IdentityNotPreserved", (a,)))
    for (g, f), gf in C.table.items():
        if D.compose(F(g), F(f)) != F(gf):
            out.append(Diagnostic("CompositionNotPreserved", (g, f)))
    return out


def validate_functor(F: FinFunctor) -> FinFunctor:
    problems = check_functor(F)
    if problems:
        raise ValidationError(problems)
    return F


def identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {a: a for a in C.objects}, {f: f for f in C.morphisms}, name="id")


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """G∘F."""
    return FinFunctor(
        F.source,
        G.target,
        {a: G.ob(F.ob(a)) for a in F.source.objects},
        {f: G(F(f)) for f in F.source.morphisms},
    )


def constant_functor(C: FinCat, D: FinCat, d: Id) -> FinFunctor:
    return FinFunctor(C, D, {a: d for a in C.objects}, {f: D.identity[d] for f in C.morphisms}, name=f"const {d}")


class NatTrans:
    """A natural transformation ``source ⇒ target`` between parallel functors."""

    def __init__(self, source: FinFunctor, target: FinFunctor, components: Mapping):
        self.source = source
        self.target = target
        self.components = dict(components)

    def __getitem__(self, a: Id) -> Id:
        return self.components[a]

    def key(self) -> tuple:
        return tuple(self.components[a] for a in self.source.source.objects)

    def to_json(self) -> dict:
        return {"components": [[to_jsonable(a), to_jsonable(m)] for a, m in sorted(self.components.items(), key=lambda kv: idkey(kv[0]))]}


def check_nat(alpha: NatTrans) -> list[Diagnostic]:
    F, G = alpha.source, alpha.target
    C, D = F.source, F.target
    out = []
    for a in C.objects:
        m = alpha.components.get(a)
        if m not in D.ends or D.ends[m] != (F.ob(a), G.ob(a)):
            out.append(Diagnostic("ComponentWrongType", (a,)))
    if out:
        return out
    for f in C.morphisms:
        a, b = C.ends[f]
        if D.compose(alpha[b], F(f)) != D.compose(G(f), alpha[a]):
            out.append(Diagnostic("NaturalitySquareFails", (f,)))
    return out


def validate_nat(alpha: NatTrans) -> NatTrans:
    problems = check_nat(alpha)
    if problems:
        raise ValidationError(problems)
    return alpha


def identity_nat(F: FinFunctor) -> NatTrans:
    return NatTrans(F, F, {a: F.target.identity[F.ob(a)] for a in F.source.objects})


def vertical(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """β·α for α: F⇒G, β: G⇒H."""
    D = alpha.source.target
    return NatTrans(alpha.source, beta.target, {a: D.compose(beta[a], alpha[a]) for a in alpha.source.source.objects})


def whisker_left(H: FinFunctor, alpha: NatTrans) -> NatTrans:
    """H·α : H∘F ⇒ H∘G."""
    return NatTrans(
        compose_functors(H, alpha.source),
        compose_functors(H, alpha.target),
        {a: H(alpha[a]) for a in alpha.source.source.objects},
    )


def whisker_right(alpha: NatTrans, K: FinFunctor) -> NatTrans:
    """α·K : F∘K ⇒ G∘K."""
    return NatTrans(
        compose_functors(alpha.source, K),
        compose_functors(alpha.target, K),
        {a: alpha[K.ob(a)] for a in K.source.objects},
    )


def nat_inverse(alpha: NatTrans) -> NatTrans | None:
    D = alpha.source.target
    comps = {}
    for a, m in alpha.components.items():
        inv = D.inverse(m)
        if inv is None:
            return None
        comps[a] = inv
    return NatTrans(alpha.target, alpha.source, comps)


# ---------------------------------------------------------------------------
# connectivity, initial and terminal objects


@dataclass
class ComponentReport:
    components: list[tuple]
    initials: list[tuple]
    global_initials: tuple

    def component_of(self, a: Id) -> int:
        for i, comp in enumerate(self.components):
            if a in comp:
                return i
        raise KeyError(a)


def components_and_initials(C: FinCat) -> ComponentReport:
    graph = nx.Graph()
    graph.add_nodes_from(C.objects)
    graph.add_edges_from(C.ends[f] for f in C.morphisms)
    comps = [tuple(sorted_ids(c)) for c in nx.connected_components(graph)]
    comps.sort(key=lambda c: idkey(c[0]))
    initials = []
    for comp in comps:
        initials.append(tuple(a for a in comp if all(len(C.hom(a, b)) == 1 for b in comp)))
    global_initials = tuple(a for a in C.objects if all(len(C.hom(a, b)) == 1 for b in C.objects))
    return ComponentReport(comps, initials, global_initials)


def terminal_objects(C: FinCat) -> tuple:
    return tuple(b for b in C.objects if all(len(C.hom(a, b)) == 1 for a in C.objects))


# ---------------------------------------------------------------------------
# pullbacks and slices


@dataclass(frozen=True)
class SpanInCat:
    apex: Id
    left: Id
    right: Id


@dataclass
class Pullback:
    span: SpanInCat
    mediators: dict = field(default_factory=dict)


def cones_over(C: FinCat, f: Id, g: Id) -> list[tuple]:
    """All (W, p, q) with f∘p = g∘q, in canonical order."""
    a, b = C.dom(f), C.dom(g)
    out = []
    for w in C.objects:
        for p in C.hom(w, a):
            fp = C.compose(f, p)
            for q in C.hom(w, b):
                if C.compose(g, q) == fp:
                    out.append((w, p, q))
    return out


def mediators(C: FinCat, cone: tuple, apex: tuple) -> list:
    w, p, q = cone
    P, pp, qq = apex
    return [m for m in C.hom(w, P) if C.compose(pp, m) == p and C.compose(qq, m) == q]


def universal_cones(C: FinCat, f: Id, g: Id, first_only: bool = False) -> list[Pullback]:
    """Every pullback cone of ``f: a→c ← b: g`` in canonical order, with its mediators."""
    if C.cod(f) != C.cod(g):
        raise ValueError("cospan legs must share a codomain")
    cones = cones_over(C, f, g)
    found = []
    for cand in cones:
        meds = {}
        for cone in cones:
            ms = mediators(C, cone, cand)
            if len(ms) != 1:
                break
            meds[cone] = ms[0]
        else:
            found.append(Pullback(SpanInCat(*cand), meds))
            if first_only:
                break
    return found


def pullback(C: FinCat, f: Id, g: Id) -> Pullback | None:
    """Canonical pullback of the cospan ``f: a→c ← b: g`` (least apex, then least legs), or None."""
    found = universal_cones(C, f, g, first_only=True)
    return found[0] if found else None


def check_pullback(C: FinCat, f: Id, g: Id, pb: Pullback) -> list[Diagnostic]:
    """Re-check a pullback certificate by enumerating every cone."""
    out = []
    s = pb.span
    if C.compose(f, s.left) != C.compose(g, s.right):
        out.append(Diagnostic("SquareDoesNotCommute", (s.apex, s.left, s.right)))
    for cone in cones_over(C, f, g):
        ms = mediators(C, cone, (s.apex, s.left, s.right))
        if len(ms) != 1 or pb.mediators.get(cone, ms[0] if ms else None) != (ms[0] if ms else None):
            out.append(Diagnostic("MediatorNotUnique", cone))
    return out


def slice_category(C: FinCat, X: Id) -> tuple[FinCat, FinFunctor]:
    """C/X together with its domain projection."""
    objs = list(C.into(X))
    morphisms = {}
    identity = {}
    for u in objs:
        for v in objs:
            for h in C.hom(C.dom(u), C.dom(v)):
                if C.compose(v, h) == u:
                    morphisms[(h, u, v)] = (u, v)
        identity[u] = (C.identity[C.dom(u)], u, u)
    table = {}
    for (h, u, v) in morphisms:
        for (k, v2, w) in morphisms:
            if v2 == v:
                table[((k, v, w), (h, u, v))] = (C.compose(k, h), u, w)
    S = FinCat(objs, morphisms, identity, table, name=f"{C.name or 'C'}/{X}")
    proj = FinFunctor(S, C, {u: C.dom(u) for u in objs}, {m: m[0] for m in morphisms}, name="dom")
    return S, proj


# ---------------------------------------------------------------------------
# small constructions


def discrete(objects: Iterable[Id], name: str | None = None) -> FinCat:
    objs = list(objects)
    return FinCat(
        objs,
        {("id", a): (a, a) for a in objs},
        {a: ("id", a) for a in objs},
        {(("id", a), ("id", a)): ("id", a) for a in objs},
        name=name,
    )


def from_preorder(objects: Iterable[Id], leq: Iterable[tuple[Id, Id]], name: str | None = None, label: Callable | None = None) -> FinCat:
    """The thin category of the reflexive-transitive closure of ``leq``.

    Morphism ids are ``label(a, b)`` (default the string ``"a<=b"``, identities ``"1a"``).
    """
    objs = sorted_ids(objects)
    rel = {(a, a) for a in objs} | set(leq)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True

    def default_label(a, b):
        return f"1{a}" if a == b else f"{a}<={b}"

    lab = label or default_label
    morphisms = {lab(a, b): (a, b) for a, b in rel}
    identity = {a: lab(a, a) for a in objs}
    table = {}
    for a, b in rel:
        for b2, c in rel:
            if b == b2:
                table[(lab(b, c), lab(a, b))] = lab(a, c)
    return FinCat(objs, morphisms, identity, table, name=name)


def from_monoid(elements: Iterable[Id], unit: Id, mult: Callable[[Id, Id], Id], obj: Id = "*", name: str | None = None) -> FinCat:
    """One-object category; ``mult(g, f)`` is g∘f."""
    els = list(elements)
    return FinCat(
        [obj],
        {e: (obj, obj) for e in els},
        {obj: unit},
        {(g, f): mult(g, f) for g in els for f in els},
        name=name,
    )


def opposite(C: FinCat) -> FinCat:
    return FinCat(
        C.objects,
        {f: (b, a) for f, (a, b) in C.ends.items()},
        C.identity,
        {(f, g): gf for (g, f), gf in C.table.items()},
        name=f"{C.name or 'C'}^op",
    )


def product(C: FinCat, D: FinCat) -> FinCat:
    objs = [(a, b) for a in C.objects for b in D.objects]
    morphisms = {(f, g): ((C.dom(f), D.dom(g)), (C.cod(f), D.cod(g))) for f in C.morphisms for g in D.morphisms}
    identity = {(a, b): (C.identity[a], D.identity[b]) for a, b in objs}
    table = {}
    for (g1, f1), h1 in C.table.items():
        for (g2, f2), h2 in D.table.items():
            table[((g1, g2), (f1, f2))] = (h1, h2)
    return FinCat(objs, morphisms, identity, table, name=f"{C.name or 'C'}x{D.name or 'D'}")


def full_subcategory(C: FinCat, objects: Iterable[Id]) -> FinCat:
    keep = set(objects)
    morphisms = {f: e for f, e in C.ends.items() if e[0] in keep and e[1] in keep}
    table = {k: v for k, v in C.table.items() if k[0] in morphisms and k[1] in morphisms}
    return FinCat(keep, morphisms, {a: C.identity[a] for a in keep}, table)


def terminal_category(obj: Id = "*") -> FinCat:
    return FinCat([obj], {f"1{obj}": (obj, obj)}, {obj: f"1{obj}"}, {(f"1{obj}", f"1{obj}"): f"1{obj}"}, name="1")


def walking_arrow() -> FinCat:
    return from_preorder(["a", "b"], [("a", "b")], name="arrow", label=_arrow_label({("a", "b"): "f"}))


def walking_cospan() -> FinCat:
    return from_preorder(["a", "b", "c"], [("a", "c"), ("b", "c")], name="cospan", label=_arrow_label({("a", "c"): "f", ("b", "c"): "g"}))


def chain(n: int) -> FinCat:
    """0 → 1 → ... → n-1 as a poset with string object ids."""
    objs = [str(i) for i in range(n)]
    return from_preorder(objs, [(objs[i], objs[i + 1]) for i in range(n - 1)], name=f"chain{n}")


def square_poset() -> FinCat:
    """a≤b≤d, a≤c≤d: nine morphisms, d terminal, a initial."""
    return from_preorder(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], name="square")


def _arrow_label(names: dict) -> Callable:
    def lab(a, b):
        if a == b:
            return f"1{a}"
        return names.get((a, b), f"{a}<={b}")

    return lab


def enumerate_functors(C: FinCat, D: FinCat, limit: int | None = None) -> list[FinFunctor]:
    """Every functor C → D, by backtracking over object then morphism assignments."""
    results = []
    mors = list(C.morphisms)
    for images in itertools.product(D.objects, repeat=len(C.objects)):
        ob = dict(zip(C.objects, images))
        assignment: dict = {}

        def extend(i):
            if limit is not None and len(results) >= limit:
                return
            if i == len(mors):
                results.append(FinFunctor(C, D, ob, dict(assignment)))
                return
            f = mors[i]
            a, b = C.ends[f]
            if C.identity[a] == f:
                options = [D.identity[ob[a]]]
            else:
                options = D.hom(ob[a], ob[b])
            for m in options:
                assignment[f] = m
                ok = True
                for (g, h), gh in C.table.items():
                    if g in assignment and h in assignment and gh in assignment:
                        if D.compose(assignment[g], assignment[h]) != assignment[gh]:
                            ok = False
                            break
                if ok:
                    extend(i + 1)
                del assignment[f]

        extend(0)
    return results


def enumerate_nats(F: FinFunctor, G: FinFunctor) -> list[NatTrans]:
    C, D = F.source, F.target
    results = []
    objs = list(C.objects)
    choice: dict = {}

    def extend(i):
        if i == len(objs):
            results.append(NatTrans(F, G, dict(choice)))
            return
        a = objs[i]
        for m in D.hom(F.ob(a), G.ob(a)):
            choice[a] = m
            ok = True
            for f in C.morphisms:
                x, y = C.ends[f]
                if x in choice and y in choice and D.compose(choice[y], F(f)) != D.compose(G(f), choice[x]):
                    ok = False
                    break
            if ok:
                extend(i + 1)
            del choice[a]

    extend(0)
    return results


def least_by(xs: Iterable, key: Callable[[Any], Any]):
    return min(xs, key=lambda x: idkey(key(x)))


__all__ = [
    "FinCat",
    "FinFunctor",
    "NatTrans",
    "SpanInCat",
    "Pullback",
    "ComponentReport",
    "category_from_json",
    "check_category",
    "validate_category",
    "check_functor",
    "validate_functor",
    "check_nat",
    "validate_nat",
    "components_and_initials",
    "terminal_objects",
    "pullback",
    "check_pullback",
    "slice_category",
    "least",
]
