"""Seeded random generators for test corpora.

Every generator takes a :class:`random.Random` so corpora are reproducible
from a single integer seed.
"""

from __future__ import annotations

import random
from typing import Iterable

from famcat.fincat import FinCat


def concrete_category(rng: random.Random, max_objects: int = 5, max_morphisms: int = 12, max_size: int = 3, generators: int | None = None) -> FinCat:
    """A random subcategory of finite sets generated by a few random functions.

    Objects are ``"o0", "o1", ...``; a morphism id records its ends and its
    function table, so composition is function composition.  Draws are
    rejected until the closure has at most ``max_morphisms`` morphisms.
    """
    while True:
        n = rng.randint(1, max_objects)
        sizes = {f"o{i}": rng.randint(1, max_size) for i in range(n)}
        objs = list(sizes)
        count = rng.randint(0, n + 2) if generators is None else generators
        gens = set()
        for _ in range(count):
            a, b = rng.choice(objs), rng.choice(objs)
            gens.add((a, b, tuple(rng.randrange(sizes[b]) for _ in range(sizes[a]))))
        cat = _close(sizes, gens, max_morphisms)
        if cat is not None:
            return cat


def concrete_from_generators(sizes: dict, gens: Iterable[tuple]) -> FinCat:
    cat = _close(sizes, set(gens), None)
    assert cat is not None
    return cat


def _mid(a, b, fn) -> str:
    return f"{a}>{b}:{''.join(str(i) for i in fn)}"


def _close(sizes: dict, gens: set, cap: int | None) -> FinCat | None:
    arrows = {(a, a, tuple(range(sizes[a]))) for a in sizes} | set(gens)
    frontier = list(arrows)
    while frontier:
        new = []
        for (a, b, f) in list(arrows):
            for (c, d, g) in frontier:
                if b == c:
                    h = (a, d, tuple(g[f[i]] for i in range(sizes[a])))
                    if h not in arrows:
                        arrows.add(h)
                        new.append(h)
                if d == a:
                    h = (c, b, tuple(f[g[i]] for i in range(sizes[c])))
                    if h not in arrows:
                        arrows.add(h)
                        new.append(h)
        if cap is not None and len(arrows) > cap:
            return None
        frontier = new
    if cap is not None and len(arrows) > cap:
        return None
    morphisms = {_mid(a, b, f): (a, b) for (a, b, f) in arrows}
    identity = {a: _mid(a, a, tuple(range(sizes[a]))) for a in sizes}
    table = {}
    for (a, b, f) in arrows:
        for (c, d, g) in arrows:
            if b == c:
                table[(_mid(c, d, g), _mid(a, b, f))] = _mid(a, d, tuple(g[f[i]] for i in range(sizes[a])))
    cat = FinCat(sizes, morphisms, identity, table, name="concrete")
    cat.sizes = dict(sizes)
    cat.functions = {_mid(a, b, f): f for (a, b, f) in arrows}
    return cat


def random_preorder_category(rng: random.Random, max_objects: int = 4) -> FinCat:
    from famcat.fincat import from_preorder

    n = rng.randint(1, max_objects)
    objs = [f"p{i}" for i in range(n)]
    pairs = [(a, b) for a in objs for b in objs if a != b and rng.random() < 0.3]
    return from_preorder(objs, pairs, name="preorder")


def forgetful_copresheaf(C: FinCat):
    from famcat.diers1d import SetCopresheaf

    sets = {a: [str(i) for i in range(C.sizes[a])] for a in C.objects}
    action = {f: {str(i): str(j) for i, j in enumerate(C.functions[f])} for f in C.morphisms}
    return SetCopresheaf(C, sets, action, name="forgetful")


def quotient_copresheaf(F, rng: random.Random, merges: int):
    """Glue ``merges`` random pairs of elements and close the relation under the action."""
    from famcat.diers1d import SetCopresheaf

    C = F.base
    parent = {(a, x): (a, x) for a in C.objects for x in F.sets[a]}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
            return True
        return False

    for _ in range(merges):
        a = rng.choice(C.objects)
        if len(F.sets[a]) >= 2:
            x, y = rng.sample(F.sets[a], 2)
            union((a, x), (a, y))
    changed = True
    while changed:
        changed = False
        for f in C.morphisms:
            a, b = C.ends[f]
            for x in F.sets[a]:
                for y in F.sets[a]:
                    if find((a, x)) == find((a, y)) and union((b, F(f, x)), (b, F(f, y))):
                        changed = True
    sets = {a: sorted({find((a, x))[1] for x in F.sets[a]}) for a in C.objects}
    action = {f: {find((C.dom(f), x))[1]: find((C.cod(f), F(f, x)))[1] for x in F.sets[C.dom(f)]} for f in C.morphisms}
    return SetCopresheaf(C, sets, action, name="quotient")


def random_copresheaf(rng: random.Random, max_objects: int = 5, max_morphisms: int = 12):
    """A seeded copresheaf: forgetful, a sum of representables, or a quotient of one."""
    from famcat.diers1d import sum_of_representables

    C = concrete_category(rng, max_objects=max_objects, max_morphisms=max_morphisms)
    kind = rng.choice(["forgetful", "sum", "quotient", "quotient"])
    if kind == "forgetful":
        return forgetful_copresheaf(C)
    family = [rng.choice(C.objects) for _ in range(rng.randint(0, 3))]
    F = sum_of_representables(C, family)
    if kind == "quotient":
        F = quotient_copresheaf(F, rng, rng.randint(1, 3))
    return F


def random_preordered_bicat(rng: random.Random, max_objects: int = 3, max_morphisms: int = 8):
    """A random locally preordered strict 2-category on a random concrete category."""
    from famcat.bicat import LocallyPreordered, compatible_preorder_closure

    C = concrete_category(rng, max_objects=max_objects, max_morphisms=max_morphisms)
    pairs = []
    for f in C.morphisms:
        for g in C.hom(*C.ends[f]):
            if f != g and rng.random() < 0.25:
                pairs.append((f, g))
    return LocallyPreordered(C, compatible_preorder_closure(C, pairs), name="random-po")


def strict_functor_into(A, P_cat, M: FinCat):
    """A functor M → (underlying category of a strict 2-category) as a pseudofunctor."""
    from famcat.bicat import LocallyDiscrete, PseudoFunctor

    src = LocallyDiscrete(M)
    return PseudoFunctor(src, A, P_cat.ob, P_cat, lambda c: A.idc(P_cat(c.src)).mor,
                         lambda g, f: A.idc(P_cat(M.compose(g, f))).mor,
                         lambda a: A.idc(A.unit(P_cat.ob(a))).mor, name="P")


def random_indexing(rng: random.Random, max_objects: int = 3, max_morphisms: int = 8):
    """(M, P) with |M| ≤ 3 and P: M → A into a random locally preordered 2-category."""
    from famcat.fincat import enumerate_functors

    while True:
        A = random_preordered_bicat(rng, max_objects=max_objects, max_morphisms=max_morphisms)
        M = concrete_category(rng, max_objects=3, max_morphisms=5, max_size=2)
        functors = enumerate_functors(M, A.cat, limit=40)
        if functors:
            return A, M, strict_functor_into(A, rng.choice(functors), M)
