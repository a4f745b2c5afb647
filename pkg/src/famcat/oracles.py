"""Brute-force oracles, deliberately independent of the main algorithms.

Nothing here uses categories of elements, connected components or initial
objects; each oracle searches the defining data directly.
"""

from __future__ import annotations

import itertools

from famcat.diers1d import SetCopresheaf
from famcat.fincat import FinCat


def _count_multisets(C: FinCat, F: SetCopresheaf):
    """Multisets {P_m} with Σ_m |C(P_m, B)| = |F(B)| for every B."""
    objs = list(C.objects)
    target = {b: len(F.sets[b]) for b in objs}
    total = sum(target.values())
    chosen: list = []

    def go(i, remaining):
        if all(v == 0 for v in remaining.values()):
            yield list(chosen)
            return
        if i == len(objs) or len(chosen) >= total:
            return
        P = objs[i]
        weights = {b: len(C.hom(P, b)) for b in objs}
        max_copies = min((remaining[b] // w for b, w in weights.items() if w), default=0)
        for k in range(max_copies, -1, -1):
            rem = {b: remaining[b] - k * weights[b] for b in objs}
            chosen.extend([P] * k)
            yield from go(i + 1, rem)
            del chosen[len(chosen) - k:]

    yield from go(0, target)


def brute_force_decomposition(F: SetCopresheaf):
    """Search for ({P_m}, {x_m ∈ F(P_m)}) making (m, f) ↦ F(f)(x_m) bijective.

    Returns a list of (P_m, x_m) or None.
    """
    C = F.base
    for family in _count_multisets(C, F):
        elements = [None] * len(family)
        used = {b: set() for b in C.objects}

        def go(m):
            if m == len(family):
                return all(len(used[b]) == len(F.sets[b]) for b in C.objects)
            P = family[m]
            for x in F.sets[P]:
                images = [(C.cod(f), F(f, x)) for f in C.out_of(P)]
                if len(set(images)) != len(images) or any(y in used[b] for b, y in images):
                    continue
                for b, y in images:
                    used[b].add(y)
                elements[m] = x
                if go(m + 1):
                    return True
                for b, y in images:
                    used[b].discard(y)
            return False

        if go(0):
            return list(zip(family, elements))
    return None


def brute_force_generic_objects(F: SetCopresheaf) -> list:
    """(A, x) such that every cospan (A,x) → (B,y) ← (C,z) admits exactly one (A,x) → (C,z).

    Morphisms are enumerated straight from the action tables.
    """
    C = F.base

    def arrows(a, x, b, y):
        return [f for f in C.hom(a, b) if F(f, x) == y]

    elements = [(a, x) for a in C.objects for x in F.sets[a]]
    out = []
    for a, x in elements:
        ok = True
        for b, y in elements:
            if not arrows(a, x, b, y):
                continue
            for c, z in elements:
                if arrows(c, z, b, y) and len(arrows(a, x, c, z)) != 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append((a, x))
    return out


def brute_force_is_equivalence_count(C: FinCat, D: FinCat) -> bool:
    """Crude necessary check: equal numbers of isomorphism classes and matching hom-size profiles."""
    def profile(K):
        reps = []
        for a in K.objects:
            if not any(K.isomorphic(a, r) for r in reps):
                reps.append(a)
        return sorted(sorted(len(K.hom(a, b)) for b in reps) for a in reps)

    return profile(C) == profile(D)


def all_assignments(options: list[list]):
    return itertools.product(*options)


# ---------------------------------------------------------------------------
# two-dimensional oracles; they read only the base category's tables


def brute_force_spans(E: FinCat, X, Y) -> tuple[list, list]:
    """Spans X ← S → Y as (S, l, r) and span maps as (u, source, target)."""
    spans = [(S, l, r) for S in E.objects for l in E.hom(S, X) for r in E.hom(S, Y)]
    maps = [
        (u, a, b)
        for a in spans
        for b in spans
        for u in E.hom(a[0], b[0])
        if E.compose(b[1], u) == a[1] and E.compose(b[2], u) == a[2]
    ]
    return spans, maps


def brute_force_generic_arrow(C: FinCat, delta) -> bool:
    """Every commuting square f∘δ = g∘z has exactly one diagonal h with h∘δ = z and g∘h = f."""
    X, A = C.ends[delta]
    for c in C.objects:
        for f in C.hom(A, c):
            for b in C.objects:
                for g in C.hom(b, c):
                    for z in C.hom(X, b):
                        if C.compose(f, delta) != C.compose(g, z):
                            continue
                        diagonals = [h for h in C.hom(A, b) if C.compose(h, delta) == z and C.compose(g, h) == f]
                        if len(diagonals) != 1:
                            return False
    return True


def brute_force_span_factorizations(E: FinCat, span: tuple, W) -> int:
    """Triples ((s, t) with t invertible, f̄: cod t → W, invertible span map (s, f̄∘t) → span)."""
    S0, l0, r0 = span
    X = E.cod(l0)
    count = 0
    for S in E.objects:
        for s in E.hom(S, X):
            for A in E.objects:
                for t in E.hom(S, A):
                    if E.inverse(t) is None:
                        continue
                    for fbar in E.hom(A, W):
                        ft = E.compose(fbar, t)
                        count += sum(
                            1 for u in E.hom(S, S0)
                            if E.inverse(u) is not None and E.compose(l0, u) == s and E.compose(r0, u) == ft
                        )
    return count
