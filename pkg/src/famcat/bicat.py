"""Finite bicategories with explicit coherence data.

A bicategory exposes hom-categories (1-cells are objects, 2-cells are
morphisms), 1-cell composition, horizontal composition of 2-cells and the
associator and unitor components.  Everything is computed lazily and
memoized, so derived bicategories (slices, categories of elements, spans)
only materialize the parts a check actually touches.

Conventions: ``comp1(g, f)`` is g∘f; ``assoc(h, g, f)`` is (hg)f ⇒ h(gf);
``lunitor(f)`` is 1∘f ⇒ f; ``runitor(f)`` is f∘1 ⇒ f.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping

from famcat.errors import Diagnostic, ValidationError
from famcat.fincat import FinCat, category_from_json, check_category, discrete, opposite
from famcat.ids import from_jsonable, idkey, sorted_ids, to_jsonable

Id = Hashable


@dataclass(frozen=True)
class Cell2:
    """A 2-cell ``mor: src ⇒ tgt`` between parallel 1-cells."""

    src: Id
    tgt: Id
    mor: Id


class Bicat:
    """Base class; subclasses implement the underscore primitives."""

    name = "B"

    def __init__(self):
        self._homs: dict = {}
        self._ends: dict = {}
        self._c1: dict = {}
        self._hc: dict = {}
        self._assoc: dict = {}
        self._lu: dict = {}
        self._ru: dict = {}

    # -- primitives -------------------------------------------------------
    @property
    def objects(self) -> tuple:
        raise NotImplementedError

    def _hom(self, a: Id, b: Id) -> FinCat:
        raise NotImplementedError

    def _unit(self, a: Id) -> Id:
        raise NotImplementedError

    def _comp1(self, g: Id, f: Id) -> Id:
        raise NotImplementedError

    def _hcomp(self, beta: Cell2, alpha: Cell2) -> Id:
        raise NotImplementedError

    def _assoc_mor(self, h: Id, g: Id, f: Id) -> Id:
        raise NotImplementedError

    def _lunitor_mor(self, f: Id) -> Id:
        raise NotImplementedError

    def _runitor_mor(self, f: Id) -> Id:
        raise NotImplementedError

    # -- memoized structure ------------------------------------------------
    def hom(self, a: Id, b: Id) -> FinCat:
        key = (a, b)
        H = self._homs.get(key)
        if H is None:
            H = self._hom(a, b)
            self._homs[key] = H
            for f in H.objects:
                self._ends[f] = key
        return H

    def ends(self, f: Id) -> tuple:
        """(source 0-cell, target 0-cell) of a 1-cell."""
        e = self._ends.get(f)
        if e is None:
            e = self._locate(f)
            self._ends[f] = e
        return e

    def _locate(self, f: Id) -> tuple:
        for a in self.objects:
            for b in self.objects:
                if f in self.hom(a, b).identity:
                    return (a, b)
        raise KeyError(f"unknown 1-cell {f!r}")

    def src(self, f: Id) -> Id:
        return self.ends(f)[0]

    def tgt(self, f: Id) -> Id:
        return self.ends(f)[1]

    def one_cells(self, a: Id, b: Id) -> tuple:
        return self.hom(a, b).objects

    def all_one_cells(self) -> list:
        return [f for a in self.objects for b in self.objects for f in self.one_cells(a, b)]

    def unit(self, a: Id) -> Id:
        return self._unit(a)

    def comp1(self, g: Id, f: Id) -> Id:
        key = (g, f)
        r = self._c1.get(key)
        if r is None:
            if self.tgt(f) != self.src(g):
                raise ValueError(f"1-cells {g!r}, {f!r} are not composable")
            r = self._comp1(g, f)
            self._c1[key] = r
            self._ends.setdefault(r, (self.src(f), self.tgt(g)))
        return r

    def comp1s(self, *fs: Id) -> Id:
        """Right-nested: ``comp1s(h, g, f) = h∘(g∘f)``."""
        r = fs[-1]
        for g in reversed(fs[:-1]):
            r = self.comp1(g, r)
        return r

    # -- 2-cells -------------------------------------------------------------
    def cell_hom(self, c: Cell2) -> FinCat:
        a, b = self.ends(c.src)
        return self.hom(a, b)

    def cells(self, f: Id, g: Id) -> list[Cell2]:
        a, b = self.ends(f)
        return [Cell2(f, g, m) for m in self.hom(a, b).hom(f, g)]

    def all_cells_in(self, a: Id, b: Id) -> list[Cell2]:
        H = self.hom(a, b)
        return [Cell2(H.dom(m), H.cod(m), m) for m in H.morphisms]

    def idc(self, f: Id) -> Cell2:
        a, b = self.ends(f)
        return Cell2(f, f, self.hom(a, b).identity[f])

    def vcomp(self, *cs: Cell2) -> Cell2:
        """``vcomp(γ, β, α) = γ·β·α`` (α first)."""
        result = cs[-1]
        H = self.cell_hom(result)
        for c in reversed(cs[:-1]):
            if c.src != result.tgt:
                raise ValueError(f"2-cells not composable: {c} after {result}")
            result = Cell2(result.src, c.tgt, H.compose(c.mor, result.mor))
        return result

    def inv(self, c: Cell2) -> Cell2 | None:
        m = self.cell_hom(c).inverse(c.mor)
        return None if m is None else Cell2(c.tgt, c.src, m)

    def is_invertible(self, c: Cell2) -> bool:
        return self.cell_hom(c).inverse(c.mor) is not None

    def must_inv(self, c: Cell2) -> Cell2:
        r = self.inv(c)
        if r is None:
            raise ValueError(f"2-cell {c} is not invertible")
        return r

    def hcomp(self, beta: Cell2, alpha: Cell2) -> Cell2:
        key = (beta, alpha)
        r = self._hc.get(key)
        if r is None:
            m = self._hcomp(beta, alpha)
            r = Cell2(self.comp1(beta.src, alpha.src), self.comp1(beta.tgt, alpha.tgt), m)
            self._hc[key] = r
        return r

    def wl(self, h: Id, alpha: Cell2) -> Cell2:
        """1_h * α."""
        return self.hcomp(self.idc(h), alpha)

    def wr(self, alpha: Cell2, f: Id) -> Cell2:
        """α * 1_f."""
        return self.hcomp(alpha, self.idc(f))

    def assoc(self, h: Id, g: Id, f: Id) -> Cell2:
        key = (h, g, f)
        r = self._assoc.get(key)
        if r is None:
            r = Cell2(self.comp1(self.comp1(h, g), f), self.comp1(h, self.comp1(g, f)), self._assoc_mor(h, g, f))
            self._assoc[key] = r
        return r

    def assoc_inv(self, h: Id, g: Id, f: Id) -> Cell2:
        return self.must_inv(self.assoc(h, g, f))

    def lunitor(self, f: Id) -> Cell2:
        r = self._lu.get(f)
        if r is None:
            r = Cell2(self.comp1(self.unit(self.tgt(f)), f), f, self._lunitor_mor(f))
            self._lu[f] = r
        return r

    def runitor(self, f: Id) -> Cell2:
        r = self._ru.get(f)
        if r is None:
            r = Cell2(self.comp1(f, self.unit(self.src(f))), f, self._runitor_mor(f))
            self._ru[f] = r
        return r

    def lunitor_inv(self, f: Id) -> Cell2:
        return self.must_inv(self.lunitor(f))

    def runitor_inv(self, f: Id) -> Cell2:
        return self.must_inv(self.runitor(f))

    # -- iteration helpers ---------------------------------------------------
    def composable_paths(self, length: int):
        """Tuples (f_n, ..., f_1) of composable 1-cells, f_1 applied first."""
        objs = self.objects
        for chain in itertools.product(objs, repeat=length + 1):
            homs = [self.one_cells(chain[i], chain[i + 1]) for i in range(length)]
            for cells in itertools.product(*homs):
                yield tuple(reversed(cells))

    def is_locally_discrete(self) -> bool:
        return all(len(self.hom(a, b).morphisms) == len(self.hom(a, b).objects) for a in self.objects for b in self.objects)

    def equivalence_inverse(self, f: Id):
        """(g, η: 1 ⇒ gf, ε: fg ⇒ 1) with η, ε invertible, or None."""
        a, b = self.ends(f)
        for g in self.one_cells(b, a):
            etas = [c for c in self.cells(self.unit(a), self.comp1(g, f)) if self.is_invertible(c)]
            if not etas:
                continue
            eps = [c for c in self.cells(self.comp1(f, g), self.unit(b)) if self.is_invertible(c)]
            if eps:
                return (g, etas[0], eps[0])
        return None

    def is_equivalence(self, f: Id) -> bool:
        return self.equivalence_inverse(f) is not None


# ---------------------------------------------------------------------------
# table-backed bicategories


class TableBicat(Bicat):
    """A bicategory given by explicit tables; 2-cell ids must be globally unique."""

    def __init__(self, objects, homs: Mapping, units: Mapping, comp1: Mapping, hcomp: Mapping,
                 assoc: Mapping, lunitor: Mapping, runitor: Mapping, name: str = "B"):
        super().__init__()
        self._objects = tuple(sorted_ids(objects))
        self.homs = dict(homs)
        self.units = dict(units)
        self.c1_table = dict(comp1)
        self.hc_table = dict(hcomp)
        self.assoc_table = dict(assoc)
        self.lu_table = dict(lunitor)
        self.ru_table = dict(runitor)
        self.name = name

    @property
    def objects(self):
        return self._objects

    def _hom(self, a, b):
        return self.homs.get((a, b)) or FinCat([], {}, {}, {})

    def _unit(self, a):
        return self.units[a]

    def _comp1(self, g, f):
        return self.c1_table[(g, f)]

    def _hcomp(self, beta, alpha):
        return self.hc_table[(beta.mor, alpha.mor)]

    def _assoc_mor(self, h, g, f):
        return self.assoc_table[(h, g, f)]

    def _lunitor_mor(self, f):
        return self.lu_table[f]

    def _runitor_mor(self, f):
        return self.ru_table[f]

    def to_json(self) -> dict:
        return bicat_to_json(self)


def materialize(B: Bicat, name: str | None = None) -> TableBicat:
    """Copy every table of a (possibly lazy) bicategory."""
    homs = {(a, b): B.hom(a, b) for a in B.objects for b in B.objects}
    units = {a: B.unit(a) for a in B.objects}
    c1, hc, assoc, lu, ru = {}, {}, {}, {}, {}
    for a, b, c in itertools.product(B.objects, repeat=3):
        for g in B.one_cells(b, c):
            for f in B.one_cells(a, b):
                c1[(g, f)] = B.comp1(g, f)
        for beta in B.all_cells_in(b, c):
            for alpha in B.all_cells_in(a, b):
                hc[(beta.mor, alpha.mor)] = B.hcomp(beta, alpha).mor
    for h, g, f in B.composable_paths(3):
        assoc[(h, g, f)] = B.assoc(h, g, f).mor
    for f in B.all_one_cells():
        lu[f] = B.lunitor(f).mor
        ru[f] = B.runitor(f).mor
    return TableBicat(B.objects, homs, units, c1, hc, assoc, lu, ru, name=name or B.name)


def bicat_to_json(B: Bicat) -> dict:
    T = B if isinstance(B, TableBicat) else materialize(B)
    j = to_jsonable
    return {
        "objects": j(list(T.objects)),
        "homs": [[j(a), j(b), T.hom(a, b).to_json()] for a in T.objects for b in T.objects],
        "units": [[j(a), j(T.units[a])] for a in T.objects],
        "compose1": [[j(g), j(f), j(v)] for (g, f), v in sorted(T.c1_table.items(), key=lambda kv: idkey(kv[0]))],
        "hcomp": [[j(b), j(a), j(v)] for (b, a), v in sorted(T.hc_table.items(), key=lambda kv: idkey(kv[0]))],
        "associator": [[j(h), j(g), j(f), j(v)] for (h, g, f), v in sorted(T.assoc_table.items(), key=lambda kv: idkey(kv[0]))],
        "lunitor": [[j(f), j(v)] for f, v in sorted(T.lu_table.items(), key=lambda kv: idkey(kv[0]))],
        "runitor": [[j(f), j(v)] for f, v in sorted(T.ru_table.items(), key=lambda kv: idkey(kv[0]))],
    }


def bicat_from_json(doc: Mapping) -> TableBicat:
    fj = from_jsonable
    try:
        homs = {(fj(a), fj(b)): category_from_json(c) for a, b, c in doc["homs"]}
        return TableBicat(
            [fj(a) for a in doc["objects"]],
            homs,
            {fj(a): fj(f) for a, f in doc["units"]},
            {(fj(g), fj(f)): fj(v) for g, f, v in doc["compose1"]},
            {(fj(b), fj(a)): fj(v) for b, a, v in doc["hcomp"]},
            {(fj(h), fj(g), fj(f)): fj(v) for h, g, f, v in doc["associator"]},
            {fj(f): fj(v) for f, v in doc["lunitor"]},
            {fj(f): fj(v) for f, v in doc["runitor"]},
            name=doc.get("name", "B"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError([Diagnostic("MalformedDocument", (), str(exc))]) from exc


# ---------------------------------------------------------------------------
# validation


def check_bicategory(B: Bicat, stop_after: int | None = None) -> list[Diagnostic]:
    """Every violated instance: hom categories, functoriality of horizontal
    composition, naturality and invertibility of the constraints, pentagon and
    triangle.

    Naturality of the associator is checked in each variable separately; with
    functorial horizontal composition this is equivalent to joint naturality.
    """
    out: list[Diagnostic] = []

    def full():
        return stop_after is not None and len(out) >= stop_after

    objs = B.objects
    for a, b in itertools.product(objs, repeat=2):
        for d in check_category(B.hom(a, b)):
            out.append(Diagnostic("HomCategory", (a, b, d.kind) + d.detail))
    if out:
        return out
    try:
        _check_composition(B, out)
    except (KeyError, ValueError) as exc:
        out.append(Diagnostic("MalformedComposition", (), str(exc)))
    if out or full():
        return out
    for f in B.all_one_cells():
        for name, c in (("lunitor", B.lunitor(f)), ("runitor", B.runitor(f))):
            if not B.is_invertible(c):
                out.append(Diagnostic("NonInvertibleConstraint", (name, f)))
    for h, g, f in B.composable_paths(3):
        if not B.is_invertible(B.assoc(h, g, f)):
            out.append(Diagnostic("NonInvertibleConstraint", ("assoc", h, g, f)))
    if out:
        return out
    _check_unitor_naturality(B, out)
    _check_assoc_naturality(B, out)
    for k, h, g, f in B.composable_paths(4):
        if full():
            return out
        if not pentagon_holds(B, k, h, g, f):
            out.append(Diagnostic("PentagonViolation", (f, g, h, k)))
    for g, f in B.composable_paths(2):
        if not triangle_holds(B, g, f):
            out.append(Diagnostic("TriangleViolation", (f, g)))
    return out


def _check_composition(B: Bicat, out: list) -> None:
    objs = B.objects
    for a, b, c in itertools.product(objs, repeat=3):
        Hab, Hbc, Hac = B.hom(a, b), B.hom(b, c), B.hom(a, c)
        for g in Hbc.objects:
            for f in Hab.objects:
                gf = B.comp1(g, f)
                if gf not in Hac.identity:
                    out.append(Diagnostic("CompositeWrongEnds", (g, f)))
                    continue
                if B.hcomp(B.idc(g), B.idc(f)) != B.idc(gf):
                    out.append(Diagnostic("HcompIdentity", (g, f)))
        cells_bc = B.all_cells_in(b, c)
        cells_ab = B.all_cells_in(a, b)
        for beta in cells_bc:
            for alpha in cells_ab:
                r = B.hcomp(beta, alpha)
                if r.mor not in Hac.ends or Hac.ends[r.mor] != (r.src, r.tgt):
                    out.append(Diagnostic("HcompWrongEnds", (beta.mor, alpha.mor)))
        if out:
            return
        pairs_bc = [(b2, b1) for b1 in cells_bc for b2 in cells_bc if b2.src == b1.tgt]
        pairs_ab = [(a2, a1) for a1 in cells_ab for a2 in cells_ab if a2.src == a1.tgt]
        for b2, b1 in pairs_bc:
            for a2, a1 in pairs_ab:
                lhs = B.hcomp(B.vcomp(b2, b1), B.vcomp(a2, a1))
                rhs = B.vcomp(B.hcomp(b2, a2), B.hcomp(b1, a1))
                if lhs != rhs:
                    out.append(Diagnostic("InterchangeViolation", (b2.mor, b1.mor, a2.mor, a1.mor)))


def _check_unitor_naturality(B: Bicat, out: list) -> None:
    for a, b in itertools.product(B.objects, repeat=2):
        for alpha in B.all_cells_in(a, b):
            f, g = alpha.src, alpha.tgt
            if B.vcomp(alpha, B.lunitor(f)) != B.vcomp(B.lunitor(g), B.wl(B.unit(b), alpha)):
                out.append(Diagnostic("NaturalityViolation", ("lunitor", alpha.mor)))
            if B.vcomp(alpha, B.runitor(f)) != B.vcomp(B.runitor(g), B.wr(alpha, B.unit(a))):
                out.append(Diagnostic("NaturalityViolation", ("runitor", alpha.mor)))


def _check_assoc_naturality(B: Bicat, out: list) -> None:
    for h, g, f in B.composable_paths(3):
        a0, a1 = B.ends(f)
        _, a2 = B.ends(g)
        _, a3 = B.ends(h)
        base = B.assoc(h, g, f)
        for gamma in B.all_cells_in(a2, a3):
            if gamma.src != h:
                continue
            lhs = B.vcomp(B.assoc(gamma.tgt, g, f), B.wr(B.wr(gamma, g), f))
            rhs = B.vcomp(B.hcomp(gamma, B.idc(B.comp1(g, f))), base)
            if lhs != rhs:
                out.append(Diagnostic("NaturalityViolation", ("assoc", "left", gamma.mor, g, f)))
        for beta in B.all_cells_in(a1, a2):
            if beta.src != g:
                continue
            lhs = B.vcomp(B.assoc(h, beta.tgt, f), B.wr(B.wl(h, beta), f))
            rhs = B.vcomp(B.wl(h, B.wr(beta, f)), base)
            if lhs != rhs:
                out.append(Diagnostic("NaturalityViolation", ("assoc", "middle", h, beta.mor, f)))
        for alpha in B.all_cells_in(a0, a1):
            if alpha.src != f:
                continue
            lhs = B.vcomp(B.assoc(h, g, alpha.tgt), B.wl(B.comp1(h, g), alpha))
            rhs = B.vcomp(B.wl(h, B.wl(g, alpha)), base)
            if lhs != rhs:
                out.append(Diagnostic("NaturalityViolation", ("assoc", "right", h, g, alpha.mor)))


def pentagon_holds(B: Bicat, k: Id, h: Id, g: Id, f: Id) -> bool:
    lhs = B.vcomp(B.assoc(k, h, B.comp1(g, f)), B.assoc(B.comp1(k, h), g, f))
    rhs = B.vcomp(
        B.wl(k, B.assoc(h, g, f)),
        B.assoc(k, B.comp1(h, g), f),
        B.wr(B.assoc(k, h, g), f),
    )
    return lhs == rhs


def triangle_holds(B: Bicat, g: Id, f: Id) -> bool:
    b = B.tgt(f)
    lhs = B.vcomp(B.wl(g, B.lunitor(f)), B.assoc(g, B.unit(b), f))
    rhs = B.wr(B.runitor(g), f)
    return lhs == rhs


def validate_bicategory(B: Bicat) -> Bicat:
    problems = check_bicategory(B)
    if problems:
        raise ValidationError(problems)
    return B


def is_strict(B: Bicat) -> bool:
    for h, g, f in B.composable_paths(3):
        c = B.assoc(h, g, f)
        if c.src != c.tgt or c != B.idc(c.src):
            return False
    for f in B.all_one_cells():
        for c in (B.lunitor(f), B.runitor(f)):
            if c.src != c.tgt or c != B.idc(f):
                return False
    return True


# ---------------------------------------------------------------------------
# constructors


class LocallyDiscrete(Bicat):
    """A category seen as a bicategory with identity 2-cells ``("id", f)``."""

    def __init__(self, C: FinCat):
        super().__init__()
        self.cat = C
        self.name = f"ld({C.name or 'C'})"

    @property
    def objects(self):
        return self.cat.objects

    def _hom(self, a, b):
        return discrete(self.cat.hom(a, b))

    def _unit(self, a):
        return self.cat.identity[a]

    def _comp1(self, g, f):
        return self.cat.compose(g, f)

    def _hcomp(self, beta, alpha):
        return ("id", self.cat.compose(beta.src, alpha.src))

    def _assoc_mor(self, h, g, f):
        return ("id", self.cat.compose(h, g, f))

    def _lunitor_mor(self, f):
        return ("id", f)

    def _runitor_mor(self, f):
        return ("id", f)


def locally_discrete(C: FinCat) -> LocallyDiscrete:
    return LocallyDiscrete(C)


class LocallyPreordered(Bicat):
    """A strict 2-category: a category whose hom-sets carry preorders ``leq``
    compatible with composition; the 2-cell f ⇒ g is ``("le", f, g)``.
    """

    def __init__(self, C: FinCat, leq, name: str | None = None):
        super().__init__()
        self.cat = C
        self.leq = frozenset(leq) | {(f, f) for f in C.morphisms}
        self.name = name or f"po({C.name or 'C'})"

    @property
    def objects(self):
        return self.cat.objects

    def _hom(self, a, b):
        fs = self.cat.hom(a, b)
        morphisms = {("le", f, g): (f, g) for f in fs for g in fs if (f, g) in self.leq}
        identity = {f: ("le", f, f) for f in fs}
        table = {(("le", g, h), ("le", f, g)): ("le", f, h)
                 for (f, g) in morphisms.values() for (g2, h) in morphisms.values() if g2 == g}
        return FinCat(fs, morphisms, identity, table, name=f"po({a},{b})")

    def _unit(self, a):
        return self.cat.identity[a]

    def _comp1(self, g, f):
        return self.cat.compose(g, f)

    def _hcomp(self, beta, alpha):
        C = self.cat
        return ("le", C.compose(beta.src, alpha.src), C.compose(beta.tgt, alpha.tgt))

    def _assoc_mor(self, h, g, f):
        hgf = self.cat.compose(h, g, f)
        return ("le", hgf, hgf)

    def _lunitor_mor(self, f):
        return ("le", f, f)

    def _runitor_mor(self, f):
        return ("le", f, f)


def compatible_preorder_closure(C: FinCat, pairs) -> frozenset:
    """Smallest preorder on each hom containing ``pairs`` and closed under whiskering."""
    rel = set(pairs) | {(f, f) for f in C.morphisms}
    changed = True
    while changed:
        changed = False
        new = set()
        for (f, g) in rel:
            a, b = C.ends[f]
            for h in C.out_of(b):
                new.add((C.compose(h, f), C.compose(h, g)))
            for k in C.into(a):
                new.add((C.compose(f, k), C.compose(g, k)))
            for (g2, h) in rel:
                if g2 == g:
                    new.add((f, h))
        if not new <= rel:
            rel |= new
            changed = True
    return frozenset(rel)


class DualOp(Bicat):
    """Reverse 1-cells: hom_op(a, b) = hom(b, a)."""

    def __init__(self, B: Bicat):
        super().__init__()
        self.base = B
        self.name = f"{B.name}^op"

    @property
    def objects(self):
        return self.base.objects

    def _hom(self, a, b):
        return self.base.hom(b, a)

    def _unit(self, a):
        return self.base.unit(a)

    def _comp1(self, g, f):
        return self.base.comp1(f, g)

    def _hcomp(self, beta, alpha):
        return self.base.hcomp(alpha, beta).mor

    def _assoc_mor(self, h, g, f):
        return self.base.assoc_inv(f, g, h).mor

    def _lunitor_mor(self, f):
        return self.base.runitor(f).mor

    def _runitor_mor(self, f):
        return self.base.lunitor(f).mor


class DualCo(Bicat):
    """Reverse 2-cells: hom_co(a, b) = hom(a, b)^op."""

    def __init__(self, B: Bicat):
        super().__init__()
        self.base = B
        self.name = f"{B.name}^co"

    @property
    def objects(self):
        return self.base.objects

    def _hom(self, a, b):
        H = opposite(self.base.hom(a, b))
        return H

    def _unit(self, a):
        return self.base.unit(a)

    def _comp1(self, g, f):
        return self.base.comp1(g, f)

    def _hcomp(self, beta, alpha):
        return self.base.hcomp(Cell2(beta.tgt, beta.src, beta.mor), Cell2(alpha.tgt, alpha.src, alpha.mor)).mor

    def _assoc_mor(self, h, g, f):
        return self.base.assoc_inv(h, g, f).mor

    def _lunitor_mor(self, f):
        return self.base.lunitor_inv(f).mor

    def _runitor_mor(self, f):
        return self.base.runitor_inv(f).mor


def dual_op(B: Bicat) -> Bicat:
    return DualOp(B)


def dual_co(B: Bicat) -> Bicat:
    return DualCo(B)


def same_tables(B1: Bicat, B2: Bicat) -> bool:
    """Table-for-table equality of two bicategories."""
    if B1.objects != B2.objects:
        return False
    for a, b in itertools.product(B1.objects, repeat=2):
        H1, H2 = B1.hom(a, b), B2.hom(a, b)
        if H1.ends != H2.ends or H1.table != H2.table or H1.identity != H2.identity:
            return False
    for a in B1.objects:
        if B1.unit(a) != B2.unit(a):
            return False
    for g, f in B1.composable_paths(2):
        if B1.comp1(g, f) != B2.comp1(g, f):
            return False
    for a, b, c in itertools.product(B1.objects, repeat=3):
        for beta in B1.all_cells_in(b, c):
            for alpha in B1.all_cells_in(a, b):
                if B1.hcomp(beta, alpha) != B2.hcomp(beta, alpha):
                    return False
    for h, g, f in B1.composable_paths(3):
        if B1.assoc(h, g, f) != B2.assoc(h, g, f):
            return False
    return all(B1.lunitor(f) == B2.lunitor(f) and B1.runitor(f) == B2.runitor(f) for f in B1.all_one_cells())


class OplaxSlice(Bicat):
    """B⫽X: objects are 1-cells f: a → X; a 1-cell f → g is (m, α: f ⇒ g∘m).

    1-cell ids are ``("sl", f, g, m, α)``; a 2-cell (m, α) ⇒ (m', α') is a
    σ: m ⇒ m' with (1_g * σ)·α = α', with id ``("sl2", source, target, σ)``.
    Tight 1-cells are those with α invertible.
    """

    def __init__(self, B: Bicat, X: Id):
        super().__init__()
        self.base = B
        self.apex = X
        self.name = f"{B.name}//{X}"
        self._objs = tuple(f for a in B.objects for f in B.one_cells(a, X))

    @property
    def objects(self):
        return self._objs

    def _hom(self, f, g):
        B = self.base
        a, b = B.src(f), B.src(g)
        cells1 = []
        for m in B.one_cells(a, b):
            for alpha in B.cells(f, B.comp1(g, m)):
                cells1.append(("sl", f, g, m, alpha.mor))
        morphisms, identity, table = {}, {}, {}
        by_pair: dict = {}
        for u in cells1:
            for v in cells1:
                for sigma in B.cells(u[3], v[3]):
                    alpha = Cell2(f, B.comp1(g, u[3]), u[4])
                    if B.vcomp(B.wl(g, sigma), alpha).mor == v[4]:
                        mid = ("sl2", u, v, sigma.mor)
                        morphisms[mid] = (u, v)
                        by_pair.setdefault(u, []).append(mid)
        for u in cells1:
            identity[u] = ("sl2", u, u, B.idc(u[3]).mor)
        Hab = B.hom(a, b)
        for x in morphisms:
            for y in by_pair.get(x[2], ()):
                table[(y, x)] = ("sl2", x[1], y[2], Hab.compose(y[3], x[3]))
        return FinCat(cells1, morphisms, identity, table, name=f"hom({f},{g})")

    def _unit(self, f):
        B = self.base
        return ("sl", f, f, B.unit(B.src(f)), B.runitor_inv(f).mor)

    def _comp1(self, v, u):
        B = self.base
        _, f, g, m, a_mor = u
        _, _, h, n, b_mor = v
        alpha = Cell2(f, B.comp1(g, m), a_mor)
        beta = Cell2(g, B.comp1(h, n), b_mor)
        gamma = B.vcomp(B.assoc(h, n, m), B.wr(beta, m), alpha)
        return ("sl", f, h, B.comp1(n, m), gamma.mor)

    def _hcomp(self, beta, alpha):
        B = self.base
        s = B.hcomp(Cell2(beta.src[3], beta.tgt[3], beta.mor[3]), Cell2(alpha.src[3], alpha.tgt[3], alpha.mor[3]))
        return ("sl2", self.comp1(beta.src, alpha.src), self.comp1(beta.tgt, alpha.tgt), s.mor)

    def _assoc_mor(self, w, v, u):
        B = self.base
        c = B.assoc(w[3], v[3], u[3])
        return ("sl2", self.comp1(self.comp1(w, v), u), self.comp1(w, self.comp1(v, u)), c.mor)

    def _lunitor_mor(self, u):
        B = self.base
        c = B.lunitor(u[3])
        return ("sl2", self.comp1(self.unit(u[2]), u), u, c.mor)

    def _runitor_mor(self, u):
        B = self.base
        c = B.runitor(u[3])
        return ("sl2", self.comp1(u, self.unit(u[1])), u, c.mor)

    def is_tight(self, u) -> bool:
        B = self.base
        return B.is_invertible(Cell2(u[1], B.comp1(u[2], u[3]), u[4]))

    def underlying(self, u) -> Id:
        return u[3]

    def comparison(self, u) -> Cell2:
        B = self.base
        return Cell2(u[1], B.comp1(u[2], u[3]), u[4])


def oplax_slice(B: Bicat, X: Id) -> OplaxSlice:
    return OplaxSlice(B, X)


# ---------------------------------------------------------------------------
# pseudofunctors


class PseudoFunctor:
    """T: source → target with comparison cells φ_{g,f}: Tg∘Tf ⇒ T(gf) and ι_a: 1 ⇒ T(1_a).

    Subclasses (or callables passed in) provide the object, 1-cell and 2-cell
    maps and the raw morphism ids of the comparison cells.
    """

    def __init__(self, source: Bicat, target: Bicat, ob: Callable, one: Callable, two: Callable,
                 comp: Callable, unit: Callable, name: str = "T"):
        self.source = source
        self.target = target
        self._ob, self._one, self._two, self._comp, self._unit = ob, one, two, comp, unit
        self.name = name
        self._memo_one: dict = {}
        self._memo_two: dict = {}
        self._memo_comp: dict = {}
        self._memo_unit: dict = {}

    def ob(self, a: Id) -> Id:
        return self._ob(a)

    def one(self, f: Id) -> Id:
        r = self._memo_one.get(f)
        if r is None:
            r = self._one(f)
            self._memo_one[f] = r
        return r

    def two(self, c: Cell2) -> Cell2:
        r = self._memo_two.get(c)
        if r is None:
            r = Cell2(self.one(c.src), self.one(c.tgt), self._two(c))
            self._memo_two[c] = r
        return r

    def comp_cell(self, g: Id, f: Id) -> Cell2:
        key = (g, f)
        r = self._memo_comp.get(key)
        if r is None:
            B = self.target
            r = Cell2(B.comp1(self.one(g), self.one(f)), self.one(self.source.comp1(g, f)), self._comp(g, f))
            self._memo_comp[key] = r
        return r

    def unit_cell(self, a: Id) -> Cell2:
        r = self._memo_unit.get(a)
        if r is None:
            r = Cell2(self.target.unit(self.ob(a)), self.one(self.source.unit(a)), self._unit(a))
            self._memo_unit[a] = r
        return r

    def comp_inv(self, g: Id, f: Id) -> Cell2:
        return self.target.must_inv(self.comp_cell(g, f))

    def unit_inv(self, a: Id) -> Cell2:
        return self.target.must_inv(self.unit_cell(a))

    def to_json(self) -> dict:
        A = self.source
        j = to_jsonable
        return {
            "objects": [[j(a), j(self.ob(a))] for a in A.objects],
            "one_cells": [[j(f), j(self.one(f))] for f in A.all_one_cells()],
            "two_cells": [[j(c.mor), j(self.two(c).mor)] for a in A.objects for b in A.objects for c in A.all_cells_in(a, b)],
            "comp_cells": [[j(g), j(f), j(self.comp_cell(g, f).mor)] for g, f in A.composable_paths(2)],
            "unit_cells": [[j(a), j(self.unit_cell(a).mor)] for a in A.objects],
        }


def pseudofunctor_from_json(doc: Mapping, A: Bicat, B: Bicat, name: str = "T") -> PseudoFunctor:
    fj = from_jsonable
    try:
        ob = {fj(a): fj(b) for a, b in doc["objects"]}
        one = {fj(f): fj(g) for f, g in doc["one_cells"]}
        two = {fj(m): fj(n) for m, n in doc["two_cells"]}
        comp = {(fj(g), fj(f)): fj(c) for g, f, c in doc["comp_cells"]}
        unit = {fj(a): fj(c) for a, c in doc["unit_cells"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError([Diagnostic("MalformedDocument", (), str(exc))]) from exc
    return PseudoFunctor(A, B, ob.__getitem__, one.__getitem__, lambda c: two[c.mor],
                         lambda g, f: comp[(g, f)], unit.__getitem__, name=name)


def identity_pseudofunctor(B: Bicat) -> PseudoFunctor:
    return PseudoFunctor(B, B, lambda a: a, lambda f: f, lambda c: c.mor,
                         lambda g, f: B.idc(B.comp1(g, f)).mor, lambda a: B.idc(B.unit(a)).mor, name="id")


def locally_discrete_functor(T, source: LocallyDiscrete | None = None, target: LocallyDiscrete | None = None) -> PseudoFunctor:
    """A functor of categories as a strict pseudofunctor between locally discrete bicategories."""
    A = source or LocallyDiscrete(T.source)
    B = target or LocallyDiscrete(T.target)
    return PseudoFunctor(A, B, T.ob, T, lambda c: ("id", T(c.src)),
                         lambda g, f: ("id", T.target.compose(T(g), T(f))),
                         lambda a: ("id", T.target.identity[T.ob(a)]), name="ld(T)")


def check_pseudofunctor(T: PseudoFunctor, stop_after: int | None = None) -> list[Diagnostic]:
    A, B = T.source, T.target
    out: list[Diagnostic] = []
    for a, b in itertools.product(A.objects, repeat=2):
        Hab = A.hom(a, b)
        Ta, Tb = T.ob(a), T.ob(b)
        try:
            tgt_hom = B.hom(Ta, Tb)
            for f in Hab.objects:
                if T.one(f) not in tgt_hom.identity:
                    out.append(Diagnostic("CoherenceViolation", ("one-cell-ends", f)))
            if out:
                return out
            for c in A.all_cells_in(a, b):
                img = T.two(c)
                if img.mor not in tgt_hom.ends or tgt_hom.ends[img.mor] != (img.src, img.tgt):
                    out.append(Diagnostic("CoherenceViolation", ("two-cell-ends", c.mor)))
            if out:
                return out
            for f in Hab.objects:
                if T.two(A.idc(f)) != B.idc(T.one(f)):
                    out.append(Diagnostic("CoherenceViolation", ("identity-2-cell", f)))
            for (m2, m1), m21 in Hab.table.items():
                c1 = Cell2(Hab.dom(m1), Hab.cod(m1), m1)
                c2 = Cell2(Hab.dom(m2), Hab.cod(m2), m2)
                if T.two(A.vcomp(c2, c1)) != B.vcomp(T.two(c2), T.two(c1)):
                    out.append(Diagnostic("CoherenceViolation", ("vertical", m2, m1)))
        except (KeyError, ValueError) as exc:
            out.append(Diagnostic("CoherenceViolation", ("malformed", a, b), str(exc)))
    if out:
        return out
    try:
        for g, f in A.composable_paths(2):
            c = T.comp_cell(g, f)
            H = B.cell_hom(c)
            if c.mor not in H.ends or H.ends[c.mor] != (c.src, c.tgt) or not B.is_invertible(c):
                out.append(Diagnostic("CoherenceViolation", ("comp-cell", g, f)))
        for a in A.objects:
            c = T.unit_cell(a)
            H = B.cell_hom(c)
            if c.mor not in H.ends or H.ends[c.mor] != (c.src, c.tgt) or not B.is_invertible(c):
                out.append(Diagnostic("CoherenceViolation", ("unit-cell", a)))
    except (KeyError, ValueError) as exc:
        out.append(Diagnostic("CoherenceViolation", ("malformed-comparison",), str(exc)))
    if out:
        return out
    # naturality of φ in each variable
    for g, f in A.composable_paths(2):
        phi = T.comp_cell(g, f)
        for beta in [c for c in A.all_cells_in(*A.ends(g)) if c.src == g]:
            lhs = B.vcomp(T.two(A.wr(beta, f)), phi)
            rhs = B.vcomp(T.comp_cell(beta.tgt, f), B.wr(T.two(beta), T.one(f)))
            if lhs != rhs:
                out.append(Diagnostic("CoherenceViolation", ("naturality-left", beta.mor, f)))
        for alpha in [c for c in A.all_cells_in(*A.ends(f)) if c.src == f]:
            lhs = B.vcomp(T.two(A.wl(g, alpha)), phi)
            rhs = B.vcomp(T.comp_cell(g, alpha.tgt), B.wl(T.one(g), T.two(alpha)))
            if lhs != rhs:
                out.append(Diagnostic("CoherenceViolation", ("naturality-right", g, alpha.mor)))
    for h, g, f in A.composable_paths(3):
        if stop_after is not None and len(out) >= stop_after:
            return out
        Th, Tg, Tf = T.one(h), T.one(g), T.one(f)
        lhs = B.vcomp(T.two(A.assoc(h, g, f)), T.comp_cell(A.comp1(h, g), f), B.wr(T.comp_cell(h, g), Tf))
        rhs = B.vcomp(T.comp_cell(h, A.comp1(g, f)), B.wl(Th, T.comp_cell(g, f)), B.assoc(Th, Tg, Tf))
        if lhs != rhs:
            out.append(Diagnostic("CoherenceViolation", ("associativity", h, g, f)))
    for f in A.all_one_cells():
        a, b = A.ends(f)
        Tf = T.one(f)
        lhs = B.vcomp(T.two(A.lunitor(f)), T.comp_cell(A.unit(b), f), B.wr(T.unit_cell(b), Tf))
        if lhs != B.lunitor(Tf):
            out.append(Diagnostic("CoherenceViolation", ("left-unit", f)))
        lhs = B.vcomp(T.two(A.runitor(f)), T.comp_cell(f, A.unit(a)), B.wl(Tf, T.unit_cell(a)))
        if lhs != B.runitor(Tf):
            out.append(Diagnostic("CoherenceViolation", ("right-unit", f)))
    return out


def validate_pseudofunctor(T: PseudoFunctor) -> PseudoFunctor:
    problems = check_pseudofunctor(T)
    if problems:
        raise ValidationError(problems)
    return T


class CorruptedBicat(Bicat):
    """A copy of ``base`` with selected constraint components overridden (test helper)."""

    def __init__(self, base: Bicat, assoc: Mapping | None = None):
        super().__init__()
        self.base = base
        self.overrides = dict(assoc or {})
        self.name = base.name

    @property
    def objects(self):
        return self.base.objects

    def _hom(self, a, b):
        return self.base.hom(a, b)

    def _unit(self, a):
        return self.base.unit(a)

    def _comp1(self, g, f):
        return self.base.comp1(g, f)

    def _hcomp(self, beta, alpha):
        return self.base.hcomp(beta, alpha).mor

    def _assoc_mor(self, h, g, f):
        return self.overrides.get((h, g, f), self.base.assoc(h, g, f).mor)

    def _lunitor_mor(self, f):
        return self.base.lunitor(f).mor

    def _runitor_mor(self, f):
        return self.base.runitor(f).mor
