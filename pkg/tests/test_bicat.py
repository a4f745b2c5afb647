import random

import pytest
from hypothesis import given, settings, strategies as st

from famcat import bicat as bc
from famcat import fincat as fc
from famcat.bicat import Cell2
from famcat.constructions import bz2, span_square_poset
from famcat.corpus import concrete_category, random_preordered_bicat


def twisted_z2() -> bc.TableBicat:
    """One object, one 1-cell, 2-cells Z2, associator the non-identity element."""
    H = bz2()
    homs = {("o", "o"): H}
    hcomp = {(b, a): H.compose(b, a) for b in H.morphisms for a in H.morphisms}
    return bc.TableBicat(
        ["o"], homs, {"o": "*"}, {("*", "*"): "*"}, hcomp,
        assoc={("*", "*", "*"): "s"}, lunitor={"*": "e"}, runitor={"*": "e"}, name="twisted",
    )


def untwisted_z2() -> bc.TableBicat:
    B = twisted_z2()
    B.assoc_table = {("*", "*", "*"): "e"}
    return B


def test_locally_discrete_terminal():
    B = bc.locally_discrete(fc.terminal_category())
    assert len(B.objects) == 1
    assert len(B.all_one_cells()) == 1
    assert len(B.all_cells_in(*B.objects * 2)) == 1
    assert not bc.check_bicategory(B)


def test_duals_are_involutions():
    B = span_square_poset().bicat
    assert bc.same_tables(bc.dual_op(bc.dual_op(B)), B)
    assert bc.same_tables(bc.dual_co(bc.dual_co(B)), B)


def test_oplax_slice_of_arrow_counts_triangles():
    S = bc.oplax_slice(bc.locally_discrete(fc.walking_arrow()), "b")
    assert set(S.objects) == {"f", "1b"}
    # triangles p = q∘h: (f, f, 1a), (f, 1b, f), (1b, 1b, 1b)
    assert len(S.all_one_cells()) == 3
    assert not bc.check_bicategory(S)


def test_twisted_associator_breaks_pentagon():
    kinds = {d.kind for d in bc.check_bicategory(twisted_z2())}
    assert "PentagonViolation" in kinds
    assert not bc.check_bicategory(untwisted_z2())


def test_pseudofunctor_identity_and_inclusion():
    fix = span_square_poset()
    assert not bc.check_pseudofunctor(bc.identity_pseudofunctor(fix.bicat), stop_after=3)
    assert not bc.check_pseudofunctor(fix.inclusion)


def test_corrupted_comparison_cell():
    B = untwisted_z2()
    T = bc.identity_pseudofunctor(B)
    assert not bc.check_pseudofunctor(T)
    broken = bc.PseudoFunctor(B, B, T.ob, T.one, lambda c: c.mor, lambda g, f: "s", lambda a: "e")
    assert {d.kind for d in bc.check_pseudofunctor(broken)} == {"CoherenceViolation"}


def test_json_round_trip():
    B = span_square_poset().bicat
    doc = bc.bicat_to_json(B)
    assert bc.same_tables(bc.bicat_from_json(doc), bc.materialize(B))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_locally_discrete_bicategories_are_valid(seed):
    C = concrete_category(random.Random(seed), max_objects=3, max_morphisms=6)
    assert not bc.check_bicategory(bc.locally_discrete(C))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_locally_preordered_bicategories_are_valid(seed):
    B = random_preordered_bicat(random.Random(seed), max_objects=3, max_morphisms=6)
    assert not bc.check_bicategory(B)
    assert bc.is_strict(B)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_identity_cells_are_units(seed):
    B = random_preordered_bicat(random.Random(seed), max_objects=3, max_morphisms=6)
    for a in B.objects:
        for b in B.objects:
            H = B.hom(a, b)
            for f in H.objects:
                for g in H.objects:
                    for c1 in B.cells(f, g):
                        assert B.vcomp(B.idc(g), c1) == c1 == B.vcomp(c1, B.idc(f))


def test_cell_ends_are_checked():
    B = bc.locally_discrete(fc.walking_arrow())
    c = B.idc("f")
    assert isinstance(c, Cell2) and c.src == c.tgt == "f"
    with pytest.raises(ValueError):
        B.vcomp(B.idc("1a"), c)
