import itertools

import pytest

from famcat import bicat as bc
from famcat import fincat as fc
from famcat.constructions import (
    fam_relative_generic,
    fam_truncated,
    small_universe,
    span_bicategory,
    span_bz2,
    span_composition_functor,
    span_square_poset,
    swap_fixture,
)
from famcat.diers1d import hom_copresheaf_1d, is_familial_1d
from famcat.errors import CapExceeded
from famcat.laxfam import GenericFactorization, check_generic_factorization, is_lax_generic
from famcat.oracles import brute_force_decomposition, brute_force_spans


def test_span_of_terminal():
    B = span_bicategory(fc.terminal_category()).bicat
    (o,) = B.objects
    H = B.hom(o, o)
    assert len(H.objects) == 1 and len(H.morphisms) == 1


@pytest.mark.parametrize("make", [span_square_poset, span_bz2])
def test_span_homs_match_enumeration(make):
    fix = make()
    for X, Y in itertools.product(fix.bicat.objects, repeat=2):
        spans, maps = brute_force_spans(fix.base, X, Y)
        H = fix.bicat.hom(X, Y)
        assert (len(H.objects), len(H.morphisms)) == (len(spans), len(maps))


def test_square_poset_hom_a_d_is_pentagon_checked():
    B = span_square_poset().bicat
    H = B.hom("a", "d")
    assert len(H.objects) == 1
    assert not bc.check_bicategory(B)


def test_bz2_spans():
    fix = span_bz2()
    H = fix.bicat.hom("*", "*")
    assert (len(H.objects), len(H.morphisms)) == (4, 8)
    # every span is rigid, and the non-identity maps are isomorphisms between distinct spans
    assert all(m == H.identity[H.dom(m)] for m in H.morphisms if H.dom(m) == H.cod(m))
    assert all(H.is_iso(m) for m in H.morphisms)
    # E = B(Z2) has no terminal object: its only hom has two elements
    assert len(fix.base.hom("*", "*")) == 2


def test_span_composition_on_terminal():
    B = span_bicategory(fc.terminal_category()).bicat
    (o,) = B.objects
    c = span_composition_functor(B, o, o, o)
    assert len(c.source.objects) == len(c.target.objects) == 1
    assert is_familial_1d(c).familial


def test_span_composition_a_b_d():
    B = span_square_poset().bicat
    c = span_composition_functor(B, "a", "b", "d")
    verdict = is_familial_1d(c)
    assert verdict.familial
    # one index per span p: a ← P → d, matching p ↦ (P → a, P → b, P → d)
    for X, dec in verdict.decompositions.items():
        assert len(dec.index) == 1


def test_span_composition_bz2_index_sizes():
    B = span_bz2().bicat
    c = span_composition_functor(B, "*", "*", "*")
    verdict = is_familial_1d(c)
    assert verdict.familial
    for X, dec in verdict.decompositions.items():
        oracle = brute_force_decomposition(hom_copresheaf_1d(c, X))
        assert oracle is not None and len(oracle) == len(dec.index)


def test_swap_factorizations_validate_and_differ():
    fix = swap_fixture()
    T = fix.fixture.inclusion
    B = T.target
    assert is_lax_generic(T, fix.generic, "2") is not None
    facs = [GenericFactorization(fix.target, "2", fix.generic, fbar, theta) for fbar, theta in fix.factorizations]
    assert sorted(f.fbar for f in facs) == ["2>2:01", "2>2:10"]
    assert all(check_generic_factorization(T, f) for f in facs)
    # a comparison would be an invertible 2-cell between the two f̄ in a locally discrete source
    first, second = facs
    assert not T.source.cells(first.fbar, second.fbar)
    assert not T.source.cells(second.fbar, first.fbar)
    assert B.is_invertible(first.theta) and B.is_invertible(second.theta)


def test_swap_fragment_is_capped():
    B = swap_fixture().fixture.bicat
    B.hom("2", "2")
    constant = B.span("2>2:00", "2>2:00")
    with pytest.raises(CapExceeded):
        B.comp1(constant, constant)


def test_fam_truncated_counts():
    F = fam_truncated(fc.terminal_category(), 2)
    assert len(F.objects) == 3
    # index functions between sizes n, m ≤ 2: Σ m^n
    assert len(F.morphisms) == sum(m ** n for n in range(3) for m in range(3))
    assert not fc.check_category(F)


@pytest.mark.parametrize("C", [fc.terminal_category(), fc.walking_arrow(), fc.square_poset()])
def test_fam_truncated_zero_is_terminal(C):
    F = fam_truncated(C, 0)
    assert len(F.objects) == 1 and len(F.morphisms) == 1


def test_fam_relative_generics():
    U = small_universe()
    assert fam_relative_generic(U, 2, ("I", ("fam", (0, 1)))).generic
    assert fam_relative_generic(U, 2, ("1", ("fam", ("*",)))).generic
    assert not fam_relative_generic(U, 2, ("I", ("fam", (0,)))).generic
    assert not fam_relative_generic(U, 2, ("2", ("fam", ("a", "b")))).generic
    assert fam_relative_generic(U, 2, ("I", ("fam", (0, 1)))).scope == "relative"
