import random

import pytest
from hypothesis import given, settings, strategies as st

from famcat import bicat as bc
from famcat.constructions import span_bz2, span_square_poset
from famcat.corpus import concrete_category
from famcat.factorization import pra_check, spectrum_factorization
from famcat.laxfam import (
    check_generic_factorization,
    generic_index_category,
    is_lax_familial,
    is_lax_generic,
    lax_generic_factorizations,
    lax_generics_out,
    squares_from,
)
from famcat.oracles import brute_force_generic_arrow, brute_force_span_factorizations, brute_force_spans
from famcat.serialize import load_input
from famcat.spectrum import spectrum, slice_comparison, terminal_comparison


def candidates(T):
    A, B = T.source, T.target
    return [(X, a, d) for X in B.objects for a in A.objects for d in B.one_cells(X, T.ob(a))]


def test_span_generic_iff_right_leg_invertible():
    fix = span_square_poset()
    T, B, E = fix.inclusion, fix.bicat, fix.base
    for X, a, d in candidates(T):
        _, r = B.legs[d]
        assert (is_lax_generic(T, d, a) is not None) == E.is_iso(r)


@pytest.mark.parametrize("make, spans, generic, squares", [
    (span_square_poset, 25, 9, 169),
    (span_bz2, 4, 4, 32),
])
def test_frozen_candidate_counts(make, spans, generic, squares):
    fix = make()
    T = fix.inclusion
    found = candidates(T)
    assert len(found) == spans
    objects = fix.base.objects
    assert len(found) == sum(len(brute_force_spans(fix.base, X, a)[0]) for X in objects for a in objects)
    assert sum(is_lax_generic(T, d, a) is not None for _, a, d in found) == generic
    assert sum(len(list(squares_from(T, d, a))) for _, a, d in found) == squares


@pytest.mark.parametrize("make", [span_square_poset, span_bz2])
def test_factorization_counts_match_enumeration(make):
    fix = make()
    T, B = fix.inclusion, fix.bicat
    for X in B.objects:
        for W in fix.base.objects:
            for f in B.one_cells(X, W):
                l, r = B.legs[f]
                facs = lax_generic_factorizations(T, f, W)
                assert len(facs) == brute_force_span_factorizations(fix.base, (fix.base.dom(l), l, r), W)
                assert all(check_generic_factorization(T, fac) for fac in facs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_identity_generic_iff_invertible(seed):
    C = concrete_category(random.Random(seed), max_objects=3, max_morphisms=6)
    T = bc.identity_pseudofunctor(bc.locally_discrete(C))
    for d in C.morphisms:
        generic = is_lax_generic(T, d, C.cod(d)) is not None
        assert generic == brute_force_generic_arrow(C, d) == C.is_iso(d)


@pytest.mark.parametrize("name, familial", [
    ("span-square-poset", True),
    ("span-bz2", True),
    ("identity-cospan", True),
    ("cospan-constant", False),
])
def test_fixture_verdicts(name, familial):
    verdict = is_lax_familial(load_input(name).value)
    assert verdict.familial == familial
    if not familial:
        assert verdict.failures


def test_constant_failure_is_missing_factorization():
    verdict = is_lax_familial(load_input("cospan-constant").value, all_witnesses=True)
    assert {f[0] for f in verdict.failures} == {"NoGenericFactorization"}


@pytest.mark.parametrize("X, size", [("a", (1, 1)), ("b", (2, 3)), ("c", (2, 3)), ("d", (4, 9))])
def test_square_poset_fibers_are_slices(X, size):
    fix = span_square_poset()
    spec = spectrum(fix.inclusion)
    M = spec.fiber(X)
    assert (len(M.objects), len(M.morphisms)) == size
    assert slice_comparison(spec, fix.base, X).status == "equivalent"
    assert len(generic_index_category(fix.inclusion, X).objects) == size[0]


def test_bz2_fiber_is_equivalent_to_slice():
    fix = span_bz2()
    spec = spectrum(fix.inclusion)
    assert (len(spec.fiber("*").objects), len(spec.fiber("*").morphisms)) == (4, 16)
    assert slice_comparison(spec, fix.base, "*").status == "equivalent"


def test_terminal_comparison_on_square_poset():
    fix = span_square_poset()
    spec = spectrum(fix.inclusion)
    for X in fix.bicat.objects:
        cmp = terminal_comparison(spec, X, "d")
        assert cmp.equivalence is not None


def test_generics_out_of_a_are_one():
    T = span_square_poset().inclusion
    assert len(lax_generics_out(T, "a")) == 1
    assert len(lax_generics_out(T, "d")) == 4


@pytest.mark.parametrize("name", ["span-square-poset", "identity-cospan"])
def test_spectrum_factorization(name):
    T = load_input(name).value
    fac = spectrum_factorization(T)
    assert fac.ok
    assert fac.lifts_checked > 0
    assert all(T.target.is_invertible(f.theta) for f in fac.identity_factorizations.values())


@pytest.mark.parametrize("name", ["span-square-poset", "identity-cospan", "cospan-constant"])
def test_pra_agrees_with_familial(name):
    T = load_input(name).value
    assert pra_check(T).holds == is_lax_familial(T).familial
