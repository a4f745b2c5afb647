import random

import pytest
from hypothesis import given, settings, strategies as st

from famcat import diers1d as d
from famcat import fincat as fc
from famcat.corpus import concrete_category, forgetful_copresheaf, random_copresheaf
from famcat.errors import DecisionFailure
from famcat.oracles import brute_force_decomposition, brute_force_generic_objects


def arrow_example():
    arrow = fc.walking_arrow()
    return d.SetCopresheaf(arrow, {"a": ["x"], "b": ["y", "z"]}, {"1a": {"x": "x"}, "1b": {"y": "y", "z": "z"}, "f": {"x": "y"}})


def test_copresheaf_validation():
    d.validate_copresheaf(arrow_example())
    arrow = fc.walking_arrow()
    bad = d.SetCopresheaf(arrow, {"a": ["x"], "b": ["y"]}, {"1a": {"x": "x"}, "1b": {"y": "y"}, "f": {}})
    assert [p.kind for p in d.check_copresheaf(bad)] == ["ActionNotTotal"]


def test_el_of_constant_is_base():
    C = fc.square_poset()
    el = d.category_of_elements(d.constant_copresheaf(C)).cat
    assert len(el.objects) == len(C.objects) and len(el.morphisms) == len(C.morphisms)
    iso = fc.FinFunctor(el, C, {o: o[0] for o in el.objects}, {m: m[0] for m in el.morphisms})
    assert not fc.check_functor(iso)
    assert len(set(iso.on_morphisms.values())) == len(C.morphisms)


def test_el_of_representable():
    C = fc.square_poset()
    F = d.representable(C, "b")
    el = d.category_of_elements(F).cat
    start = ("b", "1b")
    assert all(len(el.hom(start, o)) == 1 for o in el.objects)
    assert d.el_generics_1d(F) == [start]
    dec = d.decompose_coproduct(F)
    assert dec.index == [start] and not d.check_decomposition(F, dec)


def test_arrow_example():
    F = arrow_example()
    el = d.category_of_elements(F)
    assert len(el.cat.objects) == 3
    assert el.cat.hom(("a", "x"), ("b", "y")) == (("f", "x"),)
    assert el.cat.hom(("a", "x"), ("b", "z")) == ()
    assert not fc.check_functor(el.projection)
    assert d.el_generics_1d(F) == [("a", "x"), ("b", "z")]
    dec = d.decompose_coproduct(F)
    assert dec.family() == ["a", "b"]
    assert not d.check_decomposition(F, dec)


def test_constant_on_cospan_fails():
    F = d.constant_copresheaf(fc.walking_cospan())
    assert d.el_generics_1d(F) == []
    with pytest.raises(DecisionFailure) as err:
        d.decompose_coproduct(F)
    assert err.value.kind == "ComponentWithoutInitial" and len(err.value.witness) == 1
    assert brute_force_decomposition(F) is None


def test_identity_functor_generics():
    C = fc.square_poset()
    T = fc.identity_functor(C)
    for f in C.morphisms:
        fac = d.generic_factorization_1d(T, f, C.cod(f))
        assert (fac.generic, fac.factor) == (C.identity[C.dom(f)], f)
    # a non-invertible x fails the unique-diagonal test
    assert not d.is_generic_1d(T, "a", "b", "a<=b")
    fac = d.diers_factorization(T)
    assert not d.check_diers_factorization(T, fac)
    assert len(fac.mid.objects) == len(C.objects) and len(fac.mid.morphisms) == len(C.morphisms)


def test_constant_functor_not_familial():
    cospan, arrow = fc.walking_cospan(), fc.walking_arrow()
    T = fc.constant_functor(cospan, arrow, "b")
    verdict = d.is_familial_1d(T, all_witnesses=True)
    assert not verdict.familial and set(verdict.failures) == {"a", "b"}
    with pytest.raises(DecisionFailure) as err:
        d.diers_factorization(T)
    assert err.value.kind == "NotFamilial"


def test_forgetful_of_sets_is_familial_on_concrete_categories():
    C = fc.from_preorder(["x", "y"], [("x", "y")])
    T = fc.identity_functor(C)
    assert d.is_familial_1d(T).familial


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_decomposition_agrees_with_oracle(seed):
    F = random_copresheaf(random.Random(seed))
    assert not d.check_copresheaf(F)
    ours = d.has_decomposition(F)
    assert ours == (brute_force_decomposition(F) is not None)
    generics = d.el_generics_1d(F)
    assert set(generics) == set(brute_force_generic_objects(F))
    # success iff generics meet every component
    el = d.category_of_elements(F).cat
    comps = fc.components_and_initials(el).components
    assert ours == all(any(g in comp for g in generics) for comp in comps)
    if ours:
        assert not d.check_decomposition(F, d.decompose_coproduct(F))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_generic_morphisms_between_generics_are_unique_isos(seed):
    F = random_copresheaf(random.Random(seed))
    el = d.category_of_elements(F).cat
    generics = d.el_generics_1d(F)
    for g1 in generics:
        for g2 in generics:
            homs = el.hom(g1, g2)
            assert len(homs) <= 1
            if homs:
                assert el.is_iso(homs[0])


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_functors_factorizations(seed):
    rng = random.Random(seed)
    A = concrete_category(rng, max_objects=3, max_morphisms=8)
    B = concrete_category(rng, max_objects=3, max_morphisms=8)
    functors = fc.enumerate_functors(A, B, limit=50)
    if not functors:
        return
    T = rng.choice(functors)
    familial = d.is_familial_1d(T).familial
    assert familial == d.admits_generic_factorizations(T)
    if familial:
        fac = d.diers_factorization(T)
        assert not d.check_diers_factorization(T, fac)
        for W in A.objects:
            for X in B.objects:
                for f in B.hom(X, T.ob(W)):
                    gf = d.generic_factorization_1d(T, f, W)
                    assert not d.check_generic_factorization_1d(T, f, W, gf)


def test_forgetful_copresheaf_valid():
    C = concrete_category(random.Random(3))
    assert not d.check_copresheaf(forgetful_copresheaf(C))
