import random

import pytest
from hypothesis import given, settings, strategies as st

from famcat import fincat as fc
from famcat.corpus import concrete_category, concrete_from_generators
from famcat.errors import ValidationError


def loop_table(table):
    return fc.FinCat(["*"], {m: ("*", "*") for m in {x for row in table for x in row}}, {"*": "i"}, {(g, f): gf for g, f, gf in table})


def test_terminal_and_arrow_validate():
    fc.validate_category(fc.terminal_category())
    arrow = fc.validate_category(fc.walking_arrow())
    assert len(arrow.morphisms) == 3


def test_json_round_trip():
    arrow = fc.walking_arrow()
    again = fc.validate_category(arrow.to_json())
    assert again.table == arrow.table and again.ends == arrow.ends


def test_associativity_violation_on_loop():
    # ff=g, fg=f, gf=g, gg=g: identity laws hold but (ff)f=g while f(ff)=f.
    bad = loop_table([("i", "i", "i"), ("i", "f", "f"), ("f", "i", "f"), ("i", "g", "g"), ("g", "i", "g"),
                      ("f", "f", "g"), ("f", "g", "f"), ("g", "f", "g"), ("g", "g", "g")])
    with pytest.raises(ValidationError) as err:
        fc.validate_category(bad)
    assert err.value.kinds == {"AssociativityViolation"}
    triples = {d.detail for d in err.value.diagnostics}
    assert ("f", "f", "f") in triples


def test_involution_with_broken_identity():
    # ff=i but f∘i=i: both the identity law and associativity on (f,f,f) fail.
    bad = loop_table([("i", "i", "i"), ("i", "f", "f"), ("f", "i", "i"), ("f", "f", "i")])
    kinds = {d.kind for d in fc.check_category(bad)}
    assert kinds == {"IdentityViolation", "AssociativityViolation"}
    assert any(d.detail == ("f", "f", "f") for d in fc.check_category(bad) if d.kind == "AssociativityViolation")


def test_missing_composite_reported():
    arrow = fc.walking_arrow()
    table = dict(arrow.table)
    del table[("f", "1a")]
    broken = fc.FinCat(arrow.objects, arrow.ends, arrow.identity, table)
    assert [d.kind for d in fc.check_category(broken)] == ["MissingComposite"]


def test_functor_checks():
    arrow, chain3 = fc.walking_arrow(), fc.chain(3)
    fc.validate_functor(fc.identity_functor(arrow))
    fc.validate_functor(fc.constant_functor(arrow, chain3, "1"))
    good = fc.FinFunctor(arrow, chain3, {"a": "0", "b": "2"}, {"1a": "10", "1b": "12", "f": "0<=2"})
    fc.validate_functor(good)
    # every mis-assignment of f in the 2-chain is caught
    for m in chain3.morphisms:
        if m == "0<=2":
            continue
        bad = fc.FinFunctor(arrow, chain3, {"a": "0", "b": "2"}, {"1a": "10", "1b": "12", "f": m})
        assert fc.check_functor(bad)


def test_composition_not_preserved():
    # a loop category onto a two-element monoid, sending a non-idempotent to an idempotent
    z3 = fc.from_monoid(["e", "s", "t"], "e", lambda g, f: ["e", "s", "t"][(["e", "s", "t"].index(g) + ["e", "s", "t"].index(f)) % 3])
    z2 = fc.from_monoid(["e", "s"], "e", lambda g, f: "e" if g == f else "s")
    bad = fc.FinFunctor(z3, z2, {"*": "*"}, {"e": "e", "s": "s", "t": "s"})
    kinds = {d.kind for d in fc.check_functor(bad)}
    assert kinds == {"CompositionNotPreserved"}


def test_naturality():
    arrow, chain3 = fc.walking_arrow(), fc.chain(3)
    F = fc.FinFunctor(arrow, chain3, {"a": "0", "b": "1"}, {"1a": "10", "1b": "11", "f": "0<=1"})
    G = fc.FinFunctor(arrow, chain3, {"a": "1", "b": "2"}, {"1a": "11", "1b": "12", "f": "1<=2"})
    fc.validate_nat(fc.NatTrans(F, G, {"a": "0<=1", "b": "1<=2"}))
    assert len(fc.enumerate_nats(F, G)) == 1
    z2 = fc.from_monoid(["e", "s"], "e", lambda g, f: "e" if g == f else "s")
    ident = fc.identity_functor(z2)
    assert {n.key() for n in fc.enumerate_nats(ident, ident)} == {("e",), ("s",)}


def test_components_and_initials():
    rep = fc.components_and_initials(fc.discrete(["x", "y"]))
    assert rep.components == [("x",), ("y",)] and rep.initials == [("x",), ("y",)]
    rep = fc.components_and_initials(fc.walking_arrow())
    assert rep.components == [("a", "b")] and rep.initials == [("a",)]
    rep = fc.components_and_initials(fc.walking_cospan())
    assert rep.components == [("a", "b", "c")] and rep.initials == [()]
    assert fc.components_and_initials(fc.FinCat([], {}, {}, {})).components == []


def test_pullbacks():
    arrow = fc.walking_arrow()
    pb = fc.pullback(arrow, "1a", "1a")
    assert pb.span == fc.SpanInCat("a", "1a", "1a")
    sq = fc.square_poset()
    pb = fc.pullback(sq, "b<=d", "c<=d")
    assert pb.span.apex == "a" and not fc.check_pullback(sq, "b<=d", "c<=d", pb)
    assert fc.pullback(fc.walking_cospan(), "f", "g") is None


def test_slices():
    S, proj = fc.slice_category(fc.terminal_category(), "*")
    assert len(S.objects) == 1 and len(S.morphisms) == 1
    S, proj = fc.slice_category(fc.walking_arrow(), "b")
    assert set(S.objects) == {"f", "1b"}
    assert len([m for m in S.morphisms if not S.is_identity(m)]) == 1
    fc.validate_category(S)
    fc.validate_functor(proj)
    S, proj = fc.slice_category(fc.square_poset(), "d")
    assert len(S.objects) == 4


def test_functor_enumeration_counts():
    arrow = fc.walking_arrow()
    # functors from the arrow into a poset are its comparable pairs
    assert len(fc.enumerate_functors(arrow, fc.square_poset())) == 9
    assert len(fc.enumerate_functors(fc.terminal_category(), arrow)) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_concrete_categories_are_valid(seed):
    C = concrete_category(random.Random(seed))
    assert not fc.check_category(C)
    assert len(C.objects) <= 5 and len(C.morphisms) <= 12
    # associativity by table lookup on every composable triple
    for f in C.morphisms:
        for g in C.out_of(C.cod(f)):
            for h in C.out_of(C.cod(g)):
                assert C.compose(C.compose(h, g), f) == C.compose(h, C.compose(g, f))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_initials_have_singleton_homs(seed):
    C = concrete_category(random.Random(seed))
    rep = fc.components_and_initials(C)
    for comp, inits in zip(rep.components, rep.initials):
        for a in comp:
            sizes = [len(C.hom(a, b)) for b in comp]
            assert (a in inits) == all(s == 1 for s in sizes)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_pullback_certificates_recheck(seed):
    C = concrete_category(random.Random(seed))
    for c in C.objects:
        into = C.into(c)
        for f in into:
            for g in into:
                pb = fc.pullback(C, f, g)
                if pb is not None:
                    assert not fc.check_pullback(C, f, g, pb)
                    for cone, m in pb.mediators.items():
                        assert fc.mediators(C, cone, (pb.span.apex, pb.span.left, pb.span.right)) == [m]


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_slice_projection_valid(seed):
    C = concrete_category(random.Random(seed))
    for X in C.objects:
        S, proj = fc.slice_category(C, X)
        assert not fc.check_category(S)
        assert not fc.check_functor(proj)
        for u in S.objects:
            for v in S.objects:
                images = [proj(m) for m in S.hom(u, v)]
                assert len(images) == len(set(images))


def test_concrete_generator_compose_is_function_composition():
    C = concrete_from_generators({"x": 2, "y": 1}, [("x", "y", (0, 0)), ("y", "x", (1,))])
    assert not fc.check_category(C)
    assert len(C.hom("x", "x")) == 2
