"""Acceptance criteria 1-9. Each test prints one PASS/FAIL line."""

import itertools
import json
import random
import time
from pathlib import Path

import pytest

from famcat import bicat as bc
from famcat import fincat as fc
from famcat.cli import main
from famcat.constructions import span_bz2, span_composition_functor, span_square_poset, swap_fixture
from famcat.corpus import random_copresheaf, random_indexing
from famcat.diers1d import (
    constant_copresheaf,
    decompose_coproduct,
    el_generics_1d,
    has_decomposition,
    is_familial_1d,
    representable,
    sum_of_representables,
)
from famcat.elbicat import (
    ElBicat,
    constant_singleton,
    decide_lax_colimit_of_reps,
    discrete_copresheaf,
    lax_colimit_of_representables,
    lax_el_generics,
    lemma_violations,
)
from famcat.equiv import find_equivalence
from famcat.errors import DecisionFailure
from famcat.factorization import pra_check, spectrum_factorization
from famcat.laxfam import (
    GenericFactorization,
    check_generic_factorization,
    hom_copresheaf,
    is_lax_familial,
    is_lax_generic,
)
from famcat.oracles import brute_force_decomposition
from famcat.serialize import load_input
from famcat.spectrum import slice_comparison, spectrum, terminal_comparison
from mutations import all_mutations

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str, started: float, budget: float | None = None):
        elapsed = time.perf_counter() - started
        within = budget is None or elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        limit = f" (limit {budget:.0f}s)" if budget else ""
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} - {detail} in {elapsed:.1f}s{limit}")
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {budget}s"
    return emit


def curated_copresheaves():
    square = fc.square_poset()
    cospan = fc.walking_cospan()
    return [
        representable(square, "b"),
        sum_of_representables(square, ["a", "c", "c"]),
        constant_copresheaf(cospan),
        constant_copresheaf(square),
        constant_copresheaf(cospan, elements=()),
        representable(fc.terminal_category(), "*"),
    ]


def test_criterion_1_diers_oracle(report):
    started = time.perf_counter()
    cases = curated_copresheaves() + [random_copresheaf(random.Random(seed)) for seed in range(200)]
    mismatches = []
    for i, F in enumerate(cases):
        oracle = brute_force_decomposition(F)
        if has_decomposition(F) != (oracle is not None):
            mismatches.append(i)
        elif oracle is not None and len(decompose_coproduct(F).index) != len(oracle):
            mismatches.append(i)
    report(1, not mismatches, f"{len(cases)} copresheaves, {len(mismatches)} disagreements", started, 60)


def test_criterion_2_constructed_colimits(report):
    started = time.perf_counter()
    mismatches = []
    for seed in range(50):
        A, M, P = random_indexing(random.Random(seed))
        F = lax_colimit_of_representables(P)
        E = ElBicat(F)
        try:
            verdict = decide_lax_colimit_of_reps(F, E)
        except DecisionFailure as exc:
            mismatches.append((seed, exc.kind))
            continue
        if find_equivalence(verdict.index.cat, M).status != "equivalent":
            mismatches.append((seed, "index not equivalent to M"))
        if set(lax_el_generics(E)) != {o for o in E.objects if A.is_equivalence(o[1][1])}:
            mismatches.append((seed, "generics are not the equivalence triples"))
    report(2, not mismatches, f"50 indexings, {len(mismatches)} mismatches", started, 120)


def test_criterion_3_constant_on_cospan(report):
    started = time.perf_counter()
    cospan = fc.walking_cospan()
    flat = constant_copresheaf(cospan)
    try:
        decompose_coproduct(flat)
        one_dim = "decomposed"
    except DecisionFailure as exc:
        one_dim = exc.kind
    one_dim_ok = one_dim == "ComponentWithoutInitial" and not el_generics_1d(flat)
    kinds = []
    for F in (constant_singleton(bc.locally_discrete(cospan)), discrete_copresheaf(flat)):
        try:
            decide_lax_colimit_of_reps(F)
            kinds.append("decided")
        except DecisionFailure as exc:
            kinds.append(exc.kind)
    ok = one_dim_ok and kinds == ["NoGenericCover", "NoGenericCover"]
    report(3, ok, f"1D {one_dim} with no el-generic, 2D {kinds}", started)


def test_criterion_4_span_fixtures(report):
    started = time.perf_counter()
    problems = []
    for make in (span_square_poset, span_bz2):
        fix = make()
        T = fix.inclusion
        if bc.check_bicategory(fix.bicat):
            problems.append((fix.name, "bicategory"))
        if not is_lax_familial(T).familial:
            problems.append((fix.name, "not lax familial"))
        spec = spectrum(T)
        for X in fix.bicat.objects:
            if slice_comparison(spec, fix.base, X).status != "equivalent":
                problems.append((fix.name, X, "slice"))
            if make is span_square_poset and terminal_comparison(spec, X, "d").equivalence is None:
                problems.append((fix.name, X, "terminal comparison"))
    report(4, not problems, f"2 span bicategories, problems {problems}", started, 120)


def test_criterion_5_swap(report):
    started = time.perf_counter()
    fix = swap_fixture()
    T = fix.fixture.inclusion
    B = T.target
    facs = [GenericFactorization(fix.target, "2", fix.generic, fbar, theta) for fbar, theta in fix.factorizations]
    valid = is_lax_generic(T, fix.generic, "2") is not None and all(check_generic_factorization(T, f) for f in facs)
    first, second = facs
    distinct = first.fbar != second.fbar and not any(
        T.source.is_invertible(e) for e in T.source.cells(first.fbar, second.fbar))
    invertible = all(B.is_invertible(f.theta) for f in facs)
    report(5, valid and distinct and invertible and len(facs) == 2,
           f"factorizations through {[f.fbar for f in facs]}, valid {valid}, distinct {distinct}", started)


def test_criterion_6_span_composition(report):
    started = time.perf_counter()
    failures, triples = [], 0
    for make in (span_square_poset, span_bz2):
        B = make().bicat
        for X, Y, Z in itertools.product(B.objects, repeat=3):
            triples += 1
            if not is_familial_1d(span_composition_functor(B, X, Y, Z)).familial:
                failures.append((X, Y, Z))
    report(6, not failures, f"{triples} composition functors, {len(failures)} not familial", started, 60)


def lemma_corpus():
    for seed in range(30):
        yield f"indexing {seed}", ElBicat(lax_colimit_of_representables(random_indexing(random.Random(seed))[2]))
    for seed in range(30):
        yield f"discrete {seed}", ElBicat(discrete_copresheaf(random_copresheaf(random.Random(seed))))
    for make in (span_square_poset, span_bz2):
        fix = make()
        for X in fix.bicat.objects:
            yield f"{fix.name} hom {X}", ElBicat(hom_copresheaf(fix.inclusion, X))
    yield "constant on cospan", ElBicat(constant_singleton(bc.locally_discrete(fc.walking_cospan())))


def test_criterion_7_lemmas(report):
    started = time.perf_counter()
    violations, instances = [], 0
    for name, E in lemma_corpus():
        instances += 1
        violations += [(name, d.kind) for d in lemma_violations(E)]
    report(7, not violations, f"{instances} bicategories of elements, violations {violations[:3]}", started)


FAMILIAL_FIXTURES = ["span-square-poset", "span-bz2", "identity-cospan"]
TERMINAL_FIXTURES = ["span-square-poset", "identity-cospan", "cospan-constant"]


def test_criterion_8_spectrum_factorization(report):
    started = time.perf_counter()
    problems = []
    for name in FAMILIAL_FIXTURES:
        sf = spectrum_factorization(load_input(name).value)
        if not sf.ok:
            problems.append((name, sf.fibration_failures[:1], sf.lift_failures[:1], sf.composite_failures[:1]))
        if any(not all(rep.axioms.get(k) for k in ("i", "ii", "iii", "iv")) for rep in sf.universal_arrows.values()):
            problems.append((name, "universal arrow axioms"))
    for name in TERMINAL_FIXTURES:
        T = load_input(name).value
        if pra_check(T).holds != is_lax_familial(T).familial:
            problems.append((name, "pra disagrees"))
    report(8, not problems, f"{len(FAMILIAL_FIXTURES)} factorizations, {len(TERMINAL_FIXTURES)} pra checks, "
           f"problems {problems}", started, 180)


CLI_RUNS = [
    ("familial1d", str(SAMPLES / "identity-functor.json")),
    ("familial", "span-square-poset"),
    ("familial", str(SAMPLES / "cospan-constant.json")),
    ("familial", "fam-trunc"),
    ("factor", "swap"),
    ("spectrum", "span-bz2"),
    ("spec-factor", "identity-cospan"),
    ("pra-check", "span-square-poset"),
]


def test_criterion_9_determinism_and_replay(report, tmp_path, capsys):
    started = time.perf_counter()
    nondeterministic, unverified, survivors, mutants = [], [], [], 0
    for i, (verb, source) in enumerate(CLI_RUNS):
        first, second = tmp_path / f"{i}a.json", tmp_path / f"{i}b.json"
        main([verb, source, "--out", str(first)])
        main([verb, source, "--out", str(second)])
        if first.read_bytes() != second.read_bytes():
            nondeterministic.append(verb)
        if main(["--verify", str(first)]) != 0:
            unverified.append((verb, source))
        for label, mutant in all_mutations(json.loads(first.read_text())):
            mutants += 1
            tampered = tmp_path / "tampered.json"
            tampered.write_text(json.dumps(mutant))
            if main(["--verify", str(tampered)]) != 1:
                survivors.append((verb, label))
        capsys.readouterr()
    ok = not (nondeterministic or unverified or survivors) and mutants >= 20
    report(9, ok, f"{len(CLI_RUNS)} witnesses, nondeterministic {nondeterministic}, unverified {unverified}, "
           f"{mutants} mutants, {len(survivors)} survived", started)
