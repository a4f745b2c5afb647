import json
from pathlib import Path

import pytest

from famcat.cli import main
from mutations import all_mutations

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

RUNS = [
    ("familial1d", str(SAMPLES / "identity-functor.json"), 0),
    ("familial", "span-square-poset", 0),
    ("familial", str(SAMPLES / "cospan-constant.json"), 1),
    ("familial", "identity-cospan", 0),
    ("familial", "span-bz2", 0),
    ("familial", "fam-trunc", 0),
    ("factor", "swap", 0),
    ("spectrum", "span-square-poset", 0),
    ("spectrum", "span-bz2", 0),
    ("spec-factor", "identity-cospan", 0),
    ("pra-check", "span-square-poset", 0),
    ("pra-check", "cospan-constant", 1),
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def make_witness(tmp_path, verb, source, *extra):
    path = tmp_path / f"{verb}-{Path(source).stem}.json"
    code = main([verb, source, "--out", str(path), *extra])
    return code, path


@pytest.mark.parametrize("verb, source, expected", RUNS)
def test_witness_round_trip(tmp_path, capsys, verb, source, expected):
    code, path = make_witness(tmp_path, verb, source)
    assert code == expected
    doc = json.loads(path.read_text())
    assert doc["verdict"] == ("yes" if expected == 0 else "no")
    code, report = run(["--verify", str(path)], capsys)
    assert code == 0 and report["verified"] and not report["mismatches"]


def test_familial_span_square_poset_carries_slice_equivalences(capsys):
    code, doc = run(["familial", "span-square-poset"], capsys)
    assert code == 0
    slices = [c for c in doc["certificates"] if c["type"] == "slice-equivalence"]
    assert {c["X"] for c in slices} == {"a", "b", "c", "d"}
    assert all(c["status"] == "equivalent" for c in slices)


def test_cospan_constant_counterexample(capsys):
    code, doc = run(["familial", str(SAMPLES / "cospan-constant.json")], capsys)
    assert code == 1
    assert doc["counterexample"]["kind"] == "NoGenericFactorization"


def test_output_is_byte_identical(tmp_path, monkeypatch):
    _, first = make_witness(tmp_path, "familial", "span-square-poset")
    again = tmp_path / "again.json"
    main(["familial", "span-square-poset", "--out", str(again)])
    assert first.read_bytes() == again.read_bytes()
    monkeypatch.setenv("LAXFAM_THREADS", "4")
    threaded = tmp_path / "threaded.json"
    serial = tmp_path / "serial.json"
    main(["familial1d", "random-copresheaf", "--seed", "9", "--out", str(threaded)])
    monkeypatch.setenv("LAXFAM_THREADS", "1")
    main(["familial1d", "random-copresheaf", "--seed", "9", "--out", str(serial)])
    assert threaded.read_bytes() == serial.read_bytes()


@pytest.mark.parametrize("verb, source, expected", [r for r in RUNS if r[0] != "familial1d"] + [
    ("familial1d", "random-copresheaf", None),
])
def test_mutated_witnesses_fail(tmp_path, capsys, verb, source, expected):
    extra = ["--seed", "9"] if source == "random-copresheaf" else []
    make_witness(tmp_path, verb, source, *extra)
    path = next(tmp_path.glob("*.json"))
    doc = json.loads(path.read_text())
    mutants = list(all_mutations(doc))
    assert len(mutants) >= 5
    for label, mutant in mutants:
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(mutant))
        code, report = run(["--verify", str(tampered)], capsys)
        assert code == 1, label
        assert not report["verified"] and report["mismatches"], label


def test_mutations_cover_twenty_cases(tmp_path):
    total = 0
    for verb, source, _ in RUNS:
        sub = tmp_path / verb / Path(source).stem
        sub.mkdir(parents=True)
        _, path = make_witness(sub, verb, source)
        total += len(list(all_mutations(json.loads(path.read_text()))))
    assert total >= 20


def test_changed_digest_is_invalid_input(tmp_path, capsys):
    _, path = make_witness(tmp_path, "familial", "span-square-poset")
    doc = json.loads(path.read_text())
    doc["input"]["digest"] = "0" * 64
    path.write_text(json.dumps(doc))
    code, report = run(["--verify", str(path)], capsys)
    assert code == 3 and report["diagnostics"][0]["kind"] == "DigestMismatch"


def test_bounds_exceeded(capsys):
    code, report = run(["familial", "span-square-poset", "--bound-objects", "2"], capsys)
    assert code == 2 and report["error"] == "BoundExceeded"


def test_invalid_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, report = run(["familial", str(bad)], capsys)
    assert code == 3 and report["error"] == "InvalidInput"


def test_schema_violation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "functor", "schema": "nonsense"}))
    code, _ = run(["familial1d", str(bad)], capsys)
    assert code == 3


def test_wrong_input_kind(capsys):
    code, report = run(["familial1d", "span-square-poset"], capsys)
    assert code == 3 and report["diagnostics"][0]["kind"] == "WrongInputKind"


def test_random_input_needs_seed(capsys):
    code, report = run(["familial1d", "random-copresheaf"], capsys)
    assert code == 3 and report["diagnostics"][0]["kind"] == "SeedRequired"


def test_pra_check_without_terminal(capsys):
    code, report = run(["pra-check", "span-bz2"], capsys)
    assert code == 3 and report["error"] == "NoTerminalObject"


def test_usage_error_exits_three(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["familial", "span-square-poset", "--bound-objects", "many"])
    assert exc.value.code == 3


def test_factor_rejects_unknown_one_cell(capsys):
    code, report = run(["factor", "span-square-poset", "--one-cell", '["a", "b", "nope"]'], capsys)
    assert code == 3 and report["diagnostics"][0]["kind"] == "NoSuchOneCell"


def test_fixtures_list_and_emit(tmp_path, capsys):
    code, listing = run(["fixtures"], capsys)
    assert code == 0 and "span-square-poset" in listing["fixtures"] and "swap" in listing["fixtures"]
    out = tmp_path / "poset.json"
    assert main(["fixtures", "span-square-poset", "--out", str(out)]) == 0
    code, from_file = run(["familial", str(out)], capsys)
    code2, from_name = run(["familial", "span-square-poset"], capsys)
    assert code == code2 == 0
    assert from_file["input"]["digest"] == from_name["input"]["digest"]
    assert from_file["certificates"] == from_name["certificates"]
