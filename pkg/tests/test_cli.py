import json

import pytest
from click.testing import CliRunner

from main import cli


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("QFUEL", "SFUEL", "SEED", "CASES", "LOG_LEVEL"):
        monkeypatch.delenv(f"ORACLE_ENGINE_{name}", raising=False)


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def records(result):
    return [json.loads(line) for line in result.output.splitlines() if line.startswith("{")]


def test_run_threshold_outputs_true():
    result = invoke("run", "threshold", "--input", "3", "--oracle", "all-true", "--qfuel", "5", "--sfuel", "100")
    assert result.exit_code == 0
    assert records(result) == [
        {"result": "out", "value": True, "qs": [0, 1, 2], "ans": [True, True, True], "budget": {"questions": 5, "steps": 100}}
    ]


def test_run_threshold_against_all_false_times_out():
    result = invoke("run", "threshold", "--input", "3", "--oracle", "all-false")
    assert result.exit_code == 2
    assert records(result)[0]["result"] == "timeout"


def test_run_out_of_questions_exits_3():
    result = invoke("run", "threshold", "--input", "3", "--oracle", "all-true", "--qfuel", "1")
    assert result.exit_code == 3
    assert records(result)[0]["value"] == 1


def test_run_ident_relays_the_answer():
    result = invoke("run", "ident", "--input", "5", "--oracle", "all-true")
    record = records(result)[0]
    assert (record["qs"], record["ans"], record["value"]) == ([5], [True], True)


def test_run_parity_of_answers_integers():
    result = invoke("run", "ident", "--input", "7", "--oracle", "parity-of")
    assert records(result)[0]["value"] == 1


def test_run_search_reads_the_last_component():
    result = invoke("run", "search", "--input", "4", "--oracle", "odds")
    record = records(result)[0]
    assert record["value"] == 1
    assert record["qs"] == [[4, 0], [4, 1]]


def test_run_with_table_oracle(tmp_path):
    path = tmp_path / "oracle.json"
    path.write_text(json.dumps([{"q": 0, "a": [True]}, {"q": 1, "a": [True]}]))
    result = invoke("run", "threshold", "--input", "2", "--oracle", str(path))
    assert result.exit_code == 0
    assert records(result)[0]["value"] is True


def test_run_with_relational_table_is_an_error(tmp_path):
    path = tmp_path / "oracle.json"
    path.write_text(json.dumps([{"q": 0, "a": [True, False]}]))
    assert invoke("run", "threshold", "--input", "1", "--oracle", str(path)).exit_code == 1


def test_run_with_missing_oracle_file_is_an_error():
    assert invoke("run", "threshold", "--input", "1", "--oracle", "no-such-oracle.json").exit_code == 1


def test_unknown_tree_is_a_usage_error():
    assert invoke("run", "nope", "--input", "1", "--oracle", "all-true").exit_code == 1


def test_reduce_refl_gives_parity():
    result = invoke("reduce", "refl", "--oracle", "evens", "--range", "0..5")
    assert result.exit_code == 0
    assert records(result) == [{"x": x, "verdict": "true" if x % 2 == 0 else "false"} for x in range(6)]


def test_reduce_manyone_and_complement():
    shifted = records(invoke("reduce", "manyone", "--range", "1..1"))
    assert shifted == [{"x": 1, "verdict": "true"}]
    flipped = records(invoke("reduce", "complement", "--range", "2..3"))
    assert [r["verdict"] for r in flipped] == ["false", "true"]


def test_reduce_deficiency_double_gives_evens():
    result = invoke("reduce", "deficiency", "--enum", "double", "--range", "0..10")
    assert [r["verdict"] for r in records(result)] == ["true" if x % 2 == 0 else "false" for x in range(11)]


def test_reduce_pt_evens_gives_parity():
    result = invoke("reduce", "pt", "--p", "evens", "--range", "0..10")
    assert [r["verdict"] for r in records(result)] == ["true" if x % 2 == 0 else "false" for x in range(11)]


def test_reduce_tt_needs_a_table():
    result = invoke("reduce", "tt", "--range", "0..3")
    assert result.exit_code == 1
    assert "truth table" in result.output


def test_reduce_rejects_empty_range():
    assert invoke("reduce", "refl", "--range", "5..1").exit_code == 1
    assert invoke("reduce", "refl", "--range", "five").exit_code == 1


def test_reduce_tt_with_table_file(tmp_path):
    path = tmp_path / "xor.json"
    path.write_text(json.dumps({"offsets": [0, 1], "table": [False, True, True, False]}))
    result = invoke("reduce", "tt", "--table", str(path), "--range", "0..4")
    assert [r["verdict"] for r in records(result)] == ["true"] * 5


def test_tt_command_reports_direct_and_reduced_verdicts(tmp_path):
    path = tmp_path / "and.json"
    path.write_text(json.dumps({"offsets": [0, 2], "table": [False, False, False, True]}))
    result = invoke("tt", "--table", str(path), "--range", "0..3", "--oracle", "evens")
    rows = records(result)
    assert [r["direct"] for r in rows] == [True, False, True, False]
    assert [r["verdict"] for r in rows] == ["true", "false", "true", "false"]
    assert rows[1]["queries"] == [1, 3]


def test_tt_command_rejects_bad_table(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"offsets": [0, 1], "table": [True]}))
    assert invoke("tt", "--table", str(path), "--range", "0..3").exit_code == 1


def test_pt_command_with_oracle_passthrough():
    result = invoke("pt", "--p", "oracle", "--oracle", "odds", "--range", "0..4")
    rows = records(result)
    assert [r["verdict"] for r in rows] == ["false", "true", "false", "true", "false"]
    assert all(r["verdict"] == ("true" if r["expected"] else "false") for r in rows)


def test_pt_command_with_padding():
    rows = records(invoke("pt", "--p", "evens", "--range", "0..6", "--padding", "5"))
    assert all(r["verdict"] == ("true" if r["expected"] else "false") for r in rows)


def test_demo_hypersimple_xor1_accepts_everything():
    rows = records(invoke("demo-hypersimple", "--enum", "xor1", "--range", "0..10"))
    assert [r["verdict"] for r in rows] == ["true"] * 11
    assert all(r["expected"] for r in rows)


def test_selftest_with_zero_cases():
    result = invoke("selftest", "--cases", "0")
    assert result.exit_code == 0
    rows = records(result)
    assert len(rows) == 10
    assert all(r["cases"] == 0 and r["failures"] == 0 for r in rows)


def test_selftest_output_is_deterministic():
    first = invoke("selftest", "--seed", "7", "--cases", "4", "--suite", "truth-tables", "--suite", "modulus")
    second = invoke("selftest", "--seed", "7", "--cases", "4", "--suite", "truth-tables", "--suite", "modulus")
    assert first.exit_code == 0
    assert records(first) == records(second)


def test_selftest_with_broken_truth_tables_fails():
    result = invoke("selftest", "--cases", "20", "--break-tt", "--suite", "truth-tables")
    assert result.exit_code == 4
    assert "minimal counterexample" in result.output


def test_selftest_plot(tmp_path):
    path = tmp_path / "summary.png"
    result = invoke("selftest", "--cases", "3", "--suite", "truth-tables", "--plot", str(path))
    assert result.exit_code == 0
    assert path.exists()


def test_malformed_environment_is_an_error(monkeypatch):
    monkeypatch.setenv("ORACLE_ENGINE_QFUEL", "lots")
    result = invoke("run", "ident", "--input", "1", "--oracle", "all-true")
    assert result.exit_code == 1
    assert "ORACLE_ENGINE_QFUEL" in result.output


def test_run_can_list_transcripts_first():
    result = invoke("run", "threshold", "--input", "2", "--oracle", "all-true", "--qfuel", "3", "--transcripts")
    assert result.exit_code == 0
    rows = records(result)
    assert rows[:3] == [
        {"qs": [], "ans": [], "out": None, "verdict": "valid"},
        {"qs": [0], "ans": [True], "out": None, "verdict": "valid"},
        {"qs": [0, 1], "ans": [True, True], "out": True, "verdict": "valid"},
    ]
    assert rows[3]["result"] == "out"


def test_reduce_rejects_non_boolean_oracle_table(tmp_path):
    path = tmp_path / "ints.json"
    path.write_text(json.dumps([{"q": x, "a": [x % 2]} for x in range(4)]))
    assert invoke("reduce", "refl", "--oracle", str(path), "--range", "0..3").exit_code == 1
