import csv
import json

import pytest

from logstencil.cli import main


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def test_parse_writes_structured_templates_stats_and_tree(
    tmp_path, fixture_log_path, fixture_truth_path
):
    out = tmp_path / "run1"
    code = run_cli(
        "parse",
        "--input", fixture_log_path,
        "--output-dir", out,
        "--backend", "mock",
        "--fixture", fixture_truth_path,
    )
    assert code == 0
    structured = read_csv(out / "mini_structured.csv")
    assert len(structured) == 200
    assert set(structured[0]) == {"LineId", "Content", "EventTemplate"}
    templates = read_csv(out / "mini_templates.csv")
    assert len(templates) <= 20
    assert sum(int(row["Occurrences"]) for row in templates) == 200
    stats = json.loads((out / "mini_stats.json").read_text())
    assert stats["records_total"] == 200
    assert stats["llm_parse_calls"] <= 20
    assert (out / "mini_tree.tsv").exists()


def test_parse_then_warm_rerun_needs_no_llm(tmp_path, fixture_log_path, fixture_truth_path):
    first = tmp_path / "first"
    run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", first,
        "--backend", "mock", "--fixture", fixture_truth_path,
    )
    second = tmp_path / "second"
    code = run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", second,
        "--backend", "mock", "--fixture", fixture_truth_path,
        "--warm-tree", first / "mini_tree.tsv",
    )
    assert code == 0
    stats = json.loads((second / "mini_stats.json").read_text())
    assert stats["llm_parse_calls"] == 0
    assert stats["cache_hits"] == 200


def test_parse_is_byte_deterministic(tmp_path, fixture_log_path, fixture_truth_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        run_cli(
            "parse", "--input", fixture_log_path, "--output-dir", out,
            "--backend", "mock", "--fixture", fixture_truth_path,
        )
        outputs.append(
            (
                (out / "mini_structured.csv").read_bytes(),
                (out / "mini_templates.csv").read_bytes(),
                (out / "mini_tree.tsv").read_bytes(),
            )
        )
    assert outputs[0] == outputs[1]


def test_parse_missing_history_warns_and_runs_zero_shot(
    tmp_path, fixture_log_path, fixture_truth_path, capsys
):
    code = run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", tmp_path / "o",
        "--backend", "mock", "--fixture", fixture_truth_path,
    )
    assert code == 0
    assert "zero-shot" in capsys.readouterr().err


def test_parse_with_history_seeds_candidates(tmp_path, fixture_log_path, fixture_truth_path):
    out = tmp_path / "o"
    code = run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", out,
        "--backend", "mock", "--fixture", fixture_truth_path,
        "--history", fixture_truth_path, "--candidates", "8",
    )
    assert code == 0
    stats = json.loads((out / "mini_stats.json").read_text())
    assert stats["candidates_final"] >= 8


def test_parse_evaluates_against_truth(tmp_path, fixture_log_path, fixture_truth_path, capsys):
    out = tmp_path / "o"
    code = run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", out,
        "--backend", "mock", "--fixture", fixture_truth_path,
        "--truth", fixture_truth_path,
    )
    assert code == 0
    report = json.loads((out / "mini_report.json").read_text())
    assert report["GA"] == 1.0
    assert report["FTA"] == 1.0
    assert "GA: 1.0" in capsys.readouterr().out


def test_parse_strips_headers(tmp_path, fixture_truth_path):
    log = tmp_path / "headered.log"
    log.write_text(
        "2024-05-01 10:00:01 INFO kernel: out of memory killing process 8812\n"
        "2024-05-01 10:00:02 WARN kernel: out of memory killing process 4141\n",
        encoding="utf-8",
    )
    out = tmp_path / "o"
    code = run_cli(
        "parse", "--input", log, "--output-dir", out,
        "--backend", "mock", "--fixture", fixture_truth_path,
        "--header-pattern",
        r"^\S+ \S+ (?P<Level>\w+) (?P<Content>.*)$",
    )
    assert code == 0
    rows = read_csv(out / "headered_structured.csv")
    assert rows[0]["Content"].startswith("kernel: out of memory")
    assert rows[0]["EventTemplate"] == "kernel: out of memory killing process <*>"


def test_parse_csv_input(tmp_path, fixture_truth_path):
    out = tmp_path / "o"
    code = run_cli(
        "parse", "--input", fixture_truth_path, "--output-dir", out,
        "--backend", "mock", "--fixture", fixture_truth_path,
    )
    assert code == 0
    rows = read_csv(out / "mini_truth_structured.csv")
    assert len(rows) == 200


def test_parse_unreadable_input_fails(tmp_path, fixture_truth_path):
    code = run_cli(
        "parse", "--input", tmp_path / "missing.log", "--output-dir", tmp_path / "o",
        "--backend", "mock", "--fixture", fixture_truth_path,
    )
    assert code != 0


def test_parse_rejects_bad_backend_config(tmp_path, fixture_log_path):
    code = run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", tmp_path / "o",
        "--backend", "http",
    )
    assert code != 0


def test_parse_config_file_with_flag_precedence(tmp_path, fixture_log_path, fixture_truth_path):
    config = tmp_path / "run.json"
    config.write_text(
        json.dumps(
            {
                "backend": "mock",
                "fixture_path": str(fixture_truth_path),
                "demonstrations": 1,
                "candidates": 4,
            }
        ),
        encoding="utf-8",
    )
    out = tmp_path / "o"
    code = run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", out,
        "--config", config, "--candidates", "2",
    )
    assert code == 0  # flags overrode K=4 with K=2; file supplied the backend


def test_evaluate_command_perfect(tmp_path, fixture_log_path, fixture_truth_path, capsys):
    out = tmp_path / "o"
    run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", out,
        "--backend", "mock", "--fixture", fixture_truth_path,
    )
    code = run_cli(
        "evaluate", "--parsed", out / "mini_structured.csv", "--truth", fixture_truth_path,
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "GA: 1.0" in printed
    assert "FGA: 1.0" in printed
    assert (out / "mini_structured_report.json").exists()


def test_evaluate_command_five_message_fixture(tmp_path, capsys):
    def write(path, rows):
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["LineId", "Content", "EventTemplate"])
            writer.writerows(rows)

    truth = tmp_path / "truth.csv"
    parsed = tmp_path / "parsed.csv"
    write(truth, [
        (1, "connected to a", "connected to <*>"),
        (2, "connected to b", "connected to <*>"),
        (3, "connected to c", "connected to <*>"),
        (4, "shutdown succeeded", "shutdown succeeded"),
        (5, "shutdown succeeded", "shutdown succeeded"),
    ])
    write(parsed, [
        (1, "connected to a", "connected to <*>"),
        (2, "connected to b", "connected to <*>"),
        (3, "connected to c", "connected to <*>"),
        (4, "shutdown succeeded", "shutdown succeeded"),
        (5, "shutdown succeeded", "shutdown <*>"),
    ])
    code = run_cli("evaluate", "--parsed", parsed, "--truth", truth)
    assert code == 0
    out = capsys.readouterr().out
    assert "GA: 0.6" in out
    assert "FGA: 0.4" in out
    assert "PA: 0.8" in out
    assert "FTA: 0.4" in out


def test_evaluate_command_reports_id_mismatch(tmp_path, capsys):
    def write(path, rows):
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["LineId", "Content", "EventTemplate"])
            writer.writerows(rows)

    truth = tmp_path / "truth.csv"
    parsed = tmp_path / "parsed.csv"
    write(truth, [(1, "a", "a"), (2, "b", "b")])
    write(parsed, [(1, "a", "a")])
    code = run_cli("evaluate", "--parsed", parsed, "--truth", truth)
    assert code == 2
    assert "2" in capsys.readouterr().err


def test_sample_command(tmp_path, fixture_truth_path, capsys):
    out = tmp_path / "candidates.csv"
    code = run_cli("sample", "--history", fixture_truth_path, "--candidates", "8", "--output", out)
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 8
    assert set(rows[0]) == {"Content", "EventTemplate"}


def test_stats_command(tmp_path, fixture_log_path, fixture_truth_path, capsys):
    out = tmp_path / "o"
    run_cli(
        "parse", "--input", fixture_log_path, "--output-dir", out,
        "--backend", "mock", "--fixture", fixture_truth_path,
    )
    capsys.readouterr()
    code = run_cli("stats", out / "mini_stats.json")
    assert code == 0
    printed = capsys.readouterr().out
    assert "records_total: 200" in printed
    assert "cache_hit_rate:" in printed
