"""Command-line surface: parse, evaluate, sample, and stats."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from logstencil import files
from logstencil.candidates import CandidateSet
from logstencil.config import RunConfig
from logstencil.corrector import CorrectorConfig, DEFAULT_KEYWORDS, verify_match
from logstencil.gateway import CompletionSettings, HttpBackend, MockBackend
from logstencil.metrics import LineIdMismatch, evaluate
from logstencil.model import parse_template_string, tokenize_coarse, tokenize_fine
from logstencil.pipeline import Pipeline
from logstencil.tree import ParseTree


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logstencil",
        description="Extract log templates with a trie cache, LLM parsing, and self-correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a log file into structured output")
    p.add_argument("--input", help="raw log file, or CSV with a Content column")
    p.add_argument("--output-dir", help="directory for output files")
    p.add_argument("--config", type=Path, help="JSON config file (flags override it)")
    p.add_argument("--history", dest="history_path", help="labeled history CSV (Content, EventTemplate)")
    p.add_argument("--truth", dest="truth_path", help="ground-truth structured CSV; evaluates after parsing")
    p.add_argument("--candidates", type=int, help="history sampling budget K (default 32)")
    p.add_argument("--demonstrations", type=int, help="demonstrations per prompt k (default 3)")
    p.add_argument("--sim-threshold", dest="sim_threshold", type=float, help="merge similarity threshold (default 0.8)")
    p.add_argument("--divergence-threshold", dest="divergence_threshold", type=int, help="distinct-token merge threshold (default 5)")
    p.add_argument("--alpha", type=float, help="temperature step per correction iteration (default 0.25)")
    p.add_argument("--max-iterations", dest="max_iterations", type=int, help="correction iteration budget (default 3)")
    p.add_argument("--keywords", dest="keyword_file", help="keyword file, one per line")
    p.add_argument("--backend", choices=["mock", "http"], help="completion backend (default mock)")
    p.add_argument("--fixture", dest="fixture_path", help="mock fixture CSV (Content, EventTemplate)")
    p.add_argument("--script", dest="script_path", help="mock scripted responses, one per line")
    p.add_argument("--base-url", dest="base_url", help="chat-completion endpoint base URL")
    p.add_argument("--model", help="model identifier")
    p.add_argument("--api-key-env", dest="api_key_env", help="environment variable holding the API key")
    p.add_argument("--header-pattern", dest="header_pattern", help="regex stripped from each raw line")
    p.add_argument("--warm-tree", dest="warm_tree_path", help="tree file from a previous run")
    p.add_argument("--candidate-cap", dest="candidate_cap", type=int, help="candidate-set soft cap (default 256)")
    p.add_argument("--knn-tokens", dest="knn_tokens", choices=["fine", "coarse"], help="tokenization for demonstration similarity")
    p.add_argument("--seed", type=int, help="completion seed (default 0)")
    p.add_argument("--max-output-tokens", dest="max_output_tokens", type=int, help="completion output budget")

    e = sub.add_parser("evaluate", help="score a parsed structured CSV against ground truth")
    e.add_argument("--parsed", required=True, type=Path)
    e.add_argument("--truth", required=True, type=Path)
    e.add_argument("--output", type=Path, help="report JSON path (default: next to parsed file)")

    s = sub.add_parser("sample", help="run hierarchical sampling over a history file")
    s.add_argument("--history", required=True, type=Path)
    s.add_argument("--candidates", type=int, default=32)
    s.add_argument("--output", required=True, type=Path)
    s.add_argument("--knn-tokens", choices=["fine", "coarse"], default="fine")

    t = sub.add_parser("stats", help="summarize a prior run from its stats file")
    t.add_argument("stats_file", type=Path)

    return parser


_PARSE_CONFIG_KEYS = (
    "input_path output_dir history_path truth_path candidates demonstrations "
    "sim_threshold divergence_threshold alpha max_iterations keyword_file backend "
    "fixture_path script_path base_url model api_key_env header_pattern "
    "warm_tree_path candidate_cap knn_tokens seed max_output_tokens"
).split()


def parse_command(config: RunConfig) -> int:
    tokenizer = tokenize_fine if config.knn_tokens == "fine" else tokenize_coarse

    history = []
    if config.history_path is not None:
        pairs = files.read_pairs_csv(config.history_path)
        for content, template in pairs:
            if verify_match(content, parse_template_string(template)):
                history.append((content, template))
        dropped = len(pairs) - len(history)
        if dropped:
            _warn(f"dropped {dropped} history entries whose template does not match their content")
    elif config.candidates > 0:
        _warn("no history file given; starting zero-shot with an empty candidate set")

    candidates = CandidateSet.init_from_history(
        history, config.candidates, cap=config.candidate_cap, tokenizer=tokenizer
    )

    if config.backend == "mock":
        fixture = dict(files.read_pairs_csv(config.fixture_path)) if config.fixture_path else {}
        script = files.read_scripted_responses(config.script_path) if config.script_path else None
        gateway = MockBackend(fixture=fixture, script=script)
    else:
        gateway = HttpBackend(base_url=config.base_url, api_key_env=config.api_key_env)

    tree = ParseTree(
        sim_threshold=config.sim_threshold,
        divergence_threshold=config.divergence_threshold,
    )
    if config.warm_tree_path is not None:
        tree.load(config.warm_tree_path)

    keywords = files.read_keywords(config.keyword_file) if config.keyword_file else DEFAULT_KEYWORDS
    pipeline = Pipeline(
        tree=tree,
        candidates=candidates,
        gateway=gateway,
        corrector_config=CorrectorConfig(
            alpha=config.alpha, max_iterations=config.max_iterations, keywords=keywords
        ),
        settings=CompletionSettings(
            temperature=0.0,
            seed=config.seed,
            model=config.model,
            max_output_tokens=config.max_output_tokens,
        ),
        demonstrations=config.demonstrations,
    )

    if config.input_path.suffix.lower() == ".csv":
        records = files.read_content_csv(config.input_path)
    else:
        records = files.read_log_records(config.input_path, config.header_pattern)
    if not records:
        return _fail(f"no parseable lines in {config.input_path}")

    results, stats = pipeline.run_stream(records)

    config.output_dir.mkdir(parents=True, exist_ok=True)
    name = config.input_path.stem
    files.write_structured_csv(config.output_dir / f"{name}_structured.csv", results)
    files.write_templates_csv(config.output_dir / f"{name}_templates.csv", results)
    files.write_json(config.output_dir / f"{name}_stats.json", stats.as_dict())
    files.write_pairs_csv(config.output_dir / f"{name}_candidates.csv", candidates.rows())
    tree.save(config.output_dir / f"{name}_tree.tsv")

    for key, value in stats.as_dict().items():
        print(f"{key}: {value}")

    if config.truth_path is not None:
        parsed = {r.record.line_id: r.rendered_template for r in results}
        truth = files.read_line_templates(config.truth_path)
        try:
            report = evaluate(parsed, truth)
        except LineIdMismatch as exc:
            return _fail(f"cannot evaluate: {exc}")
        files.write_json(config.output_dir / f"{name}_report.json", report.as_dict())
        files.write_report_breakdown(config.output_dir / f"{name}_report_templates.csv", report)
        for line in report.summary_lines():
            print(line)
    return 0


def evaluate_command(parsed_path: Path, truth_path: Path, output: Path | None) -> int:
    try:
        parsed = files.read_line_templates(parsed_path)
        truth = files.read_line_templates(truth_path)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    try:
        report = evaluate(parsed, truth)
    except LineIdMismatch as exc:
        print(f"error: line-id sets differ: {exc}", file=sys.stderr)
        return 2
    for line in report.summary_lines():
        print(line)
    report_path = output or parsed_path.with_name(parsed_path.stem + "_report.json")
    files.write_json(report_path, report.as_dict())
    files.write_report_breakdown(
        report_path.with_name(report_path.stem + "_templates.csv"), report
    )
    return 0


def sample_command(history_path: Path, budget: int, output: Path, knn_tokens: str) -> int:
    try:
        history = files.read_pairs_csv(history_path)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    tokenizer = tokenize_fine if knn_tokens == "fine" else tokenize_coarse
    selected = CandidateSet.init_from_history(history, budget, tokenizer=tokenizer)
    files.write_pairs_csv(output, selected.rows())
    print(f"sampled {len(selected)} candidates from {len(history)} history entries")
    return 0


def stats_command(stats_file: Path) -> int:
    try:
        with open(stats_file, encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    for key in sorted(payload):
        print(f"{key}: {payload[key]}")
    total = payload.get("records_total") or 0
    hits = payload.get("cache_hits") or 0
    if total:
        print(f"cache_hit_rate: {hits / total:.4f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "parse":
            overrides = {key: getattr(args, key, None) for key in _PARSE_CONFIG_KEYS}
            overrides["input_path"] = args.input
            overrides["output_dir"] = args.output_dir
            config = RunConfig.resolve(overrides, config_file=args.config)
            return parse_command(config)
        if args.command == "evaluate":
            return evaluate_command(args.parsed, args.truth, args.output)
        if args.command == "sample":
            return sample_command(args.history, args.candidates, args.output, args.knn_tokens)
        if args.command == "stats":
            return stats_command(args.stats_file)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
