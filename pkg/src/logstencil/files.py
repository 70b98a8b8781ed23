"""Readers and writers for the file formats the CLI speaks.

Delimiter-separated files are comma-separated with standard quoting, UTF-8,
and Loghub-style column names (LineId, Content, EventTemplate) so public
datasets drop in unmodified.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Iterable, Sequence

from logstencil.model import LogRecord
from logstencil.pipeline import ParseResult


def read_log_records(path: Path, header_pattern: str | None = None) -> list[LogRecord]:
    """Raw log lines to records; empty lines are skipped, ids are 1-based over
    the kept lines. A header pattern (anchored at the line start) is stripped;
    if it defines named groups, they become the record header and a group named
    ``Content`` or ``content``, when present, becomes the content."""
    pattern = re.compile(header_pattern) if header_pattern else None
    records = []
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            line = raw.rstrip("\n").rstrip("\r")
            content, header = _split_header(line, pattern)
            content = content.strip()
            if not content:
                continue
            records.append(LogRecord(line_id=len(records) + 1, content=content, header=header))
    return records


def _split_header(line: str, pattern: re.Pattern | None):
    if pattern is None:
        return line, None
    match = pattern.match(line)
    if match is None:
        return line, None
    groups = {k: v for k, v in match.groupdict().items() if v is not None}
    content = groups.pop("Content", None)
    if content is None:
        content = groups.pop("content", None)
    if content is None:
        content = line[match.end():]
    return content, (groups or None)


def read_content_csv(path: Path) -> list[LogRecord]:
    """Records from a structured CSV with a Content column; LineId is taken
    from the file when present, else assigned sequentially."""
    records = []
    seen: set[int] = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "Content" not in reader.fieldnames:
            raise ValueError(f"{path}: expected a CSV with a Content column")
        for index, row in enumerate(reader, start=1):
            content = (row.get("Content") or "").strip()
            if not content:
                continue
            line_id = int(row["LineId"]) if row.get("LineId") else index
            if line_id in seen:
                raise ValueError(f"{path}: duplicate LineId {line_id}")
            seen.add(line_id)
            records.append(LogRecord(line_id=line_id, content=content))
    return records


def read_pairs_csv(path: Path) -> list[tuple[str, str]]:
    """(Content, EventTemplate) pairs, used for history files and mock fixtures."""
    pairs = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        required = {"Content", "EventTemplate"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: expected a CSV with Content and EventTemplate columns")
        for row in reader:
            content = (row.get("Content") or "").strip()
            template = (row.get("EventTemplate") or "").strip()
            if content and template:
                pairs.append((content, template))
    return pairs


def read_line_templates(path: Path) -> dict[int, str]:
    """LineId -> EventTemplate mapping from a structured CSV."""
    mapping: dict[int, str] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        required = {"LineId", "EventTemplate"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: expected a CSV with LineId and EventTemplate columns")
        for row in reader:
            mapping[int(row["LineId"])] = row["EventTemplate"]
    return mapping


def read_keywords(path: Path) -> frozenset[str]:
    """One keyword per line; blank lines ignored."""
    with open(path, encoding="utf-8") as handle:
        return frozenset(line.strip() for line in handle if line.strip())


def read_scripted_responses(path: Path) -> list[str]:
    r"""One response per line; ``\n`` unescapes to a newline, ``\\`` to a backslash."""
    responses = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            responses.append(line.replace("\\n", "\n").replace("\\\\", "\\"))
    return responses


def write_structured_csv(path: Path, results: Sequence[ParseResult]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["LineId", "Content", "EventTemplate"])
        for result in results:
            writer.writerow([result.record.line_id, result.record.content, result.rendered_template])


def write_templates_csv(path: Path, results: Sequence[ParseResult]) -> None:
    counts: dict[str, int] = {}
    for result in results:
        rendered = result.rendered_template
        counts[rendered] = counts.get(rendered, 0) + 1
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["EventTemplate", "Occurrences"])
        writer.writerows(ordered)


def write_pairs_csv(path: Path, pairs: Iterable[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["Content", "EventTemplate"])
        writer.writerows(pairs)


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_report_breakdown(path: Path, report) -> None:
    """Per-template outcome table for an EvaluationReport."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["EventTemplate", "Occurrences", "GroupedCorrectly", "ExactMatch", "TruthTemplate"]
        )
        for row in sorted(report.per_template, key=lambda r: (-r.line_count, r.template)):
            writer.writerow(
                [
                    row.template,
                    row.line_count,
                    row.grouped_correctly,
                    row.exact,
                    row.matched_truth_template or "",
                ]
            )
