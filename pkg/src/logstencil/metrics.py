"""Parsing accuracy metrics against ground truth.

Message-level: GA (grouping) and PA (exact template string). Template-level
F1s: FGA over grouping and FTA over grouping plus string equality. Grouping
compares the *sets of line ids* sharing a template, so a parsed template is
judged by which messages it covers, not by its wording.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

_WHITESPACE = re.compile(r"\s+")


class LineIdMismatch(ValueError):
    """Parsed and ground-truth line-id sets differ."""

    def __init__(self, missing: list, extra: list):
        self.missing = missing
        self.extra = extra
        parts = []
        if missing:
            parts.append(f"missing from parsed: {missing[:10]}")
        if extra:
            parts.append(f"unknown to truth: {extra[:10]}")
        super().__init__("; ".join(parts))


@dataclass(frozen=True)
class TemplateOutcome:
    template: str
    line_count: int
    grouped_correctly: bool
    matched_truth_template: str | None
    exact: bool


@dataclass(frozen=True)
class EvaluationReport:
    ga: float
    fga: float
    pa: float
    fta: float
    pga: float
    rga: float
    truth_templates: int
    parsed_templates: int
    correct_groups: int
    correct_templates: int
    per_template: tuple[TemplateOutcome, ...]

    def as_dict(self) -> dict:
        return {
            "GA": self.ga,
            "FGA": self.fga,
            "PA": self.pa,
            "FTA": self.fta,
            "PGA": self.pga,
            "RGA": self.rga,
            "N_g": self.truth_templates,
            "N_p": self.parsed_templates,
            "N_c_group": self.correct_groups,
            "N_c_template": self.correct_templates,
        }

    def summary_lines(self) -> list[str]:
        return [f"{key}: {value}" for key, value in self.as_dict().items()]


def normalize_template(text: str) -> str:
    """Trim and collapse internal whitespace; tokens are left untouched."""
    return _WHITESPACE.sub(" ", text.strip())


def _harmonic(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate(parsed: Mapping, truth: Mapping) -> EvaluationReport:
    """Score parsed templates against ground truth over the same line ids."""
    if not parsed or not truth:
        raise ValueError("evaluate requires non-empty parsed and truth mappings")
    parsed_ids = set(parsed)
    truth_ids = set(truth)
    if parsed_ids != truth_ids:
        raise LineIdMismatch(
            missing=sorted(truth_ids - parsed_ids),
            extra=sorted(parsed_ids - truth_ids),
        )

    parsed_norm = {line_id: normalize_template(parsed[line_id]) for line_id in parsed}
    truth_norm = {line_id: normalize_template(truth[line_id]) for line_id in truth}

    parsed_groups: dict[str, set] = {}
    truth_groups: dict[str, set] = {}
    for line_id, template in parsed_norm.items():
        parsed_groups.setdefault(template, set()).add(line_id)
    for line_id, template in truth_norm.items():
        truth_groups.setdefault(template, set()).add(line_id)

    truth_by_ids = {frozenset(ids): template for template, ids in truth_groups.items()}

    grouped_messages = 0
    exact_messages = 0
    correct_groups = 0
    correct_templates = 0
    per_template: list[TemplateOutcome] = []
    for template, ids in parsed_groups.items():
        matched = truth_by_ids.get(frozenset(ids))
        grouped = matched is not None
        exact = grouped and matched == template
        if grouped:
            correct_groups += 1
            grouped_messages += len(ids)
        if exact:
            correct_templates += 1
        per_template.append(
            TemplateOutcome(
                template=template,
                line_count=len(ids),
                grouped_correctly=grouped,
                matched_truth_template=matched,
                exact=exact,
            )
        )
    for line_id, template in parsed_norm.items():
        if template == truth_norm[line_id]:
            exact_messages += 1

    total = len(parsed_norm)
    n_p = len(parsed_groups)
    n_g = len(truth_groups)
    pga = correct_groups / n_p
    rga = correct_groups / n_g
    return EvaluationReport(
        ga=grouped_messages / total,
        fga=_harmonic(pga, rga),
        pa=exact_messages / total,
        fta=_harmonic(correct_templates / n_p, correct_templates / n_g),
        pga=pga,
        rga=rga,
        truth_templates=n_g,
        parsed_templates=n_p,
        correct_groups=correct_groups,
        correct_templates=correct_templates,
        per_template=tuple(per_template),
    )
