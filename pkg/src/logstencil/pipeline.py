"""End-to-end flow: tree lookup, demonstration selection, LLM parse,
correction, then candidate-set and tree updates.

Records are processed strictly in input order: each generated template grows
the candidate pool that the next record's prompt draws from, so reordering
the stream changes (valid) results.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Literal

from logstencil.candidates import CandidateSet
from logstencil.corrector import (
    CorrectionAborted,
    CorrectorConfig,
    correct,
    fallback_template,
)
from logstencil.gateway import (
    Backend,
    CompletionSettings,
    EmptyExtraction,
    GatewayError,
    build_parse_prompt,
    extract_template,
)
from logstencil.model import (
    LogRecord,
    Template,
    VariableBinding,
    extract_variables,
    render_template,
    tokenize_coarse,
)
from logstencil.tree import Hit, ParseTree

Source = Literal["cache", "llm", "llm-corrected", "fallback"]


@dataclass(frozen=True, slots=True)
class ParseResult:
    record: LogRecord
    template: Template
    bindings: tuple[VariableBinding, ...]
    source: Source
    llm_calls: int

    @property
    def rendered_template(self) -> str:
        return render_template(self.template)


@dataclass
class RunStats:
    records_total: int = 0
    cache_hits: int = 0
    llm_parse_calls: int = 0
    correction_calls: int = 0
    fallbacks: int = 0
    tree_leaves_final: int = 0
    candidates_final: int = 0
    wall_time_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "records_total": self.records_total,
            "cache_hits": self.cache_hits,
            "llm_parse_calls": self.llm_parse_calls,
            "correction_calls": self.correction_calls,
            "fallbacks": self.fallbacks,
            "tree_leaves_final": self.tree_leaves_final,
            "candidates_final": self.candidates_final,
            "wall_time_seconds": self.wall_time_seconds,
        }


class Pipeline:
    def __init__(
        self,
        tree: ParseTree,
        candidates: CandidateSet,
        gateway: Backend,
        corrector_config: CorrectorConfig | None = None,
        settings: CompletionSettings | None = None,
        demonstrations: int = 3,
    ):
        self.tree = tree
        self.candidates = candidates
        self.gateway = gateway
        self.corrector_config = corrector_config or CorrectorConfig()
        self.settings = settings or CompletionSettings()
        self.demonstrations = demonstrations
        self.stats = RunStats()

    def process_record(self, record: LogRecord) -> ParseResult:
        """Parse one record: cache hit when possible, LLM + correction otherwise."""
        self.stats.records_total += 1
        tokens = tokenize_coarse(record.content)
        outcome = self.tree.match(tokens)
        if isinstance(outcome, Hit):
            self.tree.count_hit(outcome)
            self.stats.cache_hits += 1
            return ParseResult(
                record=record,
                template=outcome.template,
                bindings=outcome.bindings,
                source="cache",
                llm_calls=0,
            )
        return self._parse_with_llm(record, outcome.relevant)

    def _parse_with_llm(self, record: LogRecord, relevant) -> ParseResult:
        content = record.content
        demos = [
            (c.content, render_template(c.template))
            for c in self.candidates.select_demonstrations(content, self.demonstrations)
        ]
        prompt = build_parse_prompt(content, demos)
        self.stats.llm_parse_calls += 1
        initial: Template | None = None
        llm_calls = 1
        try:
            raw = self.gateway.complete(prompt, self.settings)
            initial = extract_template(raw)
        except EmptyExtraction:
            initial = None
        except GatewayError:
            initial = None

        if initial is None:
            # unusable or unavailable backend: the stream must not stall
            return self._fallback_result(record, relevant, llm_calls)

        try:
            correction = correct(
                content,
                initial,
                self.gateway,
                self.corrector_config,
                base_settings=self.settings,
            )
        except CorrectionAborted as aborted:
            self.stats.correction_calls += aborted.iterations_used
            return self._fallback_result(record, relevant, llm_calls + aborted.iterations_used)

        self.stats.correction_calls += correction.iterations_used
        llm_calls += correction.iterations_used
        if correction.fallback_used:
            self.stats.fallbacks += 1
            source: Source = "fallback"
        elif correction.iterations_used > 0:
            source = "llm-corrected"
        else:
            source = "llm"

        self.candidates.add(content, correction.template)
        absorbed = self.tree.absorb(correction.template, relevant)
        final = absorbed.stored
        bindings = extract_variables(content, final)
        if bindings is None:  # merging only widens templates, so this cannot happen
            final = correction.template
            bindings = extract_variables(content, final) or []
        return ParseResult(
            record=record,
            template=final,
            bindings=tuple(bindings),
            source=source,
            llm_calls=llm_calls,
        )

    def _fallback_result(self, record: LogRecord, relevant, llm_calls: int) -> ParseResult:
        self.stats.fallbacks += 1
        template = fallback_template(record.content)
        self.candidates.add(record.content, template)
        final = self.tree.absorb(template, relevant).stored
        bindings = extract_variables(record.content, final) or []
        return ParseResult(
            record=record,
            template=final,
            bindings=tuple(bindings),
            source="fallback",
            llm_calls=llm_calls,
        )

    def run_stream(self, records: Iterable[LogRecord]) -> tuple[list[ParseResult], RunStats]:
        """Process records sequentially, returning results in input order."""
        started = time.perf_counter()
        process = self.process_record
        results = [process(record) for record in records]
        self.stats.wall_time_seconds = time.perf_counter() - started
        self.stats.tree_leaves_final = len(self.tree)
        self.stats.candidates_final = len(self.candidates)
        return results, self.stats
