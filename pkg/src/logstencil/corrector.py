"""Template verification and iterative self-correction.

Two error classes get repaired: templates that fail to match their log line
(re-prompted until they do) and templates that over-abstract diagnostic text
(flagged captures re-prompted once per distinct flag set). Each retry raises
the sampling temperature by one alpha step. A deterministic fallback keeps
the stream draining when the model never produces a matching template.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from logstencil.gateway import (
    Backend,
    CompletionSettings,
    EmptyExtraction,
    GatewayError,
    build_abstraction_correction_prompt,
    build_match_correction_prompt,
    extract_template,
)
from logstencil.model import (
    Template,
    WILDCARD,
    extract_variables,
    tokenize_coarse,
)

DEFAULT_KEYWORDS = frozenset({"Exception", "failed", "interrupted"})

_DIGITS = set("0123456789")


@dataclass(frozen=True)
class CorrectorConfig:
    alpha: float = 0.25
    max_iterations: int = 3
    keywords: frozenset[str] = DEFAULT_KEYWORDS
    keyword_case_insensitive: bool = True

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.alpha * self.max_iterations > 2:
            raise ValueError("alpha * max_iterations exceeds the sampling-temperature ceiling (2)")


@dataclass(frozen=True)
class CorrectionOutcome:
    template: Template
    iterations_used: int
    accepted: bool
    fallback_used: bool
    flags_remaining: tuple[str, ...] = ()


class CorrectionAborted(Exception):
    """A gateway failure interrupted correction; carries the best template so far."""

    def __init__(self, message: str, best_template: Template, iterations_used: int):
        super().__init__(message)
        self.best_template = best_template
        self.iterations_used = iterations_used


def verify_match(content: str, template: Template) -> bool:
    """True iff the template's anchored regex fully matches the content."""
    return extract_variables(content, template) is not None


def flag_wildcards(
    content: str, template: Template, config: CorrectorConfig
) -> list[str]:
    """Captured phrases that look like diagnostic constants: the capture
    contains a keyword, or the nearest preceding constant token does."""
    bindings = extract_variables(content, template)
    if bindings is None:
        raise ValueError("flag_wildcards requires a template that matches the content")

    keywords = list(config.keywords)
    fold = str.lower if config.keyword_case_insensitive else str

    def contains_keyword(text: str) -> bool:
        folded = fold(text)
        return any(fold(keyword) in folded for keyword in keywords)

    preceding: list[str | None] = []
    last_constant: str | None = None
    for token in template.tokens:
        if token == WILDCARD:
            preceding.append(last_constant)
        else:
            last_constant = token

    flagged = []
    for binding in bindings:
        before = preceding[binding.wildcard_index]
        if contains_keyword(binding.value) or (before is not None and contains_keyword(before)):
            flagged.append(binding.value)
    return flagged


def fallback_template(content: str) -> Template:
    """Content tokens with every digit-bearing token wildcarded; matches the
    content by construction."""
    tokens = tokenize_coarse(content)
    return Template(
        tuple(WILDCARD if _DIGITS.intersection(tok) else tok for tok in tokens)
    )


def correct(
    content: str,
    initial: Template,
    gateway: Backend,
    config: CorrectorConfig,
    base_settings: CompletionSettings | None = None,
) -> CorrectionOutcome:
    """Iterate matching and abstraction corrections until the template passes
    verification or the iteration budget runs out, then fall back.

    The i-th correction query runs at temperature i * alpha. Matching failures
    are retried every iteration; a given set of flagged phrases is re-prompted
    at most once (the flags are heuristic and may legitimately persist).
    """
    base = base_settings or CompletionSettings()
    current = initial
    calls = 0
    attempted_flag_sets: set[tuple[str, ...]] = set()

    def query(prompt, step: int) -> Template | None:
        nonlocal calls
        settings = CompletionSettings(
            temperature=step * config.alpha,
            seed=base.seed,
            model=base.model,
            max_output_tokens=base.max_output_tokens,
        )
        calls += 1
        try:
            raw = gateway.complete(prompt, settings)
            return extract_template(raw)
        except EmptyExtraction:
            return None  # unusable output burns the iteration, template unchanged
        except GatewayError as exc:
            raise CorrectionAborted(str(exc), best_template=current, iterations_used=calls) from exc

    for step in range(1, config.max_iterations + 1):
        if not verify_match(content, current):
            revised = query(build_match_correction_prompt(content, current), step)
            if revised is not None:
                current = revised
            continue
        flags = tuple(flag_wildcards(content, current, config))
        if flags and flags not in attempted_flag_sets:
            attempted_flag_sets.add(flags)
            revised = query(
                build_abstraction_correction_prompt(content, current, flags), step
            )
            if revised is not None and verify_match(content, revised):
                current = revised
            continue
        return CorrectionOutcome(
            template=current,
            iterations_used=calls,
            accepted=True,
            fallback_used=False,
            flags_remaining=flags,
        )

    if verify_match(content, current):
        return CorrectionOutcome(
            template=current,
            iterations_used=calls,
            accepted=True,
            fallback_used=False,
            flags_remaining=tuple(flag_wildcards(content, current, config)),
        )
    fallback = fallback_template(content)
    return CorrectionOutcome(
        template=fallback,
        iterations_used=calls,
        accepted=False,
        fallback_used=True,
        flags_remaining=tuple(flag_wildcards(content, fallback, config)),
    )
