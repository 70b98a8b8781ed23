"""Core vocabulary: log records, templates, tokenization, and variable extraction.

A template is an ordered sequence of tokens where the reserved spelling
``<*>`` marks a wildcard slot; every other token is a literal constant.
Templates render to and parse from the canonical space-joined string form
used in output files and ground-truth comparisons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

WILDCARD = "<*>"

_FINE_DELIMITERS = re.compile(r"[\W_]+")


@dataclass(frozen=True, slots=True)
class LogRecord:
    """One log message after header stripping."""

    line_id: int
    content: str
    header: Mapping[str, str] | None = None

    def __post_init__(self):
        if self.line_id < 1:
            raise ValueError(f"line_id must be positive, got {self.line_id}")
        if not self.content.strip():
            raise ValueError("content must be non-empty (empty lines are skipped at ingestion)")


@dataclass(frozen=True, slots=True)
class Template:
    """Token sequence; a token equal to ``<*>`` is a wildcard, anything else a constant."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("template must have at least one token")
        for tok in self.tokens:
            if not tok or tok.split() != [tok]:
                raise ValueError(f"template token may not be empty or contain whitespace: {tok!r}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def wildcard_count(self) -> int:
        return sum(1 for tok in self.tokens if tok == WILDCARD)

    @property
    def constant_count(self) -> int:
        return len(self.tokens) - self.wildcard_count


@dataclass(frozen=True, slots=True)
class VariableBinding:
    """Value captured by one wildcard slot, identified by its 0-based ordinal."""

    wildcard_index: int
    value: str


def tokenize_coarse(text: str) -> list[str]:
    """Split on whitespace runs, dropping empty tokens."""
    return text.split()


def tokenize_fine(text: str) -> list[str]:
    """Split on whitespace and every non-alphanumeric character, discarding delimiters."""
    return [tok for tok in _FINE_DELIMITERS.split(text) if tok]


def parse_template_string(text: str) -> Template:
    """Build a Template from its canonical space-joined string form."""
    tokens = tokenize_coarse(text)
    if not tokens:
        raise ValueError("cannot parse a template from all-whitespace text")
    return Template(tuple(tokens))


def render_template(template: Template) -> str:
    """Inverse of parse_template_string: space-join tokens, wildcards as ``<*>``."""
    return " ".join(template.tokens)


def template_to_regex(template: Template) -> str:
    """Anchored pattern: constants escaped, adjacent tokens joined by ``\\s+``,
    each wildcard a non-greedy capture group that may match empty text."""
    parts = []
    for tok in template.tokens:
        parts.append("(.*?)" if tok == WILDCARD else re.escape(tok))
    return r"\A" + r"\s+".join(parts) + r"\Z"


@lru_cache(maxsize=8192)
def _compiled(tokens: tuple[str, ...]) -> re.Pattern[str]:
    return re.compile(template_to_regex(Template(tokens)), re.DOTALL)


def compiled_template_regex(template: Template) -> re.Pattern[str]:
    """Compiled form of template_to_regex, cached per token sequence."""
    return _compiled(template.tokens)


def extract_variables(content: str, template: Template) -> list[VariableBinding] | None:
    """Match content against the template's regex; return captures in wildcard
    order, or None when the template does not match."""
    match = _compiled(template.tokens).match(content)
    if match is None:
        return None
    return [VariableBinding(i, value) for i, value in enumerate(match.groups())]
