"""Streaming log template extraction with a trie cache, LLM-assisted parsing,
and self-correction."""

from logstencil.candidates import Candidate, CandidateSet
from logstencil.corrector import (
    CorrectionAborted,
    CorrectionOutcome,
    CorrectorConfig,
    correct,
    fallback_template,
    flag_wildcards,
    verify_match,
)
from logstencil.gateway import (
    BackendUnavailable,
    CompletionSettings,
    EmptyExtraction,
    HttpBackend,
    MockBackend,
    MockMissingFixture,
    OutputTruncated,
    Prompt,
    build_abstraction_correction_prompt,
    build_match_correction_prompt,
    build_parse_prompt,
    extract_template,
)
from logstencil.metrics import EvaluationReport, LineIdMismatch, evaluate, normalize_template
from logstencil.model import (
    LogRecord,
    Template,
    VariableBinding,
    WILDCARD,
    extract_variables,
    parse_template_string,
    render_template,
    template_to_regex,
    tokenize_coarse,
    tokenize_fine,
)
from logstencil.pipeline import ParseResult, Pipeline, RunStats
from logstencil.similarity import KERNEL_BACKEND, lcs_length, similarity
from logstencil.tree import AbsorbResult, Hit, Miss, ParseTree

__version__ = "0.1.0"
