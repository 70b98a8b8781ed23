"""Prompt construction, chat-completion backends, and template extraction.

The mock backend makes the whole pipeline deterministic: it answers from a
content -> template fixture mapping and from scripted response queues, and it
records every call so tests can assert temperatures and request ordering.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import httpx

from logstencil import prompts
from logstencil.model import Template, parse_template_string, render_template


class GatewayError(Exception):
    """Base class for backend failures."""


class BackendUnavailable(GatewayError):
    """The backend could not produce a response (after retries, if any)."""


class MockMissingFixture(GatewayError):
    """The mock backend had neither a scripted response nor a fixture entry."""


class OutputTruncated(GatewayError):
    """The model stopped because it ran out of output tokens."""


class EmptyExtraction(GatewayError):
    """Model output contained no usable template text."""


PROMPT_KINDS = ("parse", "match-correction", "abstraction-correction")


@dataclass(frozen=True)
class Prompt:
    kind: str
    instruction: str
    demonstrations: tuple[tuple[str, str], ...]
    query: str
    extra: dict[str, str] = field(default_factory=dict)

    def render_text(self) -> str:
        """Full prompt body, deterministic for identical inputs."""
        blocks = [self.instruction]
        if self.kind == "parse":
            for content, template in self.demonstrations:
                blocks.append(
                    prompts.DEMONSTRATION_BLOCK.format(content=content, template=template)
                )
            blocks.append(prompts.QUERY_BLOCK.format(content=self.query))
        elif self.kind == "match-correction":
            blocks.append(
                prompts.MATCH_FIX_BLOCK.format(
                    content=self.query, template=self.extra["failed_template"]
                )
            )
        elif self.kind == "abstraction-correction":
            blocks.append(
                prompts.ABSTRACT_FIX_BLOCK.format(
                    content=self.query,
                    template=self.extra["template"],
                    phrases=self.extra["flagged"],
                )
            )
        else:
            raise ValueError(f"unknown prompt kind: {self.kind}")
        return "\n\n".join(blocks)

    def to_messages(self) -> list[dict[str, str]]:
        return [{"role": "user", "content": self.render_text()}]


@dataclass(frozen=True)
class CompletionSettings:
    temperature: float = 0.0
    seed: int = 0
    model: str = "gpt-3.5-turbo"
    max_output_tokens: int = 256

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


def build_parse_prompt(
    query_content: str, demonstrations: Sequence[tuple[str, str]]
) -> Prompt:
    """Parse prompt; demonstrations must arrive already in ascending similarity
    order so the most similar pair sits right before the query."""
    return Prompt(
        kind="parse",
        instruction=prompts.PARSE_INSTRUCTION,
        demonstrations=tuple(demonstrations),
        query=query_content,
    )


def build_match_correction_prompt(content: str, failed_template: Template) -> Prompt:
    return Prompt(
        kind="match-correction",
        instruction=prompts.MATCH_FIX_INSTRUCTION,
        demonstrations=(),
        query=content,
        extra={"failed_template": render_template(failed_template)},
    )


def build_abstraction_correction_prompt(
    content: str, template: Template, flagged: Sequence[str]
) -> Prompt:
    if not flagged:
        raise ValueError("abstraction correction needs at least one flagged phrase")
    phrases = "\n".join(f'- "{phrase}"' for phrase in flagged)
    return Prompt(
        kind="abstraction-correction",
        instruction=prompts.ABSTRACT_FIX_INSTRUCTION,
        demonstrations=(),
        query=content,
        extra={"template": render_template(template), "flagged": phrases},
    )


_BACKTICK_SPAN = re.compile(r"`([^`]*)`")


def extract_template(raw_text: str) -> Template:
    """Template from free-form model output: last backticked span, else the
    last non-empty line; surrounding quotes stripped."""
    if not raw_text:
        raise EmptyExtraction("model returned empty text")
    spans = _BACKTICK_SPAN.findall(raw_text)
    if spans:
        candidate = spans[-1]
    else:
        lines = [line for line in raw_text.splitlines() if line.strip()]
        candidate = lines[-1] if lines else ""
    candidate = candidate.strip().strip("'\"").strip()
    if not candidate:
        raise EmptyExtraction(f"no template text in model output: {raw_text!r}")
    return parse_template_string(candidate)


class Backend(Protocol):
    def complete(self, prompt: Prompt, settings: CompletionSettings) -> str: ...


class MockBackend:
    """Deterministic stand-in for a chat-completion service.

    Resolution order per call: a scripted queue for the exact (kind, query),
    then the global scripted queue, then the content -> template fixture
    mapping, and finally MockMissingFixture. Every call is appended to
    ``calls`` as (prompt, settings).
    """

    def __init__(
        self,
        fixture: dict[str, str] | None = None,
        script: Sequence[str] | None = None,
    ):
        self.fixture = dict(fixture or {})
        self._keyed: dict[tuple[str, str], list[str]] = {}
        self._global: list[str] = list(script or [])
        self.calls: list[tuple[Prompt, CompletionSettings]] = []

    def script_response(self, kind: str, query: str, *responses: str) -> None:
        self._keyed.setdefault((kind, query), []).extend(responses)

    def complete(self, prompt: Prompt, settings: CompletionSettings) -> str:
        self.calls.append((prompt, settings))
        queue = self._keyed.get((prompt.kind, prompt.query))
        if queue:
            return queue.pop(0)
        if self._global:
            return self._global.pop(0)
        if prompt.query in self.fixture:
            return f"`{self.fixture[prompt.query]}`"
        raise MockMissingFixture(
            f"no scripted response or fixture entry for {prompt.kind} query: {prompt.query!r}"
        )


class HttpBackend:
    """Chat-completion client over HTTP with bounded retries.

    Expects an OpenAI-style endpoint: POST {base_url}/chat/completions with a
    message list, model, temperature, and seed. The API key is read from an
    environment variable so secrets stay out of shell history.
    """

    RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})

    def __init__(
        self,
        base_url: str,
        api_key_env: str = "OPENAI_API_KEY",
        max_attempts: int = 3,
        backoff_seconds: float = 0.5,
        timeout: float = 60.0,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.max_attempts = max_attempts
        self.backoff_seconds = backoff_seconds
        self._sleep = sleep
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def close(self) -> None:
        self._client.close()

    def request_body(self, prompt: Prompt, settings: CompletionSettings) -> dict:
        return {
            "model": settings.model,
            "messages": prompt.to_messages(),
            "temperature": settings.temperature,
            "seed": settings.seed,
            "max_tokens": settings.max_output_tokens,
        }

    def complete(self, prompt: Prompt, settings: CompletionSettings) -> str:
        headers = {}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = self.request_body(prompt, settings)
        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            try:
                response = self._client.post(
                    f"{self.base_url}/chat/completions", json=body, headers=headers
                )
            except httpx.HTTPError as exc:
                last_error = exc
            else:
                if response.status_code == 200:
                    return self._parse_response(response)
                last_error = BackendUnavailable(
                    f"HTTP {response.status_code}: {response.text[:200]}"
                )
                if response.status_code not in self.RETRYABLE_STATUS:
                    raise last_error
            if attempt + 1 < self.max_attempts:
                self._sleep(self.backoff_seconds * (2**attempt))
        raise BackendUnavailable(f"gave up after {self.max_attempts} attempts: {last_error}")

    @staticmethod
    def _parse_response(response: httpx.Response) -> str:
        try:
            payload = response.json()
            choice = payload["choices"][0]
            text = choice["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendUnavailable(f"malformed completion response: {exc}") from exc
        if choice.get("finish_reason") == "length":
            raise OutputTruncated("completion stopped at the output-token limit")
        return text
