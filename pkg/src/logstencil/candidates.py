"""Demonstration pool: history bootstrap, kNN selection, self-generated growth.

The pool starts from hierarchical sampling over labeled history (possibly
empty, which makes the first prompts zero-shot) and grows with every template
the pipeline generates, so demonstrations adapt to the stream being parsed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

from logstencil.model import Template, render_template, tokenize_coarse, tokenize_fine
from logstencil.similarity import similarity

Origin = Literal["history", "self-generated"]


@dataclass(frozen=True, slots=True)
class Candidate:
    content: str
    fine_tokens: tuple[str, ...]
    template: Template
    origin: Origin
    inserted_at: int


def _score(query_tokens: Sequence[str], candidate_tokens: Sequence[str]) -> float:
    # all-punctuation content can tokenize to nothing; two empty sequences are
    # trivially identical rather than a similarity domain error
    if not query_tokens and not candidate_tokens:
        return 1.0
    return similarity(query_tokens, candidate_tokens)


class CandidateSet:
    """Growing pool of (log content, template) pairs used as ICL demonstrations."""

    def __init__(
        self,
        cap: int = 256,
        tokenizer: Callable[[str], list[str]] = tokenize_fine,
    ):
        self.cap = cap
        self.tokenizer = tokenizer
        self._candidates: list[Candidate] = []
        self._templates: set[str] = set()
        self._next_seq = 0

    def __len__(self) -> int:
        return len(self._candidates)

    def __iter__(self):
        return iter(self._candidates)

    @classmethod
    def init_from_history(
        cls,
        history: Sequence[tuple[str, str]],
        budget: int,
        cap: int = 256,
        tokenizer: Callable[[str], list[str]] = tokenize_fine,
    ) -> "CandidateSet":
        """Seed the pool with up to ``budget`` diverse history entries.

        History is bucketed by (coarse token count, first coarse token); the
        buckets are visited round-robin in descending size, each visit taking
        the remaining entry least similar to what is already selected. An
        empty history or a zero budget yields an empty pool (zero-shot start).
        """
        store = cls(cap=cap, tokenizer=tokenizer)
        if budget < 0:
            raise ValueError(f"candidate budget must be >= 0, got {budget}")
        if budget == 0 or not history:
            return store

        buckets: dict[tuple[int, str], list[tuple[str, str]]] = {}
        for content, template in history:
            tokens = tokenize_coarse(content)
            if not tokens:
                continue
            buckets.setdefault((len(tokens), tokens[0]), []).append((content, template))
        order = sorted(buckets, key=lambda k: -len(buckets[k]))

        fine: dict[int, list[str]] = {}

        def fine_tokens(entry: tuple[str, str]) -> list[str]:
            key = id(entry)
            if key not in fine:
                fine[key] = tokenizer(entry[0])
            return fine[key]

        selected: list[tuple[str, str]] = []
        while len(selected) < budget and any(buckets[k] for k in order):
            for key in order:
                bucket = buckets[key]
                if not bucket:
                    continue
                if selected:
                    chosen_idx = min(
                        range(len(bucket)),
                        key=lambda i: max(
                            _score(fine_tokens(bucket[i]), fine_tokens(s)) for s in selected
                        ),
                    )
                else:
                    chosen_idx = 0
                selected.append(bucket.pop(chosen_idx))
                if len(selected) == budget:
                    break

        for content, template in selected:
            store._append(content, template, origin="history")
        return store

    def _append(self, content: str, template: Template | str, origin: Origin) -> None:
        if isinstance(template, str):
            template = Template(tuple(tokenize_coarse(template)))
        self._candidates.append(
            Candidate(
                content=content,
                fine_tokens=tuple(self.tokenizer(content)),
                template=template,
                origin=origin,
                inserted_at=self._next_seq,
            )
        )
        self._templates.add(render_template(template))
        self._next_seq += 1

    def add(self, content: str, template: Template) -> None:
        """Add a self-generated demonstration unless its template is already
        represented; beyond the cap the oldest self-generated entry is evicted
        (history entries are never evicted)."""
        if render_template(template) in self._templates:
            return
        self._append(content, template, origin="self-generated")
        if len(self._candidates) > self.cap:
            for idx, candidate in enumerate(self._candidates):
                if candidate.origin == "self-generated":
                    evicted = self._candidates.pop(idx)
                    self._templates.discard(render_template(evicted.template))
                    break

    def select_demonstrations(self, query_content: str, k: int) -> list[Candidate]:
        """Up to k most similar candidates, ordered ascending by similarity so
        the most similar demonstration sits next to the query in the prompt."""
        if k <= 0 or not self._candidates:
            return []
        query_tokens = self.tokenizer(query_content)
        ranked = sorted(
            self._candidates,
            key=lambda c: (-_score(query_tokens, c.fine_tokens), c.inserted_at),
        )
        return list(reversed(ranked[:k]))

    def rows(self) -> Iterable[tuple[str, str]]:
        """(content, rendered template) pairs for dumping to a history-shaped file."""
        for candidate in self._candidates:
            yield candidate.content, render_template(candidate.template)
