"""Trie over template tokens: cache lookup, relevant-template discovery, merging.

Intermediate nodes are tokens, leaves are complete templates. A constant edge
consumes exactly one equal query token; a wildcard edge consumes one or more
tokens (the token-level matcher is deliberately stricter than the character
-level regex, which allows empty wildcard captures).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from logstencil.kernels import lcs_length
from logstencil.model import (
    Template,
    VariableBinding,
    WILDCARD,
    compiled_template_regex,
    parse_template_string,
    render_template,
)


class _Leaf:
    __slots__ = ("template", "rendered", "order", "pattern", "length", "wild_index", "match_count")

    def __init__(self, template: Template):
        self.template = template
        self.rendered = render_template(template)
        # fewest wildcard-consumed tokens == most constants, then fewest
        # wildcard edges, then smallest rendered string
        self.order = (-template.constant_count, template.wildcard_count, self.rendered)
        self.pattern = compiled_template_regex(template)
        self.length = len(template.tokens)
        self.wild_index = (
            template.tokens.index(WILDCARD) if template.wildcard_count == 1 else -1
        )
        self.match_count = 0


class _Node:
    __slots__ = ("children", "wildcard", "leaf")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.wildcard: _Node | None = None
        self.leaf: _Leaf | None = None


@dataclass(frozen=True, slots=True)
class Hit:
    """A stored template token-matches the query."""

    template: Template
    bindings: tuple[VariableBinding, ...]
    _leaf: _Leaf = field(repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class Miss:
    """No stored template matches; ``relevant`` holds the templates under the
    deepest node the walk reached (empty when not even the first token matched)."""

    relevant: tuple[Template, ...]


MatchOutcome = Hit | Miss

_MISSING = object()


@dataclass(frozen=True)
class AbsorbResult:
    merged_with: Template | None
    stored: Template
    removed: tuple[Template, ...] = ()


class ParseTree:
    """Single-writer template trie with similarity-driven merging."""

    def __init__(
        self,
        sim_threshold: float = 0.8,
        divergence_threshold: int = 5,
        relevant_cap: int = 64,
    ):
        if not 0.0 < sim_threshold <= 1.0:
            raise ValueError(f"sim_threshold must be in (0, 1], got {sim_threshold}")
        self.sim_threshold = sim_threshold
        self.divergence_threshold = divergence_threshold
        self.relevant_cap = relevant_cap
        self._root = _Node()
        self._leaf_count = 0

    def __len__(self) -> int:
        return self._leaf_count

    # -- lookup ---------------------------------------------------------

    def match(self, tokens: Sequence[str]) -> MatchOutcome:
        """Best token-level match for the query, or a Miss with relevant templates.

        Among all matching leaves the winner consumes the fewest tokens via
        wildcards, then has the fewest wildcard edges, then the smallest
        rendered string. The Miss's relevant set comes from the node reached
        with the most query tokens consumed (first one explored wins ties).
        """
        if not tokens:
            raise ValueError("cannot match an empty token sequence")
        n = len(tokens)
        root = self._root
        # memo only at wildcard branch states; constant chains are walked inline
        memo: dict[tuple[int, int], _Leaf | None] = {}
        deepest = [0, root]
        missing = _MISSING

        def explore(node: _Node, pos: int) -> _Leaf | None:
            while True:
                if pos > deepest[0]:
                    deepest[0] = pos
                    deepest[1] = node
                if pos == n:
                    return node.leaf
                wild = node.wildcard
                if wild is None:
                    nxt = node.children.get(tokens[pos])
                    if nxt is None:
                        return None
                    node = nxt
                    pos += 1
                    continue
                break
            key = (id(node), pos)
            cached = memo.get(key, missing)
            if cached is not missing:
                return cached
            nxt = node.children.get(tokens[pos])
            winner = explore(nxt, pos + 1) if nxt is not None else None
            if not wild.children and wild.wildcard is None:
                # trailing wildcard: the only completion swallows every
                # remaining token, so the split loop is unnecessary
                cand = wild.leaf
                if cand is not None and (winner is None or cand.order < winner.order):
                    winner = cand
            else:
                for j in range(pos + 1, n + 1):
                    cand = explore(wild, j)
                    if cand is not None and (winner is None or cand.order < winner.order):
                        winner = cand
            memo[key] = winner
            return winner

        leaf = explore(root, 0)
        if leaf is None:
            node = deepest[1]
            if node is root:
                return Miss(relevant=())
            return Miss(relevant=self._subtree_templates(node))
        wildcards = leaf.order[1]
        if wildcards == 0:
            bindings: tuple[VariableBinding, ...] = ()
        elif wildcards == 1:
            # constants pin the single wildcard to one token span
            w = leaf.wild_index
            value = " ".join(tokens[w : n - leaf.length + w + 1])
            bindings = (VariableBinding(0, value),)
        else:
            # a token-level match implies the template's regex matches the
            # space-joined tokens, so the captures are well-defined
            groups = leaf.pattern.match(" ".join(tokens)).groups()
            bindings = tuple([VariableBinding(i, v) for i, v in enumerate(groups)])
        return Hit(template=leaf.template, bindings=bindings, _leaf=leaf)

    def count_hit(self, hit: Hit) -> None:
        """Record one pipeline hit served by the matched leaf."""
        hit._leaf.match_count += 1

    def _subtree_templates(self, node: _Node) -> tuple[Template, ...]:
        found: list[Template] = []
        queue = deque([node])
        while queue and len(found) < self.relevant_cap:
            current = queue.popleft()
            if current.leaf is not None:
                found.append(current.leaf.template)
            queue.extend(current.children.values())
            if current.wildcard is not None:
                queue.append(current.wildcard)
        return tuple(found)

    # -- mutation -------------------------------------------------------

    def insert(self, template: Template) -> None:
        """Ensure a leaf exists whose path equals the template (idempotent)."""
        self._insert(template)

    def _insert(self, template: Template) -> _Leaf:
        node = self._root
        for tok in template.tokens:
            if tok == WILDCARD:
                if node.wildcard is None:
                    node.wildcard = _Node()
                node = node.wildcard
            else:
                nxt = node.children.get(tok)
                if nxt is None:
                    nxt = _Node()
                    node.children[tok] = nxt
                node = nxt
        if node.leaf is None:
            node.leaf = _Leaf(template)
            self._leaf_count += 1
        return node.leaf

    def _remove(self, template: Template) -> None:
        path: list[tuple[_Node, str]] = []
        node = self._root
        for tok in template.tokens:
            nxt = node.wildcard if tok == WILDCARD else node.children.get(tok)
            if nxt is None:
                return
            path.append((node, tok))
            node = nxt
        if node.leaf is None:
            return
        node.leaf = None
        self._leaf_count -= 1
        for parent, tok in reversed(path):
            if node.leaf is None and not node.children and node.wildcard is None:
                if tok == WILDCARD:
                    parent.wildcard = None
                else:
                    del parent.children[tok]
                node = parent
            else:
                break

    def absorb(self, corrected: Template, relevant: Sequence[Template]) -> AbsorbResult:
        """Store a corrected template, merging it with relevant templates when
        they are similar enough to share a ground-truth origin.

        Merging replaces the positions where tokens differ with the wildcard;
        it applies only between equal-length templates, either pairwise above
        the similarity threshold or group-wise when enough distinct tokens
        pile up at the same divergent positions.
        """
        lc = len(corrected)
        scored: list[tuple[int, int, Template]] = []
        for idx, tmpl in enumerate(relevant):
            scored.append((lcs_length(corrected.tokens, tmpl.tokens), idx, tmpl))

        # (a) pairwise merge with the most similar equal-length template
        best_pair: tuple[int, int, Template] | None = None
        for lcs, idx, tmpl in scored:
            if len(tmpl) != lc:
                continue
            if 2.0 * lcs / (lc + len(tmpl)) < self.sim_threshold:
                continue
            if best_pair is None or lcs > best_pair[0]:
                best_pair = (lcs, idx, tmpl)
        if best_pair is not None:
            partner = best_pair[2]
            merged = Template(
                tuple(a if a == b else WILDCARD for a, b in zip(corrected.tokens, partner.tokens))
            )
            return self._merge_into(merged, partner, (partner,))

        # (b) group merge: same similarity to corrected, same divergent positions,
        # and more distinct tokens at a divergent position than the threshold
        groups: dict[tuple[int, frozenset[int]], list[tuple[int, Template]]] = {}
        for lcs, idx, tmpl in scored:
            if len(tmpl) != lc:
                continue
            divergent = frozenset(
                p for p in range(lc) if tmpl.tokens[p] != corrected.tokens[p]
            )
            if divergent:
                groups.setdefault((lcs, divergent), []).append((idx, tmpl))
        ordered = sorted(
            groups.items(), key=lambda kv: (-kv[0][0], -len(kv[1]), kv[1][0][0])
        )
        for (lcs, divergent), members in ordered:
            distinct = max(
                len({corrected.tokens[p]} | {tmpl.tokens[p] for _, tmpl in members})
                for p in divergent
            )
            if distinct > self.divergence_threshold:
                merged = Template(
                    tuple(
                        WILDCARD if p in divergent else tok
                        for p, tok in enumerate(corrected.tokens)
                    )
                )
                return self._merge_into(merged, members[0][1], tuple(t for _, t in members))

        # (c) unrelated to everything relevant: new leaf
        self.insert(corrected)
        return AbsorbResult(merged_with=None, stored=corrected, removed=())

    def _merge_into(
        self, merged: Template, partner: Template, candidates: tuple[Template, ...]
    ) -> AbsorbResult:
        removed = tuple(t for t in candidates if t.tokens != merged.tokens)
        for tmpl in removed:
            self._remove(tmpl)
        self._insert(merged)
        return AbsorbResult(merged_with=partner, stored=merged, removed=removed)

    # -- inspection & persistence ----------------------------------------

    def templates(self) -> Iterator[tuple[Template, int]]:
        """All stored templates with their hit counts, in trie order."""
        stack = [self._root]
        while stack:
            node = stack.pop()
            if node.leaf is not None:
                yield node.leaf.template, node.leaf.match_count
            if node.wildcard is not None:
                stack.append(node.wildcard)
            stack.extend(reversed(node.children.values()))

    def save(self, path) -> None:
        """One ``<template>\\t<count>`` line per leaf, sorted by rendered template."""
        rows = sorted(
            (render_template(t), count) for t, count in self.templates()
        )
        with open(path, "w", encoding="utf-8") as handle:
            for rendered, count in rows:
                handle.write(f"{rendered}\t{count}\n")

    def load(self, path) -> None:
        """Warm-start from a file produced by save()."""
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                rendered, sep, count = line.rpartition("\t")
                if not sep:
                    rendered, count = line, "0"
                leaf = self._insert(parse_template_string(rendered))
                leaf.match_count = int(count)
