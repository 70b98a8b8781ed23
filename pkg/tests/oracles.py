"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive: memoized recursion for LCS, full
enumeration for trie matching and metric grouping. None of it shares code
with the implementations under test.
"""

from __future__ import annotations

import random
from functools import lru_cache

WILD = "<*>"


def lcs_recursive(a, b) -> int:
    """Memoized top-down LCS length."""
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def token_level_match(template_tokens, query_tokens) -> bool:
    """Constants consume one equal token, wildcards consume one or more."""

    def rec(i: int, j: int) -> bool:
        if i == len(template_tokens):
            return j == len(query_tokens)
        if j >= len(query_tokens):
            return False
        tok = template_tokens[i]
        if tok == WILD:
            return any(rec(i + 1, k) for k in range(j + 1, len(query_tokens) + 1))
        return tok == query_tokens[j] and rec(i + 1, j + 1)

    return rec(0, 0)


def best_template_by_enumeration(template_strings, query_tokens):
    """The specificity-ordered winner among all token-level matches, or None.

    Order: fewest wildcard-consumed tokens (= most constants), then fewest
    wildcards, then smallest rendered string.
    """
    matches = []
    for rendered in template_strings:
        tokens = rendered.split()
        if token_level_match(tokens, query_tokens):
            constants = sum(1 for t in tokens if t != WILD)
            wildcards = len(tokens) - constants
            matches.append((len(query_tokens) - constants, wildcards, rendered))
    if not matches:
        return None
    return min(matches)[2]


def random_template_tokens(rng: random.Random, max_len: int = 8, vocab=None):
    vocab = vocab or ["alpha", "beta", "gamma", "delta", "up", "down", "x", "y"]
    length = rng.randint(1, max_len)
    tokens = []
    for _ in range(length):
        if rng.random() < 0.3:
            tokens.append(WILD)
        else:
            tokens.append(rng.choice(vocab))
    return tokens


def instantiate(rng: random.Random, template_tokens, values=None):
    """A content string the template token-matches, substituting 1-3 tokens
    per wildcard."""
    values = values or ["77", "id9", "node3", "srv", "0x1f", "12.5"]
    out = []
    for tok in template_tokens:
        if tok == WILD:
            out.extend(rng.choice(values) for _ in range(rng.randint(1, 3)))
        else:
            out.append(tok)
    return " ".join(out)


def metrics_by_enumeration(parsed: dict, truth: dict) -> dict:
    """GA/FGA/PA/FTA computed by scanning messages, no dict grouping tricks."""

    def norm(text: str) -> str:
        return " ".join(text.split())

    ids = sorted(parsed)

    def group_of(mapping, line_id):
        target = norm(mapping[line_id])
        return frozenset(i for i in ids if norm(mapping[i]) == target)

    grouped = sum(1 for i in ids if group_of(parsed, i) == group_of(truth, i))
    exact = sum(1 for i in ids if norm(parsed[i]) == norm(truth[i]))

    parsed_templates = sorted({norm(parsed[i]) for i in ids})
    truth_templates = sorted({norm(truth[i]) for i in ids})

    def ids_of(mapping, template):
        return frozenset(i for i in ids if norm(mapping[i]) == template)

    n_c_group = 0
    n_c_template = 0
    for pt in parsed_templates:
        p_ids = ids_of(parsed, pt)
        for tt in truth_templates:
            if ids_of(truth, tt) == p_ids:
                n_c_group += 1
                if pt == tt:
                    n_c_template += 1
                break

    def harmonic(num, n_p, n_g):
        precision = num / n_p
        recall = num / n_g
        if precision + recall == 0:
            return 0.0
        return 2 * precision * recall / (precision + recall)

    n_p, n_g = len(parsed_templates), len(truth_templates)
    return {
        "GA": grouped / len(ids),
        "PA": exact / len(ids),
        "FGA": harmonic(n_c_group, n_p, n_g),
        "FTA": harmonic(n_c_template, n_p, n_g),
    }
