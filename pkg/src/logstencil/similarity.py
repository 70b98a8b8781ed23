"""Token-sequence similarity: 2 * LCS / (len(a) + len(b)).

The same score drives template merging in the parse tree (coarse tokens,
wildcards compared as the literal token ``<*>``) and demonstration selection
in the candidate set (fine tokens of raw content).
"""

from __future__ import annotations

from typing import Sequence

from logstencil.kernels import KERNEL_BACKEND, lcs_length

__all__ = ["KERNEL_BACKEND", "lcs_length", "similarity"]


def similarity(a: Sequence[str], b: Sequence[str]) -> float:
    """Similarity in [0, 1]; 1.0 iff the sequences are elementwise identical."""
    total = len(a) + len(b)
    if total == 0:
        raise ValueError("similarity is undefined for two empty token sequences")
    return 2.0 * lcs_length(a, b) / total
