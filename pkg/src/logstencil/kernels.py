"""LCS kernel selection: compiled extension when available, pure Python otherwise.

Set LOGSTENCIL_PURE_PYTHON=1 to force the fallback (used by the kernel
benchmark and the cross-check tests). ``KERNEL_BACKEND`` reports which
implementation is active.
"""

from __future__ import annotations

import os
from typing import Sequence


def py_lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence under exact token equality.

    Two-row dynamic program, O(len(a) * len(b)) time, O(min) space.
    """
    if len(b) > len(a):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    curr = [0] * (len(b) + 1)
    for ai in a:
        for j, bj in enumerate(b, start=1):
            if ai == bj:
                curr[j] = prev[j - 1] + 1
            else:
                pj, cj = prev[j], curr[j - 1]
                curr[j] = pj if pj >= cj else cj
        prev, curr = curr, prev
    return prev[len(b)]


if os.environ.get("LOGSTENCIL_PURE_PYTHON"):
    lcs_length = py_lcs_length
    KERNEL_BACKEND = "pure-python"
else:
    try:
        from logstencil._lcs import lcs_length  # type: ignore[no-redef]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        lcs_length = py_lcs_length
        KERNEL_BACKEND = "pure-python"
