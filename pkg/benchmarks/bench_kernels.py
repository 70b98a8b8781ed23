"""Benchmark the compiled LCS kernel against the pure-Python fallback.

The kernel sits on the miss path: every LLM-bound log message scores the
whole candidate set to pick demonstrations, and template merging scores the
relevant set. Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --pairs 20000 --max-len 24

The demonstration-selection section re-executes this script with
LOGSTENCIL_PURE_PYTHON=1 so each pass uses the kernel exactly as the
import-time selection would pick it.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from logstencil.kernels import KERNEL_BACKEND, py_lcs_length

try:
    from logstencil._lcs import lcs_length as compiled_lcs_length
except ImportError:
    compiled_lcs_length = None

VOCAB = [
    "block", "rdd", "disk", "session", "opened", "user", "connection", "from",
    "port", "timeout", "renewed", "lease", "address", "0x1f", "17", "node9",
]


def make_pairs(count: int, max_len: int, seed: int) -> list[tuple[list[str], list[str]]]:
    rng = random.Random(seed)
    return [
        (
            [rng.choice(VOCAB) for _ in range(rng.randint(1, max_len))],
            [rng.choice(VOCAB) for _ in range(rng.randint(1, max_len))],
        )
        for _ in range(count)
    ]


def time_kernel(kernel, pairs) -> float:
    started = time.perf_counter()
    for a, b in pairs:
        kernel(a, b)
    return time.perf_counter() - started


def bench_lcs(pairs) -> None:
    print(f"lcs_length over {len(pairs)} random token pairs")
    pure = time_kernel(py_lcs_length, pairs)
    print(f"  pure-python  {pure:8.3f} s   {1e6 * pure / len(pairs):8.2f} us/pair")
    if compiled_lcs_length is None:
        print("  compiled     (extension not built)")
        return
    fast = time_kernel(compiled_lcs_length, pairs)
    print(f"  compiled     {fast:8.3f} s   {1e6 * fast / len(pairs):8.2f} us/pair")
    print(f"  speedup      {pure / fast:8.1f} x")

    mismatches = sum(
        1 for a, b in pairs[:2000] if py_lcs_length(a, b) != compiled_lcs_length(a, b)
    )
    print(f"  agreement on first 2000 pairs: {2000 - mismatches}/2000")


def run_selection_bench(seed: int) -> None:
    """Demonstration selection against a full candidate set, current kernel."""
    from logstencil.candidates import CandidateSet
    from logstencil.model import parse_template_string

    rng = random.Random(seed)
    store = CandidateSet(cap=256)
    for i in range(256):
        words = [rng.choice(VOCAB) for _ in range(rng.randint(4, 12))]
        store.add(" ".join(words) + f" u{i}", parse_template_string(" ".join(words) + " <*>"))
    queries = [" ".join(rng.choice(VOCAB) for _ in range(8)) for _ in range(200)]

    started = time.perf_counter()
    for query in queries:
        store.select_demonstrations(query, 3)
    elapsed = time.perf_counter() - started
    print(
        f"  {KERNEL_BACKEND:12s} {elapsed:8.3f} s   "
        f"{1e3 * elapsed / len(queries):8.2f} ms/query"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description="compare compiled and pure LCS kernels")
    parser.add_argument("--pairs", type=int, default=10000)
    parser.add_argument("--max-len", type=int, default=16)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--selection-only", action="store_true",
        help="internal: run just the selection bench with the current kernel",
    )
    args = parser.parse_args()

    if args.selection_only:
        run_selection_bench(args.seed)
        return

    pairs = make_pairs(args.pairs, args.max_len, args.seed)
    bench_lcs(pairs)

    print("\nselect_demonstrations(k=3) against 256 candidates, 200 queries")
    run_selection_bench(args.seed)
    if KERNEL_BACKEND == "compiled":
        sys.stdout.flush()
        env = dict(os.environ, LOGSTENCIL_PURE_PYTHON="1")
        subprocess.run(
            [sys.executable, __file__, "--selection-only", "--seed", str(args.seed)],
            env=env,
            check=True,
        )


if __name__ == "__main__":
    main()
