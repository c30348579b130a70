"""Compare the compiled and pure-Python kernels on the hot paths.

    python benchmarks/bench_kernels.py [--repeat N]

Each row is the best of N runs in milliseconds. Both backends are also checked
to return identical results.
"""
from __future__ import annotations

import argparse
import random
import time

from morseforest import _kernels
from morseforest.complex import builtin
from morseforest.forests import _columns, _masks, enumerate_rooted_forests
from morseforest.morse import top_incidence


def best_of(repeat, fn):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1000, result


def cases():
    rng = random.Random(0)
    rows = [[rng.randint(-3, 3) for _ in range(14)] for _ in range(14)]
    yield "det 14x14", lambda b: _kernels.det(rows, backend=b)
    for name in ("moebius", "bipyramid", "projective_plane"):
        K = builtin(name)
        facets, nt = top_incidence(K), len(K.cells(K.dim - 1))
        yield f"census {name}", lambda b, f=facets, n=nt: _kernels.census_counts(f, n, backend=b)
    for name in ("moebius", "bipyramid"):
        K = builtin(name)
        cols, nr = _columns(K), len(K.cells(K.dim - 1))
        yield f"forests {name}", lambda b, c=cols, n=nr: sorted(_kernels.rooted_forests(c, n, backend=b))
    K = builtin("bipyramid")
    facets = top_incidence(K)
    masks = [_masks(rf) for rf in enumerate_rooted_forests(K)]
    yield f"peel bipyramid x{len(masks)}", \
        lambda b: [_kernels.peel(facets, fm, rm, backend=b) for fm, rm in masks]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels._compiled is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")
    print(f"{'kernel':28s} {'compiled ms':>12s} {'python ms':>12s} {'speedup':>8s}")
    for label, fn in cases():
        tc, rc = best_of(args.repeat, lambda: fn("compiled"))
        tp, rp = best_of(args.repeat, lambda: fn("python"))
        if rc != rp:
            raise SystemExit(f"{label}: backends disagree")
        print(f"{label:28s} {tc:12.2f} {tp:12.2f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
