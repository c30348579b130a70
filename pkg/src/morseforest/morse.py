"""Discrete gradient vector fields on the top two levels of a complex.

A gradient in the class counted here leaves every cell below dimension d-1
critical, so it is determined by its matching between K_{d-1} and K_d.
Matchings are therefore the canonical representatives throughout.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Iterator

from . import _kernels
from .complex import Cell, SimplicialComplex, euler_characteristic
from .linalg import IntegerPolynomial, betti_numbers

DEFAULT_GUARD = 40


class InstanceTooLarge(RuntimeError):
    pass


class MatchingError(ValueError):
    pass


def default_guard() -> int:
    raw = os.environ.get("MORSEFOREST_GUARD")
    return int(raw) if raw else DEFAULT_GUARD


def check_guard(K: SimplicialComplex, guard: int | None = None) -> None:
    """Refuse enumeration when the top two levels hold more than ``guard`` cells."""
    limit = default_guard() if guard is None else guard
    d = K.dim
    size = len(K.cells(d)) + len(K.cells(d - 1))
    if size > limit:
        raise InstanceTooLarge(
            f"instance too large: {size} cells in the top two levels exceeds the guard of {limit}"
        )


def top_incidence(K: SimplicialComplex) -> list[list[int]]:
    """For each top cell, the indices of its facets (facet j drops vertex j)."""
    d = K.dim
    return [[K.index(t[:j] + t[j + 1:]) for j in range(len(t))] for t in K.cells(d)]


@dataclass(frozen=True)
class TopMatching:
    pairs: frozenset[tuple[Cell, Cell]]

    @classmethod
    def of(cls, pairs) -> "TopMatching":
        return cls(frozenset((tuple(s), tuple(t)) for s, t in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    @property
    def tails(self) -> set[Cell]:
        return {s for s, _ in self.pairs}

    @property
    def heads(self) -> set[Cell]:
        return {t for _, t in self.pairs}

    def head_of(self) -> dict[Cell, Cell]:
        return dict(self.pairs)

    def validate(self, K: SimplicialComplex) -> None:
        d = K.dim
        seen = set()
        for s, t in self.pairs:
            if t not in K or len(t) != d + 1:
                raise MatchingError(f"head {list(t)} is not a {d}-cell of the complex")
            if len(s) != d or not set(s) < set(t):
                raise MatchingError(f"pair {list(s)} -> {list(t)} is not incident")
            for c in (s, t):
                if c in seen:
                    raise MatchingError(f"cell {list(c)} appears in two pairs")
                seen.add(c)

    def to_json(self) -> list:
        return [[list(s), list(t)] for s, t in self]

    @classmethod
    def from_json(cls, data) -> "TopMatching":
        return cls.of((tuple(s), tuple(t)) for s, t in data)


def is_acyclic(K: SimplicialComplex, M: TopMatching) -> bool:
    """No directed cycle once matched pairs point up and all other incidences down."""
    M.validate(K)
    head_of = M.head_of()
    tail_of = {t: s for s, t in head_of.items()}
    # a cycle alternates tail -> head -> other facet -> its head ...
    state: dict[Cell, int] = {}
    for start in head_of.values():
        if start in state:
            continue
        stack = [(start, iter(K.faces_of(start)))]
        state[start] = 1
        while stack:
            h, it = stack[-1]
            advanced = False
            for f in it:
                if f == tail_of[h] or f not in head_of:
                    continue
                nxt = head_of[f]
                if state.get(nxt) == 1:
                    return False
                if nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(K.faces_of(nxt))))
                    advanced = True
                    break
            if not advanced:
                state[h] = 2
                stack.pop()
    return True


@dataclass(frozen=True)
class GradientCensus:
    counts: dict[int, int]  # critical top cells -> number of gradients
    n: int  # |K_{d-1}|
    m: int  # |K_d|

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _census_task(args):
    facets, n, prefix, backend = args
    return _kernels.census_counts(facets, n, prefix, backend=backend)


def _prefixes(facets, jobs):
    # split on the first top cells' decisions until there is enough work to share
    prefixes = [()]
    depth = 0
    while len(prefixes) < 4 * jobs and depth < len(facets):
        prefixes = [p + (c,) for p in prefixes for c in range(-1, len(facets[depth]))]
        depth += 1
    return prefixes


def gradient_census(K: SimplicialComplex, guard: int | None = None, jobs: int = 1,
                    backend: str | None = None) -> GradientCensus:
    """Count acyclic top-level matchings by the number of critical top cells."""
    if K.dim < 1:
        raise ValueError("census needs a complex of dimension >= 1")
    check_guard(K, guard)
    d = K.dim
    facets = top_incidence(K)
    n, m = len(K.cells(d - 1)), len(K.cells(d))
    if jobs > 1 and m > 1:
        tasks = [(facets, n, p, backend) for p in _prefixes(facets, jobs)]
        by_pairs = [0] * (m + 1)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_census_task, tasks):
                by_pairs = [a + b for a, b in zip(by_pairs, part)]
    else:
        by_pairs = _kernels.census_counts(facets, n, (), backend=backend)
    return GradientCensus({m - k: c for k, c in enumerate(by_pairs)}, n, m)


def census_polynomial(census: GradientCensus) -> IntegerPolynomial:
    """Place the count with m-i critical top cells at lambda**(n-i)."""
    coeffs = [0] * (census.n + 1)
    for i in range(census.n + 1):
        coeffs[census.n - i] = census.counts.get(census.m - i, 0)
    return IntegerPolynomial(tuple(coeffs))


def enumerate_gradients(K: SimplicialComplex, guard: int | None = None) -> Iterator[TopMatching]:
    """Stream every acyclic top-level matching, in census DFS order."""
    check_guard(K, guard)
    d = K.dim
    tops = K.cells(d)
    tails = K.cells(d - 1)
    facets = top_incidence(K)
    head_of = [-1] * len(tails)
    tail_of = [-1] * len(tops)

    def closes_cycle(s, t):
        stack, seen = [t], {t}
        while stack:
            h = stack.pop()
            for f in facets[h]:
                if f == tail_of[h] or (h == t and f == s):
                    continue
                if f == s:
                    return True
                h2 = head_of[f]
                if h2 >= 0 and h2 not in seen:
                    seen.add(h2)
                    stack.append(h2)
        return False

    def visit(t):
        if t == len(tops):
            yield TopMatching.of((tails[tail_of[h]], tops[h]) for h in range(len(tops)) if tail_of[h] >= 0)
            return
        yield from visit(t + 1)
        for s in facets[t]:
            if head_of[s] >= 0 or closes_cycle(s, t):
                continue
            head_of[s], tail_of[t] = t, s
            yield from visit(t + 1)
            head_of[s], tail_of[t] = -1, -1

    yield from visit(0)


def enumerate_graph_gradients(G: SimplicialComplex, guard: int | None = None) -> Iterator[TopMatching]:
    if G.dim != 1:
        raise ValueError("graph gradients need a 1-dimensional complex")
    return enumerate_gradients(G, guard)


def critical_cells(K: SimplicialComplex, M: TopMatching) -> dict[int, list[Cell]]:
    M.validate(K)
    used = M.tails | M.heads
    return {d: [c for c in K.cells(d) if c not in used] for d in range(K.dim + 1)}


# --- Morse functions -------------------------------------------------------------

@dataclass(frozen=True)
class MorseFunction:
    values: dict[Cell, int]

    def __call__(self, cell: Cell) -> int:
        return self.values[tuple(cell)]

    def induced_field(self, K: SimplicialComplex) -> frozenset[tuple[Cell, Cell]]:
        """All face/coface pairs on which the value does not increase."""
        f = self.values
        return frozenset((s, t) for s, t in K.hasse_edges() if f[t] <= f[s])

    def local_counts(self, K: SimplicialComplex, cell: Cell) -> tuple[int, int]:
        """(#faces with value >= f(cell), #cofaces with value <= f(cell))."""
        f = self.values
        v = f[cell]
        down = sum(1 for g in K.faces_of(cell) if f[g] >= v)
        up = sum(1 for g in K.cofaces_of(cell) if f[g] <= v)
        return down, up

    def all_local_counts(self, K: SimplicialComplex) -> dict[Cell, tuple[int, int]]:
        """``local_counts`` for every cell in one pass over the Hasse edges.

        Both counts are driven by the same edges: a face/coface pair whose
        values do not increase counts once for each end.
        """
        f = self.values
        down = dict.fromkeys(K, 0)
        up = dict.fromkeys(K, 0)
        for s, t in K.hasse_edges():
            if f[t] <= f[s]:
                down[t] += 1
                up[s] += 1
        return {c: (down[c], up[c]) for c in down}

    def violations(self, K: SimplicialComplex, counts=None) -> list[str]:
        """Cells breaking either discrete Morse inequality; empty if valid."""
        counts = counts or self.all_local_counts(K)
        return [f"{list(c)}: {d} faces above, {u} cofaces below"
                for c, (d, u) in counts.items() if d > 1 or u > 1]

    def critical_cells(self, K: SimplicialComplex, counts=None) -> dict[int, list[Cell]]:
        counts = counts or self.all_local_counts(K)
        return {d: [c for c in K.cells(d) if counts[c] == (0, 0)] for d in range(K.dim + 1)}

    def exclusivity_holds(self, K: SimplicialComplex, counts=None) -> bool:
        """A non-critical cell has a low coface or a high face, never both."""
        counts = counts or self.all_local_counts(K)
        return all(dc != (1, 1) for dc in counts.values())

    def weak_morse_inequalities(self, K: SimplicialComplex, betti: list[int] | None = None,
                                counts=None) -> bool:
        crit = [len(v) for _, v in sorted(self.critical_cells(K, counts).items())]
        betti = betti_numbers(K) if betti is None else betti
        alternating = sum((-1) ** i * c for i, c in enumerate(crit))
        return all(c >= b for c, b in zip(crit, betti)) and alternating == euler_characteristic(K)


def realize_morse_function(K: SimplicialComplex, M: TopMatching) -> MorseFunction:
    """Integer discrete Morse function whose gradient is exactly ``M``.

    Orders cells so a matched coface comes before its tail and every other face
    before its coface, then assigns each cell the length of the longest chain
    below it. The empty matching yields f = dim.
    """
    M.validate(K)
    matched = M.pairs
    below: dict[Cell, set[Cell]] = {c: set() for c in K}
    for s, t in K.hasse_edges():
        if (s, t) in matched:
            below[s].add(t)
        else:
            below[t].add(s)
    try:
        order = list(TopologicalSorter(below).static_order())
    except CycleError as exc:
        raise MatchingError("matching is not acyclic") from exc
    values: dict[Cell, int] = {}
    for c in order:
        values[c] = max((values[p] + 1 for p in below[c]), default=0)
    return MorseFunction(values)
