"""Rooted forests in the top dimension, fitting orientations and collapses.

A pair (F, R) with F a set of d-cells and R a set of (d-1)-cells is a rooted
forest exactly when |K_{d-1} - R| = |F| and the square block of the boundary
matrix on rows K_{d-1} - R and columns F is nonsingular. The absolute value of
that determinant is the order of H_{d-1}(F, R), taken with the full
(d-2)-skeleton on both sides, so one determinant certifies the pair and gives
its weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import _kernels
from .complex import Cell, SimplicialComplex
from .linalg import (IntegerPolynomial, bareiss_determinant, boundary_matrix, rank,
                     smith_normal_form)
from .morse import TopMatching, check_guard, is_acyclic, top_incidence


class ForestError(ValueError):
    pass


@dataclass(frozen=True)
class RootedForest:
    complex: SimplicialComplex = field(repr=False, compare=False)
    forest: tuple[Cell, ...]
    root: tuple[Cell, ...]
    det: int = field(compare=False)

    @property
    def complement(self) -> tuple[Cell, ...]:
        """The non-root (d-1)-cells, i.e. the rows of the certifying block."""
        roots = set(self.root)
        return tuple(c for c in self.complex.cells(self.complex.dim - 1) if c not in roots)

    @property
    def order(self) -> int:
        """|H_{d-1}(F, R)|."""
        return abs(self.det)

    @property
    def weight(self) -> int:
        return self.det * self.det

    @property
    def local_root(self) -> tuple[Cell, ...]:
        """Root cells that are faces of some forest cell."""
        K = self.complex
        touched = {f for t in self.forest for f in K.faces_of(t)}
        return tuple(r for r in self.root if r in touched)

    def to_json(self, collapses: bool | None = None) -> dict:
        if collapses is None:
            collapses = collapses_to_root(self)
        return {
            "forest": [list(c) for c in self.forest],
            "root": [list(c) for c in self.root],
            "weight": self.weight,
            "collapses": collapses,
        }


def _columns(K: SimplicialComplex) -> list[list[tuple[int, int]]]:
    return [[(r, -1 if j % 2 else 1) for j, r in enumerate(fs)] for fs in top_incidence(K)]


def _block(K: SimplicialComplex, forest: Iterable[Cell], rows: Iterable[Cell]) -> list[list[int]]:
    B = boundary_matrix(K, K.dim)
    ri = [K.index(r) for r in rows]
    ci = [K.index(f) for f in forest]
    return [[B[i, j] for j in ci] for i in ri]


def is_forest(K: SimplicialComplex, F: Iterable[Cell]) -> bool:
    """Whether the boundary columns of ``F`` are linearly independent."""
    F = sorted(set(map(tuple, F)))
    for f in F:
        if f not in K or len(f) != K.dim + 1:
            raise ForestError(f"{list(f)} is not a top cell")
    if not F:
        return True
    B = boundary_matrix(K, K.dim)
    cols = [K.index(f) for f in F]
    return rank([[B[i, j] for j in cols] for i in range(B.nrows)]) == len(F)


def rooted_forest(K: SimplicialComplex, F: Iterable[Cell], R: Iterable[Cell]) -> RootedForest:
    """Build and certify a rooted forest; raises ForestError if (F, R) is not one."""
    F = tuple(sorted(set(map(tuple, F))))
    R = tuple(sorted(set(map(tuple, R))))
    d = K.dim
    lower = set(K.cells(d - 1))
    if any(f not in K or len(f) != d + 1 for f in F) or any(r not in lower for r in R):
        raise ForestError("forest cells must be top cells and roots one dimension lower")
    rbar = [c for c in K.cells(d - 1) if c not in set(R)]
    if len(rbar) != len(F):
        raise ForestError(f"|non-root| = {len(rbar)} differs from |F| = {len(F)}")
    det = bareiss_determinant(_block(K, F, rbar))
    if det == 0:
        raise ForestError("boundary block is singular: not a rooted forest")
    return RootedForest(K, F, R, det)


def _from_masks(K, fmask, rmask, det) -> RootedForest:
    d = K.dim
    tops, lows = K.cells(d), K.cells(d - 1)
    F = tuple(t for i, t in enumerate(tops) if fmask >> i & 1)
    R = tuple(c for i, c in enumerate(lows) if not rmask >> i & 1)
    return RootedForest(K, F, R, det)


def _masks(rf: RootedForest) -> tuple[int, int]:
    K = rf.complex
    fmask = sum(1 << K.index(t) for t in rf.forest)
    rmask = sum(1 << K.index(c) for c in rf.complement)
    return fmask, rmask


def enumerate_rooted_forests(K: SimplicialComplex, by_root_size: int | None = None,
                             guard: int | None = None, backend: str | None = None) -> Iterator[RootedForest]:
    """Every rooted forest of K, optionally only those with ``|R| = by_root_size``.

    Forests are grown cell by cell, never extending a dependent set; each
    forest's roots are the complements of the row bases of its boundary block.
    """
    if K.dim < 1:
        raise ValueError("rooted forests need a complex of dimension >= 1")
    check_guard(K, guard)
    n = len(K.cells(K.dim - 1))
    size = -1
    if by_root_size is not None:
        size = n - by_root_size
        if size < 0 or size > len(K.cells(K.dim)):
            return
    for fmask, rmask, det in _kernels.rooted_forests(_columns(K), n, size, backend=backend):
        yield _from_masks(K, fmask, rmask, det)


def forest_generating_polynomial(K: SimplicialComplex, guard: int | None = None,
                                 backend: str | None = None) -> IntegerPolynomial:
    """Sum of |H_{d-1}(F,R)|^2 lambda^{|R|} over all rooted forests."""
    n = len(K.cells(K.dim - 1))
    coeffs = [0] * (n + 1)
    for rf in enumerate_rooted_forests(K, guard=guard, backend=backend):
        coeffs[len(rf.root)] += rf.weight
    return IntegerPolynomial(tuple(coeffs))


# --- fitting orientations and collapses --------------------------------------------

@dataclass(frozen=True)
class FittingOrientation:
    psi: tuple[tuple[Cell, Cell], ...]  # (non-root cell, forest cell), sorted

    def as_dict(self) -> dict[Cell, Cell]:
        return dict(self.psi)

    def as_matching(self) -> TopMatching:
        return TopMatching.of(self.psi)


def acyclic_fitting_orientation(rf: RootedForest, reverse: bool = False,
                                backend: str | None = None) -> FittingOrientation | None:
    """Peel free faces off the forest; the pairs found form the orientation.

    A non-root cell with exactly one remaining forest coface is paired with it
    and both are removed, lowest canonical index first (highest with
    ``reverse``). Returns None when peeling stalls before every non-root cell
    is paired.
    """
    K = rf.complex
    fmask, rmask = _masks(rf)
    pairs = _kernels.peel(top_incidence(K), fmask, rmask, reverse, backend=backend)
    if pairs is None:
        return None
    lows, tops = K.cells(K.dim - 1), K.cells(K.dim)
    return FittingOrientation(tuple(sorted((lows[s], tops[t]) for s, t in pairs)))


def collapses_to_root(rf: RootedForest, backend: str | None = None) -> bool:
    return acyclic_fitting_orientation(rf, backend=backend) is not None


def fitting_orientations(rf: RootedForest) -> Iterator[FittingOrientation]:
    """Brute force: every incidence-respecting bijection from non-roots to F."""
    K = rf.complex
    rows = list(rf.complement)
    forest = set(rf.forest)
    options = [[t for t in K.cofaces_of(r) if t in forest] for r in rows]
    used: set[Cell] = set()
    chosen: list[Cell] = []

    def go(i):
        if i == len(rows):
            yield FittingOrientation(tuple(sorted(zip(rows, chosen))))
            return
        for t in options[i]:
            if t not in used:
                used.add(t)
                chosen.append(t)
                yield from go(i + 1)
                chosen.pop()
                used.discard(t)

    yield from go(0)


def count_acyclic_fitting_orientations(rf: RootedForest) -> tuple[int, int]:
    """(all fitting orientations, acyclic ones), by exhaustive enumeration."""
    total = acyclic = 0
    for psi in fitting_orientations(rf):
        total += 1
        if is_acyclic(rf.complex, psi.as_matching()):
            acyclic += 1
    return total, acyclic


def relative_homology_order(rf: RootedForest) -> int:
    """|H_{d-1}(F, R)| from a determinant and, independently, from Smith form."""
    block = _block(rf.complex, rf.forest, rf.complement)
    by_det = abs(bareiss_determinant(block))
    if not block:
        by_snf = 1
    else:
        snf = smith_normal_form(block)
        by_snf = 0
        if snf.rank == len(block):
            by_snf = 1
            for f in snf.factors:
                by_snf *= f
    if by_det != by_snf:
        raise ArithmeticError(f"determinant gives {by_det} but Smith form gives {by_snf}")
    return by_det


@dataclass(frozen=True)
class Defect:
    root_size: int
    forests: tuple[RootedForest, ...]  # rooted forests that do not collapse
    epsilon: int


def defect(K: SimplicialComplex, i: int, guard: int | None = None,
           backend: str | None = None) -> Defect:
    """Non-collapsing rooted forests with |R| = i and their summed weights."""
    n = len(K.cells(K.dim - 1))
    if not 0 <= i <= n:
        raise ValueError(f"root size {i} out of range 0..{n}")
    bad = tuple(rf for rf in enumerate_rooted_forests(K, i, guard=guard, backend=backend)
                if not collapses_to_root(rf, backend=backend))
    return Defect(i, bad, sum(rf.weight for rf in bad))


def defects(K: SimplicialComplex, guard: int | None = None, backend: str | None = None) -> list[Defect]:
    """``defect(K, i)`` for every root size, sharing one enumeration."""
    n = len(K.cells(K.dim - 1))
    buckets: list[list[RootedForest]] = [[] for _ in range(n + 1)]
    for rf in enumerate_rooted_forests(K, guard=guard, backend=backend):
        if not collapses_to_root(rf, backend=backend):
            buckets[len(rf.root)].append(rf)
    return [Defect(i, tuple(b), sum(rf.weight for rf in b)) for i, b in enumerate(buckets)]


def remainder(G: SimplicialComplex, M: TopMatching) -> RootedForest:
    """Rooted forest of a graph gradient: the matched edges, rooted at the sinks.

    ``local_root`` of the result holds the sinks; ``root`` holds every
    critical vertex, as the rooted-forest certificate requires.
    """
    if G.dim != 1:
        raise ValueError("remainder expects a 1-dimensional complex")
    if not is_acyclic(G, M):
        raise ValueError("remainder needs an acyclic matching")
    F = sorted(M.heads)
    R = [v for v in G.cells(0) if v not in M.tails]
    return rooted_forest(G, F, R)
