"""Finite simplicial complexes, face incidence and the named generator complexes.

Cells are plain tuples of strictly increasing vertex ids. Within each dimension
cells are kept in lexicographic order; that order is the row/column order of
every matrix built from a complex, and the sorted vertex order is the
orientation of each cell.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

Cell = tuple[int, ...]


class ComplexError(ValueError):
    """Raised for malformed complex input."""


def _as_cell(vertices: Iterable[int]) -> Cell:
    vs = list(vertices)
    if not vs:
        raise ComplexError("empty face")
    for v in vs:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ComplexError(f"vertex ids must be non-negative integers, got {v!r}")
    cell = tuple(sorted(vs))
    if len(set(cell)) != len(cell):
        raise ComplexError(f"degenerate face {list(vs)}")
    return cell


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of cells, stored per dimension in canonical order."""

    cells_by_dim: tuple[tuple[Cell, ...], ...]
    name: str | None = field(default=None, compare=False)
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _cofaces: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _hasse: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {}
        for cells in self.cells_by_dim:
            for i, c in enumerate(cells):
                index[c] = i
        cofaces: dict[Cell, list[Cell]] = {c: [] for c in index}
        for cells in self.cells_by_dim[1:]:
            for c in cells:
                for f in _facets(c):
                    cofaces[f].append(c)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_cofaces", {c: tuple(v) for c, v in cofaces.items()})

    @property
    def dim(self) -> int:
        return len(self.cells_by_dim) - 1

    def cells(self, d: int) -> tuple[Cell, ...]:
        if 0 <= d <= self.dim:
            return self.cells_by_dim[d]
        return ()

    def __len__(self) -> int:
        return sum(len(c) for c in self.cells_by_dim)

    def __iter__(self):
        for cells in self.cells_by_dim:
            yield from cells

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self._index

    def index(self, cell: Cell) -> int:
        """Position of ``cell`` within its dimension."""
        try:
            return self._index[tuple(cell)]
        except KeyError:
            raise KeyError(f"cell {tuple(cell)} not in complex") from None

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells_by_dim)

    def faces_of(self, cell: Cell) -> list[Cell]:
        """Codimension-1 faces of ``cell`` in canonical order."""
        cell = tuple(cell)
        if cell not in self._index:
            raise KeyError(f"cell {cell} not in complex")
        if len(cell) == 1:
            return []
        return sorted(_facets(cell))

    def cofaces_of(self, cell: Cell) -> list[Cell]:
        """Codimension-1 cofaces of ``cell`` in canonical order."""
        cell = tuple(cell)
        if cell not in self._index:
            raise KeyError(f"cell {cell} not in complex")
        return list(self._cofaces[cell])

    def maximal_faces(self) -> list[Cell]:
        return [c for c in self if not self._cofaces[c]]

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex(self.cells_by_dim[: k + 1], name=self.name)

    def hasse_edges(self) -> list[tuple[Cell, Cell]]:
        """All (face, coface) pairs with codimension 1, lowest level first."""
        if self._hasse is None:
            edges = tuple((f, c) for cells in self.cells_by_dim[1:] for c in cells for f in sorted(_facets(c)))
            object.__setattr__(self, "_hasse", edges)
        return list(self._hasse)

    def to_json(self) -> dict:
        out = {}
        if self.name is not None:
            out["name"] = self.name
        out["maximal_faces"] = [list(c) for c in self.maximal_faces()]
        return out


def _facets(cell: Cell) -> list[Cell]:
    # j-th entry drops vertex j
    return [cell[:j] + cell[j + 1:] for j in range(len(cell))]


def from_maximal_faces(faces: Sequence[Sequence[int]], name: str | None = None) -> SimplicialComplex:
    """Downward closure of ``faces``; duplicates and non-maximal input are fine."""
    if not faces:
        raise ComplexError("empty complex")
    tops = {_as_cell(f) for f in faces}
    by_dim: dict[int, set[Cell]] = {}
    for top in tops:
        for k in range(1, len(top) + 1):
            by_dim.setdefault(k - 1, set()).update(itertools.combinations(top, k))
    dim = max(by_dim)
    return SimplicialComplex(tuple(tuple(sorted(by_dim[d])) for d in range(dim + 1)), name=name)


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(K.f_vector()))


# --- builtins -------------------------------------------------------------

MOEBIUS = [[i, (i + 1) % 5, (i + 2) % 5] for i in range(5)]
PROJECTIVE_PLANE = [
    [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
    [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
]
BIPYRAMID = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]

_FAMILIES = {
    # name: (minimum n, generator)
    "cycle": (3, lambda n: [[i, (i + 1) % n] for i in range(n)]),
    "path": (2, lambda n: [[i, i + 1] for i in range(n - 1)]),
    "star": (1, lambda n: [[0, i] for i in range(1, n + 1)]),
    "complete": (2, lambda n: [list(e) for e in itertools.combinations(range(n), 2)]),
    # n counts all vertices: hub 0 plus a rim cycle on 1..n-1, so wheel(4) is K4
    "wheel": (4, lambda n: [[0, i] for i in range(1, n)]
              + [[i, i % (n - 1) + 1] for i in range(1, n)]),
    "simplex": (1, lambda n: [list(range(n + 1))]),
    "simplex_boundary": (2, lambda n: [list(c) for c in itertools.combinations(range(n + 1), n)]),
}
_FIXED = {"moebius": MOEBIUS, "projective_plane": PROJECTIVE_PLANE, "bipyramid": BIPYRAMID}

BUILTIN_NAMES = tuple(_FAMILIES) + tuple(_FIXED)


def builtin(name: str, n: int | None = None) -> SimplicialComplex:
    """Named complex; the parametrised families take ``n``.

    ``cycle(n)``, ``path(n)``, ``complete(n)`` and ``wheel(n)`` have n vertices,
    ``star(n)`` has n leaves, ``simplex(n)`` is the n-simplex and
    ``simplex_boundary(n)`` its boundary (an (n-1)-sphere).
    """
    if name in _FIXED:
        return from_maximal_faces(_FIXED[name], name=name)
    if name not in _FAMILIES:
        raise ComplexError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    lo, gen = _FAMILIES[name]
    if n is None:
        raise ComplexError(f"builtin {name!r} needs a size parameter n")
    if n < lo:
        raise ComplexError(f"{name}(n) requires n >= {lo}, got {n}")
    return from_maximal_faces(gen(n), name=f"{name}({n})")


def random_complex(rng, n_vertices: int, n_faces: int, dim: int = 2,
                   name: str | None = None) -> SimplicialComplex:
    """Closure of ``n_faces`` distinct random ``dim``-faces on ``n_vertices`` vertices.

    ``rng`` is a :class:`random.Random`; vertices that no face uses are dropped.
    """
    pool = list(itertools.combinations(range(n_vertices), dim + 1))
    if not pool:
        raise ComplexError("not enough vertices for the requested dimension")
    picked = rng.sample(pool, min(n_faces, len(pool)))
    return from_maximal_faces(picked, name=name or f"random({n_vertices},{len(picked)})")


# --- manifold predicates ----------------------------------------------------

def is_pseudomanifold(K: SimplicialComplex) -> tuple[bool, str]:
    """Check purity, the two-coface condition and strong connectivity."""
    d = K.dim
    if d < 1:
        return False, "dimension must be at least 1"
    tops = K.cells(d)
    for cell in K:
        if len(cell) < d + 1 and not K._cofaces[cell]:
            return False, f"cell {list(cell)} is not a face of any {d}-cell"
    for r in K.cells(d - 1):
        k = len(K._cofaces[r])
        if k != 2:
            return False, f"{d - 1}-cell {list(r)} has {k} cofaces"
    seen = {tops[0]}
    queue = deque([tops[0]])
    while queue:
        t = queue.popleft()
        for f in _facets(t):
            for u in K._cofaces[f]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    if len(seen) != len(tops):
        return False, f"{d}-cells are not strongly connected"
    return True, "ok"


def orientation_signs(K: SimplicialComplex) -> dict[Cell, int] | None:
    """Coherent signs on the top cells, or None when none exist.

    Propagates breadth-first: the facet dropping vertex j of a top cell with sign
    s receives the induced sign s * (-1)**j, and the two cofaces of every facet
    must induce opposite signs.
    """
    ok, reason = is_pseudomanifold(K)
    if not ok:
        raise ComplexError(f"not a pseudomanifold: {reason}")
    tops = K.cells(K.dim)
    sign = {tops[0]: 1}
    queue = deque([tops[0]])
    while queue:
        t = queue.popleft()
        for j, f in enumerate(_facets(t)):
            induced = sign[t] * (-1) ** j
            (u,) = [c for c in K._cofaces[f] if c != t]
            ju = next(i for i, g in enumerate(_facets(u)) if g == f)
            want = -induced * (-1) ** ju
            if u in sign:
                if sign[u] != want:
                    return None
            else:
                sign[u] = want
                queue.append(u)
    return sign


def is_orientable(K: SimplicialComplex) -> bool:
    return orientation_signs(K) is not None


# --- I/O ----------------------------------------------------------------------

def complex_from_json(data: dict) -> SimplicialComplex:
    if not isinstance(data, dict):
        raise ComplexError("complex JSON must be an object")
    unknown = set(data) - {"name", "maximal_faces"}
    if unknown:
        raise ComplexError(f"unknown keys in complex JSON: {sorted(unknown)}")
    if "maximal_faces" not in data:
        raise ComplexError("complex JSON needs 'maximal_faces'")
    faces = data["maximal_faces"]
    if not isinstance(faces, list) or not all(isinstance(f, list) for f in faces):
        raise ComplexError("'maximal_faces' must be a list of vertex lists")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise ComplexError("'name' must be a string")
    return from_maximal_faces(faces, name=name)


def load_complex(path: str | Path) -> SimplicialComplex:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ComplexError(f"malformed JSON in {path}: {exc}") from None
    K = complex_from_json(data)
    if K.name is None:
        object.__setattr__(K, "name", Path(path).stem)
    return K


def hasse_as_graph(G: SimplicialComplex) -> SimplicialComplex:
    """Hasse diagram of a graph as a graph, i.e. its subdivision.

    Vertex v keeps id v; the edge with canonical index i becomes vertex
    ``|V| + i``.
    """
    if G.dim != 1:
        raise ComplexError("hasse_as_graph expects a 1-dimensional complex")
    nv = len(G.cells(0))
    verts = G.cells(0)
    vid = {v: i for i, v in enumerate(verts)}
    faces = [[i] for i in range(nv)]
    for i, e in enumerate(G.cells(1)):
        for v in e:
            faces.append([vid[(v,)], nv + i])
    return from_maximal_faces(faces, name=f"hasse({G.name})")
