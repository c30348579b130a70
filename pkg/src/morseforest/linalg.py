"""Exact integer linear algebra: boundary maps, Laplacians, determinants,
shifted characteristic polynomials, Smith normal form and homology.

Everything is Python ``int``; rationals only appear inside interpolation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import _kernels
from .complex import Cell, ComplexError, SimplicialComplex


@dataclass(frozen=True)
class IntegerMatrix:
    entries: tuple[tuple[int, ...], ...]
    ncols: int
    row_labels: tuple[Cell, ...] | None = None
    col_labels: tuple[Cell, ...] | None = None

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")
        for labels, count in ((self.row_labels, self.nrows), (self.col_labels, self.ncols)):
            if labels is not None and (len(labels) != count or len(set(labels)) != count):
                raise ValueError("labels must match the shape and be distinct")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], row_labels=None, col_labels=None, ncols=None):
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(entries, ncols, row_labels and tuple(row_labels), col_labels and tuple(col_labels))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> "IntegerMatrix":
        cols = [tuple(r[j] for r in self.entries) for j in range(self.ncols)]
        return IntegerMatrix(tuple(cols), self.nrows, self.col_labels, self.row_labels)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.T.entries
        rows = tuple(tuple(sum(a * b for a, b in zip(r, c) if a and b) for c in cols) for r in self.entries)
        return IntegerMatrix(rows, other.ncols, self.row_labels, other.col_labels)

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        return IntegerMatrix(rows, self.ncols, self.row_labels, self.col_labels)

    def shifted(self, k: int) -> "IntegerMatrix":
        """M + k*I."""
        self._require_square()
        rows = tuple(tuple(x + k if i == j else x for j, x in enumerate(r)) for i, r in enumerate(self.entries))
        return IntegerMatrix(rows, self.ncols, self.row_labels, self.col_labels)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntegerMatrix":
        ent = tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        rl = self.row_labels and tuple(self.row_labels[i] for i in rows)
        cl = self.col_labels and tuple(self.col_labels[j] for j in cols)
        return IntegerMatrix(ent, len(cols), rl, cl)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self.entries == self.T.entries

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]

    def _require_square(self):
        if self.nrows != self.ncols:
            raise ValueError(f"matrix is not square: {self.shape}")


@dataclass(frozen=True)
class IntegerPolynomial:
    """Exact polynomial in lambda; ``coeffs[i]`` multiplies ``lambda**i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "IntegerPolynomial":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntegerPolynomial(tuple(self.coeff(i) - other.coeff(i) for i in range(n)))

    def padded(self, length: int) -> list[int]:
        return [self.coeff(i) for i in range(max(length, len(self.coeffs)))]

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(p: IntegerPolynomial, var: str = "λ") -> str:
    """Descending human-readable form, e.g. ``λ^4 + 8λ^3 + 20λ^2 + 16λ``."""
    terms = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + var + ("" if i == 1 else f"^{i}")
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("- " if c < 0 else "+ ") + body)
    return " ".join(terms) if terms else "0"


# --- complex-derived matrices ---------------------------------------------------

def boundary_matrix(K: SimplicialComplex, d: int) -> IntegerMatrix:
    """Signed incidence matrix from d-cells (columns) to (d-1)-cells (rows)."""
    if not 1 <= d <= K.dim:
        raise ComplexError(f"boundary dimension {d} out of range 1..{K.dim}")
    rows, cols = K.cells(d - 1), K.cells(d)
    out = [[0] * len(cols) for _ in rows]
    for c, f in enumerate(cols):
        for j in range(len(f)):
            out[K.index(f[:j] + f[j + 1:])][c] = -1 if j % 2 else 1
    return IntegerMatrix.from_rows(out, rows, cols, ncols=len(cols))


def laplacian(K: SimplicialComplex, d: int) -> IntegerMatrix:
    """The up-Laplacian on (d-1)-cells, boundary times its transpose."""
    B = boundary_matrix(K, d)
    return B @ B.T


def laplacian_by_cases(K: SimplicialComplex, d: int) -> IntegerMatrix:
    """Entrywise form: coface counts on the diagonal, (-1)**(i+j) for two facets
    of a common d-cell, zero elsewhere."""
    if not 1 <= d <= K.dim:
        raise ComplexError(f"dimension {d} out of range 1..{K.dim}")
    rows = K.cells(d - 1)
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for r in rows:
        out[K.index(r)][K.index(r)] = len(K.cofaces_of(r))
    for f in K.cells(d):
        for i in range(len(f)):
            for j in range(len(f)):
                if i != j:
                    out[K.index(f[:i] + f[i + 1:])][K.index(f[:j] + f[j + 1:])] = (-1) ** (i + j)
    return IntegerMatrix.from_rows(out, rows, rows, ncols=n)


def adjacency_matrix(G: SimplicialComplex) -> IntegerMatrix:
    if G.dim != 1:
        raise ComplexError("adjacency_matrix expects a 1-dimensional complex")
    verts = G.cells(0)
    n = len(verts)
    out = [[0] * n for _ in range(n)]
    for a, b in G.cells(1):
        i, j = G.index((a,)), G.index((b,))
        out[i][j] = out[j][i] = 1
    return IntegerMatrix.from_rows(out, verts, verts, ncols=n)


# --- determinants and characteristic polynomials ----------------------------------

def bareiss_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; every division is exact."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def determinant(M: IntegerMatrix | Sequence[Sequence[int]]) -> int:
    if isinstance(M, IntegerMatrix):
        M._require_square()
        rows = M.entries
    else:
        rows = [list(r) for r in M]
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix is not square")
    return _kernels.det(rows)


def interpolate(values: Sequence[int]) -> IntegerPolynomial:
    """Polynomial through (k, values[k]) for k = 0..n; coefficients must be integers."""
    n = len(values)
    # Newton divided differences on the nodes 0..n-1
    dd = [Fraction(v) for v in values]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / level
    poly = [Fraction(0)] * n
    basis = [Fraction(1)]  # prod_{j<i} (x - j)
    for i in range(n):
        for k, b in enumerate(basis):
            poly[k] += dd[i] * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for k, b in enumerate(basis):
            nxt[k + 1] += b
            nxt[k] -= i * b
        basis = nxt
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError(f"interpolated coefficient {c} is not an integer")
    return IntegerPolynomial(tuple(int(c) for c in poly))


def char_poly_shifted(M: IntegerMatrix) -> IntegerPolynomial:
    """Coefficients of det(M + lambda I), from n+1 exact determinants."""
    M._require_square()
    n = M.nrows
    values = [determinant(M.shifted(k)) for k in range(n + 1)]
    return interpolate(values)


# --- Smith normal form, rank, homology ------------------------------------------------

class SmithForm(NamedTuple):
    factors: tuple[int, ...]  # nonzero invariant factors, each dividing the next
    rank: int


def smith_normal_form(M: IntegerMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Invariant factors by pivoting on the smallest nonzero entry.

    Ties on absolute value go to the lowest (row, col).
    """
    a = [list(r) for r in (M.entries if isinstance(M, IntegerMatrix) else M)]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    diag = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    ri, rt = a[i], a[t]
                    for j in range(t, nc):
                        ri[j] -= q * rt[j]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # divisibility: fold in any entry the pivot does not divide
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
                if bad is None:
                    break
                i, _ = bad
                rt, ri = a[t], a[i]
                for j in range(t, nc):
                    rt[j] += ri[j]
                continue
            # a remainder is now smaller than the pivot; move it into place
            best = None
            for i in range(t, nr):
                v = a[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, "r")
            for j in range(t, nc):
                v = a[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), j, "c")
            _, k, kind = best
            if kind == "r":
                a[t], a[k] = a[k], a[t]
            else:
                for row in a:
                    row[t], row[k] = row[k], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return SmithForm(tuple(diag), len(diag))


def rank(M: IntegerMatrix | Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    a = [list(r) for r in (M.entries if isinstance(M, IntegerMatrix) else M)]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    r, prev = 0, 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nr):
            aic = a[i][c]
            a[i] = [(p * x - aic * y) // prev for x, y in zip(a[i], a[r])]
        prev = p
        r += 1
        if r == nr:
            break
    return r


@dataclass(frozen=True)
class HomologySummary:
    betti: int
    torsion: tuple[int, ...] = ()

    @property
    def order(self) -> int | None:
        """Group order, or None when the group is infinite."""
        if self.betti:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out


def prime_power_parts(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def homology(K: SimplicialComplex, d: int) -> HomologySummary:
    """Integral H_d as a Betti number plus prime-power torsion orders."""
    if not 0 <= d <= K.dim:
        raise ComplexError(f"homology dimension {d} out of range 0..{K.dim}")
    n_d = len(K.cells(d))
    rank_d = rank(boundary_matrix(K, d)) if d >= 1 else 0
    if d + 1 <= K.dim:
        snf = smith_normal_form(boundary_matrix(K, d + 1))
        rank_up = snf.rank
        torsion = sorted(q for f in snf.factors if f > 1 for q in prime_power_parts(f))
    else:
        rank_up, torsion = 0, []
    return HomologySummary(n_d - rank_d - rank_up, tuple(torsion))


def betti_numbers(K: SimplicialComplex) -> list[int]:
    return [homology(K, d).betti for d in range(K.dim + 1)]
