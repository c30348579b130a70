# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Linear algebra runs modulo the Mersenne prime P = 2**61 - 1. Results are exact
only when every minor involved is below P/2 in absolute value; the dispatcher
in ``__init__`` checks a Hadamard bound before calling in here. Cell sets are
uint64 bitmasks, so each level holds at most 64 cells.
"""
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

cdef uint64_t P = 2305843009213693951ULL
MODULUS = 2305843009213693951


cdef inline uint64_t mulmod(uint64_t a, uint64_t b) noexcept nogil:
    cdef u128 z = <u128>a * b
    cdef uint64_t s = <uint64_t>(z & P) + <uint64_t>(z >> 61)
    if s >= P:
        s -= P
    if s >= P:
        s -= P
    return s


cdef inline uint64_t addmod(uint64_t a, uint64_t b) noexcept nogil:
    cdef uint64_t s = a + b
    if s >= P:
        s -= P
    return s


cdef inline uint64_t submod(uint64_t a, uint64_t b) noexcept nogil:
    return a - b if a >= b else a + P - b


cdef uint64_t invmod(uint64_t a) noexcept nogil:
    # Fermat: a**(P-2)
    cdef uint64_t e = P - 2
    cdef uint64_t r = 1
    while e:
        if e & 1:
            r = mulmod(r, a)
        a = mulmod(a, a)
        e >>= 1
    return r


cdef inline object lift(uint64_t r):
    if r > P // 2:
        return -<int64_t>(P - r)
    return <int64_t>r


cdef inline uint64_t to_mod(int64_t x) noexcept nogil:
    if x >= 0:
        return (<uint64_t>x) % P
    return (P - ((<uint64_t>(-x)) % P)) % P


def det(rows):
    """Determinant of a square matrix of Python ints, via elimination mod P."""
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, k, piv
    cdef uint64_t *a
    cdef uint64_t d = 1, inv, c, tmp
    if n == 0:
        return 1
    a = <uint64_t *>malloc(n * n * sizeof(uint64_t))
    try:
        for i in range(n):
            row = rows[i]
            for j in range(n):
                a[i * n + j] = <uint64_t>(row[j] % MODULUS)
        for k in range(n):
            piv = -1
            for i in range(k, n):
                if a[i * n + k]:
                    piv = i
                    break
            if piv < 0:
                return 0
            if piv != k:
                for j in range(n):
                    tmp = a[k * n + j]
                    a[k * n + j] = a[piv * n + j]
                    a[piv * n + j] = tmp
                d = submod(0, d)
            d = mulmod(d, a[k * n + k])
            inv = invmod(a[k * n + k])
            for i in range(k + 1, n):
                c = mulmod(a[i * n + k], inv)
                if c:
                    for j in range(k, n):
                        a[i * n + j] = submod(a[i * n + j], mulmod(c, a[k * n + j]))
        return lift(d)
    finally:
        free(a)


# --- census of acyclic matchings ---------------------------------------------------

cdef struct Census:
    int m
    int width
    int *facets      # m * width
    int *head_of     # tail -> top, -1 if free
    int *tail_of     # top -> tail, -1 if unmatched
    int *stack
    int *stamp
    int epoch
    int npin
    int *pin
    uint64_t *counts


cdef bint creates_cycle(Census *c, int s, int t) noexcept nogil:
    cdef int sp = 0, h, f, h2, q
    c.epoch += 1
    c.stack[sp] = t
    sp += 1
    c.stamp[t] = c.epoch
    while sp:
        sp -= 1
        h = c.stack[sp]
        for q in range(c.width):
            f = c.facets[h * c.width + q]
            if f == c.tail_of[h] or (h == t and f == s):
                continue
            if f == s:
                return True
            h2 = c.head_of[f]
            if h2 >= 0 and c.stamp[h2] != c.epoch:
                c.stamp[h2] = c.epoch
                c.stack[sp] = h2
                sp += 1
    return False


cdef void census_visit(Census *c, int t, int k) noexcept nogil:
    cdef int slot, s, pinned
    if t == c.m:
        c.counts[k] += 1
        return
    pinned = -2
    if t < c.npin:
        pinned = c.pin[t]
    if pinned == -2 or pinned == -1:
        census_visit(c, t + 1, k)
    for slot in range(c.width):
        if pinned != -2 and pinned != slot:
            continue
        s = c.facets[t * c.width + slot]
        if c.head_of[s] >= 0 or creates_cycle(c, s, t):
            continue
        c.head_of[s] = t
        c.tail_of[t] = s
        census_visit(c, t + 1, k + 1)
        c.head_of[s] = -1
        c.tail_of[t] = -1


def census_counts(facets, int n_tails, prefix=()):
    cdef Census c
    cdef int i, q
    c.m = len(facets)
    c.width = len(facets[0]) if c.m else 0
    c.facets = <int *>malloc((c.m * c.width + 1) * sizeof(int))
    c.head_of = <int *>malloc((n_tails + 1) * sizeof(int))
    c.tail_of = <int *>malloc((c.m + 1) * sizeof(int))
    c.stack = <int *>malloc((c.m + 1) * sizeof(int))
    c.stamp = <int *>calloc(c.m + 1, sizeof(int))
    c.npin = len(prefix)
    c.pin = <int *>malloc((c.npin + 1) * sizeof(int))
    c.counts = <uint64_t *>calloc(c.m + 1, sizeof(uint64_t))
    c.epoch = 0
    try:
        for i in range(c.m):
            if len(facets[i]) != c.width:
                raise ValueError("all top cells need the same number of facets")
            for q in range(c.width):
                c.facets[i * c.width + q] = facets[i][q]
            c.tail_of[i] = -1
        for i in range(n_tails):
            c.head_of[i] = -1
        for i in range(c.npin):
            c.pin[i] = prefix[i]
        with nogil:
            census_visit(&c, 0, 0)
        return [int(c.counts[i]) for i in range(c.m + 1)]
    finally:
        free(c.facets); free(c.head_of); free(c.tail_of); free(c.stack)
        free(c.stamp); free(c.pin); free(c.counts)


# --- rooted forests -----------------------------------------------------------------

cdef struct Forests:
    int n          # rows
    int m          # columns
    int size       # |F| filter, -1 for all
    uint64_t *col  # m * n dense columns mod P
    uint64_t *fbasis   # m * n echelon rows for the forest search (normalised)
    int *fpiv
    int *F         # chosen columns
    uint64_t *rbasis   # m * m echelon rows for the root search (normalised)
    int *rpiv
    uint64_t *rscale   # pivot value before normalisation
    uint64_t *work     # m * m scratch, one vector per depth
    int *support
    int nsupport


cdef int insert_column(Forests *w, int depth, int j) noexcept nogil:
    """Reduce column j against the forest echelon; returns its pivot or -1."""
    cdef uint64_t *v = &w.fbasis[depth * w.n]
    cdef uint64_t *b
    cdef uint64_t c, inv
    cdef int i, r, p
    for r in range(w.n):
        v[r] = w.col[j * w.n + r]
    for i in range(depth):
        p = w.fpiv[i]
        c = v[p]
        if c:
            b = &w.fbasis[i * w.n]
            for r in range(w.n):
                if b[r]:
                    v[r] = submod(v[r], mulmod(c, b[r]))
    for r in range(w.n):
        if v[r]:
            inv = invmod(v[r])
            for i in range(r, w.n):
                v[i] = mulmod(v[i], inv)
            return r
    return -1


cdef int insert_row(Forests *w, int depth, int k, int row) noexcept nogil:
    """Reduce the forest-restricted row against the root echelon; pivot or -1."""
    cdef uint64_t *v = &w.rbasis[depth * w.m]
    cdef uint64_t *b
    cdef uint64_t c, inv
    cdef int i, q, p
    for q in range(k):
        v[q] = w.col[w.F[q] * w.n + row]
    for i in range(depth):
        p = w.rpiv[i]
        c = v[p]
        if c:
            b = &w.rbasis[i * w.m]
            for q in range(k):
                if b[q]:
                    v[q] = submod(v[q], mulmod(c, b[q]))
    for q in range(k):
        if v[q]:
            w.rscale[depth] = v[q]
            inv = invmod(v[q])
            for i in range(q, k):
                v[i] = mulmod(v[i], inv)
            return q
    return -1


cdef void emit(Forests *w, int k, uint64_t rmask, list out):
    cdef uint64_t d = 1, fmask = 0
    cdef int i, j, inversions = 0
    for i in range(k):
        d = mulmod(d, w.rscale[i])
        fmask |= (<uint64_t>1) << w.F[i]
        for j in range(i + 1, k):
            if w.rpiv[i] > w.rpiv[j]:
                inversions += 1
    if inversions & 1:
        d = submod(0, d)
    out.append((int(fmask), int(rmask), lift(d)))


cdef void grow_root(Forests *w, int k, int pos, int depth, uint64_t rmask, list out):
    cdef int row, piv
    if depth == k:
        emit(w, k, rmask, out)
        return
    if w.nsupport - pos < k - depth:
        return
    row = w.support[pos]
    piv = insert_row(w, depth, k, row)
    if piv >= 0:
        w.rpiv[depth] = piv
        grow_root(w, k, pos + 1, depth + 1, rmask | ((<uint64_t>1) << row), out)
    grow_root(w, k, pos + 1, depth, rmask, out)


cdef void roots_of(Forests *w, int k, list out):
    cdef int r, q
    w.nsupport = 0
    for r in range(w.n):
        for q in range(k):
            if w.col[w.F[q] * w.n + r]:
                w.support[w.nsupport] = r
                w.nsupport += 1
                break
    grow_root(w, k, 0, 0, 0, out)


cdef void grow_forest(Forests *w, int start, int depth, list out):
    cdef int j, piv
    if w.size < 0 or depth == w.size:
        roots_of(w, depth, out)
    if w.size >= 0 and depth >= w.size:
        return
    for j in range(start, w.m):
        piv = insert_column(w, depth, j)
        if piv < 0:
            continue
        w.fpiv[depth] = piv
        w.F[depth] = j
        grow_forest(w, j + 1, depth + 1, out)


def rooted_forests(columns, int n_rows, int size=-1):
    cdef Forests w
    cdef int j, r
    cdef list out = []
    w.n = n_rows
    w.m = len(columns)
    w.size = size
    if w.n > 64 or w.m > 64:
        raise ValueError("compiled kernel handles at most 64 cells per level")
    w.col = <uint64_t *>calloc(w.m * w.n + 1, sizeof(uint64_t))
    w.fbasis = <uint64_t *>calloc((w.m + 1) * w.n + 1, sizeof(uint64_t))
    w.fpiv = <int *>calloc(w.m + 1, sizeof(int))
    w.F = <int *>calloc(w.m + 1, sizeof(int))
    w.rbasis = <uint64_t *>calloc((w.m + 1) * w.m + 1, sizeof(uint64_t))
    w.rpiv = <int *>calloc(w.m + 1, sizeof(int))
    w.rscale = <uint64_t *>calloc(w.m + 1, sizeof(uint64_t))
    w.support = <int *>calloc(w.n + 1, sizeof(int))
    try:
        for j in range(w.m):
            for r, e in columns[j]:
                w.col[j * w.n + r] = to_mod(e)
        grow_forest(&w, 0, 0, out)
        return out
    finally:
        free(w.col); free(w.fbasis); free(w.fpiv); free(w.F)
        free(w.rbasis); free(w.rpiv); free(w.rscale); free(w.support)


# --- peeling ----------------------------------------------------------------------

def peel(facets, fmask, rbar_mask, bint reverse=False):
    cdef uint64_t fm = fmask, rm = rbar_mask, alive
    cdef int m = len(facets)
    cdef int width = len(facets[0]) if m else 0
    cdef int t, q, s, i, live, hit, nsel
    cdef int order[64]
    cdef int npend = 0
    cdef int fac[64][16]
    pairs = []
    if width > 16:
        raise ValueError("compiled peel handles cells of dimension < 16")
    for t in range(m):
        for q in range(width):
            fac[t][q] = facets[t][q]
    for s in range(64):
        if (rm >> s) & 1:
            order[npend] = s
            npend += 1
    if reverse:
        for i in range(npend // 2):
            s = order[i]
            order[i] = order[npend - 1 - i]
            order[npend - 1 - i] = s
    alive = fm
    while npend:
        nsel = -1
        for i in range(npend):
            s = order[i]
            live = 0
            hit = -1
            for t in range(m):
                if (alive >> t) & 1:
                    for q in range(width):
                        if fac[t][q] == s:
                            live += 1
                            hit = t
                            break
                    if live > 1:
                        break
            if live == 1:
                nsel = i
                break
        if nsel < 0:
            return None
        s = order[nsel]
        pairs.append((s, hit))
        alive &= ~((<uint64_t>1) << hit)
        for i in range(nsel, npend - 1):
            order[i] = order[i + 1]
        npend -= 1
    if alive:
        return None
    return pairs
