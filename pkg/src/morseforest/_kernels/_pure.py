"""Pure-Python kernels. Arbitrary-precision throughout, no size limits.

These mirror the compiled kernels call for call. Cells are referred to by
their canonical index within a level; sets of cells are int bitmasks.
"""
from __future__ import annotations

from math import gcd


def det(rows):
    from ..linalg import bareiss_determinant

    return bareiss_determinant(rows)


def census_counts(facets, n_tails, prefix=()):
    """Acyclic matchings between two adjacent levels, counted by size.

    ``facets[t]`` lists the lower-level indices of the faces of top cell t.
    Top cells are decided in order: critical first, then each facet. The first
    ``len(prefix)`` decisions are pinned (-1 = critical, else facet slot).
    Returns ``counts`` with ``counts[k]`` = matchings of k pairs.
    """
    m = len(facets)
    counts = [0] * (m + 1)
    head_of = [-1] * n_tails  # tail -> matched top cell
    tail_of = [-1] * m  # top cell -> matched tail

    def creates_cycle(s, t):
        # a directed path t -> ... -> s closes a cycle with the new arrow s -> t
        stack = [t]
        seen = {t}
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

    def visit(t, k):
        if t == m:
            counts[k] += 1
            return
        pinned = prefix[t] if t < len(prefix) else None
        if pinned is None or pinned == -1:
            visit(t + 1, k)
        for slot, s in enumerate(facets[t]):
            if pinned is not None and pinned != slot:
                continue
            if head_of[s] >= 0 or creates_cycle(s, t):
                continue
            head_of[s], tail_of[t] = t, s
            visit(t + 1, k + 1)
            head_of[s], tail_of[t] = -1, -1

    visit(0, 0)
    return counts


def _reduce(v, basis):
    """Reduce integer vector ``v`` against an echelon ``basis`` of (pivot, vec)."""
    for p, b in basis:
        c = v[p]
        if c:
            bp = b[p]
            v = [bp * x - c * y for x, y in zip(v, b)]
            g = 0
            for x in v:
                g = gcd(g, x)
            if g > 1:
                v = [x // g for x in v]
    return v


def rooted_forests(columns, n_rows, size=-1):
    """All pairs (F, Rbar) with |F| = |Rbar| and a nonsingular boundary block.

    ``columns[j]`` is a list of ``(row, entry)`` for top cell j. Returns a list
    of ``(F mask, Rbar mask, det)`` where det is the determinant of the block
    with rows Rbar and columns F, both ascending.
    """
    from ..linalg import bareiss_determinant

    m = len(columns)
    dense = []
    for col in columns:
        v = [0] * n_rows
        for r, e in col:
            v[r] = e
        dense.append(v)
    out = []

    def bases(F):
        k = len(F)
        support = sorted({r for j in F for r, _ in columns[j]})
        rowvecs = {r: [dense[j][r] for j in F] for r in support}

        def grow(pos, chosen, basis):
            if len(chosen) == k:
                block = [rowvecs[r] for r in chosen]
                d = bareiss_determinant(block)
                rmask = 0
                for r in chosen:
                    rmask |= 1 << r
                out.append((fmask_of(F), rmask, d))
                return
            if len(support) - pos < k - len(chosen):
                return
            r = support[pos]
            v = _reduce(rowvecs[r], basis)
            piv = next((i for i, x in enumerate(v) if x), None)
            if piv is not None:
                grow(pos + 1, chosen + [r], basis + [(piv, v)])
            grow(pos + 1, chosen, basis)

        grow(0, [], [])

    def fmask_of(F):
        mask = 0
        for j in F:
            mask |= 1 << j
        return mask

    def forests(start, F, basis):
        if size < 0 or len(F) == size:
            bases(F)
        if size >= 0 and len(F) >= size:
            return
        for j in range(start, m):
            v = _reduce(dense[j], basis)
            piv = next((i for i, x in enumerate(v) if x), None)
            if piv is None:
                continue
            forests(j + 1, F + [j], basis + [(piv, v)])

    forests(0, [], [])
    return out


def peel(facets, fmask, rbar_mask, reverse=False):
    """Pair each Rbar cell with its last remaining forest coface.

    Returns ``[(tail, top), ...]`` in pairing order, or None if it stalls.
    """
    cof = {}
    for t, fs in enumerate(facets):
        if fmask >> t & 1:
            for s in fs:
                if rbar_mask >> s & 1:
                    cof.setdefault(s, set()).add(t)
    pending = sorted(s for s in range(rbar_mask.bit_length()) if rbar_mask >> s & 1)
    if reverse:
        pending.reverse()
    alive = {t for t in range(len(facets)) if fmask >> t & 1}
    pairs = []
    while pending:
        for s in pending:
            live = cof.get(s, set()) & alive
            if len(live) == 1:
                (t,) = live
                pairs.append((s, t))
                alive.discard(t)
                pending.remove(s)
                break
        else:
            return None
    if alive:
        return None
    return pairs
