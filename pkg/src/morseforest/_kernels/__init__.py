"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it imported and the instance is inside its
exactness envelope; otherwise the call goes to the Python implementation.
Setting ``MORSEFOREST_PURE=1`` before import disables the extension.
"""
from __future__ import annotations

import os
from math import isqrt

from . import _pure

try:
    if os.environ.get("MORSEFOREST_PURE", "") not in ("", "0"):
        raise ImportError("disabled by MORSEFOREST_PURE")
    from . import _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

# compiled linear algebra is exact while every minor stays below P/2
_HALF_P = (2**61 - 1) // 2


def _impl(backend):
    if backend is None:
        return _compiled or _pure
    if backend == "python":
        return _pure
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def hadamard_fits(rows) -> bool:
    """True when the Hadamard bound of ``rows`` is below P/2."""
    bound_sq = 1
    for r in rows:
        bound_sq *= sum(x * x for x in r) or 1
        if bound_sq >= _HALF_P * _HALF_P:
            return False
    return isqrt(bound_sq) + 1 < _HALF_P


def det(rows, backend=None) -> int:
    impl = _impl(backend)
    if impl is _compiled and not hadamard_fits(rows):
        if backend == "compiled":
            raise ValueError("matrix entries too large for the compiled kernel")
        impl = _pure
    return impl.det(rows)


def census_counts(facets, n_tails, prefix=(), backend=None) -> list[int]:
    impl = _impl(backend)
    if impl is _compiled and facets and len({len(f) for f in facets}) != 1:
        impl = _pure
    return impl.census_counts(facets, n_tails, tuple(prefix))


def rooted_forests(columns, n_rows, size=-1, backend=None) -> list[tuple[int, int, int]]:
    impl = _impl(backend)
    if impl is _compiled:
        m = len(columns)
        widths = [sum(e * e for _, e in col) for col in columns] or [1]
        k = min(m, n_rows)
        # any k x k block is bounded by the product of its column norms
        bound_sq = 1
        for w in sorted(widths, reverse=True)[:k]:
            bound_sq *= max(w, 1)
        if n_rows > 64 or m > 64 or bound_sq >= _HALF_P * _HALF_P:
            if backend == "compiled":
                raise ValueError("instance outside the compiled kernel envelope")
            impl = _pure
    return impl.rooted_forests(columns, n_rows, size)


def peel(facets, fmask, rbar_mask, reverse=False, backend=None):
    impl = _impl(backend)
    if impl is _compiled and (len(facets) > 64 or rbar_mask >> 64 or (facets and len(facets[0]) > 16)):
        impl = _pure
    return impl.peel(facets, fmask, rbar_mask, reverse)
