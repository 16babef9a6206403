"""Alternating cochains and the Chevalley-Eilenberg differential.

The differential here takes any family of operators, flat or not, so it
also serves as the covariant exterior derivative of a connection.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .lie import LieAlgebra
from .linalg import Matrix


@lru_cache(maxsize=None)
def multi_indices(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Increasing ``k``-tuples from ``range(m)`` in lexicographic order."""
    return tuple(combinations(range(m), k))


@lru_cache(maxsize=None)
def _index_of(m: int, k: int) -> dict:
    return {I: n for n, I in enumerate(multi_indices(m, k))}


def sort_with_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation, or 0 on a repeated index."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def cochain_dim(m: int, k: int, vdim: int) -> int:
    return len(multi_indices(m, k)) * vdim


def ce_differential(algebra: LieAlgebra, action: Sequence[Matrix], k: int,
                    vdim: int | None = None) -> Matrix:
    """Matrix of ``d: C^k -> C^{k+1}`` on ``Lambda^k g^* (x) V``.

    Coordinates are ``I * dim V + v`` for the ``I``-th increasing
    multi-index.  The formula is the standard one: an alternating sum of
    the action on the omitted slot plus the bracket of each pair of slots
    placed in front.
    """
    m = algebra.dim
    if vdim is None:
        if not action:
            raise ValueError("module dimension is needed when the algebra is zero")
        vdim = action[0].nrows
    src = _index_of(m, k)
    rows_idx = multi_indices(m, k + 1)
    ncols = len(src) * vdim
    nrows = len(rows_idx) * vdim
    out = [[Fraction(0)] * ncols for _ in range(nrows)]
    for jn, J in enumerate(rows_idx):
        r0 = jn * vdim
        for i, li in enumerate(J):
            I = J[:i] + J[i + 1:]
            c0 = src[I] * vdim
            sgn = 1 if i % 2 == 0 else -1
            rho = action[li].rows
            for v in range(vdim):
                row = out[r0 + v]
                for u, x in enumerate(rho[v]):
                    if x:
                        row[c0 + u] += sgn * x
        for i in range(len(J)):
            for j in range(i + 1, len(J)):
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                sgn = 1 if (i + j) % 2 == 0 else -1
                for c, coeff in enumerate(algebra.consts[J[i]][J[j]]):
                    if not coeff:
                        continue
                    s, I = sort_with_sign((c,) + rest)
                    if not s:
                        continue
                    c0 = src[I] * vdim
                    f = sgn * s * coeff
                    for v in range(vdim):
                        out[r0 + v][c0 + v] += f
    return Matrix(out, ncols=ncols) if nrows else Matrix.zeros(0, ncols)


def cochain_from_table(m: int, k: int, vdim: int, value) -> tuple[Fraction, ...]:
    """Pack ``value(I) -> vector`` over increasing multi-indices into a cochain."""
    out = []
    for I in multi_indices(m, k):
        v = tuple(value(I))
        if len(v) != vdim:
            raise ValueError("cochain value has the wrong length")
        out.extend(v)
    return tuple(out)


def cochain_value(c: Sequence[Fraction], m: int, k: int, vdim: int, idx: Sequence[int]) -> tuple:
    """Value of a packed cochain on basis indices in any order."""
    s, I = sort_with_sign(idx)
    if not s:
        return (Fraction(0),) * vdim
    n = _index_of(m, k)[I]
    block = c[n * vdim:(n + 1) * vdim]
    return tuple(s * x for x in block)
