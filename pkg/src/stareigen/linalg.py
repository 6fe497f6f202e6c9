"""Exact linear algebra over the rationals and exact integer arrays."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

# |entries| * terms must stay below this to use int64 safely
_INT64_SAFE = 1 << 62


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by Gaussian elimination with Fractions.

    Rows may hold ints or Fractions.  Zero entries are skipped, which keeps the
    sparse {-1, 0, 1} tables of eigenfunction values cheap to reduce.
    """
    work = [[Fraction(x) for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    if any(len(row) != ncols for row in work):
        raise ValueError("ragged matrix")
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = 1 / prow[col]
        nz = [c for c in range(col, ncols) if prow[c] != 0]
        for r in range(rank + 1, len(work)):
            row = work[r]
            factor = row[col] * inv
            if factor:
                for c in nz:
                    row[c] -= factor * prow[c]
        rank += 1
        if rank == len(work):
            break
    return rank


def common_denominator(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


def exact_int_array(values, bound: int | None = None) -> np.ndarray:
    """Integer ndarray holding `values` exactly: int64 when safe, Python ints otherwise.

    `bound` is an upper bound on any later |sum| computed from the array; it
    decides whether int64 arithmetic can overflow.
    """
    values = [int(v) for v in values]
    if bound is None:
        bound = max((abs(v) for v in values), default=0)
    dtype = np.int64 if bound < _INT64_SAFE else object
    return np.array(values, dtype=dtype)


def fits_int64(bound: int) -> bool:
    return bound < _INT64_SAFE
