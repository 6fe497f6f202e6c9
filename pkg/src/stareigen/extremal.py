"""Minimum-support searches and the matrix extremal problem.

The lower bound |Supp(f)| >= 2(n-1)! is a theorem for n = 3 and n >= 8 only.
For 4 <= n <= 7 every search here is a heuristic upper bound and is labelled
as such.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, combinations_with_replacement, islice, product
from math import comb, factorial, gcd
from typing import Iterator

import numpy as np

from stareigen.eigen import (
    CoefficientVector,
    _elementary_table,
    basis_F2,
    elementary_family,
    from_coefficients,
    support,
)
from stareigen.matrices import (
    M1,
    M2,
    MatrixClass,
    SquareMatrix,
    classify_matrix,
    g_M,
    is_special,
    matrix_of,
)
from stareigen.parallel import ordered_map

DEFAULT_GRID_CAP = 20_000_000
_GRID_CHUNK = 1 << 15
FUZZ_SPARSITIES = (0.05, 0.1, 0.2, 0.3, 0.5, 1.0)


def extremal_support(n: int) -> int:
    return 2 * factorial(n - 1)


def bound_is_proven(n: int) -> bool:
    return n == 3 or n >= 8


# -- partition arithmetic -----------------------------------------------------

IntPartition = tuple[int, ...]


def integer_partitions(n: int, largest: int | None = None) -> Iterator[IntPartition]:
    """Partitions of n as non-increasing tuples, in reverse lexicographic order."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def pair_product_sum(parts: IntPartition) -> int:
    """sum over k < m of n_k * n_m."""
    total = sum(parts)
    return (total * total - sum(p * p for p in parts)) // 2


@dataclass(frozen=True)
class DichotomyResult:
    n: int
    holds: bool
    exceptions: tuple[IntPartition, ...]
    checked: int


def partition_dichotomy_check(n: int) -> DichotomyResult:
    """Check every partition of n with at least 3 parts against the 2(n-1) threshold.

    Partitions with pair-product sum <= 2(n-1) are the exceptions; the
    dichotomy holds when the only exception is (n-2, 1, 1).
    """
    if n < 7:
        raise ValueError("the dichotomy is stated for n >= 7")
    exceptions = []
    checked = 0
    for parts in integer_partitions(n):
        if len(parts) < 3:
            continue
        checked += 1
        if pair_product_sum(parts) <= 2 * (n - 1):
            exceptions.append(parts)
    holds = exceptions == [(n - 2, 1, 1)]
    return DichotomyResult(n, holds, tuple(exceptions), checked)


# -- searches -----------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    n: int
    best_support: int
    witness: CoefficientVector
    method: str
    grid_radius: int | None
    is_proven_optimal: bool
    optimal_witnesses: tuple[CoefficientVector, ...] = ()
    scanned: int = 0
    candidate_supports: tuple[tuple[CoefficientVector, int], ...] = field(default=(), repr=False)

    @property
    def label(self) -> str:
        return "minimum" if self.is_proven_optimal else "heuristic upper bound"

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "method": self.method,
            "grid_radius": self.grid_radius,
            "best_support": self.best_support,
            "label": self.label,
            "is_proven_optimal": self.is_proven_optimal,
            "lower_bound_2(n-1)!": extremal_support(self.n),
            "scanned": self.scanned,
            "witness": self.witness.to_record(),
            "optimal_witnesses": [w.to_record() for w in self.optimal_witnesses],
        }


def min_support_exact_dim2(n: int = 3) -> SearchResult:
    """Exact minimum support over the 2-dimensional eigenspace of S_3.

    Every vertex value is a linear form a*g1(p) + b*g2(p) in the two basis
    coefficients.  The support can only drop along a direction where some form
    vanishes, so the finitely many vanishing directions plus one generic
    direction contain every possible support size.
    """
    if n != 3:
        raise ValueError("the exact search needs a 2-dimensional eigenspace (n = 3)")
    g1, g2 = (f.int_table()[0] for f in basis_F2(n))
    directions: list[CoefficientVector] = []
    seen = set()
    for a_val, b_val in zip(g1.tolist(), g2.tolist()):
        if a_val == 0 and b_val == 0:
            continue
        d = CoefficientVector(n, (b_val, -a_val)).normalized()
        if d not in seen:
            seen.add(d)
            directions.append(d)
    k = 1
    while True:
        generic = CoefficientVector(n, (1, k))
        if all(int(a) + k * int(b) != 0 for a, b in zip(g1, g2) if a or b):
            break
        k += 1
    directions.append(generic)

    scored = [(d, support(from_coefficients(d))[0]) for d in directions]
    best = min(s for _, s in scored)
    optimal = tuple(d for d, s in scored if s == best)
    return SearchResult(
        n=n, best_support=best, witness=optimal[0], method="exact-dim2", grid_radius=None,
        is_proven_optimal=True, optimal_witnesses=optimal, scanned=len(scored),
        candidate_supports=tuple(scored),
    )


class SearchSpaceError(ValueError):
    pass


def grid_size(n: int, radius: int) -> int:
    """Number of row-multisets scanned by :func:`min_support_grid` (zero vector included)."""
    return comb((2 * radius + 1) ** (n - 2) + n - 2, n - 1)


def _row_contributions(n: int, rows: np.ndarray) -> np.ndarray:
    # contrib[k, r] = values of sum_w rows[r, w-3] * f_{k+2}^{2,w}
    out = np.zeros((n - 1, rows.shape[0], factorial(n)), dtype=np.int16)
    for k, u in enumerate(range(2, n + 1)):
        for wi, w in enumerate(range(3, n + 1)):
            out[k] += (rows[:, wi:wi + 1] * _elementary_table(u, 2, w, n)[None, :]).astype(np.int16)
    return out


def min_support_grid(n: int, radius: int, max_points: int = DEFAULT_GRID_CAP) -> SearchResult:
    """Best support over integer coefficient vectors with entries in [-radius, radius].

    Relabelling the values 2..n is a graph automorphism that permutes the rows
    of the coefficient array, so only non-decreasing assignments of row
    patterns to rows 2..n are scanned.  Support is invariant under that
    relabelling and under scaling, so the minimum over the reduced grid equals
    the minimum over the full grid.  Ties go to the first vector in scan order.
    """
    if not 4 <= n <= 6:
        raise ValueError("grid search supports 4 <= n <= 6")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    total = grid_size(n, radius)
    if total > max_points:
        raise SearchSpaceError(
            f"grid for n={n}, radius={radius} has {total} points, above the cap of {max_points}"
        )
    rows = np.array(list(product(range(-radius, radius + 1), repeat=n - 2)), dtype=np.int64)
    zero_row = int(np.flatnonzero(~rows.any(axis=1))[0])
    contrib = _row_contributions(n, rows)
    combos = chain.from_iterable(combinations_with_replacement(range(rows.shape[0]), n - 1))
    width = n - 1

    best, choice = None, None
    while True:
        idx = np.fromiter(islice(combos, _GRID_CHUNK * width), dtype=np.int64)
        if idx.size == 0:
            break
        idx = idx.reshape(-1, width)
        vals = contrib[0][idx[:, 0]]
        for k in range(1, width):
            vals = vals + contrib[k][idx[:, k]]
        sizes = np.count_nonzero(vals, axis=1)
        sizes[np.all(idx == zero_row, axis=1)] = np.iinfo(np.int64).max
        pos = int(np.argmin(sizes))
        if best is None or sizes[pos] < best:
            best, choice = int(sizes[pos]), idx[pos].copy()
    coeffs = [int(x) for x in np.concatenate([rows[r] for r in choice])]
    g = gcd(*coeffs)
    witness = CoefficientVector(n, tuple(x // g for x in coeffs))
    if next(v for v in witness.values if v) < 0:
        witness = -witness
    return SearchResult(
        n=n, best_support=int(best), witness=witness, method="grid", grid_radius=radius,
        is_proven_optimal=False, optimal_witnesses=(witness,), scanned=total - 1,
    )


# -- lower-bound fuzzing --------------------------------------------------------

def random_special_matrix(n: int, seed, sparsity: float = 0.3, bound: int = 5) -> SquareMatrix:
    """Seeded random special matrix with small integer entries.

    Entries in columns 3..n of rows 2..n are nonzero with probability
    `sparsity`, drawn from [-bound, bound] \\ {0}; column 2 then takes minus
    the row sum.  All-zero draws are redrawn.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0 < sparsity <= 1:
        raise ValueError("sparsity must lie in (0, 1]")
    rng = random.Random(seed)
    values = [v for v in range(-bound, bound + 1) if v]
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n):
            for j in range(2, n):
                if rng.random() < sparsity:
                    rows[i][j] = rng.choice(values)
            rows[i][1] = -sum(rows[i][2:])
        if any(any(r) for r in rows):
            return SquareMatrix(tuple(map(tuple, rows)))


@dataclass(frozen=True)
class Theorem1Check:
    n: int
    g: int
    bound: int
    bound_holds: bool
    equality: bool
    cls: MatrixClass
    consistent: bool
    mode: str

    @property
    def passed(self) -> bool:
        return self.bound_holds and self.consistent

    def to_record(self) -> dict:
        return {
            "n": self.n, "g_M": self.g, "bound": self.bound, "bound_holds": self.bound_holds,
            "equality": self.equality, "class": self.cls.to_record(),
            "consistent": self.consistent, "mode": self.mode,
        }


def check_theorem1(M: SquareMatrix, force_large_n: bool = False) -> Theorem1Check:
    """Compute g_M exactly, classify M and compare with the 2(n-1)! characterisation.

    `mode` is "full" when the theorem applies (n = 3 or n >= 8) and
    "informational" otherwise; the same quantities are computed either way.
    """
    if not is_special(M):
        raise ValueError("check_theorem1 expects a special matrix")
    n = M.n
    g = g_M(M, force_large_n=force_large_n)
    bound = extremal_support(n)
    cls = classify_matrix(M)
    equality = g == bound
    in_family = isinstance(cls, (M1, M2))
    return Theorem1Check(
        n=n, g=g, bound=bound, bound_holds=g >= bound, equality=equality, cls=cls,
        consistent=equality == in_family, mode="full" if bound_is_proven(n) else "informational",
    )


def fuzz_seed(seed: int, k: int) -> int:
    return seed * 1_000_003 + k


def fuzz_theorem1(n: int, samples: int, seed: int, sparsities=FUZZ_SPARSITIES,
                  force_large_n: bool = False) -> list[tuple[int, float, Theorem1Check]]:
    """Check `samples` random special matrices; sample k uses sparsity sparsities[k % len]."""
    def one(k: int):
        s = fuzz_seed(seed, k)
        sp = sparsities[k % len(sparsities)]
        return s, sp, check_theorem1(random_special_matrix(n, s, sp), force_large_n)

    return ordered_map(one, range(samples))


# -- optimum characterisation -----------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """f == scale * f_u^{v,w}, with scale > 0."""
    scale: Fraction
    u: int
    v: int
    w: int

    def to_record(self) -> dict:
        return {"scale": str(self.scale), "u": self.u, "v": self.v, "w": self.w}


def _characterize_matrix(c: CoefficientVector) -> Decomposition | None:
    cls = classify_matrix(matrix_of(c))
    if isinstance(cls, M1):
        return Decomposition(cls.x, 1, cls.p2, cls.p1)
    if isinstance(cls, M2):
        return Decomposition(cls.x, cls.tau, cls.q1, cls.q2)
    return None


def _characterize_pointwise(c: CoefficientVector) -> Decomposition | None:
    n = c.n
    ints, den = from_coefficients(c).int_table()
    nz = np.flatnonzero(ints != 0)
    if nz.size != extremal_support(n):
        return None
    r0 = int(nz[0])
    v0 = int(ints[r0])
    sign = 1 if v0 > 0 else -1
    for u, v, w in elementary_family(n):
        e = _elementary_table(u, v, w, n)
        if e[r0] == sign and np.array_equal(ints, abs(v0) * e):
            return Decomposition(Fraction(abs(v0), den), u, v, w)
    return None


def characterize_optimum(c: CoefficientVector, method: str = "auto") -> Decomposition | None:
    """Return (scale, u, v, w) with f == scale * f_u^{v,w} and scale > 0, or None.

    method "pointwise" compares values on all of Sym_n (n <= 6); "matrix"
    matches M(f) against the M1/M2 templates (any n); "auto" picks pointwise
    when n <= 6.
    """
    if c.is_zero():
        raise ValueError("zero coefficient vector")
    if method == "auto":
        method = "pointwise" if c.n <= 6 else "matrix"
    if method == "pointwise":
        if c.n > 6:
            raise ValueError("pointwise characterisation is limited to n <= 6")
        return _characterize_pointwise(c)
    if method == "matrix":
        return _characterize_matrix(c)
    raise ValueError(f"unknown method {method!r}")
