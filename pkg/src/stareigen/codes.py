"""Distance partitions, equitable partitions and completely regular codes in S_n.

Vertex sets are boolean masks over lexicographic ranks, so membership tests
during BFS are O(1).  The main objects are the cosets

    S_a^alpha = {p : p(alpha) = a}

which are completely regular codes of covering radius 2 when alpha >= 2, and
extremal eigenfunctions split as scale * (chi(S_u^v) - chi(S_u^w)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from stareigen.eigen import CoefficientVector, from_coefficients
from stareigen.extremal import Decomposition, characterize_optimum
from stareigen.perm import (
    MAX_BFS_N,
    Permutation,
    bfs_layers,
    neighbor_table,
    perm_table,
    rank,
    unrank,
)

MAX_POINTWISE_N = 6


class VertexSet:
    """A set of vertices of S_n stored as a read-only rank mask."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (factorial(n),):
            raise ValueError(f"mask must have length {factorial(n)}")
        mask = mask.copy()
        mask.setflags(write=False)
        self.n = n
        self.mask = mask

    @classmethod
    def from_ranks(cls, n: int, ranks: Iterable[int]) -> "VertexSet":
        mask = np.zeros(factorial(n), dtype=bool)
        ranks = list(ranks)
        if any(not 0 <= r < mask.size for r in ranks):
            raise ValueError("rank out of range")
        mask[ranks] = True
        return cls(n, mask)

    @classmethod
    def from_perms(cls, n: int, perms: Iterable[Permutation]) -> "VertexSet":
        return cls.from_ranks(n, (rank(p) for p in perms))

    @classmethod
    def everything(cls, n: int) -> "VertexSet":
        return cls(n, np.ones(factorial(n), dtype=bool))

    def ranks(self) -> list[int]:
        return [int(r) for r in np.flatnonzero(self.mask)]

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self) -> Iterator[Permutation]:
        return (unrank(r, self.n) for r in self.ranks())

    def __contains__(self, p: Permutation) -> bool:
        return p.n == self.n and bool(self.mask[rank(p)])

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and self.n == other.n and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self) -> int:
        return hash((self.n, self.mask.tobytes()))

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.mask & other.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.mask | other.mask)

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, size={len(self)})"

    def to_record(self) -> list[int]:
        return self.ranks()


def restricted(n: int, assignment: Mapping[int, int]) -> VertexSet:
    """All p with p(position) == value for every item of `assignment`."""
    table = perm_table(n)
    mask = np.ones(table.shape[0], dtype=bool)
    for pos, val in assignment.items():
        if not (1 <= pos <= n and 1 <= val <= n):
            raise ValueError(f"assignment {pos}->{val} outside 1..{n}")
        mask &= table[:, pos - 1] == val - 1
    return VertexSet(n, mask)


def coset(a: int, alpha: int, n: int) -> VertexSet:
    """S_a^alpha = {p : p(alpha) == a}, of size (n-1)!."""
    return restricted(n, {alpha: a})


@dataclass(frozen=True)
class DistancePartition:
    layers: tuple[VertexSet, ...]

    @property
    def rho(self) -> int:
        return len(self.layers) - 1

    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]


def _check_n(n: int) -> None:
    if not 3 <= n <= MAX_BFS_N:
        raise ValueError(f"n={n} outside 3..{MAX_BFS_N}")


def distance_partition(C: VertexSet) -> DistancePartition:
    _check_n(C.n)
    sources = np.flatnonzero(C.mask)
    if sources.size == 0:
        raise ValueError("distance partition of an empty set")
    dist = bfs_layers(C.n, sources)
    rho = int(dist.max())
    return DistancePartition(tuple(VertexSet(C.n, dist == d) for d in range(rho + 1)))


@dataclass(frozen=True)
class EquitableViolation:
    """Two vertices of block `block` with different neighbour counts into block `target`."""
    block: int
    target: int
    vertex: int
    count: int
    other_vertex: int
    other_count: int


@dataclass(frozen=True)
class EquitableCheck:
    quotient: tuple[tuple[int, ...], ...] | None
    violation: EquitableViolation | None = field(default=None)

    def __bool__(self) -> bool:
        return self.quotient is not None


def _labels(P: Sequence[VertexSet]) -> np.ndarray:
    if not P:
        raise ValueError("empty partition")
    n = P[0].n
    labels = np.full(factorial(n), -1, dtype=np.int64)
    for k, block in enumerate(P):
        if block.n != n:
            raise ValueError("blocks live on different graphs")
        if not block.mask.any():
            raise ValueError(f"block {k} is empty")
        if np.any(labels[block.mask] >= 0):
            raise ValueError("blocks overlap")
        labels[block.mask] = k
    if np.any(labels < 0):
        raise ValueError("blocks do not cover every vertex")
    return labels


def check_equitable(P: Sequence[VertexSet]) -> EquitableCheck:
    """Quotient matrix of the ordered partition P, or the first violating vertex pair."""
    labels = _labels(P)
    n = P[0].n
    r = len(P)
    adj = neighbor_table(n)
    counts = np.zeros((labels.size, r), dtype=np.int64)
    nbr_labels = labels[adj]
    for k in range(r):
        counts[:, k] = (nbr_labels == k).sum(axis=1)
    quotient = []
    for i in range(r):
        members = np.flatnonzero(labels == i)
        block_counts = counts[members]
        first = block_counts[0]
        diff = np.flatnonzero(np.any(block_counts != first, axis=1))
        if diff.size:
            row = int(diff[0])
            j = int(np.flatnonzero(block_counts[row] != first)[0])
            return EquitableCheck(None, EquitableViolation(
                i, j, int(members[0]), int(first[j]), int(members[row]), int(block_counts[row, j])))
        quotient.append(tuple(int(x) for x in first))
    return EquitableCheck(tuple(quotient))


def is_equitable(P: Sequence[VertexSet]) -> tuple[tuple[int, ...], ...] | None:
    """Quotient matrix if the ordered partition P is equitable, else None."""
    return check_equitable(P).quotient


def is_completely_regular(C: VertexSet) -> tuple[int, tuple[tuple[int, ...], ...]] | None:
    """(covering radius, quotient matrix) when the distance partition of C is equitable."""
    part = distance_partition(C)
    quotient = is_equitable(part.layers)
    if quotient is None:
        return None
    return part.rho, quotient


def coset_quotient(n: int) -> tuple[tuple[int, ...], ...]:
    """The quotient matrix every coset code S_a^alpha (alpha >= 2) should have."""
    return ((n - 2, 1, 0), (1, 0, n - 2), (0, 1, n - 2))


@dataclass(frozen=True)
class CodeDifference:
    scale: Fraction
    u: int
    v: int
    w: int

    def to_record(self) -> dict:
        return {"scale": str(self.scale), "u": self.u, "v": self.v, "w": self.w}


def decompose_as_code_difference(c: CoefficientVector) -> CodeDifference | None:
    """Write f as scale * (chi(S_u^v) - chi(S_u^w)) when f is a multiple of some f_u^{v,w}.

    For n <= 6 the identity is re-checked at every vertex before returning.
    """
    dec: Decomposition | None = characterize_optimum(c)
    if dec is None:
        return None
    n = c.n
    if n <= MAX_POINTWISE_N:
        ints, den = from_coefficients(c).int_table()
        plus = coset(dec.u, dec.v, n).mask.astype(np.int64)
        minus = coset(dec.u, dec.w, n).mask.astype(np.int64)
        s = dec.scale
        if not np.array_equal(ints * s.denominator, (plus - minus) * (s.numerator * den)):
            return None
    return CodeDifference(dec.scale, dec.u, dec.v, dec.w)
