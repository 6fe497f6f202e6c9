"""Permutations of {1..n}, lexicographic ranking and the Star graph S_n.

A permutation is stored in one-line notation: ``images[i-1] == p(i)``.
Composition is ``compose(p, q)(i) == p(q(i))``.

Two vertices of S_n are adjacent when they differ by swapping the entries in
position 1 and position i of the one-line word, i.e. ``q = p o (1 i)``.  This
is the orientation under which every f_u^{v,w} satisfies the (n-2)
eigenvalue equation; swapping *values* instead would break it.

Bulk scans use numpy tables indexed by lexicographic rank.  Inside those
tables images are stored 0-based (value ``k`` means ``k+1``); nothing
0-based leaks through the :class:`Permutation` API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as _itperms
from math import factorial
from typing import Iterator, Sequence

import numpy as np

from stareigen.parallel import ordered_map, rank_ranges, thread_count

MAX_ENUM_N = 12
MAX_TABLE_N = 10
MAX_BFS_N = 7


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {list(self.images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse a comma-separated one-line word such as ``"2,1,3"``."""
        try:
            return cls(tuple(int(tok) for tok in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad permutation {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.images):
            raise IndexError(f"position {i} outside 1..{len(self.images)}")
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    def __str__(self) -> str:
        return ",".join(map(str, self.images))

    def parity(self) -> int:
        """0 for even permutations, 1 for odd."""
        seen = [False] * self.n
        cycles = 0
        for start in range(self.n):
            if not seen[start]:
                cycles += 1
                j = start
                while not seen[j]:
                    seen[j] = True
                    j = self.images[j] - 1
        return (self.n - cycles) % 2


def _check_same_n(p: Permutation, q: Permutation) -> None:
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return p o q, the permutation i -> p(q(i))."""
    _check_same_n(p, q)
    return Permutation(tuple(p.images[j - 1] for j in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, v in enumerate(p.images, start=1):
        inv[v - 1] = i
    return Permutation(tuple(inv))


def neighbors(p: Permutation) -> list[Permutation]:
    """The n-1 neighbours of `p` in S_n, ordered by the swapped position i = 2..n."""
    if p.n < 3:
        raise ValueError("the Star graph needs n >= 3")
    out = []
    for i in range(1, p.n):
        w = list(p.images)
        w[0], w[i] = w[i], w[0]
        out.append(Permutation(tuple(w)))
    return out


def rank(p: Permutation) -> int:
    """Lexicographic rank of the one-line word (Lehmer code in factorial base)."""
    n = p.n
    r = 0
    for i, v in enumerate(p.images):
        smaller_later = sum(1 for w in p.images[i + 1:] if w < v)
        r += smaller_later * factorial(n - 1 - i)
    return r


def unrank(r: int, n: int) -> Permutation:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= r < factorial(n):
        raise ValueError(f"rank {r} out of range for n={n}")
    pool = list(range(1, n + 1))
    out = []
    for i in range(n - 1, -1, -1):
        d, r = divmod(r, factorial(i))
        out.append(pool.pop(d))
    return Permutation(tuple(out))


def _next_word(w: list[int]) -> bool:
    # in-place lexicographic successor; False when w was the last word
    i = len(w) - 2
    while i >= 0 and w[i] >= w[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(w) - 1
    while w[j] <= w[i]:
        j -= 1
    w[i], w[j] = w[j], w[i]
    w[i + 1:] = reversed(w[i + 1:])
    return True


def enumerate_perms(n: int, start: int = 0, stop: int | None = None) -> Iterator[Permutation]:
    """Yield permutations of rank ``start <= r < stop`` in lexicographic order.

    Disjoint rank ranges can be scanned independently and concatenated, which
    is how parallel scans stay deterministic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_ENUM_N:
        raise ValueError(f"n={n} too large to enumerate (limit {MAX_ENUM_N})")
    total = factorial(n)
    stop = total if stop is None else min(stop, total)
    if not 0 <= start <= total:
        raise ValueError(f"start rank {start} out of range")
    if start >= stop:
        return
    w = list(unrank(start, n).images)
    for _ in range(stop - start):
        yield Permutation(tuple(w))
        _next_word(w)


# -- bulk tables ---------------------------------------------------------------

def _check_table_n(n: int) -> None:
    if not 1 <= n <= MAX_TABLE_N:
        raise ValueError(f"n={n} outside the supported table range 1..{MAX_TABLE_N}")


@lru_cache(maxsize=None)
def perm_table(n: int) -> np.ndarray:
    """All of Sym_n as an (n!, n) int8 array, row = rank, entries 0-based."""
    _check_table_n(n)
    table = np.array(list(_itperms(range(n))), dtype=np.int8).reshape(factorial(n), n)
    table.setflags(write=False)
    return table


def rank_rows(rows: np.ndarray) -> np.ndarray:
    """Vectorised lexicographic rank of 0-based one-line words (one per row)."""
    rows = np.asarray(rows)
    n = rows.shape[1]
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(n - 1):
        later_smaller = (rows[:, i + 1:] < rows[:, i:i + 1]).sum(axis=1)
        out += later_smaller * factorial(n - 1 - i)
    return out


@lru_cache(maxsize=None)
def inverse_table(n: int) -> np.ndarray:
    """Row r holds the one-line word of the inverse of the rank-r permutation."""
    table = perm_table(n)
    inv = np.empty_like(table)
    rows = np.arange(table.shape[0])[:, None]
    inv[rows, table.astype(np.int64)] = np.arange(n, dtype=np.int8)[None, :]
    inv.setflags(write=False)
    return inv


@lru_cache(maxsize=None)
def neighbor_table(n: int) -> np.ndarray:
    """(n!, n-1) array; column i-2 is the rank of the neighbour obtained by swapping positions 1, i."""
    if n < 3:
        raise ValueError("the Star graph needs n >= 3")
    table = perm_table(n)
    cols = []
    for i in range(1, n):
        swapped = table.copy()
        swapped[:, [0, i]] = swapped[:, [i, 0]]
        cols.append(rank_rows(swapped))
    adj = np.stack(cols, axis=1)
    adj.setflags(write=False)
    return adj


def bfs_layers(n: int, sources: np.ndarray) -> np.ndarray:
    """Distances from a set of source ranks (multi-source BFS); -1 never occurs since S_n is connected."""
    _check_bfs_n(n)
    adj = neighbor_table(n)
    dist = np.full(adj.shape[0], -1, dtype=np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    if frontier.size == 0:
        raise ValueError("BFS needs at least one source")
    dist[frontier] = 0
    d = 0
    while frontier.size:
        cand = np.unique(adj[frontier].ravel())
        cand = cand[dist[cand] < 0]
        d += 1
        dist[cand] = d
        frontier = cand
    return dist


def _check_bfs_n(n: int) -> None:
    if not 3 <= n <= MAX_BFS_N:
        raise ValueError(f"n={n} outside the BFS range 3..{MAX_BFS_N}")


@dataclass(frozen=True)
class GraphStats:
    n: int
    order: int
    degree: int
    is_bipartite: bool
    girth: int
    diameter: int

    @staticmethod
    def expected_diameter(n: int) -> int:
        return (3 * (n - 1)) // 2


def graph_stats(n: int) -> GraphStats:
    """Order, degree, bipartiteness, girth and diameter of S_n by BFS.

    S_n is vertex-transitive, so the eccentricity of the identity is the
    diameter, and the shortest cycle through the identity has girth length.
    """
    _check_bfs_n(n)
    adj = neighbor_table(n)
    order = adj.shape[0]
    dist = bfs_layers(n, np.array([0]))

    u = np.repeat(np.arange(order), adj.shape[1])
    v = adj.ravel()
    du, dv = dist[u], dist[v]
    is_bipartite = bool(np.all((du + dv) % 2 == 1))

    # BFS parent = lowest-ranked neighbour one layer closer to the root
    closer = np.where(dist[adj] == dist[:, None] - 1, adj, np.iinfo(np.int64).max)
    parent = closer.min(axis=1)
    parent[0] = -1
    same = du == dv
    tree = (parent[u] == v) | (parent[v] == u)
    lengths = np.concatenate([
        2 * du[same] + 1,
        (du + dv + 1)[(np.abs(du - dv) == 1) & ~tree],
    ])
    girth = int(lengths.min()) if lengths.size else 0

    return GraphStats(
        n=n,
        order=order,
        degree=int(adj.shape[1]),
        is_bipartite=is_bipartite,
        girth=girth,
        diameter=int(dist.max()),
    )


def scan_ranks(n: int, fn, parts: int | None = None) -> list:
    """Apply ``fn(start, stop)`` to disjoint rank ranges covering Sym_n, results in rank order."""
    parts = thread_count() if parts is None else parts
    return ordered_map(lambda r: fn(*r), rank_ranges(factorial(n), parts), threads=parts)


def as_permutation(word: Sequence[int] | Permutation) -> Permutation:
    return word if isinstance(word, Permutation) else Permutation(tuple(word))
