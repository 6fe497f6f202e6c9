"""Matrix encoding of (n-2)-eigenfunctions and the normal forms used to bound g_M.

For an eigenfunction with F2-coefficients mu_i^j the matrix M(f) is

    m_{i,j} = -mu_i^j                 for i > 1, j > 2
    m_{i,2} = sum_{s>=3} mu_i^s       for i > 1
    m_{i,j} = 0                       for i == 1 or j == 1

and f(p) equals the sum of M along the generalised diagonal of p^{-1}.  The
number of permutations with nonzero diagonal sum, g_M, is therefore |Supp(f)|.

Indices are 1-based everywhere in this module.  Normal forms use a canonical
sign: the x of a pair row and of the M1/M2 templates is always positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

import numpy as np

from stareigen.eigen import CoefficientVector
from stareigen.linalg import common_denominator, fits_int64
from stareigen.parallel import ordered_map, rank_ranges, thread_count
from stareigen.perm import Permutation, as_permutation, inverse, perm_table
from stareigen.rational import format_rational, parse_rational

MAX_GM_N = 8
MAX_GM_N_FORCED = 10
_CHUNK = 1 << 18


class MatrixFormatError(ValueError):
    """Malformed matrix input; `line`/`column` locate JSON syntax errors when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SquareMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        n = len(rows)
        if n < 3:
            raise ValueError("matrices must be at least 3x3")
        if any(len(row) != n for row in rows):
            raise ValueError("matrix is not square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "SquareMatrix":
        return cls(tuple(tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in row)
                         for row in rows))

    @classmethod
    def zero(cls, n: int) -> "SquareMatrix":
        return cls(((Fraction(0),) * n,) * n)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(key)
        return self.rows[i - 1][j - 1]

    def row(self, alpha: int) -> tuple[Fraction, ...]:
        if not 1 <= alpha <= self.n:
            raise IndexError(alpha)
        return self.rows[alpha - 1]

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.rows)

    @cached_property
    def _int_form(self) -> tuple[np.ndarray, int]:
        den = common_denominator(x for row in self.rows for x in row)
        ints = [[int(x * den) for x in row] for row in self.rows]
        bound = self.n * max((abs(v) for row in ints for v in row), default=0)
        return np.array(ints, dtype=np.int64 if fits_int64(bound) else object), den

    def int_form(self) -> tuple[np.ndarray, int]:
        """(K, d) with K an integer array and M == K / d."""
        return self._int_form

    def to_record(self) -> dict:
        return {"n": self.n, "entries": [[format_rational(x) for x in row] for row in self.rows]}

    @classmethod
    def from_record(cls, record) -> "SquareMatrix":
        if not isinstance(record, dict) or "entries" not in record:
            raise MatrixFormatError("matrix record must be an object with 'n' and 'entries'")
        entries = record["entries"]
        if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
            raise MatrixFormatError("'entries' must be a list of rows")
        n = record.get("n", len(entries))
        if n != len(entries) or any(len(r) != n for r in entries):
            raise MatrixFormatError(f"'entries' must be an {n}x{n} array")
        rows = []
        for i, row in enumerate(entries, start=1):
            parsed = []
            for j, x in enumerate(row, start=1):
                try:
                    parsed.append(parse_rational(x))
                except ValueError as exc:
                    raise MatrixFormatError(f"entry ({i},{j}): {exc}") from None
            rows.append(tuple(parsed))
        try:
            return cls(tuple(rows))
        except ValueError as exc:
            raise MatrixFormatError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "SquareMatrix":
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return cls.from_record(record)

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def matrix_of(c: CoefficientVector) -> SquareMatrix:
    n = c.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(2, n + 1):
        for j in range(3, n + 1):
            rows[i - 1][j - 1] = -c[(i, j)]
        rows[i - 1][1] = sum((c[(i, s)] for s in range(3, n + 1)), Fraction(0))
    return SquareMatrix(tuple(map(tuple, rows)))


def coefficients_of_matrix(M: SquareMatrix) -> CoefficientVector:
    """Inverse of :func:`matrix_of` (mu_i^j = -m_{i,j}); M must be special-shaped."""
    bad = [v for v in special_violations(M) if not v.startswith("non-zero")]
    if bad:
        raise ValueError("matrix is not of the form M(f): " + "; ".join(bad))
    return CoefficientVector.from_dict(M.n, {(i, j): -M[i, j] for i in range(2, M.n + 1)
                                             for j in range(3, M.n + 1)})


def diagonal_sum(M: SquareMatrix, p) -> Fraction:
    """sum_i m_{i, p(i)}."""
    p = as_permutation(p)
    if p.n != M.n:
        raise ValueError(f"size mismatch: matrix {M.n}, permutation {p.n}")
    return sum((M.rows[i][p.images[i] - 1] for i in range(M.n)), Fraction(0))


def eval_via_matrix(c: CoefficientVector, p) -> Fraction:
    """f(p) computed as the diagonal sum of M(f) along p^{-1}."""
    return diagonal_sum(matrix_of(c), inverse(as_permutation(p)))


def _check_gm_n(n: int, force_large_n: bool) -> None:
    limit = MAX_GM_N_FORCED if force_large_n else MAX_GM_N
    if not 3 <= n <= limit:
        hint = "" if force_large_n or n > MAX_GM_N_FORCED else " (pass force_large_n=True to allow up to 10)"
        raise ValueError(f"g_M needs 3 <= n <= {limit}, got n={n}{hint}")


def diagonal_sums(M: SquareMatrix, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Scaled diagonal sums d*sum_i m_{i,p(i)} for the permutations of rank start..stop-1."""
    K, _ = M.int_form()
    table = perm_table(M.n)[start:stop].astype(np.int64)
    return K[np.arange(M.n)[None, :], table].sum(axis=1)


def g_M(M: SquareMatrix, force_large_n: bool = False) -> int:
    """Number of permutations p with sum_i m_{i,p(i)} != 0 (full scan of Sym_n)."""
    _check_gm_n(M.n, force_large_n)
    total = factorial(M.n)
    parts = max(thread_count(), -(-total // _CHUNK))
    counts = ordered_map(lambda r: int(np.count_nonzero(diagonal_sums(M, *r))),
                         rank_ranges(total, parts))
    return sum(counts)


def g_M_subset(M: SquareMatrix, X: Iterable) -> int:
    """g_M restricted to the permutations in X."""
    return sum(1 for p in X if diagonal_sum(M, p) != 0)


def special_violations(M: SquareMatrix) -> list[str]:
    out = []
    bad = [i for i in range(1, M.n + 1) if M[i, 1] != 0]
    if bad:
        out.append(f"column 1 must be zero (m_{{i,1}} != 0 for i in {bad})")
    bad = [j for j in range(1, M.n + 1) if M[1, j] != 0]
    if bad:
        out.append(f"row 1 must be zero (m_{{1,j}} != 0 for j in {bad})")
    bad = [i for i in range(1, M.n + 1) if sum(M.row(i)) != 0]
    if bad:
        out.append(f"row sums must vanish (rows {bad})")
    if M.is_zero():
        out.append("non-zero: the matrix is identically zero")
    return out


def is_special(M: SquareMatrix) -> bool:
    """Zero first column and row, zero row sums, and not identically zero."""
    return not special_violations(M)


# -- row normal forms -----------------------------------------------------------

@dataclass(frozen=True)
class ZeroRow:
    def to_record(self) -> dict:
        return {"kind": "zero"}


@dataclass(frozen=True)
class PairRow:
    """x at column r1, -x at column r2, zero elsewhere (x > 0)."""
    x: Fraction
    r1: int
    r2: int

    def to_record(self) -> dict:
        return {"kind": "pair", "x": format_rational(self.x), "r1": self.r1, "r2": self.r2}


@dataclass(frozen=True)
class SpreadRow:
    """(n-2)y at column s, 0 at column 1, -y elsewhere."""
    y: Fraction
    s: int

    def to_record(self) -> dict:
        return {"kind": "spread", "y": format_rational(self.y), "s": self.s}


@dataclass(frozen=True)
class IrregularRow:
    def to_record(self) -> dict:
        return {"kind": "irregular"}


RowClass = ZeroRow | PairRow | SpreadRow | IrregularRow


def _pair_shape(row: Sequence[Fraction]) -> PairRow | None:
    nz = [j for j, x in enumerate(row, start=1) if x != 0]
    if len(nz) != 2 or 1 in nz:
        return None
    a, b = nz
    if row[a - 1] != -row[b - 1]:
        return None
    if row[a - 1] < 0:
        a, b = b, a
    return PairRow(row[a - 1], a, b)


def _spread_shape(row: Sequence[Fraction]) -> SpreadRow | None:
    n = len(row)
    if n < 4 or row[0] != 0:
        return None
    for s in range(2, n + 1):
        y = row[s - 1] / (n - 2)
        if y != 0 and all(row[j - 1] == -y for j in range(2, n + 1) if j != s):
            return SpreadRow(y, s)
    return None


def classify_row(M: SquareMatrix, alpha: int) -> RowClass:
    """Zero, pair (x, r1, r2), spread (y, s) or irregular.

    For n = 3 a spread row (0, y, -y) is also a pair row; the pair form is
    reported.
    """
    row = M.row(alpha)
    if not any(row):
        return ZeroRow()
    return _pair_shape(row) or _spread_shape(row) or IrregularRow()


@dataclass(frozen=True)
class ColumnPartition:
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        if len(blocks) < 2:
            raise ValueError("a column partition needs at least two blocks")
        if any(not b for b in blocks):
            raise ValueError("blocks must be nonempty")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *blocks: Iterable[int]) -> "ColumnPartition":
        return cls(tuple(frozenset(b) for b in blocks))

    def validate(self, n: int) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            if seen & b:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != set(range(1, n + 1)):
            raise ValueError(f"blocks do not cover 1..{n} exactly")

    def pair_count(self) -> int:
        """sum over block pairs k < m of |A_k| * |A_m|."""
        sizes = [len(b) for b in self.blocks]
        total = sum(sizes)
        return (total * total - sum(s * s for s in sizes)) // 2

    def to_record(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]


def has_partition_property(M: SquareMatrix, alpha: int, beta: int, P: ColumnPartition) -> bool:
    """m_{alpha,a} + m_{beta,b} != m_{alpha,b} + m_{beta,a} for all a, b in different blocks."""
    if alpha == beta:
        raise ValueError("alpha and beta must differ")
    P.validate(M.n)
    ra, rb = M.row(alpha), M.row(beta)
    for k, A in enumerate(P.blocks):
        for B in P.blocks[k + 1:]:
            for a in A:
                for b in B:
                    if ra[a - 1] + rb[b - 1] == ra[b - 1] + rb[a - 1]:
                        return False
    return True


def difference_partition(M: SquareMatrix, alpha: int, beta: int) -> ColumnPartition | None:
    """Level sets of R_alpha - R_beta: the finest partition with the property, None if the rows agree."""
    ra, rb = M.row(alpha), M.row(beta)
    levels: dict[Fraction, set[int]] = {}
    for j in range(1, M.n + 1):
        levels.setdefault(ra[j - 1] - rb[j - 1], set()).add(j)
    if len(levels) < 2:
        return None
    return ColumnPartition(tuple(frozenset(b) for b in levels.values()))


@dataclass(frozen=True)
class ABProperty:
    """Outcome of the constructive (A, B) case analysis for two distinct normal-form rows.

    `case` is the subcase label ("1.1" ... "4.3").  Only |A| == 2 is what the
    n >= 8 argument needs; |A| in {3, 4} cases are returned with
    ``minimal == False`` so callers can report them separately.
    """
    case: str
    block: frozenset[int]
    n: int

    @property
    def minimal(self) -> bool:
        return len(self.block) == 2

    @property
    def partition(self) -> ColumnPartition:
        rest = frozenset(range(1, self.n + 1)) - self.block
        if not rest:
            # only case 4.1 at n = 4: A = {1, r1, r2, s} is every column
            raise ValueError(f"case {self.case} leaves B empty for n={self.n}")
        return ColumnPartition((self.block, rest))

    def to_record(self) -> dict:
        return {"case": self.case, "A": sorted(self.block), "minimal": self.minimal}


def _oriented(p: PairRow, first: int) -> tuple[Fraction, int, int]:
    # write the pair row so that column `first` carries the first index
    return (p.x, p.r1, p.r2) if p.r1 == first else (-p.x, p.r2, p.r1)


def find_AB_property(M: SquareMatrix, alpha: int, beta: int) -> ABProperty | None:
    """Case analysis producing a partition (A, B) with the (A, B)-property.

    Cases are tried in order 1.1, 1.2, 2.1, ..., 4.3.  Returns None when the
    two rows are equal.  Raises ValueError for an irregular row.
    """
    if alpha == beta:
        raise ValueError("alpha and beta must differ")
    n = M.n
    ca, cb = classify_row(M, alpha), classify_row(M, beta)
    for c, idx in ((ca, alpha), (cb, beta)):
        if isinstance(c, IrregularRow):
            raise ValueError(f"row {idx} is neither zero, a pair row nor a spread row")
    if M.row(alpha) == M.row(beta):
        return None

    def found(case: str, cols: Iterable[int]) -> ABProperty:
        return ABProperty(case, frozenset(cols), n)

    if isinstance(ca, ZeroRow) or isinstance(cb, ZeroRow):
        other = cb if isinstance(ca, ZeroRow) else ca
        if isinstance(other, PairRow):
            return found("1.1", (other.r1, other.r2))
        return found("1.2", (1, other.s))

    if isinstance(ca, PairRow) and isinstance(cb, PairRow):
        shared = {ca.r1, ca.r2} & {cb.r1, cb.r2}
        if not shared:
            return found("2.1", (ca.r1, ca.r2, cb.r1, cb.r2))
        if len(shared) == 1:
            (common,) = shared
            x1, r1, r2 = _oriented(ca, common)
            x2, _, r4 = _oriented(cb, common)
            if x1 != x2:
                return found("2.2", (r1, r2, r4))
            return found("2.3", (r2, r4))
        return found("2.4", (ca.r1, ca.r2))

    if isinstance(ca, SpreadRow) and isinstance(cb, SpreadRow):
        if ca.s != cb.s:
            if ca.y != cb.y:
                return found("3.1", (1, ca.s, cb.s))
            return found("3.2", (ca.s, cb.s))
        return found("3.3", (1, ca.s))

    pair, spread = (ca, cb) if isinstance(ca, PairRow) else (cb, ca)
    if spread.s not in (pair.r1, pair.r2):
        return found("4.1", (1, pair.r1, pair.r2, spread.s))
    x, r1, r2 = _oriented(pair, spread.s)
    if x != (n - 1) * spread.y:
        return found("4.2", (1, r1, r2))
    return found("4.3", (1, r2))


def theta_uniform(M: SquareMatrix) -> int | None:
    """Smallest theta such that all rows other than row theta coincide."""
    for theta in range(1, M.n + 1):
        rest = {M.row(a) for a in range(1, M.n + 1) if a != theta}
        if len(rest) == 1:
            return theta
    return None


# -- matrix templates ---------------------------------------------------------

@dataclass(frozen=True)
class M1:
    """x in column p1 and -x in column p2 of every row i > 1; zero elsewhere (x > 0)."""
    x: Fraction
    p1: int
    p2: int

    def to_record(self) -> dict:
        return {"kind": "M1", "x": format_rational(self.x), "p1": self.p1, "p2": self.p2}


@dataclass(frozen=True)
class M2:
    """x at (tau, q1) and -x at (tau, q2); zero elsewhere (x > 0)."""
    x: Fraction
    q1: int
    q2: int
    tau: int

    def to_record(self) -> dict:
        return {"kind": "M2", "x": format_rational(self.x), "q1": self.q1, "q2": self.q2, "tau": self.tau}


@dataclass(frozen=True)
class OtherMatrix:
    def to_record(self) -> dict:
        return {"kind": "other"}


MatrixClass = M1 | M2 | OtherMatrix


def classify_matrix(M: SquareMatrix) -> MatrixClass:
    if any(M.row(1)):
        return OtherMatrix()
    nonzero = [i for i in range(2, M.n + 1) if any(M.row(i))]
    if len(nonzero) == M.n - 1 and len({M.row(i) for i in nonzero}) == 1:
        pair = _pair_shape(M.row(2))
        if pair is not None:
            return M1(pair.x, pair.r1, pair.r2)
    if len(nonzero) == 1:
        (tau,) = nonzero
        pair = _pair_shape(M.row(tau))
        if pair is not None:
            return M2(pair.x, pair.r1, pair.r2, tau)
    return OtherMatrix()


def m1_matrix(x, p1: int, p2: int, n: int) -> SquareMatrix:
    """The (x, p1, p2)-matrix."""
    if p1 == p2 or not (2 <= p1 <= n and 2 <= p2 <= n) or x == 0:
        raise ValueError("need x != 0 and distinct p1, p2 in 2..n")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][p1 - 1] = Fraction(x)
        rows[i][p2 - 1] = -Fraction(x)
    return SquareMatrix(tuple(map(tuple, rows)))


def m2_matrix(x, q1: int, q2: int, tau: int, n: int) -> SquareMatrix:
    """The (x, q1, q2, tau)-matrix."""
    if q1 == q2 or not all(2 <= k <= n for k in (q1, q2, tau)) or x == 0:
        raise ValueError("need x != 0, distinct q1, q2 and q1, q2, tau in 2..n")
    rows = [[Fraction(0)] * n for _ in range(n)]
    rows[tau - 1][q1 - 1] = Fraction(x)
    rows[tau - 1][q2 - 1] = -Fraction(x)
    return SquareMatrix(tuple(map(tuple, rows)))


def spread_uniform_matrix(y, s: int, n: int) -> SquareMatrix:
    """Every row except row 1 equal to the (y, s)-row."""
    row = [Fraction(0)] + [-Fraction(y)] * (n - 1)
    row[s - 1] = (n - 2) * Fraction(y)
    return SquareMatrix(tuple([tuple([Fraction(0)] * n)] + [tuple(row)] * (n - 1)))


def equality_family(n: int, x=1) -> list[SquareMatrix]:
    """All (x, p1, p2)-matrices followed by all (x, q1, q2, tau)-matrices."""
    idx = range(2, n + 1)
    fam = [m1_matrix(x, p1, p2, n) for p1 in idx for p2 in idx if p1 != p2]
    fam += [m2_matrix(x, q1, q2, tau, n) for tau in idx for q1 in idx for q2 in idx if q1 != q2]
    return fam
