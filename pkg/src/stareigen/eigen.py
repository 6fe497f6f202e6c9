"""(n-2)-eigenfunctions of S_n in exact arithmetic.

The elementary functions are

    f_u^{v,w}(p) =  1  if p(v) == u
                   -1  if p(w) == u
                    0  otherwise

for u in 1..n and v != w in 2..n.  The subfamily F2 = {f_u^{2,w} : u in 2..n,
w in 3..n} is a basis of the eigenspace, so an eigenfunction is identified
with its coefficient vector over F2, ordered u-major then w.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Callable, Iterator, Mapping

import numpy as np

from stareigen.linalg import common_denominator, exact_int_array, exact_rank, fits_int64
from stareigen.perm import (
    Permutation,
    as_permutation,
    enumerate_perms,
    neighbor_table,
    perm_table,
    rank,
)
from stareigen.rational import format_rational, parse_rational

ZERO = Fraction(0)
ONE = Fraction(1)

MAX_SCAN_N = 8
MAX_EIGEN_CHECK_N = 7
MAX_EXPORT_N = 6


def coefficient_index(n: int) -> list[tuple[int, int]]:
    """Canonical (u, w) order of the F2 basis: u in 2..n major, w in 3..n minor."""
    return [(u, w) for u in range(2, n + 1) for w in range(3, n + 1)]


def eigenspace_dimension(n: int) -> int:
    return (n - 1) * (n - 2)


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients mu_u^w of a function over the F2 basis, in canonical order."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != eigenspace_dimension(self.n):
            raise ValueError(
                f"expected {eigenspace_dimension(self.n)} coefficients for n={self.n}, got {len(vals)}"
            )
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, n: int) -> "CoefficientVector":
        return cls(n, (ZERO,) * eigenspace_dimension(n))

    @classmethod
    def from_dict(cls, n: int, mu: Mapping[tuple[int, int], object]) -> "CoefficientVector":
        index = {key: k for k, key in enumerate(coefficient_index(n))}
        vals = [ZERO] * len(index)
        for key, value in mu.items():
            if key not in index:
                raise ValueError(f"coefficient index {key} outside u in 2..{n}, w in 3..{n}")
            vals[index[key]] = Fraction(value)
        return cls(n, tuple(vals))

    @classmethod
    def unit(cls, n: int, u: int, w: int) -> "CoefficientVector":
        return cls.from_dict(n, {(u, w): 1})

    @classmethod
    def random(cls, n: int, rng: random.Random, bound: int = 5, density: float = 1.0,
               denominators: tuple[int, ...] = (1,)) -> "CoefficientVector":
        """Seeded random nonzero vector with entries p/q, |p| <= bound, q drawn from `denominators`."""
        while True:
            vals = []
            for _ in range(eigenspace_dimension(n)):
                if rng.random() < density:
                    vals.append(Fraction(rng.randint(-bound, bound), rng.choice(denominators)))
                else:
                    vals.append(ZERO)
            c = cls(n, tuple(vals))
            if not c.is_zero():
                return c

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        u, w = key
        if not (2 <= u <= self.n and 3 <= w <= self.n):
            raise KeyError(key)
        return self.values[(u - 2) * (self.n - 2) + (w - 3)]

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return zip(coefficient_index(self.n), self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def _check(self, other: "CoefficientVector") -> None:
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "CoefficientVector") -> "CoefficientVector":
        self._check(other)
        return CoefficientVector(self.n, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "CoefficientVector") -> "CoefficientVector":
        self._check(other)
        return CoefficientVector(self.n, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "CoefficientVector":
        return CoefficientVector(self.n, tuple(-a for a in self.values))

    def __mul__(self, scalar) -> "CoefficientVector":
        s = Fraction(scalar)
        return CoefficientVector(self.n, tuple(s * a for a in self.values))

    __rmul__ = __mul__

    def normalized(self) -> "CoefficientVector":
        """Scale so the first nonzero coefficient equals 1 (canonical direction)."""
        lead = next((v for v in self.values if v), None)
        if lead is None:
            raise ValueError("the zero vector has no direction")
        return self * (1 / lead)

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "entries": [{"i": u, "j": w, "value": format_rational(v)} for (u, w), v in self.items()],
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "CoefficientVector":
        """Inverse of :meth:`to_record`; omitted entries are zero."""
        n = int(record["n"])
        mu = {}
        for entry in record.get("entries", []):
            mu[(int(entry["i"]), int(entry["j"]))] = parse_rational(entry["value"])
        return cls.from_dict(n, mu)


class VertexFunction:
    """A rational-valued function on the vertices of S_n.

    `evaluate` gives single values; `table` (optional) returns the whole
    function as ``(ints, denominator)`` with ``ints[rank] / denominator`` the
    value at the permutation of that rank.  Without `table` the full table is
    built by enumeration.  Tables are memoised for n <= 8.
    """

    __slots__ = ("n", "label", "_evaluate", "_table_fn", "_table")

    def __init__(self, n: int, evaluate: Callable[[Permutation], Fraction],
                 table: Callable[[], tuple[np.ndarray, int]] | None = None, label: str = ""):
        if n < 3:
            raise ValueError("n must be >= 3")
        self.n = n
        self.label = label
        self._evaluate = evaluate
        self._table_fn = table
        self._table = None

    def __repr__(self) -> str:
        return f"VertexFunction(n={self.n}, {self.label or 'anonymous'})"

    def __call__(self, p) -> Fraction:
        p = as_permutation(p)
        if p.n != self.n:
            raise ValueError(f"permutation of size {p.n} given to a function on S_{self.n}")
        return self._evaluate(p)

    def int_table(self) -> tuple[np.ndarray, int]:
        if self._table is not None:
            return self._table
        if self._table_fn is not None:
            table = self._table_fn()
        else:
            vals = [self._evaluate(p) for p in enumerate_perms(self.n)]
            den = common_denominator(vals)
            table = (exact_int_array(v * den for v in vals), den)
        if self.n <= MAX_SCAN_N:
            self._table = table
        return table

    def values(self) -> list[Fraction]:
        ints, den = self.int_table()
        return [Fraction(int(x), den) for x in ints]

    @classmethod
    def from_values(cls, n: int, values, label: str = "table") -> "VertexFunction":
        """Explicit value table indexed by lexicographic rank."""
        vals = [Fraction(v) for v in values]
        if len(vals) != factorial(n):
            raise ValueError(f"expected {factorial(n)} values, got {len(vals)}")
        den = common_denominator(vals)
        ints = exact_int_array(v * den for v in vals)
        return cls(n, lambda p: vals[rank(p)], lambda: (ints, den), label)

    def _combine(self, other: "VertexFunction", sign: int, label: str) -> "VertexFunction":
        if other.n != self.n:
            raise ValueError("functions live on different graphs")

        def table():
            a, da = self.int_table()
            b, db = other.int_table()
            den = lcm(da, db)
            ka, kb = den // da, den // db
            bound = ka * _absmax(a) + kb * _absmax(b)
            if not fits_int64(bound):
                a, b = a.astype(object), b.astype(object)
            return a * ka + sign * (b * kb), den

        return VertexFunction(self.n, lambda p: self(p) + sign * other(p), table, label)

    def __add__(self, other: "VertexFunction") -> "VertexFunction":
        return self._combine(other, 1, f"({self.label} + {other.label})")

    def __sub__(self, other: "VertexFunction") -> "VertexFunction":
        return self._combine(other, -1, f"({self.label} - {other.label})")

    def scaled(self, scalar) -> "VertexFunction":
        s = Fraction(scalar)

        def table():
            ints, den = self.int_table()
            bound = abs(s.numerator) * _absmax(ints)
            if not fits_int64(bound):
                ints = ints.astype(object)
            return ints * s.numerator, den * s.denominator

        return VertexFunction(self.n, lambda p: s * self(p), table, f"{s}*{self.label}")

    def __rmul__(self, scalar) -> "VertexFunction":
        return self.scaled(scalar)

    def __neg__(self) -> "VertexFunction":
        return self.scaled(-1)


def _absmax(arr: np.ndarray) -> int:
    return int(np.abs(arr).max()) if arr.size else 0


def zero_function(n: int) -> VertexFunction:
    return VertexFunction(n, lambda p: ZERO, lambda: (np.zeros(factorial(n), dtype=np.int64), 1), "0")


def _check_elementary(u: int, v: int, w: int, n: int) -> None:
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 1 <= u <= n:
        raise ValueError(f"u={u} outside 1..{n}")
    if not (2 <= v <= n and 2 <= w <= n):
        raise ValueError(f"v, w must lie in 2..{n}, got v={v}, w={w}")
    if v == w:
        raise ValueError("v and w must differ")


def _elementary_table(u: int, v: int, w: int, n: int) -> np.ndarray:
    table = perm_table(n)
    return (table[:, v - 1] == u - 1).astype(np.int64) - (table[:, w - 1] == u - 1).astype(np.int64)


def elementary(u: int, v: int, w: int, n: int) -> VertexFunction:
    """f_u^{v,w}: 1 where p(v) == u, -1 where p(w) == u, 0 elsewhere."""
    _check_elementary(u, v, w, n)

    def evaluate(p: Permutation) -> Fraction:
        if p(v) == u:
            return ONE
        if p(w) == u:
            return -ONE
        return ZERO

    return VertexFunction(n, evaluate, lambda: (_elementary_table(u, v, w, n), 1), f"f_{u}^{{{v},{w}}}")


def elementary_family(n: int) -> list[tuple[int, int, int]]:
    """All index triples (u, v, w) of the family F."""
    return [(u, v, w) for u in range(1, n + 1)
            for v in range(2, n + 1) for w in range(2, n + 1) if v != w]


def basis_indices(n: int) -> list[tuple[int, int]]:
    return coefficient_index(n)


def basis_F2(n: int) -> list[VertexFunction]:
    """The (n-1)(n-2) functions f_u^{2,w}, u-major then w."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return [elementary(u, 2, w, n) for u, w in coefficient_index(n)]


def _f2_coeffs(u: int, w: int, n: int) -> CoefficientVector:
    # coefficients of f_u^{2,w}; f_u^{2,2} is read as 0 and
    # f_1^{2,w} = -sum_{u>=2} f_u^{2,w} because sum_u f_u^{2,w} == 0
    if w == 2:
        return CoefficientVector.zero(n)
    if u >= 2:
        return CoefficientVector.unit(n, u, w)
    return CoefficientVector.from_dict(n, {(k, w): -1 for k in range(2, n + 1)})


def elementary_coefficients(u: int, v: int, w: int, n: int) -> CoefficientVector:
    """Coefficients of f_u^{v,w} over F2, using f_u^{v,w} = f_u^{2,w} - f_u^{2,v}."""
    _check_elementary(u, v, w, n)
    return _f2_coeffs(u, w, n) - _f2_coeffs(u, v, n)


def from_coefficients(c: CoefficientVector) -> VertexFunction:
    """The linear combination sum mu_u^w * f_u^{2,w}, evaluated exactly."""
    if c.is_zero():
        raise ValueError("all-zero coefficients do not define an eigenfunction")
    n = c.n
    terms = [(u, w, mu) for (u, w), mu in c.items() if mu]

    def evaluate(p: Permutation) -> Fraction:
        total = ZERO
        at2 = p(2)
        for u, w, mu in terms:
            if at2 == u:
                total += mu
            if p(w) == u:
                total -= mu
        return total

    def table():
        den = common_denominator(mu for _, _, mu in terms)
        scaled = [(u, w, int(mu * den)) for u, w, mu in terms]
        bound = sum(abs(k) for _, _, k in scaled)
        acc = np.zeros(factorial(n), dtype=np.int64 if fits_int64(bound) else object)
        for u, w, k in scaled:
            acc = acc + k * _elementary_table(u, 2, w, n)
        return acc, den

    return VertexFunction(n, evaluate, table, "sum mu f_u^{2,w}")


def _check_scan_n(n: int, limit: int) -> None:
    if not 3 <= n <= limit:
        raise ValueError(f"n={n} outside the supported range 3..{limit}")


def is_eigenfunction(f: VertexFunction, lam, n: int | None = None) -> bool:
    """True iff f is not identically zero and lam*f(x) = sum of f over N(x) at every vertex."""
    n = f.n if n is None else n
    if n != f.n:
        raise ValueError("n does not match the function")
    _check_scan_n(n, MAX_EIGEN_CHECK_N)
    lam = Fraction(lam)
    ints, _ = f.int_table()
    if not np.any(ints != 0):
        return False
    adj = neighbor_table(n)
    bound = max(abs(lam.numerator), lam.denominator) * n * _absmax(ints)
    if not fits_int64(bound):
        ints = ints.astype(object)
    around = ints[adj].sum(axis=1)
    return bool(np.all(lam.numerator * ints == lam.denominator * around))


def basis_value_rows(n: int) -> list[list[int]]:
    return [[int(x) for x in f.int_table()[0]] for f in basis_F2(n)]


def basis_rank(n: int) -> int:
    """Exact rank of the n! x (n-1)(n-2) value matrix of F2 (computed on its transpose)."""
    _check_scan_n(n, MAX_EIGEN_CHECK_N)
    return exact_rank(basis_value_rows(n))


def verify_basis(n: int) -> bool:
    """F2 has full rank (n-1)(n-2) and every member is an (n-2)-eigenfunction."""
    _check_scan_n(n, MAX_EIGEN_CHECK_N)
    if not all(is_eigenfunction(f, n - 2) for f in basis_F2(n)):
        return False
    return basis_rank(n) == eigenspace_dimension(n)


def support(f: VertexFunction, n: int | None = None, witnesses: bool = False) -> tuple[int, list[int] | None]:
    """(|Supp(f)|, sorted ranks of the support if `witnesses`)."""
    n = f.n if n is None else n
    if n != f.n:
        raise ValueError("n does not match the function")
    _check_scan_n(n, MAX_SCAN_N)
    ints, _ = f.int_table()
    nz = np.flatnonzero(ints != 0)
    return int(nz.size), ([int(r) for r in nz] if witnesses else None)


def value_set(f: VertexFunction, n: int | None = None) -> set[Fraction]:
    n = f.n if n is None else n
    _check_scan_n(n, MAX_SCAN_N)
    ints, den = f.int_table()
    return {Fraction(int(x), den) for x in set(ints.tolist())}


def export_table(f: VertexFunction) -> str:
    """CSV value table with header ``rank,permutation,value``; values are exact "p/q" strings."""
    if f.n > MAX_EXPORT_N:
        raise ValueError(f"value tables are exported only for n <= {MAX_EXPORT_N}")
    lines = ["rank,permutation,value"]
    for r, (p, val) in enumerate(zip(enumerate_perms(f.n), f.values())):
        lines.append(f'{r},"{p}",{format_rational(val)}')
    return "\n".join(lines) + "\n"
