"""Exact linear algebra kernels.

GF(2) matrices are stored as lists of Python ints used as bitsets (bit ``j``
of row ``i`` is the entry ``(i, j)``).  Rational work is done with integer
fraction-free elimination; there is no floating point anywhere in here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        limit = 1 << self.cols
        for r in self.data:
            if r < 0 or r >= limit:
                raise ValueError("row wider than column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "Gf2Matrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            data.append(sum(1 << j for j, v in enumerate(row) if v % 2))
        return cls(rows, cols, tuple(data))

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.data))

    def mul_vec(self, v: int) -> int:
        """Return ``m @ v`` with ``v`` a column bitset of length ``cols``."""
        out = 0
        for i, r in enumerate(self.data):
            if bin(r & v).count("1") % 2:
                out |= 1 << i
        return out

    def matmul(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        data = []
        for r in self.data:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other.data[j]
                r >>= 1
                j += 1
            data.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(data))

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def is_zero(self) -> bool:
        return not any(self.data)


@dataclass(frozen=True)
class Gf2Solution:
    rank: int
    solution: Optional[int]
    solvable: bool


def gf2_rank(m: Gf2Matrix) -> int:
    return gf2_solve(m).rank


def gf2_solve(m: Gf2Matrix, target: Optional[int] = None, target_len: Optional[int] = None) -> Gf2Solution:
    """Rank of ``m`` and, if ``target`` is given, some ``v`` with ``m v = target``.

    ``target`` is a bitset indexed by rows.  Pivots are taken in column order so
    the returned solution is deterministic (free variables are set to zero).
    """
    if target_len is not None and target_len != m.rows:
        raise ValueError(f"target length {target_len} != rows {m.rows}")
    if target is not None and target >> m.rows:
        raise ValueError("target wider than row count")
    # Augment each row with the target bit in position ``cols``.
    aug = m.cols
    work = [r | ((((target or 0) >> i) & 1) << aug) for i, r in enumerate(m.data)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(m.cols):
        bit = 1 << col
        pivot = next((i for i in range(row, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for i in range(len(work)):
            if i != row and work[i] & bit:
                work[i] ^= work[row]
        pivots.append((row, col))
        row += 1
        if row == len(work):
            break
    rank = len(pivots)
    if target is None:
        return Gf2Solution(rank, None, True)
    augbit = 1 << aug
    if any(w & augbit for w in work[rank:]):
        return Gf2Solution(rank, None, False)
    v = 0
    for r, c in pivots:
        if work[r] & augbit:
            v |= 1 << c
    return Gf2Solution(rank, v, True)


# ---------------------------------------------------------------------------
# rational / integer


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[object]], cols: Optional[int] = None) -> "RatMatrix":
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            data.append(tuple(Fraction(x) for x in row))  # type: ignore[arg-type]
        return cls(rows, cols, tuple(data))


def _integer_rows(m: RatMatrix) -> list[list[int]]:
    out = []
    for row in m.entries:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def rational_rank(m: RatMatrix | Sequence[Sequence[object]]) -> int:
    """Exact rank via fraction-free (Bareiss) elimination."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_lists(m) if len(m) else RatMatrix(0, 0, ())
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nrows):
            f = a[i][col]
            row_i = a[i]
            row_r = a[rank]
            for j in range(col, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Z-basis of ``{v in Z^ncols : rows @ v = 0}``.

    Column-style unimodular reduction: we carry a unimodular matrix ``U`` with
    ``M U`` in column echelon form; the columns of ``U`` past the rank span the
    integer kernel, and because ``U`` is unimodular they span it over Z (the
    basis is saturated).
    """
    m = [list(r) for r in rows]
    n = ncols
    cols = [[m[i][j] for i in range(len(m))] for j in range(n)]
    u = [[1 if i == j else 0 for i in range(n)] for j in range(n)]  # u[j] is column j of U
    lead = 0
    for i in range(len(m)):
        # gcd-reduce row i over columns lead.. by extended Euclid on column pairs
        while True:
            nz = [j for j in range(lead, n) if cols[j][i] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][i]))
            for j in nz:
                if j == jmin:
                    continue
                q = cols[j][i] // cols[jmin][i]
                if q:
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[jmin])]
                    u[j] = [a - q * b for a, b in zip(u[j], u[jmin])]
        nz = [j for j in range(lead, n) if cols[j][i] != 0]
        if not nz:
            continue
        j = nz[0]
        cols[lead], cols[j] = cols[j], cols[lead]
        u[lead], u[j] = u[j], u[lead]
        lead += 1
        if lead == n:
            break
    basis = [_normalize_sign(u[j]) for j in range(lead, n)]
    return _reduce_basis(basis)


def _normalize_sign(v: list[int]) -> list[int]:
    for x in v:
        if x:
            return v if x > 0 else [-y for y in v]
    return v


def _reduce_basis(basis: list[list[int]]) -> list[list[int]]:
    """Deterministic Hermite-style echelon form of a lattice basis (keeps the lattice)."""
    b = [list(v) for v in basis]
    if not b:
        return b
    n = len(b[0])
    out: list[list[int]] = []
    for col in range(n):
        while True:
            nz = [i for i, v in enumerate(b) if v[col] != 0]
            if len(nz) <= 1:
                break
            imin = min(nz, key=lambda i: (abs(b[i][col]), i))
            for i in nz:
                if i != imin:
                    q = b[i][col] // b[imin][col]
                    b[i] = [x - q * y for x, y in zip(b[i], b[imin])]
        nz = [i for i, v in enumerate(b) if v[col] != 0]
        if nz:
            out.append(_normalize_sign(b.pop(nz[0])))
    # back-reduce earlier vectors against later pivots
    for k in range(len(out) - 1, -1, -1):
        piv = next(c for c, x in enumerate(out[k]) if x)
        for i in range(k):
            q = out[i][piv] // out[k][piv]
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[k])]
    return out


# ---------------------------------------------------------------------------
# nonnegative elements of a lattice


def _simplex_feasible(a: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Phase-I simplex (Bland's rule): is ``{z >= 0 : a z = b}`` nonempty?"""
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    for i in range(m):
        row = list(a[i])
        rhs = b[i]
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        rows.append(row + [Fraction(1 if k == i else 0) for k in range(m)] + [rhs])
    width = n + m
    basis = [n + i for i in range(m)]
    # objective: minimise sum of artificials; reduced costs row
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(width + 1):
            cost[j] -= row[j]
    for j in range(n, width):
        cost[j] += 1
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[width] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # unbounded direction in phase I cannot happen (objective bounded below)
            break
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [x / piv for x in rows[i]]
        for k in range(m):
            if k != i and rows[k][enter] != 0:
                f = rows[k][enter]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[i])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[i])]
        basis[i] = enter
    return cost[width] == 0


def nonneg_nonzero_in_lattice(basis: Sequence[Sequence[int]]) -> bool:
    """True iff the lattice spanned by ``basis`` has a nonzero element that is >= 0.

    Decided as rational feasibility of ``{c : B^T c >= 0, sum(B^T c) = 1}``;
    a rational solution scales to an integer one.
    """
    if not basis:
        return False
    k = len(basis)
    n = len(basis[0])
    if any(len(v) != n for v in basis):
        raise ValueError("basis vectors differ in length")
    # variables: c+ (k), c- (k), s (n);   B^T(c+ - c-) - s = 0 ; sum(s) = 1
    a: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for col in range(n):
        row = [Fraction(basis[i][col]) for i in range(k)]
        row += [-x for x in row]
        row += [Fraction(-1 if j == col else 0) for j in range(n)]
        a.append(row)
        rhs.append(Fraction(0))
    a.append([Fraction(0)] * (2 * k) + [Fraction(1)] * n)
    rhs.append(Fraction(1))
    return _simplex_feasible(a, rhs)


def bits(values: Iterable[int]) -> int:
    """Pack an iterable of 0/1 values into a bitset (index 0 = bit 0)."""
    out = 0
    for i, v in enumerate(values):
        if v % 2:
            out |= 1 << i
    return out
