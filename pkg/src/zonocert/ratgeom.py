"""Exact linear algebra over the rationals.

Vectors and matrices store ``fractions.Fraction`` entries, so every rank,
determinant, kernel, and Hermite form below is computed without rounding.
Rank and determinant run fraction-free (Bareiss) on integer-cleared rows;
everything else uses plain Gauss elimination over Fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateSpan, InternalFault, NotSquare, RankMismatch, Singular

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_rational(x) -> Fraction:
    """Coerce int or Fraction; reject floats to keep arithmetic exact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# vectors


@dataclass(frozen=True)
class RatVector:
    """Immutable rational vector."""

    entries: tuple[Fraction, ...]

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries",
                           tuple(_as_rational(e) for e in entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def dot(self, other: "RatVector") -> Fraction:
        if self.dim != other.dim:
            raise ValueError("dot product of vectors of different dimension")
        return sum((a * b for a, b in zip(self.entries, other.entries)), _ZERO)

    def __add__(self, other: "RatVector") -> "RatVector":
        return RatVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RatVector") -> "RatVector":
        return RatVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RatVector":
        return RatVector(-a for a in self.entries)

    def scale(self, c) -> "RatVector":
        c = _as_rational(c)
        return RatVector(c * a for a in self.entries)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def zero_vector(dim: int) -> RatVector:
    return RatVector([_ZERO] * dim)


def unit_vector(dim: int, i: int) -> RatVector:
    return RatVector([_ONE if j == i else _ZERO for j in range(dim)])


def canonical_direction(v: RatVector) -> RatVector:
    """Scale a nonzero vector to integer entries, content 1, first nonzero positive."""
    if v.is_zero():
        raise ValueError("cannot canonicalize the zero vector")
    den = math.lcm(*(e.denominator for e in v.entries))
    ints = [int(e * den) for e in v.entries]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return RatVector(ints)


def parallel_ratio(v: RatVector, w: RatVector) -> Fraction | None:
    """Return c with v == c*w, or None when v is not a multiple of w."""
    if w.is_zero():
        raise ValueError("reference vector is zero")
    c = None
    for a, b in zip(v.entries, w.entries):
        if b == 0:
            if a != 0:
                return None
            continue
        r = a / b
        if c is None:
            c = r
        elif c != r:
            return None
    return _ZERO if c is None else c


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RatMatrix:
    """Immutable rational matrix, row major."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(_as_rational(e) for e in row) for row in entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, vectors: Sequence[RatVector], cols: int | None = None) -> "RatMatrix":
        if not vectors:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            m = cls.__new__(cls)
            object.__setattr__(m, "entries", ())
            object.__setattr__(m, "_empty_cols", cols)
            return m
        return cls(v.entries for v in vectors)

    @classmethod
    def from_columns(cls, vectors: Sequence[RatVector]) -> "RatMatrix":
        if not vectors:
            raise ValueError("no columns")
        dim = vectors[0].dim
        return cls([[v[i] for v in vectors] for i in range(dim)])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)]
                    for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        if not self.entries:
            return getattr(self, "_empty_cols", 0)
        return len(self.entries[0])

    def row(self, i: int) -> RatVector:
        return RatVector(self.entries[i])

    def column(self, j: int) -> RatVector:
        return RatVector(r[j] for r in self.entries)

    def columns(self) -> tuple[RatVector, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def transpose(self) -> "RatMatrix":
        return RatMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def __matmul__(self, other):
        if isinstance(other, RatVector):
            if self.cols != other.dim:
                raise ValueError("matrix and vector dimensions differ")
            return RatVector(self.row(i).dot(other) for i in range(self.rows))
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError("inner matrix dimensions differ")
            cols = other.cols
            return RatMatrix([[sum((self.entries[i][k] * other.entries[k][j]
                                    for k in range(self.cols)), _ZERO)
                               for j in range(cols)]
                              for i in range(self.rows)])
        return NotImplemented

    def scale(self, c) -> "RatMatrix":
        c = _as_rational(c)
        return RatMatrix([[c * e for e in row] for row in self.entries])


# ---------------------------------------------------------------------------
# fraction-free elimination


def _cleared_rows(m: RatMatrix) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row; returns integer rows and the product
    of the scaling factors (for determinant correction)."""
    out = []
    factor = _ONE
    for row in m.entries:
        den = math.lcm(*(e.denominator for e in row)) if row else 1
        out.append([int(e * den) for e in row])
        factor *= den
    return out, factor


def _bareiss_det(a: list[list[int]]) -> int:
    """Determinant of a square integer matrix, fraction-free."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                q, r = divmod(num, prev)
                if r:
                    raise InternalFault("fraction-free elimination not exact")
                a[i][j] = q
            a[i][k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def rank(m: RatMatrix) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    a, _ = _cleared_rows(m)
    nrows, ncols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv_row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv_row is None:
            continue
        a[r], a[piv_row] = a[piv_row], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                num = a[i][j] * piv - a[i][c] * a[r][j]
                q, rem = divmod(num, prev)
                if rem:
                    raise InternalFault("fraction-free elimination not exact")
                a[i][j] = q
            a[i][c] = 0
        prev = piv
        r += 1
    return r


def det(m: RatMatrix) -> Fraction:
    """Exact determinant; raises NotSquare for rectangular input."""
    if m.rows != m.cols:
        raise NotSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    a, factor = _cleared_rows(m)
    return Fraction(_bareiss_det(a)) / factor


# ---------------------------------------------------------------------------
# echelon forms, kernels, inverses


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form and its pivot columns."""
    a = [list(row) for row in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv_row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv_row is None:
            continue
        a[r], a[piv_row] = a[piv_row], a[r]
        piv = a[r][c]
        a[r] = [e / piv for e in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if not a:
        return RatMatrix.from_rows([], cols=ncols), ()
    return RatMatrix(a), tuple(pivots)


def kernel_basis(m: RatMatrix) -> tuple[RatVector, ...]:
    """Deterministic basis of the right kernel, one vector per free column."""
    reduced, pivots = rref(m)
    ncols = m.cols
    pivot_set = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [_ZERO] * ncols
        v[free] = _ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced.entries[r][free]
        out.append(RatVector(v))
    return tuple(out)


def kernel_line(m: RatMatrix) -> RatVector:
    """The one-dimensional kernel of a rank d-1 matrix with d columns.

    The result is canonical: integer entries with content 1 and positive
    first nonzero entry.
    """
    d = m.cols
    r = rank(m)
    if r != d - 1:
        raise RankMismatch(f"kernel line needs rank {d - 1}, got rank {r}")
    basis = kernel_basis(m)
    if len(basis) != 1:
        raise InternalFault("kernel of a corank-1 matrix is not a line")
    return canonical_direction(basis[0])


def inverse(m: RatMatrix) -> RatMatrix:
    """Exact inverse via Gauss-Jordan; raises Singular when det is 0."""
    if m.rows != m.cols:
        raise NotSquare(f"inverse of a {m.rows}x{m.cols} matrix")
    n = m.rows
    a = [list(row) + [_ONE if i == j else _ZERO for j in range(n)]
         for i, row in enumerate(m.entries)]
    for c in range(n):
        piv_row = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv_row is None:
            raise Singular("matrix is singular")
        a[c], a[piv_row] = a[piv_row], a[c]
        piv = a[c][c]
        a[c] = [e / piv for e in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return RatMatrix([row[n:] for row in a])


def solve(m: RatMatrix, b: RatVector) -> RatVector:
    """Solve m x = b for square m."""
    return inverse(m) @ b


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank lattice basis; columns of ``basis`` are the basis vectors."""

    basis: RatMatrix

    def __post_init__(self):
        if self.basis.rows != self.basis.cols:
            raise NotSquare("lattice basis matrix must be square")
        if det(self.basis) == 0:
            raise Singular("lattice basis columns are dependent")

    @property
    def dimension(self) -> int:
        return self.basis.rows

    @property
    def vectors(self) -> tuple[RatVector, ...]:
        return self.basis.columns()


def _column_hnf(cols: list[list[int]], dim: int) -> list[list[int]]:
    """Column-style Hermite normal form of an integer column list.

    Returns the pivot columns in staircase order: per pivot row a positive
    pivot entry, zeros above it, and earlier columns reduced modulo it.
    """
    work = [c[:] for c in cols if any(c)]
    fixed: list[list[int]] = []
    for r in range(dim):
        live = [c for c in work if c[r] != 0]
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[r]))
            piv = live[0]
            for c in live[1:]:
                q = c[r] // piv[r]
                for i in range(dim):
                    c[i] -= q * piv[i]
            live = [c for c in live if c[r] != 0]
        if not live:
            continue
        piv = live[0]
        work.remove(piv)
        if piv[r] < 0:
            piv[:] = [-x for x in piv]
        fixed.append(piv)
    # reduce entries left of each pivot
    for k in range(1, len(fixed)):
        pk = fixed[k]
        r = next(i for i in range(dim) if pk[i] != 0)
        for j in range(k):
            q = fixed[j][r] // pk[r]
            if q:
                for i in range(dim):
                    fixed[j][i] -= q * pk[i]
    return fixed


def hnf_lattice_basis(generators: Sequence[RatVector]) -> LatticeBasis:
    """Canonical basis of the lattice generated by rational vectors.

    All generators are scaled by one common denominator, reduced to integer
    Hermite normal form, and scaled back, so the result is deterministic.
    Raises DegenerateSpan when the generators do not span the space.
    """
    if not generators:
        raise DegenerateSpan("no generators")
    dim = generators[0].dim
    if any(g.dim != dim for g in generators):
        raise ValueError("generators of mixed dimension")
    den = math.lcm(*(e.denominator for g in generators for e in g.entries))
    cols = [[int(e * den) for e in g.entries] for g in generators]
    fixed = _column_hnf(cols, dim)
    if len(fixed) < dim:
        raise DegenerateSpan(
            f"generators span a rank {len(fixed)} sublattice of rank {dim} space")
    matrix = RatMatrix([[Fraction(fixed[j][i], den) for j in range(dim)]
                        for i in range(dim)])
    return LatticeBasis(matrix)


def dual_lattice_basis(b: LatticeBasis) -> LatticeBasis:
    """Dual lattice basis: the inverse transpose of the primal basis."""
    return LatticeBasis(inverse(b.basis).transpose())


def lattice_coordinates(b: LatticeBasis, v: RatVector) -> RatVector:
    """Coordinates of v in the basis, exact."""
    return solve(b.basis, v)


def lattice_contains(b: LatticeBasis, v: RatVector) -> bool:
    """True when v is an integer combination of the basis vectors."""
    return all(c.denominator == 1 for c in lattice_coordinates(b, v))


def same_lattice(a: LatticeBasis, b: LatticeBasis) -> bool:
    """Lattice equality through canonical Hermite forms."""
    ha = hnf_lattice_basis(a.vectors)
    hb = hnf_lattice_basis(b.vectors)
    return ha.basis.entries == hb.basis.entries
