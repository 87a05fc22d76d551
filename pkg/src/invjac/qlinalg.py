"""Exact linear algebra over Q.

Matrices are dense (:class:`QMatrix`); elimination runs on sparse row dicts
internally since most matrices built from polynomial actions are sparse.
Subspaces keep a reduced row echelon basis, so two equal subspaces always
compare equal field by field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .polyring import GradedPiece, Poly, as_fraction, homogeneous_degree, monomial_basis, ZERO

Vector = tuple  # tuple[Fraction, ...]
Ambient = Union[GradedPiece, int]


class AmbientMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of Fraction

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        data = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ((),) * self.cols)

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(tuple(-x for x in r) for r in self.entries))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = as_fraction(c)
        return QMatrix(self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self.entries))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return QMatrix(self.rows, other.cols, tuple(
            tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
            for r in self.entries))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def is_diagonal(self) -> bool:
        return all(not x for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j)

    def _same_shape(self, other: "QMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")


class Echelon:
    """Incrementally maintained RREF row set.

    Rows are sparse dicts ``{column: value}`` with pivot entry 1; every pivot
    column is zero in all other rows.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        for p in sorted(set(row) & self.rows.keys()):
            c = row.get(p)
            if not c:
                continue
            for j, v in self.rows[p].items():
                s = row.get(j, 0) - c * v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns False if it was already in the span."""
        row = self.reduce({j: v for j, v in row.items() if v})
        if not row:
            return False
        p = min(row)
        inv = 1 / Fraction(row[p])
        row = {j: v * inv for j, v in row.items()}
        for q, other in self.rows.items():
            c = other.get(p)
            if c:
                for j, v in row.items():
                    s = other.get(j, 0) - c * v
                    if s:
                        other[j] = s
                    else:
                        other.pop(j, None)
        self.rows[p] = row
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def dense_rows(self) -> tuple:
        z = Fraction(0)
        out = []
        for p in self.pivots():
            r = [z] * self.ncols
            for j, v in self.rows[p].items():
                r[j] = Fraction(v)
            out.append(tuple(r))
        return tuple(out)


def _sparse(v: Sequence) -> dict:
    return {j: as_fraction(x) for j, x in enumerate(v) if x}


def _echelon_of_rows(rows: Iterable[dict], ncols: int) -> Echelon:
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    return ech


def rref(M: QMatrix) -> tuple[QMatrix, int]:
    ech = _echelon_of_rows((_sparse(r) for r in M.entries), M.cols)
    rows = ech.dense_rows()
    rank = len(rows)
    z = (Fraction(0),) * M.cols
    full = rows + (z,) * (M.rows - rank)
    return QMatrix(M.rows, M.cols, full), rank


def rank(M: QMatrix) -> int:
    return rref(M)[1]


def _kernel_from_echelon(ech: Echelon) -> list[Vector]:
    n = ech.ncols
    pivots = ech.rows
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(tuple(v))
    return basis


def sparse_kernel(rows: Iterable[dict], ncols: int) -> list[Vector]:
    """Null space basis of the matrix given by sparse rows (unreduced)."""
    return _kernel_from_echelon(_echelon_of_rows(rows, ncols))


@dataclass(frozen=True)
class Subspace:
    """Row space in canonical RREF form inside a fixed ambient.

    ``ambient`` is either a :class:`GradedPiece` (coordinates are monomial
    coefficients in its basis order) or a plain dimension.
    """

    ambient: Ambient
    basis: tuple  # RREF rows

    @property
    def ambient_dim(self) -> int:
        return self.ambient.dim if isinstance(self.ambient, GradedPiece) else self.ambient

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    @classmethod
    def zero(cls, ambient: Ambient) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: Ambient) -> "Subspace":
        m = ambient.dim if isinstance(ambient, GradedPiece) else ambient
        return cls(ambient, QMatrix.identity(m).entries)

    @classmethod
    def from_echelon(cls, ambient: Ambient, ech: Echelon) -> "Subspace":
        return cls(ambient, ech.dense_rows())

    def echelon(self) -> Echelon:
        ech = Echelon(self.ambient_dim)
        for v in self.basis:
            p = next(j for j, x in enumerate(v) if x)
            ech.rows[p] = _sparse(v)
        return ech

    def polys(self) -> list[Poly]:
        if not isinstance(self.ambient, GradedPiece):
            raise TypeError("subspace is not inside a graded piece")
        return [self.ambient.poly(v) for v in self.basis]

    def vector(self, item) -> Vector:
        return _as_vector(item, self.ambient)

    def contains_vector(self, item) -> bool:
        return not self.echelon().reduce(_sparse(self.vector(item)))

    def __contains__(self, item) -> bool:
        return self.contains_vector(item)


def _as_vector(item, ambient: Ambient) -> Vector:
    if isinstance(item, Poly):
        if not isinstance(ambient, GradedPiece):
            raise AmbientMismatchError("polynomial given for an abstract ambient")
        if item.is_zero():
            return (Fraction(0),) * ambient.dim
        if item.n != ambient.n or homogeneous_degree(item) != ambient.d:
            raise AmbientMismatchError(f"{item} does not lie in A_{ambient.d} (n={ambient.n})")
        return ambient.coordinates(item)
    m = ambient.dim if isinstance(ambient, GradedPiece) else ambient
    v = tuple(as_fraction(x) for x in item)
    if len(v) != m:
        raise AmbientMismatchError(f"vector of length {len(v)} in ambient of dimension {m}")
    return v


def _infer_ambient(items: Sequence) -> Ambient:
    for it in items:
        if isinstance(it, Poly):
            d = homogeneous_degree(it)
            if d == ZERO:
                continue
            if not isinstance(d, int):
                raise AmbientMismatchError(f"{it} is not homogeneous")
            return monomial_basis(it.n, d)
        else:
            return len(it)
    raise AmbientMismatchError("cannot infer an ambient from an empty or all-zero input")


def span(items: Iterable, ambient: Ambient | None = None) -> Subspace:
    """Canonical subspace spanned by vectors or homogeneous Polys."""
    items = list(items)
    if ambient is None:
        ambient = _infer_ambient(items)
    m = ambient.dim if isinstance(ambient, GradedPiece) else ambient
    ech = Echelon(m)
    for it in items:
        ech.add(_sparse(_as_vector(it, ambient)))
    return Subspace.from_echelon(ambient, ech)


def kernel(M: QMatrix) -> Subspace:
    vecs = sparse_kernel((_sparse(r) for r in M.entries), M.cols)
    return span(vecs, M.cols)


def _check_ambient(S: Subspace, T: Subspace) -> None:
    if S.ambient != T.ambient:
        raise AmbientMismatchError(f"ambient mismatch: {S.ambient!r} vs {T.ambient!r}")


def contains(S: Subspace, T: Subspace) -> bool:
    """True iff T is a subspace of S."""
    _check_ambient(S, T)
    ech = S.echelon()
    return all(not ech.reduce(_sparse(v)) for v in T.basis)


def equal(S: Subspace, T: Subspace) -> bool:
    _check_ambient(S, T)
    return S.basis == T.basis


def sum_subspaces(S: Subspace, T: Subspace) -> Subspace:
    _check_ambient(S, T)
    return span(S.basis + T.basis, S.ambient)


def intersect(S: Subspace, T: Subspace) -> Subspace:
    _check_ambient(S, T)
    if not S.dim or not T.dim:
        return Subspace.zero(S.ambient)
    # a in ker [S^T | -T^T]  ->  sum a_i s_i lies in both
    m = S.ambient_dim
    rows = []
    for j in range(m):
        row = {}
        for i, s in enumerate(S.basis):
            if s[j]:
                row[i] = s[j]
        for i, t in enumerate(T.basis):
            if t[j]:
                row[S.dim + i] = -t[j]
        rows.append(row)
    sols = sparse_kernel(rows, S.dim + T.dim)
    vecs = []
    for a in sols:
        v = [Fraction(0)] * m
        for i, s in enumerate(S.basis):
            if a[i]:
                for j, x in enumerate(s):
                    if x:
                        v[j] += a[i] * x
        vecs.append(v)
    return span(vecs, S.ambient)


@dataclass(frozen=True)
class AffineSolution:
    particular: Vector
    homogeneous: Subspace

    def __contains__(self, x) -> bool:
        diff = [as_fraction(a) - b for a, b in zip(x, self.particular)]
        return self.homogeneous.contains_vector(diff)


def solve_linear(M: QMatrix, b: Sequence) -> AffineSolution | None:
    """Solve M x = b exactly; ``None`` when the system is inconsistent."""
    b = [as_fraction(x) for x in b]
    if len(b) != M.rows:
        raise AmbientMismatchError("right-hand side length does not match row count")
    aug = [{**_sparse(r), **({M.cols: bi} if bi else {})} for r, bi in zip(M.entries, b)]
    ech = _echelon_of_rows(aug, M.cols + 1)
    if M.cols in ech.rows:
        return None
    x = [Fraction(0)] * M.cols
    for p, row in ech.rows.items():
        x[p] = Fraction(row.get(M.cols, 0))
    return AffineSolution(tuple(x), kernel(M))
