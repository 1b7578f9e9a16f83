"""Matrices and canonical subspaces over an exact field.

Subspaces are always stored through their reduced row echelon basis, so
set-equality of spaces is structural equality of the stored rows.  A fast
integer path handles elimination over prime fields; the generic path works
for any field object from :mod:`nilforms.fields`.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch, NoSolution
from .fields import Field, PrimeField

Vector = tuple


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))

def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))

def vec_scale(s, a: Vector) -> Vector:
    return tuple(s * x for x in a)

def vec_dot(a: Vector, b: Vector):
    it = iter(x * y for x, y in zip(a, b))
    out = next(it)
    for v in it:
        out = out + v
    return out

def vec_is_zero(a: Vector) -> bool:
    return all(not bool(x) for x in a)

def zero_vec(field: Field, n: int) -> Vector:
    z = field.zero()
    return tuple(z for _ in range(n))

def unit_vec(field: Field, n: int, i: int) -> Vector:
    z, o = field.zero(), field.one()
    return tuple(o if j == i else z for j in range(n))

def coerce_vec(field: Field, v: Sequence) -> Vector:
    return tuple(field.of(x) for x in v)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix; entries share one field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence], rows=None, cols=None):
        ent = tuple(tuple(field.of(x) for x in row) for row in entries)
        r = len(ent) if rows is None else rows
        c = (len(ent[0]) if ent else 0) if cols is None else cols
        if any(len(row) != c for row in ent):
            raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.rows = r
        self.cols = c
        self.entries = ent

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, rows, cols):
        z = field.zero()
        return cls(field, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_function(cls, field, rows, cols, f):
        return cls(field, [[f(i, j) for j in range(cols)] for i in range(rows)], rows, cols)

    @classmethod
    def from_rows(cls, field, vectors: Iterable[Sequence], cols=None):
        vectors = [tuple(v) for v in vectors]
        return cls(field, vectors, len(vectors), cols if cols is not None else
                   (len(vectors[0]) if vectors else 0))

    @classmethod
    def unflatten(cls, field, n: int, flat: Sequence):
        if len(flat) != n * n:
            raise DimensionMismatch(f"expected {n * n} entries, got {len(flat)}")
        return cls(field, [flat[i * n:(i + 1) * n] for i in range(n)], n, n)

    @classmethod
    def outer(cls, field, col: Sequence, row: Sequence):
        return cls(field, [[x * y for y in row] for x in col], len(col), len(row))

    # -- shape / access --------------------------------------------------------

    def row(self, i) -> Vector:
        return self.entries[i]

    def col(self, j) -> Vector:
        return tuple(r[j] for r in self.entries)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    @property
    def is_square(self):
        return self.rows == self.cols

    def flatten(self) -> Vector:
        return tuple(x for row in self.entries for x in row)

    # -- arithmetic ------------------------------------------------------------

    def _same_shape(self, other):
        if not isinstance(other, Matrix):
            raise FieldMismatch("expected a Matrix")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(self.field,
                      [vec_add(a, b) for a, b in zip(self.entries, other.entries)],
                      self.rows, self.cols)

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(self.field,
                      [vec_sub(a, b) for a, b in zip(self.entries, other.entries)],
                      self.rows, self.cols)

    def __neg__(self):
        return Matrix(self.field, [[-x for x in row] for row in self.entries],
                      self.rows, self.cols)

    def scale(self, s):
        s = self.field.of(s)
        return Matrix(self.field, [[s * x for x in row] for row in self.entries],
                      self.rows, self.cols)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        bt = [other.col(j) for j in range(other.cols)]
        z = self.field.zero()
        out = []
        for arow in self.entries:
            orow = []
            for bcol in bt:
                acc = z
                for x, y in zip(arow, bcol):
                    if bool(x) and bool(y):
                        acc = acc + x * y
                orow.append(acc)
            out.append(orow)
        return Matrix(self.field, out, self.rows, other.cols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} applied to len {len(v)}")
        z = self.field.zero()
        out = []
        for row in self.entries:
            acc = z
            for x, y in zip(row, v):
                if bool(x) and bool(y):
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise DimensionMismatch("power of a non-square matrix")
        out = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.col(j) for j in range(self.cols)],
                      self.cols, self.rows)

    def trace(self):
        acc = self.field.zero()
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    # -- predicates --------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(vec_is_zero(r) for r in self.entries)

    def is_symmetric(self) -> bool:
        return self.is_square and all(self.entries[i][j] == self.entries[j][i]
                                      for i in range(self.rows) for j in range(i))

    def is_alternating(self) -> bool:
        """Skew-symmetric with zero diagonal."""
        if not self.is_square:
            return False
        for i in range(self.rows):
            if bool(self.entries[i][i]):
                return False
            for j in range(i):
                if self.entries[i][j] != -self.entries[j][i]:
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.entries == other.entries
                and (self.rows, self.cols) == (other.rows, other.cols))

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row)
                         for row in self.entries)
        return f"Matrix({self.field}, {self.rows}x{self.cols}: [{body}])"


def block_matrix(field: Field, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    rows = []
    for brow in blocks:
        height = brow[0].rows
        if any(b.rows != height for b in brow):
            raise DimensionMismatch("inconsistent block heights")
        for i in range(height):
            rows.append(tuple(x for b in brow for x in b.row(i)))
    return Matrix.from_rows(field, rows)


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

def _rref_int(rows: list[list[int]], p: int):
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, m):
            if rows[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c] % p, p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % p:
                f = rows[i][c] % p
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def rref(field: Field, vectors: Sequence[Sequence]):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    vecs = [tuple(field.of(x) for x in v) for v in vectors]
    if not vecs:
        return (), ()
    if isinstance(field, PrimeField):
        ints = [[x.v for x in v] for v in vecs]
        out, piv = _rref_int(ints, field.p)
        return tuple(coerce_vec(field, r) for r in out), tuple(piv)
    m = len(vecs)
    ncols = len(vecs[0])
    rows = [list(v) for v in vecs]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, m):
            if bool(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [inv * x for x in rows[r]]
        for i in range(m):
            if i != r and bool(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def rank(M: Matrix) -> int:
    return len(rref(M.field, M.entries)[0])


def kernel_basis(M: Matrix) -> list[Vector]:
    """Basis of {x : Mx = 0}.  Free variables are set to one in column order."""
    field = M.field
    rows, pivots = rref(field, M.entries)
    pivset = set(pivots)
    free = [j for j in range(M.cols) if j not in pivset]
    z, o = field.zero(), field.one()
    out = []
    for f in free:
        x = [z] * M.cols
        x[f] = o
        for r, c in zip(rows, pivots):
            x[c] = -r[f]
        out.append(tuple(x))
    return out


def image_basis(M: Matrix) -> list[Vector]:
    """Basis of the column space, as vectors of F^rows."""
    cols = [M.col(j) for j in range(M.cols)]
    rows, _ = rref(M.field, cols) if cols else ((), ())
    return list(rows)


def solve(M: Matrix, rhs: Sequence) -> Vector:
    """One solution of Mx = rhs (free variables zero); NoSolution if none."""
    field = M.field
    if len(rhs) != M.rows:
        raise DimensionMismatch(f"rhs length {len(rhs)} vs {M.rows} rows")
    aug = [tuple(row) + (field.of(b),) for row, b in zip(M.entries, rhs)]
    if not aug:
        return zero_vec(field, M.cols)
    rows, pivots = rref(field, aug)
    for r, c in zip(rows, pivots):
        if c == M.cols:
            raise NoSolution("inconsistent linear system")
    z = field.zero()
    x = [z] * M.cols
    for r, c in zip(rows, pivots):
        x[c] = r[-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """Linear subspace of F^n held by its unique reduced row echelon basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, basis, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector length {len(v)} vs ambient {ambient_dim}")
        rows, pivots = rref(field, vecs)
        return cls(field, ambient_dim, rows, pivots)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        I = Matrix.identity(field, ambient_dim)
        return cls(field, ambient_dim, I.entries, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix.from_rows(self.field, self.basis, cols=self.ambient_dim)

    def coordinates(self, v: Sequence):
        """Coordinates of v in the echelon basis, or None if v is outside."""
        v = coerce_vec(self.field, v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("ambient dimension mismatch")
        coords = tuple(v[c] for c in self.pivots)
        residue = list(v)
        for coef, row in zip(coords, self.basis):
            if bool(coef):
                for j, x in enumerate(row):
                    residue[j] = residue[j] - coef * x
        if any(bool(x) for x in residue):
            return None
        return coords

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def from_coordinates(self, coords: Sequence) -> Vector:
        v = zero_vec(self.field, self.ambient_dim)
        for c, row in zip(coords, self.basis):
            if bool(c):
                v = vec_add(v, vec_scale(c, row))
        return v

    def annihilator(self) -> "Subspace":
        """{z : v . z = 0 for all v here}, under the standard dot pairing."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient_dim)
        return Subspace.span(self.field, self.ambient_dim, kernel_basis(self.matrix()))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        anns = list(self.annihilator().basis) + list(other.annihilator().basis)
        if not anns:
            return Subspace.full(self.field, self.ambient_dim)
        M = Matrix.from_rows(self.field, anns, cols=self.ambient_dim)
        return Subspace.span(self.field, self.ambient_dim, kernel_basis(M))

    def add(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        return Subspace.span(self.field, self.ambient_dim,
                             list(self.basis) + list(other.basis))

    def _compatible(self, other):
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient_dim == other.ambient_dim and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of F^{self.ambient_dim})"


def matrix_kernel(M: Matrix) -> Subspace:
    return Subspace.span(M.field, M.cols, kernel_basis(M))

def matrix_image(M: Matrix) -> Subspace:
    return Subspace.span(M.field, M.rows, image_basis(M))


# ---------------------------------------------------------------------------
# quotient by a line (no bilinear form involved)
# ---------------------------------------------------------------------------

def line_quotient(field: Field, x: Vector):
    """Quotient maps for F^n / Fx.

    Returns (projection, section): projection is an (n-1) x n matrix, section
    an n x (n-1) matrix with projection @ section = id and x spanning the
    kernel of the projection.  The section picks the unit vectors away from
    the first non-zero coordinate of x, so the choice is deterministic.
    """
    n = len(x)
    j = next((i for i, c in enumerate(x) if bool(c)), None)
    if j is None:
        raise NoSolution("cannot quotient by the zero vector")
    keep = [i for i in range(n) if i != j]
    inv = field.inv(x[j])
    z, o = field.zero(), field.one()
    proj = []
    for i in keep:
        row = [z] * n
        row[i] = o
        row[j] = -(x[i] * inv)
        proj.append(row)
    sect = [[o if keep[c] == r else z for c in range(n - 1)] for r in range(n)]
    return (Matrix(field, proj, n - 1, n), Matrix(field, sect, n, n - 1))
