"""Exact linear algebra over Q and Q(i).

Matrices are small (at most a few hundred rows), so everything is dense
lists of ``Fraction`` / ``GaussianRational`` entries.  Ranks use
fraction-free Bareiss elimination on integers; kernels and solves use
reduced row echelon form over the field.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import ContractError, DimensionError
from .scalars import GaussianRational, as_scalar, conj, is_real

ZERO = Fraction(0)
ONE = Fraction(1)


class Matrix:
    """Dense exact matrix.  Treat instances as immutable."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = [[as_scalar(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for row in self.rows:
            if len(row) != ncols:
                raise DimensionError("ragged matrix rows")

    @classmethod
    def _raw(cls, rows, nrows, ncols) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw([[ZERO] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = ONE
        return cls._raw(rows, n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        rows = [[as_scalar(col[i]) for col in columns] for i in range(nrows)]
        return cls._raw(rows, nrows, len(columns))

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        m = cls.zeros(n, n)
        for i, v in enumerate(values):
            m.rows[i][i] = as_scalar(v)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def copy_rows(self) -> list[list]:
        return [row[:] for row in self.rows]

    @property
    def T(self) -> "Matrix":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix._raw(rows, self.ncols, self.nrows)

    def conj(self) -> "Matrix":
        return Matrix._raw([[conj(x) for x in row] for row in self.rows], self.nrows, self.ncols)

    @property
    def H(self) -> "Matrix":
        return self.conj().T

    def is_real(self) -> bool:
        return all(is_real(x) for row in self.rows for x in row)

    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        rows = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw([[-x for x in row] for row in self.rows], self.nrows, self.ncols)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix._raw([[c * x for x in row] for row in self.rows], self.nrows, self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            n, p = self.nrows, other.ncols
            out = [[ZERO] * p for _ in range(n)]
            orows = other.rows
            for i, row in enumerate(self.rows):
                acc = out[i]
                for k, a in enumerate(row):
                    if not a:
                        continue
                    brow = orows[k]
                    for j in range(p):
                        b = brow[j]
                        if b:
                            acc[j] = acc[j] + a * b
            return Matrix._raw(out, n, p)
        return self.apply(other)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        out = []
        for row in self.rows:
            s = ZERO
            for a, b in zip(row, vec):
                if a and b:
                    s = s + a * b
            out.append(s)
        return out

    def is_zero(self) -> bool:
        return not any(x for row in self.rows for x in row)

    def first_nonzero(self):
        """(row, col, value) of the first nonzero entry in row-major order, or None."""
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if x:
                    return (i, j, x)
        return None

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    __hash__ = None

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw([[self.rows[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    out = Matrix.zeros(a.nrows + b.nrows, a.ncols + b.ncols)
    for i in range(a.nrows):
        out.rows[i][: a.ncols] = a.rows[i][:]
    for i in range(b.nrows):
        out.rows[a.nrows + i][a.ncols :] = b.rows[i][:]
    return out


def kron(a: Matrix, b: Matrix) -> Matrix:
    out = Matrix.zeros(a.nrows * b.nrows, a.ncols * b.ncols)
    for i in range(a.nrows):
        for j in range(a.ncols):
            x = a.rows[i][j]
            if not x:
                continue
            for k in range(b.nrows):
                row = out.rows[i * b.nrows + k]
                for l in range(b.ncols):
                    row[j * b.ncols + l] = x * b.rows[k][l]
    return out


def hstack(mats: Sequence[Matrix], nrows: int) -> Matrix:
    cols = []
    for m in mats:
        if m.nrows != nrows:
            raise DimensionError("hstack row mismatch")
        cols.extend(m.columns())
    return Matrix.from_columns(cols, nrows)


# --- rank -------------------------------------------------------------------


def _integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if x:
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _bareiss_rank(a: list[list[int]], ncols: int) -> int:
    a = [row[:] for row in a]
    nrows = len(a)
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, nrows):
            row = a[r]
            f = row[col]
            for c in range(col + 1, ncols):
                row[c] = (row[c] * p - f * prow[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


def _realify(m: Matrix) -> list[list[Fraction]]:
    """[[A, -B], [B, A]] for m = A + iB; its rank is twice the complex rank."""
    re = [[x.re if type(x) is GaussianRational else x for x in row] for row in m.rows]
    im = [[x.im if type(x) is GaussianRational else ZERO for x in row] for row in m.rows]
    top = [r1 + [-x for x in r2] for r1, r2 in zip(re, im)]
    bottom = [r2 + r1 for r1, r2 in zip(re, im)]
    return top + bottom


def rank(m: Matrix) -> int:
    """Exact rank by fraction-free elimination."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.is_real():
        rows = [[x.re if type(x) is GaussianRational else x for x in row] for row in m.rows]
        return _bareiss_rank(_integer_rows(rows), m.ncols)
    return _bareiss_rank(_integer_rows(_realify(m)), 2 * m.ncols) // 2


# --- row reduction ----------------------------------------------------------


def rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the field; returns (nonzero rows, pivot columns)."""
    a = m.copy_rows()
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def det(m: Matrix):
    if m.nrows != m.ncols:
        raise DimensionError("determinant of a non-square matrix")
    n = m.nrows
    a = m.copy_rows()
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        p = a[c][c]
        d = d * p
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                q = f / p
                a[i] = [x - q * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise DimensionError("inverse of a non-square matrix")
    aug = Matrix._raw([row[:] + e for row, e in zip(m.rows, Matrix.identity(n).rows)], n, 2 * n)
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._raw([row[n:] for row in rows], n, n)


def solve(m: Matrix, b: Sequence) -> list | None:
    """One solution x of m x = b, or None if inconsistent."""
    aug = Matrix._raw([row[:] + [as_scalar(v)] for row, v in zip(m.rows, b)], m.nrows, m.ncols + 1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [ZERO] * m.ncols
    for row, p in zip(rows, pivots):
        x[p] = row[m.ncols]
    return x


def kernel_vectors(m: Matrix) -> list[list]:
    rows, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [ZERO] * m.ncols
        v[free] = ONE
        for row, p in zip(rows, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def normalize_vector(v: Sequence) -> list:
    """Scale so that the first nonzero coordinate is 1."""
    lead = next((x for x in v if x), None)
    if lead is None:
        return list(v)
    inv = ONE / lead
    return [x * inv for x in v]


# --- subspaces --------------------------------------------------------------


class Subspace:
    """Span of linearly independent column vectors in a fixed ambient space."""

    __slots__ = ("ambient_dim", "basis", "_echelon")

    def __init__(self, ambient_dim: int, basis: Iterable[Sequence] = ()):
        self.ambient_dim = ambient_dim
        self.basis = [list(v) for v in basis]
        self._echelon = None
        for v in self.basis:
            if len(v) != ambient_dim:
                raise DimensionError("basis vector has wrong length")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        """Keep the first linearly independent vectors, in order."""
        chosen: list[list] = []
        echelon: list[tuple[int, list]] = []
        for v in vectors:
            w = [as_scalar(x) for x in v]
            if len(w) != ambient_dim:
                raise DimensionError("vector has wrong length")
            r = _reduce(w, echelon)
            if any(r):
                _insert(echelon, r)
                chosen.append(w)
        return cls(ambient_dim, chosen)

    @classmethod
    def column_space(cls, m: Matrix) -> "Subspace":
        return cls.span(m.nrows, m.columns())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n).rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.basis, self.ambient_dim) if self.basis else Matrix.zeros(self.ambient_dim, 0)

    def contains(self, v: Sequence) -> bool:
        if not any(v):
            return True
        if not self.basis:
            return False
        if self._echelon is None:
            ech: list[tuple[int, list]] = []
            for b in self.basis:
                _insert(ech, _reduce([as_scalar(x) for x in b], ech))
            self._echelon = ech
        return not any(_reduce([as_scalar(x) for x in v], self._echelon))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def same_as(self, other: "Subspace") -> bool:
        return self.ambient_dim == other.ambient_dim and self.dim == other.dim and self.contains_subspace(other)

    def image(self, op: Matrix) -> "Subspace":
        return Subspace.span(op.nrows, (op.apply(v) for v in self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _reduce(w: list, echelon: list[tuple[int, list]]) -> list:
    r = w[:]
    for p, row in echelon:
        f = r[p]
        if f:
            r = [x - f * y for x, y in zip(r, row)]
    return r


def _insert(echelon: list[tuple[int, list]], r: list):
    p = next(i for i, x in enumerate(r) if x)
    inv = ONE / r[p]
    r = [x * inv for x in r]
    for k, (q, row) in enumerate(echelon):
        f = row[p]
        if f:
            echelon[k] = (q, [x - f * y for x, y in zip(row, r)])
    echelon.append((p, r))


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of {v : m v = 0}, one vector per free column (lexicographic pivoting)."""
    return Subspace(m.ncols, kernel_vectors(m))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch {a.ambient_dim} vs {b.ambient_dim}")
    return Subspace.span(a.ambient_dim, a.basis + b.basis)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch {a.ambient_dim} vs {b.ambient_dim}")
    n = a.ambient_dim
    if not a.basis or not b.basis:
        return Subspace(n)
    # a x = b y  <=>  [A | -B] (x, y) = 0
    stacked = Matrix.from_columns(a.basis + [[-x for x in v] for v in b.basis], n)
    vecs = []
    amat = a.matrix()
    for z in kernel_vectors(stacked):
        vecs.append(amat.apply(z[: a.dim]))
    return Subspace.span(n, vecs)


def subspace_ops(a: Subspace, b: Subspace) -> tuple[Subspace, Subspace]:
    """(a + b, a ∩ b)."""
    return subspace_sum(a, b), subspace_intersection(a, b)


def intersect_kernels(ops: Sequence[Matrix], ambient_dim: int) -> Subspace:
    """Common kernel of several matrices with the same number of columns."""
    rows = [row for op in ops for row in op.rows]
    if not rows:
        return Subspace.full(ambient_dim)
    return kernel_basis(Matrix._raw([r[:] for r in rows], len(rows), ambient_dim))


# --- quotients --------------------------------------------------------------


class Quotient:
    """ker / im with chosen representatives.

    Representatives default to the first kernel-basis vectors independent of
    ``im``; ``preferred`` (e.g. harmonic forms) is tried first.
    """

    def __init__(self, ker: Subspace, im: Subspace, preferred: Sequence[Sequence] = ()):
        if ker.ambient_dim != im.ambient_dim:
            raise DimensionError("ker and im live in different spaces")
        if not ker.contains_subspace(im):
            raise ContractError("image is not contained in kernel")
        self.ker = ker
        self.im = im
        n = ker.ambient_dim
        echelon: list[tuple[int, list]] = []
        for v in im.basis:
            _insert(echelon, _reduce(list(v), echelon))
        reps = []
        target = ker.dim - im.dim
        for v in list(preferred) + ker.basis:
            if len(reps) == target:
                break
            w = [as_scalar(x) for x in v]
            if not ker.contains(w):
                raise ContractError("preferred representative is not in the kernel")
            r = _reduce(w, echelon)
            if any(r):
                _insert(echelon, r)
                reps.append(w)
        self.reps = reps
        self.ambient_dim = n
        self._frame = Matrix.from_columns(im.basis + reps, n) if (im.basis or reps) else Matrix.zeros(n, 0)
        self._left = None

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, v: Sequence) -> list:
        """Coordinates of the class of v (v must lie in ker)."""
        if not self.ker.contains(v):
            raise ContractError("vector is not a cocycle")
        c = self._frame.ncols
        if c == 0:
            return []
        if self._left is None:
            # row operations E with E F = [I; 0], from the rref of [F | I]
            n = self.ambient_dim
            aug = Matrix._raw([row[:] + e for row, e in zip(self._frame.rows, Matrix.identity(n).rows)], n, c + n)
            rows, _ = rref(aug)
            self._left = [row[c:] for row in rows]
        x = [sum((a * as_scalar(b) for a, b in zip(row, v) if a), ZERO) for row in self._left]
        if any(x[c:]):
            raise ContractError("vector not expressible in quotient frame")
        return x[self.im.dim : c]

    def lift(self, coords: Sequence) -> list:
        v = [ZERO] * self.ambient_dim
        for c, rep in zip(coords, self.reps):
            if c:
                v = [a + c * b for a, b in zip(v, rep)]
        return v


def induced_map(op: Matrix, src: Quotient, dst: Quotient) -> Matrix:
    """Matrix of the map induced by ``op`` between two quotients."""
    if op.ncols != src.ambient_dim or op.nrows != dst.ambient_dim:
        raise DimensionError("operator shape does not match quotient spaces")
    for v in src.im.basis:
        if not dst.im.contains(op.apply(v)):
            raise ContractError("operator does not map the source image into the target image")
    cols = []
    for rep in src.reps:
        w = op.apply(rep)
        if not dst.ker.contains(w):
            raise ContractError("operator does not map cocycles to cocycles")
        cols.append(dst.coordinates(w))
    if not cols:
        return Matrix.zeros(dst.dim, 0)
    return Matrix.from_columns(cols, dst.dim)


def induced_map_on_quotient(
    op: Matrix, src_ker: Subspace, src_im: Subspace, dst_ker: Subspace, dst_im: Subspace
) -> Matrix:
    """Matrix of [v] -> [op v] from src_ker/src_im to dst_ker/dst_im in the default quotient bases."""
    return induced_map(op, Quotient(src_ker, src_im), Quotient(dst_ker, dst_im))
