"""Exterior algebra of a rank-r fiber dual, with operators as exact matrices.

Basis of degree-k forms: increasing 0-based index tuples in lexicographic
order (``itertools.combinations``).  Operators are :class:`GradedOperator`
families of matrices, one per source degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, Mapping, Sequence

from .errors import DimensionError, ModelError, NondegeneracyError
from .exact_linalg import Matrix, Subspace, det, inverse, rank
from .scalars import GaussianRational, Scalar, as_scalar, conj

ZERO = Fraction(0)
ONE = Fraction(1)


@lru_cache(maxsize=None)
def multi_indices(r: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k < 0 or k > r:
        return ()
    return tuple(combinations(range(r), k))


@lru_cache(maxsize=None)
def index_of(r: int, k: int) -> Mapping[tuple[int, ...], int]:
    return {I: n for n, I in enumerate(multi_indices(r, k))}


def dim(r: int, k: int) -> int:
    return comb(r, k) if 0 <= k <= r else 0


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``seq`` and the sorted tuple; (0, ()) on repeats."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


@lru_cache(maxsize=None)
def complement_sign(r: int, I: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """(s, I^c) with e^I ∧ e^{I^c} = s · e^{0..r-1}."""
    rest = tuple(i for i in range(r) if i not in I)
    s, _ = sort_sign(I + rest)
    return s, rest


class FormVector:
    """A degree-k element of the exterior algebra on r generators."""

    __slots__ = ("rank", "degree", "coeffs")

    def __init__(self, rank: int, degree: int, coeffs: Sequence):
        if len(coeffs) != dim(rank, degree):
            raise DimensionError(f"degree-{degree} form on rank {rank} needs {dim(rank, degree)} coefficients")
        self.rank = rank
        self.degree = degree
        self.coeffs = tuple(as_scalar(c) for c in coeffs)

    @classmethod
    def zero(cls, rank: int, degree: int) -> "FormVector":
        return cls(rank, degree, [ZERO] * dim(rank, degree))

    @classmethod
    def one(cls, rank: int) -> "FormVector":
        return cls(rank, 0, [ONE])

    @classmethod
    def from_terms(cls, rank: int, degree: int, terms: Mapping[tuple[int, ...], object]) -> "FormVector":
        """Build from {index tuple (0-based, any order): coefficient}; order sign applied."""
        c = [ZERO] * dim(rank, degree)
        idx = index_of(rank, degree)
        for I, v in terms.items():
            if len(I) != degree:
                raise DimensionError(f"index {I} does not have degree {degree}")
            s, J = sort_sign(tuple(I))
            if s == 0:
                continue
            c[idx[J]] += s * as_scalar(v)
        return cls(rank, degree, c)

    @classmethod
    def basis(cls, rank: int, I: Sequence[int]) -> "FormVector":
        return cls.from_terms(rank, len(I), {tuple(I): ONE})

    def terms(self) -> dict[tuple[int, ...], Scalar]:
        return {I: c for I, c in zip(multi_indices(self.rank, self.degree), self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "FormVector") -> "FormVector":
        self._same(other)
        return FormVector(self.rank, self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "FormVector") -> "FormVector":
        self._same(other)
        return FormVector(self.rank, self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "FormVector":
        return FormVector(self.rank, self.degree, [-a for a in self.coeffs])

    def scale(self, c) -> "FormVector":
        c = as_scalar(c)
        return FormVector(self.rank, self.degree, [c * a for a in self.coeffs])

    def _same(self, other):
        if (self.rank, self.degree) != (other.rank, other.degree):
            raise DimensionError("forms of different rank or degree")

    def __eq__(self, other):
        if not isinstance(other, FormVector):
            return NotImplemented
        return (self.rank, self.degree) == (other.rank, other.degree) and self.coeffs == other.coeffs

    __hash__ = None

    def wedge(self, other: "FormVector") -> "FormVector":
        return wedge(self, other)

    def top_coefficient(self) -> Scalar:
        if self.degree != self.rank:
            raise DimensionError("not a top-degree form")
        return self.coeffs[0]

    def __repr__(self):
        parts = [f"{c}*e{''.join(str(i + 1) for i in I)}" for I, c in self.terms().items()]
        return f"FormVector(deg={self.degree}: {' + '.join(parts) or '0'})"


def wedge(a: FormVector, b: FormVector) -> FormVector:
    if a.rank != b.rank:
        raise DimensionError("wedge of forms on different ranks")
    r = a.rank
    k = a.degree + b.degree
    if k > r:
        raise DimensionError(f"degree {k} exceeds rank {r}")
    out = [ZERO] * dim(r, k)
    idx = index_of(r, k)
    for I, x in a.terms().items():
        for J, y in b.terms().items():
            s, K = sort_sign(I + J)
            if s:
                out[idx[K]] += s * x * y
    return FormVector(r, k, out)


def power(omega: FormVector, n: int) -> FormVector:
    """omega^n; the empty product is 1."""
    out = FormVector.one(omega.rank)
    for _ in range(n):
        if out.degree + omega.degree > omega.rank:
            raise DimensionError("power exceeds the top degree")
        out = wedge(omega, out)
    return out


# --- graded operators --------------------------------------------------------


class GradedOperator:
    """Family of matrices ``blocks[k]``: degree-k forms -> degree-(k+shift) forms."""

    __slots__ = ("rank", "shift", "blocks")

    def __init__(self, rank: int, shift: int, blocks: Mapping[int, Matrix]):
        self.rank = rank
        self.shift = shift
        self.blocks = {}
        for k, m in blocks.items():
            want = (dim(rank, k + shift), dim(rank, k))
            if m.shape != want:
                raise DimensionError(f"block {k} has shape {m.shape}, expected {want}")
            self.blocks[k] = m

    @classmethod
    def build(cls, rank: int, shift: int, fn: Callable[[int], Matrix]) -> "GradedOperator":
        return cls(rank, shift, {k: fn(k) for k in range(rank + 1) if 0 <= k + shift <= rank})

    @classmethod
    def identity(cls, rank: int) -> "GradedOperator":
        return cls.build(rank, 0, lambda k: Matrix.identity(dim(rank, k)))

    @classmethod
    def zero(cls, rank: int, shift: int) -> "GradedOperator":
        return cls.build(rank, shift, lambda k: Matrix.zeros(dim(rank, k + shift), dim(rank, k)))

    def __getitem__(self, k: int) -> Matrix:
        m = self.blocks.get(k)
        if m is None:
            return Matrix.zeros(dim(self.rank, k + self.shift), dim(self.rank, k))
        return m

    def degrees(self) -> range:
        return range(self.rank + 1)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        """Composition self ∘ other."""
        if self.rank != other.rank:
            raise DimensionError("operators on different ranks")
        shift = self.shift + other.shift
        return GradedOperator.build(self.rank, shift, lambda k: self[k + other.shift] @ other[k])

    def _combine(self, other: "GradedOperator", f) -> "GradedOperator":
        if self.rank != other.rank or self.shift != other.shift:
            raise DimensionError("operators of different rank or shift")
        return GradedOperator.build(self.rank, self.shift, lambda k: f(self[k], other[k]))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return GradedOperator.build(self.rank, self.shift, lambda k: -self[k])

    def scale(self, c) -> "GradedOperator":
        return GradedOperator.build(self.rank, self.shift, lambda k: self[k].scale(c))

    def scale_by_degree(self, fn: Callable[[int], object]) -> "GradedOperator":
        return GradedOperator.build(self.rank, self.shift, lambda k: self[k].scale(fn(k)))

    def conj(self) -> "GradedOperator":
        return GradedOperator.build(self.rank, self.shift, lambda k: self[k].conj())

    def is_zero(self) -> bool:
        return all(self[k].is_zero() for k in self.degrees())

    def residual(self, other: "GradedOperator"):
        """First (degree, row, col, difference) where the operators differ, or None."""
        diff = self - other
        for k in self.degrees():
            hit = diff[k].first_nonzero()
            if hit is not None:
                return (k, hit[0], hit[1], hit[2])
        return None

    def __eq__(self, other):
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return self.rank == other.rank and self.shift == other.shift and self.residual(other) is None

    __hash__ = None

    def apply(self, form: FormVector) -> FormVector:
        return FormVector(self.rank, form.degree + self.shift, self[form.degree].apply(list(form.coeffs)))


def commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return a @ b - b @ a


def anticommutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return a @ b + b @ a


def degree_scalar(rank: int, fn: Callable[[int], object]) -> GradedOperator:
    """Diagonal operator acting as fn(k) on degree k."""
    return GradedOperator.build(rank, 0, lambda k: Matrix.identity(dim(rank, k)).scale(fn(k)))


# --- wedge and contraction ------------------------------------------------


def wedge_operator(alpha: FormVector) -> GradedOperator:
    """Left multiplication by alpha, as matrices on every degree."""
    r, a = alpha.rank, alpha.degree
    terms = alpha.terms()

    def block(k):
        m = Matrix.zeros(dim(r, k + a), dim(r, k))
        idx = index_of(r, k + a)
        for col, J in enumerate(multi_indices(r, k)):
            for I, x in terms.items():
                s, K = sort_sign(I + J)
                if s:
                    m.rows[idx[K]][col] += s * x
        return m

    return GradedOperator.build(r, a, block)


def contraction_operator(rank: int, i: int) -> GradedOperator:
    """Interior product with the basis vector e_i (0-based), a degree -1 antiderivation."""

    def block(k):
        m = Matrix.zeros(dim(rank, k - 1), dim(rank, k))
        idx = index_of(rank, k - 1)
        for col, J in enumerate(multi_indices(rank, k)):
            if i in J:
                s = J.index(i)
                rest = J[:s] + J[s + 1 :]
                m.rows[idx[rest]][col] = ONE if s % 2 == 0 else -ONE
        return m

    return GradedOperator.build(rank, -1, block)


# --- multiplicative extension of fiber maps --------------------------------


def compound(a: Matrix, k: int) -> Matrix:
    """k-th compound: action of a on degree-k forms by A e^J = Ae^{j1} ∧ ... ∧ Ae^{jk}."""
    n = a.nrows
    if a.ncols != n:
        raise DimensionError("compound of a non-square matrix")
    if k == 0:
        return Matrix.identity(1)
    images = [{(i,): x for i, x in enumerate(col) if x} for col in a.columns()]
    # column J of the degree-l compound is column J[:-1] of degree l-1 wedged with A e^{J[-1]}
    level: dict[tuple[int, ...], dict] = {(): {(): ONE}}
    for _ in range(k):
        nxt = {}
        for J, form in level.items():
            for j in range(J[-1] + 1 if J else 0, n):
                acc: dict[tuple[int, ...], object] = {}
                for I, c in form.items():
                    for (i,), x in images[j].items():
                        if i in I:
                            continue
                        pos = sum(1 for t in I if t < i)
                        K = I[:pos] + (i,) + I[pos:]
                        v = c * x if (len(I) - pos) % 2 == 0 else -(c * x)
                        acc[K] = acc.get(K, ZERO) + v
                nxt[J + (j,)] = {K: v for K, v in acc.items() if v}
        level = nxt
    basis = multi_indices(n, k)
    idx = index_of(n, k)
    out = Matrix.zeros(len(basis), len(basis))
    for col, J in enumerate(basis):
        for K, v in level[J].items():
            out.rows[idx[K]][col] = v
    return out


def form_operator(a: Matrix) -> GradedOperator:
    """Multiplicative extension of a linear map on 1-form coefficient vectors."""
    return GradedOperator.build(a.nrows, 0, lambda k: compound(a, k))


def metric_form_gram(h: Matrix, k: int) -> Matrix:
    """Gram matrix on degree-k forms induced by the 1-form Gram ``h``: det of k×k blocks."""
    n = h.nrows
    if h.ncols != n:
        raise DimensionError("Gram matrix must be square")
    if h != h.H:
        raise ModelError("1-form Gram matrix is not hermitian")
    for size in range(1, n + 1):
        minor = det(h.submatrix(range(size), range(size)))
        if not (GaussianRational(minor).im == 0 and GaussianRational(minor).re > 0):
            raise ModelError("1-form Gram matrix is not positive definite", witness={"leading_minor": size})
    return compound(h, k)


def pairing_gram(p: Matrix, k: int) -> Matrix:
    """det-extension of an arbitrary bilinear form on 1-forms to degree k (no definiteness check)."""
    return compound(p, k)


def sesquilinear(gram: Matrix, x: Sequence, y: Sequence):
    """<x, y> = sum x_I conj(y_J) G[I, J] (linear in x)."""
    s = ZERO
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = gram.rows[i]
        for j, yj in enumerate(y):
            if yj and row[j]:
                s = s + xi * conj(yj) * row[j]
    return s


def bilinear(gram: Matrix, x: Sequence, y: Sequence):
    s = ZERO
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = gram.rows[i]
        for j, yj in enumerate(y):
            if yj and row[j]:
                s = s + xi * yj * row[j]
    return s


def gram_adjoint(op: GradedOperator, grams: Mapping[int, Matrix]) -> GradedOperator:
    """Adjoint w.r.t. the hermitian Grams: op†[k+s] = G_k^{-1} op[k]^H G_{k+s}."""
    s = op.shift
    inv = {k: inverse(g) for k, g in grams.items()}

    def block(j):
        k = j - s  # op maps k -> j; the adjoint maps j -> k
        if not (0 <= k <= op.rank):
            return Matrix.zeros(dim(op.rank, k), dim(op.rank, j))
        return inv[k] @ op[k].H @ grams[j]

    return GradedOperator.build(op.rank, -s, block)


# --- symplectic linear algebra -------------------------------------------


def skew_matrix(omega: FormVector) -> Matrix:
    """Ω with Ω_ij = ω(e_i, e_j)."""
    if omega.degree != 2:
        raise DimensionError("expected a 2-form")
    r = omega.rank
    m = Matrix.zeros(r, r)
    for (i, j), c in omega.terms().items():
        m.rows[i][j] = c
        m.rows[j][i] = -c
    return m


def two_form_from_skew(m: Matrix) -> FormVector:
    r = m.nrows
    return FormVector(r, 2, [m[i, j] for i, j in multi_indices(r, 2)])


def dual_bivector(omega: FormVector) -> Matrix:
    """Matrix P of the dual bivector Π, with P = -Ω^{-1}.

    With this sign, Λ = Σ_{i<j} P_ij ι_j ι_i satisfies [L, Λ] = (k - m) on degree k.
    """
    om = skew_matrix(omega)
    if omega.rank % 2 or rank(om) < omega.rank:
        raise NondegeneracyError("2-form is degenerate")
    return -inverse(om)


def half_rank(omega: FormVector) -> int:
    if omega.rank % 2:
        raise ModelError("symplectic data needs an even fiber rank")
    return omega.rank // 2


def contraction_by_bivector(p: Matrix) -> GradedOperator:
    r = p.nrows
    iota = [contraction_operator(r, i) for i in range(r)]
    out = GradedOperator.zero(r, -2)
    for i in range(r):
        for j in range(i + 1, r):
            if p[i, j]:
                out = out + (iota[j] @ iota[i]).scale(p[i, j])
    return out


@dataclass(frozen=True)
class LefschetzTriple:
    L: GradedOperator
    Lambda: GradedOperator
    H: GradedOperator


def lefschetz_triple(omega: FormVector) -> LefschetzTriple:
    """(L, Λ, H) with L = ω∧, Λ = ι_Π and H = (k - m) on degree k."""
    m = half_rank(omega)
    p = dual_bivector(omega)
    return LefschetzTriple(
        L=wedge_operator(omega),
        Lambda=contraction_by_bivector(p),
        H=degree_scalar(omega.rank, lambda k: k - m),
    )


def volume_form(omega: FormVector) -> FormVector:
    """ω^m / m!, the reference top form."""
    m = half_rank(omega)
    return power(omega, m).scale(Fraction(1, factorial(m)))


def symplectic_star(omega: FormVector) -> "StarOperator":
    """⋆_ω solving α ∧ ⋆_ω β = Π(α, β) ω^m/m! for all α of the degree of β."""
    r = omega.rank
    p = dual_bivector(omega)
    v = volume_form(omega).top_coefficient()
    if not v:
        raise NondegeneracyError("ω^m vanishes")

    def block(k):
        pk = pairing_gram(p, k)
        m = Matrix.zeros(dim(r, r - k), dim(r, k))
        idx = index_of(r, r - k)
        for col in range(dim(r, k)):
            for row, I in enumerate(multi_indices(r, k)):
                x = pk[row, col]
                if x:
                    s, Ic = complement_sign(r, I)
                    m.rows[idx[Ic]][col] += s * v * x
        return m

    return StarOperator(r, {k: block(k) for k in range(r + 1)})


def hodge_star(h1: Matrix, omega: FormVector) -> "StarOperator":
    """Complex-linear ⋆_h solving α ∧ conj(⋆_h β) = h(α, β) ω^m/m!.

    ``h1`` is the hermitian Gram matrix on 1-forms; h on degree-k forms is its
    determinant extension, conjugate-linear in the second slot.
    """
    r = omega.rank
    v = volume_form(omega).top_coefficient()
    if not v:
        raise NondegeneracyError("ω^m vanishes")

    def block(k):
        g = metric_form_gram(h1, k)
        m = Matrix.zeros(dim(r, r - k), dim(r, k))
        idx = index_of(r, r - k)
        for col in range(dim(r, k)):
            for row, I in enumerate(multi_indices(r, k)):
                x = g[row, col]
                if x:
                    s, Ic = complement_sign(r, I)
                    m.rows[idx[Ic]][col] += s * v * conj(x)
        return m

    return StarOperator(r, {k: block(k) for k in range(r + 1)})


class StarOperator:
    """Maps degree k to degree r - k; blocks keyed by source degree."""

    def __init__(self, rank: int, blocks: Mapping[int, Matrix]):
        self.rank = rank
        self.blocks = dict(blocks)
        for k, m in self.blocks.items():
            if m.shape != (dim(rank, rank - k), dim(rank, k)):
                raise DimensionError("star block has the wrong shape")

    def __getitem__(self, k: int) -> Matrix:
        return self.blocks[k]

    def apply(self, form: FormVector) -> FormVector:
        return FormVector(self.rank, self.rank - form.degree, self[form.degree].apply(list(form.coeffs)))

    def squared(self) -> GradedOperator:
        r = self.rank
        return GradedOperator.build(r, 0, lambda k: self[r - k] @ self[k])

    def sandwich(self, op: GradedOperator) -> GradedOperator:
        """⋆ ∘ op ∘ ⋆ as a graded operator (shift = -op.shift)."""
        r = self.rank
        s = op.shift

        def block(k):
            j = r - k
            return self[j + s] @ op[j] @ self[k]

        return GradedOperator.build(r, -s, block)


# --- complex structure and bigrading --------------------------------------


def dual_action(j_fiber: Matrix) -> Matrix:
    """J on 1-form coefficient vectors: (Jξ)(X) = ξ(JX), i.e. the transpose."""
    return j_fiber.T


@dataclass
class Bigrading:
    """Projectors onto Λ^{p,q} of the complexified forms, per total degree."""

    rank: int
    projectors: dict[tuple[int, int], Matrix]

    @property
    def m(self) -> int:
        return self.rank // 2

    def projector(self, p: int, q: int) -> Matrix:
        k = p + q
        if (p, q) in self.projectors:
            return self.projectors[(p, q)]
        return Matrix.zeros(dim(self.rank, k), dim(self.rank, k)) if 0 <= k <= self.rank else Matrix.zeros(0, 0)

    def bidegrees(self, k: int) -> list[tuple[int, int]]:
        return [(p, k - p) for p in range(k + 1) if p <= self.m and k - p <= self.m]

    def as_operator(self, fn: Callable[[int, int], object]) -> GradedOperator:
        """Σ_{p,q} fn(p,q) · π_{p,q}."""

        def block(k):
            out = Matrix.zeros(dim(self.rank, k), dim(self.rank, k))
            for p, q in self.bidegrees(k):
                out = out + self.projector(p, q).scale(fn(p, q))
            return out

        return GradedOperator.build(self.rank, 0, block)

    def component(self, op: GradedOperator, dp: int, dq: int) -> GradedOperator:
        """Part of op raising the bidegree by (dp, dq)."""
        s = op.shift
        if dp + dq != s:
            raise DimensionError("bidegree shift incompatible with the operator degree")

        def block(k):
            out = Matrix.zeros(dim(self.rank, k + s), dim(self.rank, k))
            for p, q in self.bidegrees(k):
                tgt = (p + dp, q + dq)
                if tgt[0] < 0 or tgt[1] < 0 or tgt[0] > self.m or tgt[1] > self.m:
                    continue
                out = out + self.projector(*tgt) @ op[k] @ self.projector(p, q)
            return out

        return GradedOperator.build(self.rank, s, block)


def bigrade(j_fiber: Matrix, degrees: Sequence[int] | None = None) -> Bigrading:
    """Split complexified forms by the ±i eigenspaces of J acting on 1-forms.

    ``degrees`` limits which total degrees get projectors (default: all).
    """
    r = j_fiber.nrows
    if j_fiber @ j_fiber != -Matrix.identity(r):
        raise ModelError("J does not square to -1")
    m = r // 2
    i = GaussianRational(0, 1)
    jd = dual_action(j_fiber)
    half = Fraction(1, 2)
    eye = Matrix.identity(r)
    p10 = (eye - jd.scale(i)).scale(half)
    p01 = (eye + jd.scale(i)).scale(half)
    theta = Subspace.column_space(p10).basis
    if len(theta) != m or Subspace.column_space(p01).dim != m:
        raise ModelError("J has unbalanced ±i eigenspaces")
    # B = [θ_1..θ_m, conj θ_1..conj θ_m]; in that basis π_{p,q} is diagonal
    b = Matrix.from_columns(theta + [[conj(x) for x in v] for v in theta], r)
    binv = inverse(b)
    projectors: dict[tuple[int, int], Matrix] = {}
    for k in range(r + 1) if degrees is None else degrees:
        cb, cinv = compound(b, k), compound(binv, k)
        n = dim(r, k)
        groups: dict[tuple[int, int], list[int]] = {}
        for t, I in enumerate(multi_indices(r, k)):
            p = sum(1 for i in I if i < m)
            groups.setdefault((p, k - p), []).append(t)
        for pq, cols in groups.items():
            proj = Matrix.zeros(n, n)
            for row in range(n):
                left = [cb.rows[row][t] for t in cols]
                out = proj.rows[row]
                for c_, t in zip(left, cols):
                    if c_:
                        for col, y in enumerate(cinv.rows[t]):
                            if y:
                                out[col] += c_ * y
            projectors[pq] = proj
    return Bigrading(r, projectors)
