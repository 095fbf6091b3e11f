"""Products, Künneth with a compact Kähler factor, and b-cohomology dimension counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cohomology import build_complex, cohomology_dims
from .errors import ModelError
from .exact_linalg import Matrix, block_diag, induced_map, kron, rank
from .exterior import FormVector, wedge_operator
from .model import AlgebroidPresentation

ZERO = Fraction(0)
ONE = Fraction(1)


# --- products -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProductModel:
    first: AlgebroidPresentation
    second: AlgebroidPresentation
    model: AlgebroidPresentation


def _shift_form(f: FormVector, offset: int, rank_: int) -> FormVector:
    return FormVector.from_terms(rank_, f.degree, {tuple(i + offset for i in I): c for I, c in f.terms().items()})


def product(p1: AlgebroidPresentation, p2: AlgebroidPresentation) -> ProductModel:
    """Block-diagonal product; optional data is kept only when both factors carry it."""
    r1, r2 = p1.rank, p2.rank
    r = r1 + r2
    struct = dict(p1.structure)
    for (i, j, k), c in p2.structure.items():
        struct[(i + r1, j + r1, k + r1)] = c
    both = lambda name: getattr(p1, name) is not None and getattr(p2, name) is not None
    omega = None
    if both("omega"):
        omega = _shift_form(p1.omega, 0, r) + _shift_form(p2.omega, r1, r)
    model = AlgebroidPresentation(
        rank=r,
        structure=struct,
        anchor=block_diag(p1.anchor, p2.anchor),
        metric=block_diag(p1.metric, p2.metric) if both("metric") else None,
        J=block_diag(p1.J, p2.J) if both("J") else None,
        omega=omega,
        eta=p1.eta * p2.eta if both("eta") else None,
        name=f"{p1.name or 'A'} x {p2.name or 'B'}",
    )
    return ProductModel(p1, p2, model)


def convolve(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


# --- finite Kähler rings ----------------------------------------------------------


@dataclass
class FiniteKahlerRing:
    """Graded-commutative ring given by dimensions and structure constants.

    ``mult[(a, b)][i][j]`` is the coordinate vector (in degree a+b) of the
    product of basis element i of degree a with basis element j of degree b;
    missing pairs multiply to zero.  Basis element 0 of degree 0 is the unit.
    """

    dims: tuple[int, ...]
    mult: dict[tuple[int, int], list[list[list[Fraction]]]]
    kahler: list[Fraction]
    name: str = ""

    @property
    def n(self) -> int:
        if len(self.dims) % 2 == 0:
            raise ModelError("ring must live in degrees 0..2n")
        return (len(self.dims) - 1) // 2

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def product(self, a: int, x: Sequence, b: int, y: Sequence) -> list:
        out = [ZERO] * self.dim(a + b)
        table = self.mult.get((a, b))
        if table is None:
            return out
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    for t, v in enumerate(table[i][j]):
                        out[t] += xi * yj * v
        return out

    def multiplication_matrix(self, c: Sequence, deg_c: int, source: int) -> Matrix:
        """Matrix of y -> c·y from degree ``source`` to ``source + deg_c``."""
        cols = []
        for j in range(self.dim(source)):
            e = [ONE if t == j else ZERO for t in range(self.dim(source))]
            cols.append(self.product(deg_c, c, source, e))
        if not cols:
            return Matrix.zeros(self.dim(source + deg_c), 0)
        return Matrix.from_columns(cols, self.dim(source + deg_c))

    def validate(self):
        """Unit, graded commutativity and Hard Lefschetz for the Kähler class; raises ModelError."""
        if self.dim(0) != 1:
            raise ModelError("degree-0 part must be one-dimensional")
        if len(self.kahler) != self.dim(2):
            raise ModelError("Kähler class must live in degree 2")
        unit = [ONE]
        for a in range(len(self.dims)):
            for i in range(self.dim(a)):
                e = [ONE if t == i else ZERO for t in range(self.dim(a))]
                if self.product(0, unit, a, e) != e or self.product(a, e, 0, unit) != e:
                    raise ModelError("basis element 0 of degree 0 is not a unit", witness={"degree": a, "index": i})
        for a in range(len(self.dims)):
            for b in range(len(self.dims)):
                sign = (-1) ** (a * b)
                for i in range(self.dim(a)):
                    for j in range(self.dim(b)):
                        ei = [ONE if t == i else ZERO for t in range(self.dim(a))]
                        ej = [ONE if t == j else ZERO for t in range(self.dim(b))]
                        xy = self.product(a, ei, b, ej)
                        yx = self.product(b, ej, a, ei)
                        if xy != [sign * v for v in yx]:
                            raise ModelError("ring is not graded-commutative", witness={"degrees": (a, b), "pair": (i, j)})
        for k, ok in self.hard_lefschetz().items():
            if not ok:
                raise ModelError("Kähler class fails Hard Lefschetz", witness={"k": k})

    def lefschetz_power(self, k: int, source: int) -> Matrix:
        out = Matrix.identity(self.dim(source))
        for s in range(k):
            out = self.multiplication_matrix(self.kahler, 2, source + 2 * s) @ out
        return out

    def hard_lefschetz(self) -> dict[int, bool]:
        n = self.n
        out = {}
        for k in range(n + 1):
            m = self.lefschetz_power(k, n - k)
            out[k] = self.dim(n - k) == self.dim(n + k) == (rank(m) if m.nrows and m.ncols else 0)
        return out


def projective_ring(n: int) -> FiniteKahlerRing:
    """Cohomology of complex projective n-space: Z[x]/x^{n+1}, x in degree 2."""
    dims = tuple(1 if k % 2 == 0 else 0 for k in range(2 * n + 1))
    mult = {}
    for a in range(0, 2 * n + 1, 2):
        for b in range(0, 2 * n + 1 - a, 2):
            mult[(a, b)] = [[[ONE]]]
    return FiniteKahlerRing(dims, mult, [ONE], name=f"CP{n}")


def torus_ring() -> FiniteKahlerRing:
    """Cohomology of the 2-torus with classes a, b in degree 1 and ab in degree 2."""
    mult = {
        (0, 0): [[[ONE]]],
        (0, 1): [[[ONE, ZERO], [ZERO, ONE]]],
        (1, 0): [[[ONE, ZERO]], [[ZERO, ONE]]],
        (0, 2): [[[ONE]]],
        (2, 0): [[[ONE]]],
        (1, 1): [[[ZERO], [ONE]], [[-ONE], [ZERO]]],
    }
    return FiniteKahlerRing((1, 2, 1), mult, [ONE], name="T2")


def point_ring() -> FiniteKahlerRing:
    return FiniteKahlerRing((1,), {(0, 0): [[[ONE]]]}, [], name="point")


@dataclass
class KunnethReport:
    dims: tuple[int, ...]
    hl: dict[int, tuple[int, int, int]]  # k -> (source dim, target dim, rank)

    @property
    def hard_lefschetz(self) -> bool:
        return all(s == t == r for s, t, r in self.hl.values())


def kunneth_dims(p: AlgebroidPresentation, ring: FiniteKahlerRing) -> KunnethReport:
    """Künneth dimensions and Hard Lefschetz for [ω] ⊗ 1 + 1 ⊗ κ on H(p) ⊗ ring."""
    if ring.dims != (1,):
        ring.validate()
    cx = build_complex(p)
    ce = cohomology_dims(cx)
    dims = convolve(ce, ring.dims)
    hl: dict[int, tuple[int, int, int]] = {}
    if p.omega is not None and p.rank % 2 == 0:
        r = p.rank
        quots = {k: cx.quotient(k) for k in range(r + 1)}
        L = wedge_operator(p.omega)

        def ce_L(i):
            if i + 2 > r:
                return Matrix.zeros(0, ce[i])
            m = induced_map(L[i], quots[i], quots[i + 2])
            return m if m.ncols else Matrix.zeros(ce[i + 2], 0)

        def blocks(n):
            return [(i, n - i) for i in range(n + 1) if i <= r and 0 <= n - i < len(ring.dims)]

        def total_L(n):
            """Matrix of the tensor Lefschetz map from total degree n to n+2."""
            src, dst = blocks(n), blocks(n + 2)
            off_src, off_dst, pos = {}, {}, 0
            for b in src:
                off_src[b] = pos
                pos += ce[b[0]] * ring.dim(b[1])
            ns, pos = pos, 0
            for b in dst:
                off_dst[b] = pos
                pos += ce[b[0]] * ring.dim(b[1])
            out = Matrix.zeros(pos, ns)
            for i, j in src:
                terms = []
                if (i + 2, j) in off_dst:
                    terms.append(((i + 2, j), kron(ce_L(i), Matrix.identity(ring.dim(j)))))
                if (i, j + 2) in off_dst and ring.dim(j):
                    kap = ring.multiplication_matrix(ring.kahler, 2, j) if ring.kahler else Matrix.zeros(ring.dim(j + 2), ring.dim(j))
                    terms.append(((i, j + 2), kron(Matrix.identity(ce[i]), kap)))
                for tgt, m in terms:
                    r0, c0 = off_dst[tgt], off_src[(i, j)]
                    for a in range(m.nrows):
                        for b in range(m.ncols):
                            if m.rows[a][b]:
                                out.rows[r0 + a][c0 + b] += m.rows[a][b]
            return out

        M = p.rank // 2 + (len(ring.dims) - 1) // 2
        for k in range(M + 1):
            op = Matrix.identity(dims[M - k])
            for s in range(k):
                op = total_L(M - k + 2 * s) @ op
            rk = rank(op) if op.nrows and op.ncols else 0
            hl[k] = (dims[M - k], dims[M + k], rk)
    return KunnethReport(dims, hl)


# --- b-geometry ----------------------------------------------------------------------


@dataclass(frozen=True)
class BManifoldSpec:
    """Betti numbers of M and of the hypersurface Z."""

    bM: tuple[int, ...]
    bZ: tuple[int, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "bM", tuple(int(x) for x in self.bM))
        object.__setattr__(self, "bZ", tuple(int(x) for x in self.bZ))
        for label, v in (("bM", self.bM), ("bZ", self.bZ)):
            if any(x < 0 for x in v):
                raise ModelError(f"{label} has a negative entry")
            if any(v) and v[0] < 1:
                raise ModelError(f"{label}: a nonempty space has b0 >= 1")
        if not self.bM:
            raise ModelError("bM must be nonempty")


def mazzeo_melrose(spec: BManifoldSpec) -> tuple[int, ...]:
    """dim bH^k = b^k(M) + b^{k-1}(Z)."""
    n = max(len(spec.bM), len(spec.bZ) + 1)
    get = lambda v, k: v[k] if 0 <= k < len(v) else 0
    return tuple(get(spec.bM, k) + get(spec.bZ, k - 1) for k in range(n))


@dataclass
class ObstructionEntry:
    k: int
    source_dim: int
    target_dim: int
    verdict: str  # "impossible" or "inconclusive"
    reason: str


@dataclass
class ObstructionReport:
    dims: tuple[int, ...]
    m: int
    entries: list[ObstructionEntry] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "impossible" if any(e.verdict == "impossible" for e in self.entries) else "inconclusive"


def b_hard_lefschetz_obstruction(spec: BManifoldSpec, m: int) -> ObstructionReport:
    """Compare dim bH^{m-k} with dim bH^{m+k}; unequal dimensions rule out an isomorphism."""
    dims = mazzeo_melrose(spec)
    get = lambda k: dims[k] if 0 <= k < len(dims) else 0
    rep = ObstructionReport(dims, m)
    for k in range(m + 1):
        s, t = get(m - k), get(m + k)
        if s == t:
            rep.entries.append(ObstructionEntry(k, s, t, "inconclusive", "equal dimensions; the count cannot decide"))
        else:
            reason = f"a linear map between spaces of dimensions {s} and {t} is never an isomorphism"
            if s < t:
                reason += "; it cannot even be surjective"
            else:
                reason += "; it cannot even be injective"
            rep.entries.append(ObstructionEntry(k, s, t, "impossible", reason))
    return rep
