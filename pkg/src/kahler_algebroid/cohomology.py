"""Chevalley–Eilenberg and Dolbeault cohomology, adjoints, Laplacians and Hodge decompositions.

Everything here is the finite-dimensional counterpart of the analytic
theory: over a point the form spaces are finite dimensional, the L² pairing
is a Gram matrix and the Hodge decomposition is exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import ConsistencyError, IncompleteModelError, IntegrabilityError, ModelError
from .exact_linalg import (
    Matrix,
    Quotient,
    Subspace,
    det,
    induced_map,
    inverse,
    kernel_basis,
    normalize_vector,
    rank,
    subspace_intersection,
    subspace_sum,
)
from .exterior import (
    Bigrading,
    FormVector,
    GradedOperator,
    bigrade,
    dim,
    hodge_star,
    metric_form_gram,
    sesquilinear,
    volume_form,
)
from .model import (
    AlgebroidPresentation,
    Verdict,
    ce_differential,
    check_unimodular,
    modular_traces,
    validate_jacobi,
)
from .scalars import GaussianRational

HALF = Fraction(1, 2)


def _vstack(*mats: Matrix) -> Matrix:
    ncols = mats[0].ncols
    rows = [row[:] for m in mats for row in m.rows]
    return Matrix._raw(rows, len(rows), ncols)


def _complexify(m: Matrix) -> Matrix:
    return Matrix._raw([[GaussianRational(x) if type(x) is not GaussianRational else x for x in row] for row in m.rows], m.nrows, m.ncols)


@dataclass
class DifferentialComplex:
    rank: int
    d: GradedOperator
    del_: GradedOperator | None = None
    delbar: GradedOperator | None = None

    def kernel(self, k: int) -> Subspace:
        return kernel_basis(self.d[k])

    def image(self, k: int) -> Subspace:
        """im d_{k-1} inside degree k."""
        if k == 0:
            return Subspace(1)
        return Subspace.column_space(self.d[k - 1])

    def quotient(self, k: int, preferred=()) -> Quotient:
        return Quotient(self.kernel(k), self.image(k), preferred)


def build_complex(p: AlgebroidPresentation, split: bool = False) -> DifferentialComplex:
    v = validate_jacobi(p)
    if not v:
        raise ModelError("bracket violates the Jacobi identity", witness=v.witness)
    cx = DifferentialComplex(p.rank, ce_differential(p))
    for k in range(p.rank):
        if not (cx.d[k + 1] @ cx.d[k]).is_zero():
            raise ConsistencyError(f"d^2 != 0 in degree {k} despite Jacobi")
    if split:
        cx.del_, cx.delbar = split_differential(p)
    return cx


def split_differential(p: AlgebroidPresentation, big: Bigrading | None = None):
    """(∂, ∂̄): the (1,0) and (0,1) components of d; raises if d has any other part."""
    p.require("J")
    big = big or bigrade(p.J)
    d = ce_differential(p)
    zero = GradedOperator.zero(p.rank, 1)
    for shift in ((2, -1), (-1, 2)):
        hit = big.component(d, *shift).residual(zero)
        if hit is not None:
            k, row, col, val = hit
            raise IntegrabilityError(
                f"d has a nonzero {shift} component",
                witness={"bidegree": shift, "degree": k, "entry": (row, col), "value": str(val)},
            )
    dd = big.component(d, 1, 0)
    db = big.component(d, 0, 1)
    if (dd + db).residual(d) is not None:
        raise ConsistencyError("d != ∂ + ∂̄")
    return dd, db


# --- cohomology -------------------------------------------------------------


@dataclass
class CohomologyResult:
    dims: tuple[int, ...]
    harmonic: dict[int, list[FormVector]] | None = None
    bigraded: dict[tuple[int, int], int] | None = None  # harmonic (p,q) dimensions
    dolbeault: dict[tuple[int, int], int] | None = None  # ∂̄-cohomology dimensions

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.dims))


def cohomology_dims(cx: DifferentialComplex) -> tuple[int, ...]:
    r = cx.rank
    ranks = [rank(cx.d[k]) for k in range(r + 1)]
    out = []
    for k in range(r + 1):
        out.append(dim(r, k) - ranks[k] - (ranks[k - 1] if k else 0))
    return tuple(out)


def cohomology(
    p: AlgebroidPresentation, bigraded: bool = False, harmonic: bool = False
) -> CohomologyResult:
    """Dimensions of H^k; harmonic bases and (p,q) tables on request."""
    cx = build_complex(p)
    dims = cohomology_dims(cx)
    for k in range(p.rank + 1):
        if rank(_complexify(cx.d[k])) != rank(cx.d[k]):
            raise ConsistencyError("real and complex ranks of d differ")
    res = CohomologyResult(dims)
    if harmonic or bigraded:
        if p.metric is None:
            raise IncompleteModelError("harmonic forms need a metric", witness={"missing": ["metric"]})
        lap = laplacians(p, split=bigraded)
        res.harmonic = {k: lap.harmonic_basis(k) for k in range(p.rank + 1)}
        for k in range(p.rank + 1):
            if len(res.harmonic[k]) != dims[k]:
                raise ConsistencyError(f"dim ker Δ != dim H^{k}")
    if bigraded:
        p.require("J")
        big = lap.bigrading
        res.bigraded = harmonic_bidegree_dims(lap)
        res.dolbeault = dolbeault_dims(lap.delbar, big)
    return res


def _bidegree_space(big: Bigrading, p: int, q: int) -> Subspace:
    return Subspace.column_space(big.projector(p, q))


def dolbeault_dims(delbar: GradedOperator, big: Bigrading) -> dict[tuple[int, int], int]:
    """h^{p,q}_∂̄ = dim ker(∂̄ on Λ^{p,q}) - dim ∂̄(Λ^{p,q-1})."""
    m = big.m
    out = {}
    img_rank = {}
    for p_ in range(m + 1):
        for q in range(m + 1):
            basis = _bidegree_space(big, p_, q).matrix()
            img_rank[(p_, q)] = rank(delbar[p_ + q] @ basis) if basis.ncols else 0
    for p_ in range(m + 1):
        for q in range(m + 1):
            n = _bidegree_space(big, p_, q).dim
            prev = img_rank.get((p_, q - 1), 0)
            out[(p_, q)] = n - img_rank[(p_, q)] - prev
    return out


def harmonic_bidegree_dims(lap: "Laplacians") -> dict[tuple[int, int], int]:
    big = lap.bigrading
    out = {}
    for p_ in range(big.m + 1):
        for q in range(big.m + 1):
            k = p_ + q
            ker = kernel_basis(_complexify(lap.Delta[k]))
            out[(p_, q)] = subspace_intersection(ker, _bidegree_space(big, p_, q)).dim
    return out


# --- metric, adjoints and Laplacians ------------------------------------------


def form_grams(p: AlgebroidPresentation) -> dict[int, Matrix]:
    """Gram matrices of the induced inner product on forms (inverse fiber metric, determinant extension)."""
    p.require("metric")
    h1 = inverse(p.metric)
    return {k: metric_form_gram(h1, k) for k in range(p.rank + 1)}


def gram_adjoint(op: GradedOperator, grams: dict[int, Matrix]) -> GradedOperator:
    from .exterior import gram_adjoint as _ga

    return _ga(op, grams)


def unimodularity(p: AlgebroidPresentation) -> Verdict:
    """check_unimodular when eta is present, else the trace criterion alone."""
    if p.eta is not None:
        return check_unimodular(p)
    tr = modular_traces(p)
    if any(tr):
        return Verdict(False, {"traces": {f"e{i + 1}": t for i, t in enumerate(tr) if t}})
    return Verdict(True)


@dataclass
class Laplacians:
    """Adjoints and Laplacians of a metric model.

    Adjoints are true adjoints for the Gram inner product.  ``star_route``
    records whether -⋆d⋆ reproduces the Gram adjoint, which needs Stokes.
    """

    model: AlgebroidPresentation
    grams: dict[int, Matrix]
    d: GradedOperator
    d_dag: GradedOperator
    del_: GradedOperator | None = None
    delbar: GradedOperator | None = None
    del_dag: GradedOperator | None = None
    delbar_dag: GradedOperator | None = None
    bigrading: Bigrading | None = None

    @cached_property
    def star_route(self) -> Verdict:
        """Whether -⋆_h d ⋆_h equals the Gram adjoint; computed on first access."""
        return _star_route(self.model, self.d_dag)

    @cached_property
    def Delta(self) -> GradedOperator:
        return self.d @ self.d_dag + self.d_dag @ self.d

    @cached_property
    def Delta_del(self) -> GradedOperator:
        return self.del_ @ self.del_dag + self.del_dag @ self.del_

    @cached_property
    def Delta_delbar(self) -> GradedOperator:
        return self.delbar @ self.delbar_dag + self.delbar_dag @ self.delbar

    def harmonic_space(self, k: int) -> Subspace:
        return kernel_basis(_vstack(self.d[k], self.d_dag[k]))

    def harmonic_basis(self, k: int) -> list[FormVector]:
        return [FormVector(self.model.rank, k, normalize_vector(v)) for v in self.harmonic_space(k).basis]


def volume_matches_metric(p: AlgebroidPresentation) -> bool:
    """(top coefficient of ω^m/m!)² = det g, so ⋆_h squares to ±1."""
    v = volume_form(p.omega).top_coefficient()
    return v * v == det(p.metric)


def star_adjoint(p: AlgebroidPresentation) -> GradedOperator:
    """-⋆_h d ⋆_h, the adjoint of d whenever integration obeys Stokes."""
    p.require("metric", "omega")
    star = hodge_star(inverse(p.metric), p.omega)
    return -star.sandwich(ce_differential(p))


def _star_route(p: AlgebroidPresentation, d_dag: GradedOperator) -> Verdict:
    if p.omega is None:
        return Verdict(False, {"missing": ["omega"]}, note="no Hodge star without omega")
    if not volume_matches_metric(p):
        return Verdict(False, {"volume_mismatch": True}, note="ω^m/m! is not a metric volume form")
    hit = star_adjoint(p).residual(d_dag)
    uni = unimodularity(p)
    if hit is None:
        return Verdict(True)
    if uni.ok:
        raise ConsistencyError("star and Gram adjoints differ on a unimodular model")
    k, row, col, val = hit
    return Verdict(
        False,
        {"degree": k, "entry": (row, col), "difference": val, "unimodular": uni.witness},
        note="non-unimodular model: -⋆d⋆ is not the adjoint of d",
    )


def laplacians(p: AlgebroidPresentation, split: bool = True) -> Laplacians:
    p.require("metric")
    grams = form_grams(p)
    d = ce_differential(p)
    d_dag = gram_adjoint(d, grams)
    lap = Laplacians(p, grams, d, d_dag)
    if split and p.J is not None:
        big = bigrade(p.J)
        lap.bigrading = big
        lap.del_, lap.delbar = split_differential(p, big)
        lap.del_dag = gram_adjoint(lap.del_, grams)
        lap.delbar_dag = gram_adjoint(lap.delbar, grams)
    return lap


# --- Hodge decomposition --------------------------------------------------------


@dataclass
class HodgeDecomposition:
    """Per degree: harmonic ⊕ im d ⊕ im d† with the checks that certify it."""

    dims: dict[int, tuple[int, int, int]]
    orthogonal: Verdict
    spans: Verdict
    kernel_of_laplacian: Verdict
    unique_representatives: Verdict

    @property
    def ok(self) -> bool:
        return all(v.ok for v in (self.orthogonal, self.spans, self.kernel_of_laplacian, self.unique_representatives))


def _orthogonal(a: Subspace, b: Subspace, gram: Matrix):
    for i, x in enumerate(a.basis):
        for j, y in enumerate(b.basis):
            val = sesquilinear(gram, x, y)
            if val:
                return (i, j, val)
    return None


def hodge_decomposition(p: AlgebroidPresentation, require_unimodular: bool = True) -> HodgeDecomposition:
    """With require_unimodular=False the Gram adjoint is used even where no integration by parts exists."""
    uni = unimodularity(p)
    if require_unimodular and not uni:
        raise ModelError("Hodge decomposition needs a unimodular model", witness=uni.witness)
    lap = laplacians(p, split=False)
    cx = DifferentialComplex(p.rank, lap.d)
    r = p.rank
    dims = {}
    fails = {"orthogonal": None, "spans": None, "kernel": None, "unique": None}
    for k in range(r + 1):
        H = lap.harmonic_space(k)
        im_d = cx.image(k)
        im_dd = Subspace.column_space(lap.d_dag[k + 1]) if k < r else Subspace(dim(r, k))
        dims[k] = (H.dim, im_d.dim, im_dd.dim)
        g = lap.grams[k]
        for name, (a, b) in (("H,im d", (H, im_d)), ("H,im d†", (H, im_dd)), ("im d,im d†", (im_d, im_dd))):
            hit = _orthogonal(a, b, g)
            if hit and fails["orthogonal"] is None:
                fails["orthogonal"] = {"degree": k, "pair": name, "value": hit[2]}
        total = subspace_sum(subspace_sum(H, im_d), im_dd)
        if total.dim != dim(r, k) and fails["spans"] is None:
            fails["spans"] = {"degree": k, "span_dim": total.dim, "expected": dim(r, k)}
        kerD = kernel_basis(lap.Delta[k])
        if not kerD.same_as(H) and fails["kernel"] is None:
            fails["kernel"] = {"degree": k, "ker_laplacian": kerD.dim, "harmonic": H.dim}
        # uniqueness: a harmonic exact form is zero, and every class has a harmonic rep
        exact_harmonic = subspace_intersection(H, im_d).dim
        covers = subspace_sum(H, im_d).same_as(cx.kernel(k))
        if (exact_harmonic or not covers) and fails["unique"] is None:
            fails["unique"] = {"degree": k, "harmonic_exact_dim": exact_harmonic, "covers_kernel": covers}

    def verdict(key):
        return Verdict(True) if fails[key] is None else Verdict(False, fails[key])

    return HodgeDecomposition(
        dims=dims,
        orthogonal=verdict("orthogonal"),
        spans=verdict("spans"),
        kernel_of_laplacian=verdict("kernel"),
        unique_representatives=verdict("unique"),
    )


# --- subcomplex inclusions ------------------------------------------------------


@dataclass
class InclusionReport:
    """Cohomology of (K, d) for a graded subspace K and the map it induces into H."""

    sub_dims: tuple[int, ...]
    full_dims: tuple[int, ...]
    ranks: tuple[int, ...]
    verdict: Verdict


def subcomplex_inclusion(cx: DifferentialComplex, K: dict[int, Subspace]) -> InclusionReport:
    """Z = K ∩ ker d, B = d(K_{k-1}) ∩ K, and the rank of Z/B -> H^k induced by inclusion."""
    r = cx.rank
    sub, full, ranks = [], [], []
    bad = None
    for k in range(r + 1):
        n = dim(r, k)
        Z = subspace_intersection(K[k], cx.kernel(k))
        if k:
            B = subspace_intersection(K[k - 1].image(cx.d[k - 1]), K[k])
        else:
            B = Subspace(n)
        src = Quotient(Z, B)
        dst = cx.quotient(k)
        m = induced_map(Matrix.identity(n), src, dst)
        rk = rank(m)
        sub.append(src.dim)
        full.append(dst.dim)
        ranks.append(rk)
        if not (rk == src.dim == dst.dim) and bad is None:
            bad = {"degree": k, "sub_dim": src.dim, "full_dim": dst.dim, "rank": rk}
    v = Verdict(True) if bad is None else Verdict(False, bad)
    return InclusionReport(tuple(sub), tuple(full), tuple(ranks), v)


def harmonic_quasi_iso(p: AlgebroidPresentation) -> InclusionReport:
    """The inclusion of ker d† into all forms, compared on cohomology."""
    lap = laplacians(p, split=False)
    cx = DifferentialComplex(p.rank, lap.d)
    K = {k: kernel_basis(lap.d_dag[k]) for k in range(p.rank + 1)}
    return subcomplex_inclusion(cx, K)
