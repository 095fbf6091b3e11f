"""Structure-constant presentations of Lie algebroids over a point, and their axiom checks.

The base is a point carrying a formal tangent dimension ``n_base``: it is
compact, closed and orientable for free, and all coefficient functions are
constants, so the anchor term of the Chevalley–Eilenberg differential
vanishes.  Brackets follow ``[e_i, e_j] = Σ_k c_ijk e_k`` and the dual
convention ``d e^k = -Σ_{i<j} c_ijk e^i ∧ e^j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Any, Mapping

from .errors import ConsistencyError, IncompleteModelError, ModelError, NondegeneracyError
from .exact_linalg import Matrix, det, rank
from .exterior import (
    FormVector,
    GradedOperator,
    dim,
    index_of,
    multi_indices,
    skew_matrix,
    sort_sign,
    volume_form,
)
from .scalars import as_scalar

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Verdict:
    """A boolean check result; a failing verdict always carries a witness."""

    ok: bool
    witness: Any = None
    note: str = ""

    def __post_init__(self):
        if not self.ok and self.witness is None:
            raise ValueError("failing verdict needs a witness")

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class AlgebroidPresentation:
    """Constant-coefficient Lie algebroid with optional metric, complex and symplectic data.

    Indices are 0-based internally.  ``structure`` maps (i, j, k) with i < j
    to c_ijk; ``J`` has columns J e_b; ``anchor`` is rank × n_base.
    """

    rank: int
    structure: Mapping[tuple[int, int, int], Fraction] = field(default_factory=dict)
    anchor: Matrix | None = None
    metric: Matrix | None = None
    J: Matrix | None = None
    omega: FormVector | None = None
    eta: Fraction | None = None
    name: str = ""

    def __post_init__(self):
        r = self.rank
        if r < 0:
            raise ModelError("rank must be nonnegative")
        clean = {}
        for (i, j, k), c in self.structure.items():
            if not (0 <= i < r and 0 <= j < r and 0 <= k < r):
                raise ModelError(f"structure index out of range: {(i + 1, j + 1, k + 1)}")
            if i == j:
                raise ModelError("c_iik must vanish")
            c = as_scalar(c)
            if i > j:
                i, j, c = j, i, -c
            if c:
                clean[(i, j, k)] = clean.get((i, j, k), ZERO) + c
        object.__setattr__(self, "structure", {key: v for key, v in sorted(clean.items()) if v})
        if self.anchor is None:
            object.__setattr__(self, "anchor", Matrix.zeros(r, 0))
        elif self.anchor.nrows != r:
            raise ModelError("anchor must have one row per fiber generator")
        if self.metric is not None:
            g = self.metric
            if g.shape != (r, r) or g != g.T:
                raise ModelError("metric must be a symmetric rank × rank matrix")
            bad = _first_nonpositive_minor(g)
            if bad is not None:
                raise ModelError("metric is not positive definite", witness={"leading_minor": bad})
        if self.J is not None:
            if self.J.shape != (r, r):
                raise ModelError("J must be a rank × rank matrix")
            if self.J @ self.J != -Matrix.identity(r):
                raise ModelError("J does not square to -id", witness={"J^2": "≠ -id"})
        if self.omega is not None:
            if self.omega.rank != r or self.omega.degree != 2:
                raise ModelError("omega must be a 2-form on the fiber")
        if self.eta is not None:
            eta = as_scalar(self.eta)
            if not eta:
                raise ModelError("integrating section must be nonvanishing")
            object.__setattr__(self, "eta", eta)

    @property
    def n_base(self) -> int:
        return self.anchor.ncols

    @property
    def m(self) -> int:
        if self.rank % 2:
            raise ModelError("odd fiber rank has no half-rank")
        return self.rank // 2

    def bracket(self, x, y) -> list:
        """[x, y] for coefficient vectors x, y."""
        out = [ZERO] * self.rank
        for (i, j, k), c in self.structure.items():
            t = x[i] * y[j] - x[j] * y[i]
            if t:
                out[k] += c * t
        return out

    def basis_vector(self, i: int) -> list:
        v = [ZERO] * self.rank
        v[i] = ONE
        return v

    def with_(self, **changes) -> "AlgebroidPresentation":
        return replace(self, **changes)

    def require(self, *names: str):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise IncompleteModelError(f"model lacks {', '.join(missing)}", witness={"missing": missing})


def _first_nonpositive_minor(g: Matrix):
    for size in range(1, g.nrows + 1):
        if det(g.submatrix(range(size), range(size))) <= 0:
            return size
    return None


# --- differential from structure constants ---------------------------------


def differential_on_generators(p: AlgebroidPresentation) -> list[FormVector]:
    """d e^k = -Σ_{i<j} c_ijk e^i ∧ e^j."""
    r = p.rank
    terms: list[dict] = [dict() for _ in range(r)]
    for (i, j, k), c in p.structure.items():
        terms[k][(i, j)] = terms[k].get((i, j), ZERO) - c
    return [FormVector.from_terms(r, 2, t) for t in terms]


def ce_differential(p: AlgebroidPresentation) -> GradedOperator:
    """The Chevalley–Eilenberg differential as a graded derivation of degree +1."""
    r = p.rank
    de = [f.terms() for f in differential_on_generators(p)]

    def block(k):
        m = Matrix.zeros(dim(r, k + 1), dim(r, k))
        idx = index_of(r, k + 1)
        for col, I in enumerate(multi_indices(r, k)):
            for s, a in enumerate(I):
                sign = -1 if s % 2 else 1
                for (i, j), c in de[a].items():
                    seq = I[:s] + (i, j) + I[s + 1 :]
                    t, K = sort_sign(seq)
                    if t:
                        m.rows[idx[K]][col] += sign * t * c
        return m

    return GradedOperator.build(r, 1, block)


# --- checks ------------------------------------------------------------------


def _one_based(*idx):
    return tuple(i + 1 for i in idx)


def _nonzero_terms(v) -> dict:
    return {f"e{i + 1}": x for i, x in enumerate(v) if x}


def validate_jacobi(p: AlgebroidPresentation) -> Verdict:
    """Jacobi identity on all basis triples."""
    e = [p.basis_vector(i) for i in range(p.rank)]
    for i, j, k in combinations(range(p.rank), 3):
        a = p.bracket(p.bracket(e[i], e[j]), e[k])
        b = p.bracket(p.bracket(e[j], e[k]), e[i])
        c = p.bracket(p.bracket(e[k], e[i]), e[j])
        res = [x + y + z for x, y, z in zip(a, b, c)]
        if any(res):
            return Verdict(False, {"triple": _one_based(i, j, k), "residual": _nonzero_terms(res)})
    return Verdict(True)


def d_squared_zero(p: AlgebroidPresentation) -> Verdict:
    d = ce_differential(p)
    for k in range(p.rank - 1):
        hit = (d[k + 1] @ d[k]).first_nonzero()
        if hit is not None:
            return Verdict(False, {"degree": k, "entry": (hit[0], hit[1]), "value": hit[2]})
    return Verdict(True)


def validate_compatible_triple(p: AlgebroidPresentation) -> Verdict:
    """g(X, Y) = ω(X, JY), g J-invariant and positive definite."""
    p.require("metric", "J", "omega")
    g, J = p.metric, p.J
    om = skew_matrix(p.omega)
    from_omega = om @ J
    hit = (from_omega - g).first_nonzero()
    if hit is not None:
        i, j, _ = hit
        return Verdict(
            False,
            {"pair": _one_based(i, j), "g": g[i, j], "omega(X,JY)": from_omega[i, j]},
            note="g(X,Y) != omega(X,JY)",
        )
    hit = (J.T @ g @ J - g).first_nonzero()
    if hit is not None:
        return Verdict(False, {"pair": _one_based(hit[0], hit[1]), "residual": hit[2]}, note="g not J-invariant")
    bad = _first_nonpositive_minor(from_omega)
    if bad is not None:
        return Verdict(False, {"leading_minor": bad}, note="omega(X,JY) is not positive definite")
    # consequence: ω(X, Y) = g(X, J^{-1} Y) with J^{-1} = -J
    if (g @ (-J) - om).first_nonzero() is not None:
        return Verdict(False, {"relation": "omega != g(., J^-1 .)"})
    return Verdict(True)


def nijenhuis(p: AlgebroidPresentation, x, y) -> list:
    J = p.J
    jx, jy = J.apply(x), J.apply(y)
    a = p.bracket(jx, jy)
    b = p.bracket(x, y)
    c = J.apply([s + t for s, t in zip(p.bracket(jx, y), p.bracket(x, jy))])
    return [u - v - w for u, v, w in zip(a, b, c)]


def _tensor_nijenhuis(p: AlgebroidPresentation) -> Verdict:
    for i, j in combinations(range(p.rank), 2):
        n = nijenhuis(p, p.basis_vector(i), p.basis_vector(j))
        if any(n):
            return Verdict(False, {"pair": _one_based(i, j), "residual": _nonzero_terms(n)})
    return Verdict(True)


def d_bidegree_residual(p: AlgebroidPresentation):
    """First nonzero entry of the (2,-1) or (-1,2) part of d, as (bidegree, residual), or None."""
    from .exterior import bigrade

    # d is a derivation, so its bidegree is decided on 1-forms
    big = bigrade(p.J, degrees=(1, 2))
    d1 = ce_differential(p)[1]
    for dp, dq in ((2, -1), (-1, 2)):
        for a, b in big.bidegrees(1):
            if a + dp < 0 or b + dq < 0:
                continue
            hit = (big.projector(a + dp, b + dq) @ d1 @ big.projector(a, b)).first_nonzero()
            if hit is not None:
                return (dp, dq), (1, *hit)
    return None


def validate_nijenhuis(p: AlgebroidPresentation) -> Verdict:
    """N_J(e_i, e_j) = 0 for all basis pairs.

    Cross-checked against the equivalent condition that d has no (2,-1) or
    (-1,2) component, whenever the bracket satisfies Jacobi.
    """
    p.require("J")
    v = _tensor_nijenhuis(p)
    if p.rank % 2 == 0 and validate_jacobi(p):
        other = d_bidegree_residual(p)
        if v.ok != (other is None):
            raise ConsistencyError("Nijenhuis tensor and bidegree of d disagree")
    return v


def d_of(p: AlgebroidPresentation, form: FormVector) -> FormVector:
    return ce_differential(p).apply(form)


def validate_omega_closed(p: AlgebroidPresentation) -> Verdict:
    p.require("omega")
    dw = d_of(p, p.omega)
    if dw.is_zero():
        return Verdict(True)
    I, c = next(iter(dw.terms().items()))
    return Verdict(False, {"d_omega_term": "e" + "".join(str(i + 1) for i in I), "coefficient": c})


def validate_nondegenerate(p: AlgebroidPresentation) -> Verdict:
    p.require("omega")
    if p.rank % 2:
        return Verdict(False, {"rank": p.rank}, note="odd fiber rank")
    rk = rank(skew_matrix(p.omega))
    if rk < p.rank:
        return Verdict(False, {"rank_of_omega": rk})
    return Verdict(True)


def validate_symplectic(p: AlgebroidPresentation) -> Verdict:
    for v in (validate_nondegenerate(p), validate_omega_closed(p)):
        if not v:
            return v
    return Verdict(True)


def validate_kahler(p: AlgebroidPresentation) -> Verdict:
    """Compatible triple, integrable J and dω = 0."""
    missing = [n for n in ("metric", "J", "omega") if getattr(p, n) is None]
    if missing:
        return Verdict(False, {"missing": missing}, note="not a Kähler model")
    for name, v in (
        ("compatible_triple", validate_compatible_triple(p)),
        ("nijenhuis_zero", validate_nijenhuis(p)),
        ("omega_closed", validate_omega_closed(p)),
    ):
        if not v:
            return Verdict(False, {"failed": name, "detail": v.witness})
    return Verdict(True)


def check_ellipticity(p: AlgebroidPresentation) -> Verdict:
    """A constant real anchor is elliptic iff it is onto the formal tangent space."""
    if p.n_base == 0:
        return Verdict(True, note="zero-dimensional base")
    rk = rank(p.anchor)
    if rk < p.n_base:
        return Verdict(False, {"anchor_rank": rk, "n_base": p.n_base})
    return Verdict(True)


def modular_traces(p: AlgebroidPresentation) -> list[Fraction]:
    """tr ad(e_i) = Σ_k c_ikk."""
    tr = [ZERO] * p.rank
    for (i, j, k), c in p.structure.items():
        if k == j:
            tr[i] += c
        if k == i:
            tr[j] -= c
    return tr


def stokes_pairing(p: AlgebroidPresentation, alpha: FormVector) -> Fraction:
    """<d alpha, eta> for a degree r-1 form: the integral of an exact top form."""
    p.require("eta")
    return d_of(p, alpha).top_coefficient() * p.eta


def check_unimodular(p: AlgebroidPresentation) -> Verdict:
    """All ad-traces vanish; cross-checked against Stokes on every degree r-1 basis form."""
    p.require("eta")
    tr = modular_traces(p)
    by_trace = not any(tr)
    r = p.rank
    witness = None
    for I in multi_indices(r, r - 1):
        alpha = FormVector.basis(r, I)
        val = stokes_pairing(p, alpha)
        if val:
            witness = {"alpha": "e" + "".join(str(i + 1) for i in I), "stokes_pairing": val}
            break
    if by_trace != (witness is None):
        raise ConsistencyError("trace criterion and Stokes pairing disagree")
    if by_trace:
        return Verdict(True)
    return Verdict(False, dict(witness, traces={f"e{i + 1}": t for i, t in enumerate(tr) if t}))


def volume_pairing(p: AlgebroidPresentation) -> Fraction:
    """<ω^m/m!, η>."""
    p.require("omega", "eta")
    return volume_form(p.omega).top_coefficient() * p.eta


def normalize_integrating_section(p: AlgebroidPresentation) -> AlgebroidPresentation:
    """Rescale eta so that <ω^m/m!, η> = 1."""
    p.require("omega", "eta")
    v = volume_form(p.omega).top_coefficient()
    if not v:
        raise NondegeneracyError("ω^m vanishes; cannot normalize")
    return p.with_(eta=ONE / v)


def check_hodge_admissible(p: AlgebroidPresentation) -> Verdict:
    """Kähler, elliptic, and carrying an integrating section that can be ω^m/m!-normalized.

    Integration against eta only obeys Stokes when the model is unimodular,
    so unimodularity is part of having a usable integrating section.
    """
    base = {"compact_closed_orientable": True}
    parts = {
        "kahler": validate_kahler(p),
        "elliptic": check_ellipticity(p),
    }
    if p.eta is None:
        parts["integrating_section"] = Verdict(False, {"missing": ["eta"]})
    else:
        parts["integrating_section"] = check_unimodular(p)
        if p.omega is not None and p.rank % 2 == 0 and not volume_form(p.omega).top_coefficient():
            parts["integrating_section"] = Verdict(False, {"omega_m": 0})
    failed = {k: v.witness for k, v in parts.items() if not v}
    if failed:
        return Verdict(False, dict(base, failed=failed))
    return Verdict(True, note="base is a point: compact, closed, orientable")


@dataclass(frozen=True)
class ValidationReport:
    jacobi: Verdict
    d_squared_zero: Verdict
    compatible_triple: Verdict | None
    nijenhuis_zero: Verdict | None
    omega_closed: Verdict | None
    symplectic: Verdict | None
    kahler: Verdict
    unimodular: Verdict | None
    elliptic: Verdict
    hodge_admissible: Verdict

    def items(self):
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if v is not None:
                yield name, v

    @property
    def all_ok(self) -> bool:
        return all(v.ok for _, v in self.items())


def validate(p: AlgebroidPresentation) -> ValidationReport:
    """Run every applicable axiom check; checks needing absent data are reported as None."""
    jac = validate_jacobi(p)
    dsq = d_squared_zero(p)
    if jac.ok != dsq.ok:
        raise ConsistencyError("Jacobi identity and d^2 = 0 disagree")
    has = lambda *n: all(getattr(p, x) is not None for x in n)
    return ValidationReport(
        jacobi=jac,
        d_squared_zero=dsq,
        compatible_triple=validate_compatible_triple(p) if has("metric", "J", "omega") else None,
        nijenhuis_zero=validate_nijenhuis(p) if has("J") else None,
        omega_closed=validate_omega_closed(p) if has("omega") else None,
        symplectic=validate_symplectic(p) if has("omega") else None,
        kahler=validate_kahler(p),
        unimodular=check_unimodular(p) if has("eta") else None,
        elliptic=check_ellipticity(p),
        hodge_admissible=check_hodge_admissible(p),
    )


def change_basis(p: AlgebroidPresentation, a: Matrix) -> AlgebroidPresentation:
    """Re-express the model in the basis e'_i = Σ_a A_ai e_a (columns of A)."""
    from .exact_linalg import inverse

    r = p.rank
    ainv = inverse(a)
    cols = a.columns()
    new_struct = {}
    for i, j in combinations(range(r), 2):
        br = p.bracket(cols[i], cols[j])
        coords = ainv.apply(br)
        for k, c in enumerate(coords):
            if c:
                new_struct[(i, j, k)] = c
    omega = None
    if p.omega is not None:
        from .exterior import two_form_from_skew

        omega = two_form_from_skew(a.T @ skew_matrix(p.omega) @ a)
    eta = None if p.eta is None else p.eta / det(a)
    return AlgebroidPresentation(
        rank=r,
        structure=new_struct,
        anchor=a.T @ p.anchor if p.n_base else Matrix.zeros(r, 0),
        metric=None if p.metric is None else a.T @ p.metric @ a,
        J=None if p.J is None else ainv @ p.J @ a,
        omega=omega,
        eta=eta,
        name=p.name,
    )
