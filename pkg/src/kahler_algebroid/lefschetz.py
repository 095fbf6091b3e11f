"""Hard Lefschetz, the dd*-lemma, symplectic harmonicity, Kähler identities and the pairing I."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .cohomology import (
    DifferentialComplex,
    InclusionReport,
    Laplacians,
    build_complex,
    laplacians,
    subcomplex_inclusion,
    unimodularity,
)
from .errors import ConsistencyError, IncompleteModelError, ModelError
from .exact_linalg import (
    Matrix,
    Quotient,
    Subspace,
    induced_map,
    inverse,
    kernel_basis,
    kernel_vectors,
    normalize_vector,
    rank,
    subspace_intersection,
)
from .exterior import (
    FormVector,
    GradedOperator,
    bilinear,
    dim,
    dual_action,
    dual_bivector,
    form_operator,
    hodge_star,
    pairing_gram,
    power,
    sesquilinear,
    symplectic_star,
    wedge,
    wedge_operator,
)
from .model import (
    AlgebroidPresentation,
    ce_differential,
    normalize_integrating_section,
    validate_kahler,
    validate_symplectic,
)
from .scalars import I as IMAG

STANDARD = "standard"  # d* = (-1)^(k+1) ⋆d⋆ on degree k
ALTERNATE = "alternate"  # d* = (-1)^k ⋆d⋆


def _require_symplectic(p: AlgebroidPresentation):
    p.require("omega")
    if p.rank % 2:
        raise ModelError("symplectic data needs an even fiber rank", witness={"rank": p.rank})
    v = validate_symplectic(p)
    if not v:
        raise ModelError("omega is not symplectic", witness=v.witness)


def _form_label(f: FormVector) -> str:
    parts = []
    for I, c in f.terms().items():
        name = "e" + "".join(str(i + 1) for i in I) if I else "1"
        parts.append(name if c == 1 else f"{c}*{name}")
    return " + ".join(parts) or "0"


def brylinski(p: AlgebroidPresentation, convention: str = STANDARD) -> GradedOperator:
    """Symplectic codifferential ±⋆_ω d ⋆_ω; the convention only changes signs."""
    star = symplectic_star(p.omega)
    core = star.sandwich(ce_differential(p))
    if convention == STANDARD:
        return core.scale_by_degree(lambda k: (-1) ** (k + 1))
    if convention == ALTERNATE:
        return core.scale_by_degree(lambda k: (-1) ** k)
    raise ValueError(f"unknown convention {convention!r}")


def _lefschetz_power(omega: FormVector, k: int) -> GradedOperator:
    L = wedge_operator(omega)
    out = GradedOperator.identity(omega.rank)
    for _ in range(k):
        out = L @ out
    return out


def _cohomology_quotients(p: AlgebroidPresentation, cx: DifferentialComplex) -> dict[int, Quotient]:
    """Quotients with harmonic representatives when a metric is present."""
    preferred = {}
    if p.metric is not None:
        lap = laplacians(p, split=False)
        preferred = {k: lap.harmonic_space(k).basis for k in range(p.rank + 1)}
    return {k: cx.quotient(k, preferred.get(k, ())) for k in range(p.rank + 1)}


# --- Hard Lefschetz ----------------------------------------------------------------


@dataclass
class HLEntry:
    k: int
    source_dim: int
    target_dim: int
    rank: int
    iso: bool
    witness: str | None = None


@dataclass
class HLReport:
    m: int
    entries: list[HLEntry]

    @property
    def ok(self) -> bool:
        return all(e.iso for e in self.entries)

    def failing(self) -> list[HLEntry]:
        return [e for e in self.entries if not e.iso]


def hard_lefschetz_check(p: AlgebroidPresentation, quotients: dict[int, Quotient] | None = None) -> HLReport:
    """[L]^k : H^{m-k} -> H^{m+k} for k = 0..m, on cohomology."""
    _require_symplectic(p)
    m = p.rank // 2
    quots = quotients or _cohomology_quotients(p, build_complex(p))
    entries = []
    for k in range(m + 1):
        src, dst = quots[m - k], quots[m + k]
        op = _lefschetz_power(p.omega, k)[m - k]
        mat = induced_map(op, src, dst)
        rk = rank(mat) if mat.nrows and mat.ncols else 0
        iso = rk == src.dim == dst.dim
        witness = None
        if not iso and rk < src.dim:
            coords = kernel_vectors(mat)[0] if mat.nrows else [Fraction(1)] + [Fraction(0)] * (src.dim - 1)
            witness = "[" + _form_label(FormVector(p.rank, m - k, normalize_vector(src.lift(coords)))) + "]"
        elif not iso:
            witness = f"cokernel of dimension {dst.dim - rk}"
        entries.append(HLEntry(k, src.dim, dst.dim, rk, iso, witness))
    return HLReport(m, entries)


# --- dd*-lemma and symplectic harmonicity ---------------------------------------


@dataclass
class DdStarEntry:
    degree: int
    im_d_ker_dstar: int
    im_dstar_ker_d: int
    im_d_dstar: int
    ok: bool


@dataclass
class DdStarReport:
    entries: list[DdStarEntry]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def ddstar_lemma_check(p: AlgebroidPresentation, convention: str = STANDARD) -> DdStarReport:
    """im d ∩ ker d* = im d* ∩ ker d = im d d*, degree by degree."""
    _require_symplectic(p)
    r = p.rank
    d = ce_differential(p)
    ds = brylinski(p, convention)
    dds = d @ ds
    entries = []
    for k in range(r + 1):
        n = dim(r, k)
        im_d = Subspace.column_space(d[k - 1]) if k else Subspace(n)
        im_ds = Subspace.column_space(ds[k + 1]) if k < r else Subspace(n)
        a = subspace_intersection(im_d, kernel_basis(ds[k]))
        b = subspace_intersection(im_ds, kernel_basis(d[k]))
        c = Subspace.column_space(dds[k])
        ok = a.same_as(b) and b.same_as(c)
        entries.append(DdStarEntry(k, a.dim, b.dim, c.dim, ok))
    return DdStarReport(entries)


def symplectic_harmonic_check(p: AlgebroidPresentation, convention: str = STANDARD) -> InclusionReport:
    """Does (ker d*, d) -> (Ω, d) induce an isomorphism on cohomology?"""
    _require_symplectic(p)
    cx = build_complex(p)
    ds = brylinski(p, convention)
    K = {k: kernel_basis(ds[k]) for k in range(p.rank + 1)}
    return subcomplex_inclusion(cx, K)


@dataclass
class EquivalenceReport:
    hard_lefschetz: bool
    ddstar: bool
    symplectic_harmonic: bool

    @property
    def consistent(self) -> bool:
        return self.hard_lefschetz == self.ddstar == self.symplectic_harmonic

    @property
    def ok(self) -> bool:
        return self.consistent and self.hard_lefschetz


def equivalence_theorem_check(p: AlgebroidPresentation) -> EquivalenceReport:
    """Run the three conditions independently; they must agree."""
    rep = EquivalenceReport(
        hard_lefschetz=hard_lefschetz_check(p).ok,
        ddstar=ddstar_lemma_check(p).ok,
        symplectic_harmonic=symplectic_harmonic_check(p).verdict.ok,
    )
    if not rep.consistent:
        raise ConsistencyError(f"equivalent conditions disagree: {rep}")
    return rep


# --- Kähler identity suite ------------------------------------------------------


PASS, FAIL, INAPPLICABLE = "pass", "fail", "inapplicable"


@dataclass
class IdentityResult:
    status: str
    witness: Any = None

    @property
    def ok(self) -> bool:
        return self.status == PASS


@dataclass
class IdentityReport:
    results: dict[str, IdentityResult] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def failed(self) -> list[str]:
        return [n for n, r in self.results.items() if r.status == FAIL]

    def inapplicable(self) -> list[str]:
        return [n for n, r in self.results.items() if r.status == INAPPLICABLE]


ADJOINT_IDENTITIES = (
    "kahler_commutator_del",
    "kahler_commutator_delbar",
    "d_dagger_star_formula",
    "del_dagger_star_formula",
    "delbar_dagger_star_formula",
    "laplacian_sum",
    "laplacian_halves",
    "kernel_d_dagger_equals_kernel_d_star",
    "heart_conjugation",
)


def _operator_result(lhs: GradedOperator, rhs: GradedOperator) -> IdentityResult:
    hit = lhs.residual(rhs)
    if hit is None:
        return IdentityResult(PASS)
    k, row, col, val = hit
    return IdentityResult(FAIL, {"degree": k, "entry": [row, col], "residual": str(val)})


def random_form(rng: random.Random, rank_: int, degree: int, complex_: bool = True) -> FormVector:
    def coeff():
        re = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if not complex_:
            return re
        from .scalars import GaussianRational, simplify

        return simplify(GaussianRational(re, Fraction(rng.randint(-9, 9), rng.randint(1, 5))))

    return FormVector(rank_, degree, [coeff() for _ in range(dim(rank_, degree))])


def form_products(p: AlgebroidPresentation, lap: Laplacians):
    """The three pairings on forms: L² (hermitian), g (bilinear), ω (bilinear via Π)."""
    P = dual_bivector(p.omega)
    om_grams = {k: pairing_gram(P, k) for k in range(p.rank + 1)}

    def l2(a: FormVector, b: FormVector):
        return sesquilinear(lap.grams[a.degree], a.coeffs, b.coeffs)

    def g(a: FormVector, b: FormVector):
        return bilinear(lap.grams[a.degree], a.coeffs, b.coeffs)

    def om(a: FormVector, b: FormVector):
        return bilinear(om_grams[a.degree], a.coeffs, b.coeffs)

    return l2, g, om


def kahler_identity_suite(
    p: AlgebroidPresentation,
    pairs: int = 100,
    seed: int = 0,
    convention: str = STANDARD,
) -> IdentityReport:
    """Check every Kähler identity as an exact matrix equality.

    Adjoint-based identities presuppose Stokes; on non-unimodular models they
    are reported inapplicable with the Stokes witness instead of evaluated.
    """
    kv = validate_kahler(p)
    if not kv:
        raise IncompleteModelError("identity suite needs a Kähler model", witness=kv.witness)
    if p.eta is not None:
        p = normalize_integrating_section(p)
    r, m = p.rank, p.rank // 2
    rep = IdentityReport()
    res = rep.results
    uni = unimodularity(p)
    lap = laplacians(p, split=True)
    lap.star_route  # raises if the star and Gram adjoints disagree on a unimodular model
    star = hodge_star(inverse(p.metric), p.omega)
    big = lap.bigrading
    L = wedge_operator(p.omega)

    # identities that do not involve an adjoint
    law = big.as_operator(lambda a, b: (-1) ** (m * m + a + b))
    res["hodge_star_square"] = _operator_result(star.squared(), law)
    l2, g, om = form_products(p, lap)
    rng = random.Random(seed)
    bad = None
    for n in range(pairs):
        k = n % (r + 1)
        a, b = random_form(rng, r, k), random_form(rng, r, k)
        lhs, rhs = l2(a, b), g(a, b) - IMAG * om(a, b)
        if lhs != rhs:
            bad = {"pair": n, "degree": k, "l2": str(lhs), "g_minus_i_omega": str(rhs)}
            break
    res["l2_equals_g_minus_i_omega"] = IdentityResult(PASS) if bad is None else IdentityResult(FAIL, bad)

    if not uni:
        for name in ADJOINT_IDENTITIES:
            res[name] = IdentityResult(INAPPLICABLE, {"stokes": uni.witness})
        rep.notes["gating"] = "model is not unimodular; adjoints are not given by star formulas"
        return rep

    sign = -((-1) ** (m * m))
    res["d_dagger_star_formula"] = _operator_result(lap.d_dag, star.sandwich(lap.d).scale(sign))
    res["del_dagger_star_formula"] = _operator_result(lap.del_dag, star.sandwich(lap.delbar).scale(sign))
    res["delbar_dagger_star_formula"] = _operator_result(lap.delbar_dag, star.sandwich(lap.del_).scale(sign))
    res["kahler_commutator_del"] = _operator_result(
        lap.del_dag @ L - L @ lap.del_dag, lap.delbar.scale(-IMAG)
    )
    res["kahler_commutator_delbar"] = _operator_result(
        lap.delbar_dag @ L - L @ lap.delbar_dag, lap.del_.scale(IMAG)
    )
    res["laplacian_sum"] = _operator_result(lap.Delta, lap.Delta_del + lap.Delta_delbar)
    half = lap.Delta.scale(Fraction(1, 2))
    r1, r2 = _operator_result(lap.Delta_del, half), _operator_result(lap.Delta_delbar, half)
    res["laplacian_halves"] = r1 if not r1.ok else r2

    ds = brylinski(p, convention)
    bad = None
    for k in range(r + 1):
        a, b = kernel_basis(lap.d_dag[k]), kernel_basis(ds[k])
        if not a.same_as(b):
            bad = {"degree": k, "dim_ker_d_dagger": a.dim, "dim_ker_d_star": b.dim}
            break
    res["kernel_d_dagger_equals_kernel_d_star"] = IdentityResult(PASS) if bad is None else IdentityResult(FAIL, bad)

    # d♥: adjoint of d for the bilinear g-pairing; equals d† for a real differential
    heart = lap.d_dag
    Jf = form_operator(dual_action(p.J))
    Jinv = form_operator(inverse(dual_action(p.J)))
    res["heart_conjugation"] = _operator_result(heart, Jinv @ ds @ Jf)
    return rep


# --- the pairing I and Betti evenness -------------------------------------------


@dataclass
class PairingEntry:
    degree: int
    k: int
    matrix: Matrix
    rank: int
    nondegenerate: bool
    symmetry: str  # "symmetric" or "skew"
    symmetry_ok: bool


@dataclass
class PairingReport:
    entries: dict[int, PairingEntry]


def intersection_pairing(p: AlgebroidPresentation, quotients: dict[int, Quotient] | None = None) -> PairingReport:
    """I([α],[β]) = <ω^k ∧ α ∧ β, η> on H^{m-k}, for k = 0..m."""
    _require_symplectic(p)
    p.require("eta")
    uni = unimodularity(p)
    if not uni:
        raise ModelError("I depends on representatives without Stokes", witness=uni.witness)
    p = normalize_integrating_section(p)
    m, r = p.rank // 2, p.rank
    quots = quotients or _cohomology_quotients(p, build_complex(p))
    omega_pow = [power(p.omega, k) for k in range(m + 1)]

    def pair(k, a, b):
        w = wedge(wedge(omega_pow[k], a), b)
        return w.top_coefficient() * p.eta

    entries = {}
    for k in range(m + 1):
        j = m - k
        q = quots[j]
        reps = [FormVector(r, j, v) for v in q.reps]
        mat = Matrix([[pair(k, a, b) for b in reps] for a in reps]) if reps else Matrix.zeros(0, 0)
        # well-definedness: shifting a representative by an exact form changes nothing
        for t in q.im.basis:
            tau = FormVector(r, j, t)
            for b in reps:
                if pair(k, tau, b):
                    raise ConsistencyError("pairing depends on the representative")
        sgn = (-1) ** (j * j)
        sym_ok = mat.T.scale(sgn) == mat if reps else True
        rk = rank(mat) if reps else 0
        entries[j] = PairingEntry(j, k, mat, rk, rk == len(reps), "skew" if sgn < 0 else "symmetric", sym_ok)
    return PairingReport(entries)


@dataclass
class BettiReport:
    odd_dims: dict[int, int]
    pairing_nondegenerate: dict[int, bool | None]
    all_even: bool
    contrapositive: dict[int, bool]  # odd degree, odd dim, I known: is I degenerate there?

    @property
    def consistent(self) -> bool:
        """No odd degree has an odd dimension together with a nondegenerate I."""
        return all(self.contrapositive.values())


def betti_evenness_check(p: AlgebroidPresentation) -> BettiReport:
    """Odd-degree dimensions are even wherever I is nondegenerate.

    Degrees above m are carried to degree 2m - j by Hard Lefschetz when it holds.
    """
    _require_symplectic(p)
    from .cohomology import cohomology_dims

    m = p.rank // 2
    cx = build_complex(p)
    dims = cohomology_dims(cx)
    quots = _cohomology_quotients(p, cx)
    pairing = intersection_pairing(p, quots)
    hl = hard_lefschetz_check(p, quots)
    odd = {j: dims[j] for j in range(1, p.rank + 1, 2)}
    nondeg: dict[int, bool | None] = {}
    for j in odd:
        if j <= m:
            nondeg[j] = pairing.entries[j].nondegenerate
        else:
            e = hl.entries[j - m]
            nondeg[j] = pairing.entries[2 * m - j].nondegenerate if e.iso else None
    contra = {j: nondeg[j] is False for j, b in odd.items() if b % 2 and nondeg[j] is not None}
    return BettiReport(odd, nondeg, all(b % 2 == 0 for b in odd.values()), contra)
