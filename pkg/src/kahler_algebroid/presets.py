"""Named models compiled into the package."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .constructions import BManifoldSpec, FiniteKahlerRing, projective_ring, torus_ring
from .exact_linalg import Matrix
from .exterior import FormVector
from .model import AlgebroidPresentation, change_basis

F = Fraction


def standard_triple(r: int) -> tuple[Matrix, Matrix, FormVector]:
    """(g, J, ω) = (id, J e_{2a-1} = e_{2a}, Σ e^{2a-1} ∧ e^{2a}) on rank r = 2m."""
    if r % 2:
        raise ValueError("rank must be even")
    J = Matrix.zeros(r, r)
    for a in range(r // 2):
        J.rows[2 * a + 1][2 * a] = F(1)
        J.rows[2 * a][2 * a + 1] = F(-1)
    omega = FormVector.from_terms(r, 2, {(2 * a, 2 * a + 1): 1 for a in range(r // 2)})
    return Matrix.identity(r), J, omega


def abelian(m: int, eta=1) -> AlgebroidPresentation:
    """Flat C^m: abelian bracket, standard Kähler triple."""
    g, J, omega = standard_triple(2 * m)
    return AlgebroidPresentation(2 * m, {}, metric=g, J=J, omega=omega, eta=F(eta), name=f"abelian-2m(m={m})")


def abelian_scaled() -> AlgebroidPresentation:
    """Abelian rank 4 with g = diag(1,2,1,2), J e1 = e3, J e2 = e4, ω = e13 + 2 e24."""
    J = Matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    omega = FormVector.from_terms(4, 2, {(0, 2): 1, (1, 3): 2})
    return AlgebroidPresentation(
        4, {}, metric=Matrix.diagonal([1, 2, 1, 2]), J=J, omega=omega, eta=F(1, 2), name="abelian-diag1212"
    )


def kodaira_thurston() -> AlgebroidPresentation:
    """[e1, e2] = -e3; symplectic form e13 + e24; no compatible complex structure supplied."""
    omega = FormVector.from_terms(4, 2, {(0, 2): 1, (1, 3): 1})
    return AlgebroidPresentation(4, {(0, 1, 2): F(-1)}, omega=omega, eta=F(1), name="kt")


def affine(with_triple: bool = True) -> AlgebroidPresentation:
    """[e1, e2] = e2: not unimodular."""
    if with_triple:
        g, J, omega = standard_triple(2)
        return AlgebroidPresentation(2, {(0, 1, 1): F(1)}, metric=g, J=J, omega=omega, eta=F(1), name="affine-2")
    return AlgebroidPresentation(2, {(0, 1, 1): F(1)}, eta=F(1), name="affine-2")


def euclidean_motions() -> AlgebroidPresentation:
    """e(2) x R: [e1, e3] = -e2, [e2, e3] = e1, standard triple; unimodular, non-abelian, Kähler."""
    g, J, omega = standard_triple(4)
    return AlgebroidPresentation(
        4, {(0, 2, 1): F(-1), (1, 2, 0): F(1)}, metric=g, J=J, omega=omega, eta=F(1), name="e2xr"
    )


def corrupted_kt() -> AlgebroidPresentation:
    """kt with an extra [e1, e3] = e1; violates Jacobi on (e1, e2, e3)."""
    return AlgebroidPresentation(4, {(0, 1, 2): F(-1), (0, 2, 0): F(1)}, name="kt-corrupted")


def kt_nonintegrable() -> AlgebroidPresentation:
    """kt with a compatible but non-integrable J (J e1 = e3, J e2 = e4)."""
    p = kodaira_thurston()
    J = Matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    return p.with_(J=J, metric=Matrix.identity(4), name="kt-nonintegrable")


# rational changes of basis used to vary compatible triples
_BASIS_CHANGES = {
    2: [
        [[1, 1], [0, 1]],
        [[2, 0], [1, 1]],
        [[1, F(1, 2)], [F(-1, 3), 1]],
    ],
    4: [
        [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 2, 1], [0, 0, 0, 1]],
        [[1, 0, F(1, 2), 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, F(1, 3), 0, 1]],
        [[2, 1, 0, 1], [0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1]],
    ],
    6: [
        [[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, F(1, 2)], [0, 0, 0, 1, 0, 0], [1, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]],
        [[1, 1, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 2, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, F(-1, 2)], [0, 0, 0, 0, 0, 1]],
    ],
}


def varied_abelian(m: int, index: int) -> AlgebroidPresentation:
    """Standard abelian model re-expressed in a rational basis: a non-standard compatible triple."""
    a = Matrix(_BASIS_CHANGES[2 * m][index])
    p = change_basis(abelian(m), a)
    return p.with_(name=f"abelian-2m(m={m})/basis{index}")


def identity_corpus() -> list[AlgebroidPresentation]:
    """Kähler models with assorted exact-rational compatible triples, rank <= 6."""
    out = [abelian(1), abelian(2), abelian(3), abelian_scaled()]
    for m in (1, 2, 3):
        out.extend(varied_abelian(m, i) for i in range(len(_BASIS_CHANGES[2 * m])))
    return out


def b_sphere() -> BManifoldSpec:
    """S² with the equator as Z."""
    return BManifoldSpec((1, 0, 1), (1, 1), name="b-sphere")


def torus_circle() -> BManifoldSpec:
    return BManifoldSpec((1, 2, 1), (1, 1), name="torus-circle")


MODEL_PRESETS: dict[str, Callable[..., AlgebroidPresentation]] = {
    "abelian-2m": lambda m=1: abelian(m),
    "abelian-diag1212": lambda m=None: abelian_scaled(),
    "kt": lambda m=None: kodaira_thurston(),
    "kt-nonintegrable": lambda m=None: kt_nonintegrable(),
    "kt-corrupted": lambda m=None: corrupted_kt(),
    "affine-2": lambda m=None: affine(),
    "e2xr": lambda m=None: euclidean_motions(),
}

BSPEC_PRESETS: dict[str, Callable[[], BManifoldSpec]] = {
    "b-sphere": b_sphere,
    "torus-circle": torus_circle,
}

RING_PRESETS: dict[str, Callable[[], FiniteKahlerRing]] = {
    "cp1-ring": lambda: projective_ring(1),
    "cp2-ring": lambda: projective_ring(2),
    "t2-ring": torus_ring,
}

DESCRIPTIONS = {
    "abelian-2m": "abelian rank-2m algebra with the standard Kähler triple (use --m)",
    "abelian-diag1212": "abelian rank 4, g = diag(1,2,1,2) with a compatible J and ω",
    "kt": "Kodaira-Thurston algebra, symplectic, no complex structure",
    "kt-nonintegrable": "Kodaira-Thurston with a compatible non-integrable J",
    "kt-corrupted": "Kodaira-Thurston plus [e1,e3] = e1, violates Jacobi",
    "affine-2": "affine algebra [e1,e2] = e2 with the standard triple, not unimodular",
    "e2xr": "e(2) x R with the standard triple, non-abelian unimodular Kähler",
    "b-sphere": "b-manifold (S^2, equator)",
    "torus-circle": "b-manifold (T^2, circle)",
    "cp1-ring": "cohomology ring of the projective line",
    "cp2-ring": "cohomology ring of the projective plane",
    "t2-ring": "cohomology ring of the 2-torus",
}


def model_preset(name: str, m: int | None = None) -> AlgebroidPresentation:
    if name not in MODEL_PRESETS:
        raise KeyError(name)
    if name == "abelian-2m":
        return MODEL_PRESETS[name](m if m is not None else 1)
    return MODEL_PRESETS[name]()
