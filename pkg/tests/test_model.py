from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kahler_algebroid import presets
from kahler_algebroid.errors import IncompleteModelError, ModelError
from kahler_algebroid.exact_linalg import Matrix, det
from kahler_algebroid.exterior import FormVector
from kahler_algebroid.model import (
    AlgebroidPresentation,
    change_basis,
    check_ellipticity,
    check_hodge_admissible,
    check_unimodular,
    ce_differential,
    d_squared_zero,
    differential_on_generators,
    normalize_integrating_section,
    validate,
    validate_jacobi,
    validate_kahler,
    validate_nijenhuis,
    volume_pairing,
)

import oracles


def to_sympy(m: Matrix):
    return sp.Matrix(m.nrows, m.ncols, lambda i, j: sp.Rational(m[i, j].numerator, m[i, j].denominator))


def structure_dicts(r):
    keys = [(i, j, k) for i in range(r) for j in range(i + 1, r) for k in range(r)]
    return st.dictionaries(st.sampled_from(keys), st.integers(-2, 2).filter(bool), max_size=4)


invertible = st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=4, max_size=4).map(Matrix)


def test_kt_differential():
    de = differential_on_generators(presets.kodaira_thurston())
    assert de[2] == FormVector.basis(4, (0, 1))
    assert all(de[i].is_zero() for i in (0, 1, 3))


def test_structure_is_normalized_to_i_lt_j():
    p = AlgebroidPresentation(3, {(1, 0, 2): F(1)})
    assert dict(p.structure) == {(0, 1, 2): F(-1)}
    assert p.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, -1]


@pytest.mark.parametrize("name", sorted(presets.MODEL_PRESETS))
def test_differential_matches_oracle(name):
    p = presets.model_preset(name)
    d = ce_differential(p)
    struct = {k: sp.Rational(v.numerator, v.denominator) for k, v in p.structure.items()}
    for k in range(p.rank):
        assert to_sympy(d[k]) == oracles.d_matrix(struct, p.rank, k)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 4).flatmap(lambda r: structure_dicts(r)))
def test_jacobi_iff_d_squared_zero(struct):
    r = 1 + max((max(k) for k in struct), default=2)
    r = max(r, 3)
    p = AlgebroidPresentation(r, {k: F(v) for k, v in struct.items()})
    jac, dsq = validate_jacobi(p), d_squared_zero(p)
    assert jac.ok == dsq.ok
    d1 = oracles.d_matrix(struct, r, 1)
    d2 = oracles.d_matrix(struct, r, 2)
    assert jac.ok == (d2 * d1).is_zero_matrix
    if not jac.ok:
        assert jac.witness["triple"] and jac.witness["residual"]


@settings(max_examples=25, deadline=None)
@given(invertible, st.sampled_from(["kt", "e2xr", "abelian-diag1212"]))
def test_lie_algebras_stay_lie_under_basis_change(a, name):
    assume(det(a) != 0)
    p = change_basis(presets.model_preset(name), a)
    assert validate_jacobi(p).ok and d_squared_zero(p).ok


@settings(max_examples=20, deadline=None)
@given(invertible)
def test_kahler_is_basis_independent(a):
    assume(det(a) != 0)
    p = change_basis(presets.euclidean_motions(), a)
    assert validate_kahler(p).ok
    assert check_unimodular(p).ok


def test_corrupted_kt_witness():
    v = validate_jacobi(presets.corrupted_kt())
    assert not v.ok
    assert v.witness["triple"] == (1, 2, 3)
    assert not d_squared_zero(presets.corrupted_kt()).ok


def test_kt_validation():
    rep = validate(presets.kodaira_thurston())
    assert rep.jacobi.ok and rep.symplectic.ok and rep.unimodular.ok
    assert rep.compatible_triple is None
    assert not rep.kahler.ok and "J" in rep.kahler.witness["missing"]
    assert not rep.hodge_admissible.ok


def test_nonintegrable_j():
    p = presets.kt_nonintegrable()
    v = validate_nijenhuis(p)
    assert not v.ok
    assert not validate_kahler(p).ok


@pytest.mark.parametrize("p", [presets.abelian(1), presets.abelian(2), presets.euclidean_motions()], ids=str)
def test_kahler_models(p):
    rep = validate(p)
    assert rep.all_ok


def test_affine_not_unimodular():
    v = check_unimodular(presets.affine())
    assert not v.ok
    assert v.witness["alpha"] == "e2"
    assert v.witness["stokes_pairing"] != 0
    assert v.witness["traces"] == {"e1": 1}
    assert not check_hodge_admissible(presets.affine()).ok


def test_missing_eta():
    with pytest.raises(IncompleteModelError):
        check_unimodular(presets.corrupted_kt())


def test_normalization():
    p = normalize_integrating_section(presets.abelian_scaled().with_(eta=F(7)))
    assert volume_pairing(p) == 1


def test_ellipticity():
    p = AlgebroidPresentation(2, {}, anchor=Matrix([[1, 0], [0, 0]]))
    assert not check_ellipticity(p).ok
    q = AlgebroidPresentation(2, {}, anchor=Matrix([[1, 0], [0, 1]]))
    assert check_ellipticity(q).ok


def test_invalid_presentations():
    with pytest.raises(ModelError):
        AlgebroidPresentation(3, {(0, 1, 5): F(1)})
    with pytest.raises(ModelError):
        AlgebroidPresentation(2, {}, metric=Matrix([[1, 0], [0, 1], [0, 0]]))
