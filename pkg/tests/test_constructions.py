import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_algebroid import presets
from kahler_algebroid.cohomology import cohomology
from kahler_algebroid.constructions import (
    BManifoldSpec,
    b_hard_lefschetz_obstruction,
    convolve,
    kunneth_dims,
    mazzeo_melrose,
    point_ring,
    product,
    projective_ring,
    torus_ring,
)
from kahler_algebroid.errors import ModelError
from kahler_algebroid.lefschetz import hard_lefschetz_check
from kahler_algebroid.model import validate

SMALL = ["abelian-2m", "kt", "affine-2", "e2xr"]


def test_convolve():
    assert convolve((1, 2, 1), (1, 2, 1)) == (1, 4, 6, 4, 1)
    assert convolve((1,), (1, 3, 1)) == (1, 3, 1)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(["abelian-2m", "affine-2"]))
def test_product_cohomology_is_convolution(a, b):
    p1, p2 = presets.model_preset(a), presets.model_preset(b)
    prod = product(p1, p2).model
    assert cohomology(prod).dims == convolve(cohomology(p1).dims, cohomology(p2).dims)


def test_product_of_kahler_is_kahler():
    prod = product(presets.abelian(1), presets.euclidean_motions()).model
    assert validate(prod).all_ok
    assert hard_lefschetz_check(prod).ok


def test_product_drops_one_sided_data():
    prod = product(presets.kodaira_thurston(), presets.abelian(1)).model
    assert prod.metric is None and prod.J is None
    assert prod.omega is not None and prod.eta == 1
    assert not hard_lefschetz_check(prod).ok


@pytest.mark.parametrize("ring", [projective_ring(1), projective_ring(2), projective_ring(3), torus_ring(), point_ring()],
                         ids=lambda r: r.name or "ring")
def test_rings(ring):
    if ring.dims != (1,):
        ring.validate()
    assert all(ring.hard_lefschetz().values())


def test_projective_ring_dims():
    assert projective_ring(2).dims == (1, 0, 1, 0, 1)


def test_kunneth_projective_line():
    rep = kunneth_dims(presets.abelian(1), projective_ring(1))
    assert rep.dims == (1, 2, 2, 2, 1)
    assert rep.hard_lefschetz


def test_kunneth_torus_matches_product():
    rep = kunneth_dims(presets.abelian(1), torus_ring())
    assert rep.dims == cohomology(presets.abelian(2)).dims
    assert rep.hard_lefschetz


def test_kunneth_kt_fails_hl():
    rep = kunneth_dims(presets.kodaira_thurston(), projective_ring(1))
    assert rep.dims == convolve((1, 3, 4, 3, 1), (1, 0, 1))
    assert not rep.hard_lefschetz


def test_kunneth_with_point():
    rep = kunneth_dims(presets.euclidean_motions(), point_ring())
    assert rep.dims == cohomology(presets.euclidean_motions()).dims
    assert rep.hard_lefschetz == hard_lefschetz_check(presets.euclidean_motions()).ok


def test_b_sphere():
    spec = presets.b_sphere()
    assert mazzeo_melrose(spec) == (1, 1, 2)
    rep = b_hard_lefschetz_obstruction(spec, 1)
    assert rep.verdict == "impossible"
    e = rep.entries[1]
    assert (e.k, e.source_dim, e.target_dim, e.verdict) == (1, 1, 2, "impossible")
    assert "surjective" in e.reason
    assert rep.entries[0].verdict == "inconclusive"


def test_torus_circle():
    spec = presets.torus_circle()
    assert mazzeo_melrose(spec) == (1, 3, 2)
    assert b_hard_lefschetz_obstruction(spec, 1).verdict == "impossible"


def test_no_hypersurface_is_inconclusive():
    rep = b_hard_lefschetz_obstruction(BManifoldSpec((1, 0, 1)), 1)
    assert rep.verdict == "inconclusive"


@settings(max_examples=30)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=5), st.lists(st.integers(0, 4), max_size=4))
def test_mazzeo_melrose_total(bM, bZ):
    bM[0] = max(bM[0], 1)
    if bZ:
        bZ[0] = max(bZ[0], 1)
    dims = mazzeo_melrose(BManifoldSpec(bM, bZ))
    assert sum(dims) == sum(bM) + sum(bZ)


def test_invalid_spec():
    with pytest.raises(ModelError):
        BManifoldSpec((0, 1))
    with pytest.raises(ModelError):
        BManifoldSpec((1, -1, 1))
