"""End-to-end acceptance criteria, each run at its stated runtime limit."""

import json
import random
from fractions import Fraction as F
from math import comb

import sympy as sp

from kahler_algebroid import presets
from kahler_algebroid.cli import main
from kahler_algebroid.cohomology import cohomology, hodge_decomposition, laplacians
from kahler_algebroid.constructions import convolve, kunneth_dims, product, projective_ring
from kahler_algebroid.errors import ModelError
from kahler_algebroid.exact_linalg import Matrix, det
from kahler_algebroid.exterior import GradedOperator, commutator, lefschetz_triple, symplectic_star
from kahler_algebroid.lefschetz import (
    ADJOINT_IDENTITIES,
    betti_evenness_check,
    ddstar_lemma_check,
    equivalence_theorem_check,
    hard_lefschetz_check,
    intersection_pairing,
    kahler_identity_suite,
    symplectic_harmonic_check,
)
from kahler_algebroid.model import (
    AlgebroidPresentation,
    change_basis,
    check_hodge_admissible,
    check_unimodular,
    d_squared_zero,
    validate_jacobi,
    validate_symplectic,
)

import oracles


def corpus():
    """Every compiled model plus the identity corpus and two products."""
    out = [presets.model_preset(n) for n in sorted(presets.MODEL_PRESETS) if n != "abelian-2m"]
    out += [presets.abelian(m) for m in (1, 2, 3)]
    out += presets.identity_corpus()
    out.append(product(presets.kodaira_thurston(), presets.abelian(1)).model)
    out.append(product(presets.euclidean_motions(), presets.abelian(1)).model)
    return out


def _sym(struct):
    return {k: sp.Rational(v.numerator, v.denominator) for k, v in struct.items()}


def test_criterion_1_b_sphere(criterion, capsys):
    with criterion(1, "b-sphere reproduction", 1.0):
        code = main(["bgeometry", "b-sphere", "--m", "1"])
        rep = json.loads(capsys.readouterr().out)
        assert rep["dims"] == [1, 1, 2]
        at_k1 = [e for e in rep["hard_lefschetz"]["entries"] if e["k"] == 1]
        assert at_k1 and at_k1[0]["verdict"] == "impossible"
        assert (at_k1[0]["source_dim"], at_k1[0]["target_dim"]) == (1, 2)
        assert rep["hard_lefschetz"]["verdict"] == "impossible"
        assert code == 1


def test_criterion_2_kodaira_thurston(criterion):
    p = presets.kodaira_thurston()
    oracle = oracles.cohomology_dims(_sym(p.structure), p.rank)
    with criterion(2, "Kodaira-Thurston corpus model", 1.0):
        assert oracle == (1, 3, 4, 3, 1)
        assert cohomology(p).dims == oracle
        hl = hard_lefschetz_check(p)
        bad = hl.failing()
        assert [e.k for e in bad] == [1]
        assert bad[0].witness == "[e1]"
        assert not ddstar_lemma_check(p).ok
        assert not symplectic_harmonic_check(p).verdict.ok
        eq = equivalence_theorem_check(p)
        assert eq.consistent and not eq.hard_lefschetz


def test_criterion_3_hodge_admissible_positives(criterion):
    with criterion(3, "Hodge-admissible positives", 5.0):
        for m in (1, 2, 3):
            p = presets.abelian(m)
            v = check_hodge_admissible(p)
            assert v.ok, v.witness
            hl = hard_lefschetz_check(p)
            assert hl.ok and len(hl.entries) == m + 1
            res = cohomology(p, bigraded=True)
            for (a, b), h in res.bigraded.items():
                assert h == comb(m, a) * comb(m, b), (m, a, b, h)
            for k in range(2 * m + 1):
                assert sum(h for (a, b), h in res.bigraded.items() if a + b == k) == res.dims[k]


def test_criterion_4_identity_suite(criterion):
    models = presets.identity_corpus()
    with criterion(4, "Kähler identity suite", 30.0):
        assert len(models) >= 10 and all(p.rank <= 6 for p in models)
        failures = {}
        for p in models:
            rep = kahler_identity_suite(p, pairs=100, seed=0)
            assert not rep.inapplicable(), (p.name, rep.inapplicable())
            if rep.failed():
                failures[p.name] = rep.failed()
        assert not failures, f"{len(failures)}/{len(models)} models fail: {failures}"


def test_criterion_5_stokes_boundary(criterion):
    with criterion(5, "Stokes/unimodularity boundary", 1.0):
        p = presets.affine()
        v = check_unimodular(p)
        assert not v.ok
        assert v.witness["stokes_pairing"] != 0 and v.witness["alpha"]
        rep = kahler_identity_suite(p, pairs=10)
        assert set(rep.inapplicable()) == set(ADJOINT_IDENTITIES)
        for name in ADJOINT_IDENTITIES:
            assert rep.results[name].witness["stokes"]["stokes_pairing"] == v.witness["stokes_pairing"]
        assert not laplacians(p).star_route.ok
        try:
            intersection_pairing(p)
        except ModelError as exc:
            assert exc.witness["stokes_pairing"] != 0
        else:
            raise AssertionError("pairing computed on a non-unimodular model")


def test_criterion_6_kunneth(criterion):
    with criterion(6, "Künneth", 2.0):
        c1 = presets.abelian(1)
        prod = product(c1, c1).model
        assert cohomology(prod).dims == convolve(cohomology(c1).dims, cohomology(c1).dims) == (1, 4, 6, 4, 1)
        rep = kunneth_dims(c1, projective_ring(1))
        assert rep.dims == (1, 2, 2, 2, 1)
        assert rep.hl and rep.hard_lefschetz


def test_criterion_7_betti_evenness(criterion):
    models = corpus()
    with criterion(7, "Betti evenness", 2.0):
        checked = 0
        for p in models:
            if not check_hodge_admissible(p).ok:
                continue
            rep = betti_evenness_check(p)
            for j, b in rep.odd_dims.items():
                if rep.pairing_nondegenerate[j]:
                    assert b % 2 == 0, (p.name, j, b)
            checked += 1
        assert checked >= 10
        kt = betti_evenness_check(presets.kodaira_thurston())
        assert kt.odd_dims[1] == 3
        assert kt.pairing_nondegenerate[1] is False and kt.contrapositive[1]


def _perturbations(n, seed=0):
    """Half keep a Lie bracket by a change of basis, half add raw noise to the constants."""
    rng = random.Random(seed)
    bases = [presets.kodaira_thurston(), presets.euclidean_motions(), presets.affine(False)]
    out = []
    while len(out) < n:
        p = rng.choice(bases)
        r = p.rank
        if len(out) % 2 == 0:
            a = Matrix([[F(rng.randint(-2, 2)) for _ in range(r)] for _ in range(r)])
            if det(a) == 0:
                continue
            out.append(change_basis(p, a))
        else:
            struct = dict(p.structure)
            for _ in range(rng.randint(1, 2)):
                i, j = sorted(rng.sample(range(r), 2))
                k = rng.randrange(r)
                struct[(i, j, k)] = struct.get((i, j, k), F(0)) + F(rng.randint(-2, 2), rng.randint(1, 3))
            out.append(AlgebroidPresentation(r, {k: v for k, v in struct.items() if v}))
    return out


def test_criterion_8_property_suite(criterion):
    models = corpus()
    with criterion(8, "finite-model property suite", 60.0):
        # d² = 0 ⟺ Jacobi, with d² also taken from the evaluation oracle
        outcomes = set()
        for p in _perturbations(50):
            jac = validate_jacobi(p).ok
            assert jac == d_squared_zero(p).ok
            s = _sym(p.structure)
            if p.rank >= 3:
                assert jac == (oracles.d_matrix(s, p.rank, 2) * oracles.d_matrix(s, p.rank, 1)).is_zero_matrix
            outcomes.add(jac)
        assert outcomes == {True, False}

        symplectic = [p for p in models if p.omega is not None and validate_symplectic(p).ok]
        assert symplectic
        for p in symplectic:
            t = lefschetz_triple(p.omega)
            assert commutator(t.L, t.Lambda) == t.H, p.name
            assert commutator(t.H, t.L) == t.L.scale(2), p.name
            assert symplectic_star(p.omega).squared() == GradedOperator.identity(p.rank), p.name

        metric = [p for p in models if p.metric is not None]
        assert metric
        for p in metric:
            if check_unimodular(p).ok:
                hd = hodge_decomposition(p)
            else:
                # the diagnostic comes first; the Gram decomposition itself still holds
                try:
                    hodge_decomposition(p)
                except ModelError as exc:
                    assert exc.witness["stokes_pairing"] != 0
                else:
                    raise AssertionError(f"{p.name}: non-unimodular model not diagnosed")
                hd = hodge_decomposition(p, require_unimodular=False)
            assert hd.orthogonal.ok and hd.spans.ok, (p.name, hd)
            assert hd.kernel_of_laplacian.ok and hd.unique_representatives.ok, (p.name, hd)
