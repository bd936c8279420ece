import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckcontact.calculus.fields import StructureTable
from ckcontact.calculus.ops import lie_bracket, lie_derivative, pullback_twotensor
from ckcontact.errors import ChartError, DomainError, TableInvalid
from ckcontact.geometry import (
    GENERATOR_PAIRS,
    NINE_SPACES,
    ORIGIN,
    PARALLEL,
    POLAR,
    KappaTriple,
    ambient_metric,
    casimir_invariance,
    ck_structure_table,
    connection_polar,
    embed_parallel,
    embed_parallel_fn,
    embed_polar,
    embed_polar_fn,
    generator_matrix,
    group_exp,
    killing_field,
    killing_fields,
    metric_at,
    metric_parallel,
    metric_polar,
    normalized_triples,
    parallel_of_ambient,
    polar_of_ambient,
    quadratic_form,
    sample_chart,
    subsidiary_metric,
)
from ckcontact.ktrig import ck_cos, ck_sin

triples = st.sampled_from([tuple(k) for k in normalized_triples()])

# exp(0.7 Γ(J02)) on κ = (1, -1, 1), 20-digit mpmath expm
GEXP_ADS_02 = np.array([
    [1.2551690056309430182, 0.0, 0.75858370183953350346, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.75858370183953350346, 0.0, 1.2551690056309430182, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])


def I(k):
    return np.diag(KappaTriple.of(k).diag)


@pytest.mark.parametrize("k, p, want", [
    ((1, 1, 1), ORIGIN, 1.0),
    ((1, -1, 1), (0, 0, 1, 0), -1.0),
    ((0, 1, 1), (1, 5, 2, 3), 1.0),
])
def test_quadratic_form(k, p, want):
    assert quadratic_form(k, p, p) == want


def test_embed_parallel_values():
    np.testing.assert_allclose(embed_parallel((1, 1, 1), (0, 0, 0)), [1, 0, 0, 0])
    np.testing.assert_allclose(embed_parallel((1, 1, 1), (math.pi / 2, 0, 0)), [0, 1, 0, 0], atol=1e-16)
    np.testing.assert_allclose(embed_parallel((0, 1, 1), (0.4, -1.2, 2.0)), [1, 0.4, -1.2, 2.0])


def test_embed_polar_values():
    for phi in (0.0, 1.3, -2.0):
        np.testing.assert_allclose(embed_polar((1, 1, 1), (math.pi / 2, 0, phi)), [0, 1, 0, 0], atol=1e-16)
    np.testing.assert_allclose(embed_polar((-1, 1, 1), (1, 0, 0)), [math.cosh(1), math.sinh(1), 0, 0])


def test_embed_polar_rejects_origin():
    with pytest.raises(ChartError):
        embed_polar((1, 1, 1), (0.0, 0.2, 0.3))


@given(triples, st.integers(0, 2 ** 32 - 1))
def test_embeddings_land_on_the_quadric(k, seed):
    rng = np.random.default_rng(seed)
    for chart, emb in ((PARALLEL, embed_parallel), (POLAR, embed_polar)):
        c = sample_chart(k, chart, 20, rng)
        x = emb(k, c)
        assert np.max(np.abs(np.einsum("ni,ij,nj->n", x, I(k), x) - 1)) < 1e-12


@pytest.mark.parametrize("name", list(NINE_SPACES))
def test_chart_inverses(name, rng):
    k = NINE_SPACES[name]
    c = sample_chart(k, PARALLEL, 30, rng)
    np.testing.assert_allclose(parallel_of_ambient(k, embed_parallel(k, c)), c, atol=1e-10)
    c = sample_chart(k, POLAR, 30, rng)
    np.testing.assert_allclose(polar_of_ambient(k, embed_polar(k, c)), c, atol=1e-9)


def test_metric_examples(rng):
    for c in sample_chart((0, 1, 1), PARALLEL, 5, rng):
        np.testing.assert_allclose(metric_at((0, 1, 1), PARALLEL, c), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(metric_at((1, 1, 1), PARALLEL, (0, 0, 0)), np.eye(3))
    for c in sample_chart((1, 0, 1), PARALLEL, 5, rng):
        np.testing.assert_allclose(metric_at((1, 0, 1), PARALLEL, c), np.diag([1, 0, 0]), atol=1e-15)


def test_polar_metric_examples():
    # flat: dr² + r² dθ² + r² sin²θ dφ²
    r, th = 1.3, 0.4
    np.testing.assert_allclose(metric_at((0, 1, 1), POLAR, (r, th, 0.2)),
                               np.diag([1, r * r, r * r * math.sin(th) ** 2]), atol=1e-15)
    np.testing.assert_allclose(metric_at((1, 0, 1), POLAR, (r, th, 0.2)), np.diag([1, 0, 0]))


@pytest.mark.parametrize("name", [n for n, k in NINE_SPACES.items() if k[0] != 0])
def test_metric_is_pullback_of_ambient(name, rng):
    k = NINE_SPACES[name]
    for chart, emb, m in ((PARALLEL, embed_parallel_fn, metric_parallel), (POLAR, embed_polar_fn, metric_polar)):
        c = sample_chart(k, chart, 30, rng)
        pulled = pullback_twotensor(ambient_metric(k), emb(k), chart).at(c) / k[0]
        assert np.max(np.abs(pulled - m(k).at(c))) < 1e-9


def test_subsidiary_metric():
    for k in ((1, 0, 1), (0, 0, 1), (-1, 0, 1)):
        np.testing.assert_array_equal(subsidiary_metric(k), np.eye(2))
        np.testing.assert_array_equal(subsidiary_metric(k, 0.0), subsidiary_metric(k, 7.0))
    with pytest.raises(DomainError):
        subsidiary_metric((1, 1, 1))


def test_connection_examples():
    g = connection_polar((0, 1, 1), (2.0, 0.7, 0.3)).gamma
    assert g[1, 1, 0] == pytest.approx(0.5)
    assert g[1, 0, 1] == pytest.approx(0.5)
    g = connection_polar((1, 1, 0), (0.8, 0.6, 0.3)).gamma
    assert g[0, 2, 2] == 0 and g[1, 2, 2] == 0


def test_connection_symmetry_and_zeros():
    g = connection_polar((1, -1, 1), (0.8, 0.6, 0.3)).gamma
    np.testing.assert_allclose(g, np.transpose(g, (0, 2, 1)))
    listed = {(1, 1, 0), (1, 0, 1), (2, 2, 0), (2, 0, 2), (2, 2, 1), (2, 1, 2), (0, 1, 1), (0, 2, 2), (1, 2, 2)}
    for idx in np.ndindex(3, 3, 3):
        if idx not in listed:
            assert g[idx] == 0


def test_connection_geodesic_on_sphere():
    # the equator r(t) = t, θ = 0 is a geodesic through the origin region of S³
    c = connection_polar((1, 1, 1), (0.9, 0.5, 0.1))
    np.testing.assert_allclose(c.acceleration([1, 0, 0], [0, 0, 0]), 0, atol=1e-15)


def test_killing_at_origin():
    np.testing.assert_allclose(killing_field((1, 1, 1), 0, 1).at(np.array(ORIGIN)), [0, -1, 0, 0])


def test_killing_rejects_bad_indices():
    with pytest.raises(ValueError):
        killing_field((1, 1, 1), 2, 1)


@pytest.mark.parametrize("k", [tuple(k) for k in normalized_triples()])
def test_killing_brackets_reproduce_table(k, rng):
    J = killing_fields(k)
    table = ck_structure_table(k)
    x = rng.uniform(-2, 2, (10, 4))
    worst = 0.0
    for i in range(6):
        for j in range(6):
            lhs = lie_bracket(J[i], J[j], x)
            rhs = sum(table.c[i, j, m] * J[m].at(x) for m in range(6))
            worst = max(worst, np.max(np.abs(lhs - rhs)))
    assert worst < 1e-9


@pytest.mark.parametrize("k", [tuple(k) for k in normalized_triples()])
def test_table_is_a_lie_algebra(k):
    assert ck_structure_table(k).jacobi_residual() < 1e-15


@given(triples, st.integers(0, 2 ** 32 - 1))
def test_killing_fields_are_isometries(k, seed):
    x = np.random.default_rng(seed).uniform(-2, 2, (5, 4))
    for K in killing_fields(k):
        assert np.max(np.abs(lie_derivative(K, ambient_metric(k), x))) < 1e-12


def test_rotation_killing_oracle(rng):
    x = rng.uniform(-2, 2, (100, 4))
    assert np.max(np.abs(lie_derivative(killing_field((1, 1, 1), 2, 3), ambient_metric((1, 1, 1)), x))) < 1e-9


def test_group_exp_values():
    np.testing.assert_array_equal(group_exp((1, 1, 1), 1, 3, 0.0), np.eye(4))
    for k in NINE_SPACES.values():
        s = 0.7
        kt = KappaTriple.of(k)
        o = group_exp(k, 0, 1, s) @ np.array(ORIGIN)
        np.testing.assert_allclose(o, [ck_cos(kt.k1, s), ck_sin(kt.k1, s), 0, 0], atol=1e-15)
    np.testing.assert_allclose(group_exp((1, -1, 1), 0, 2, 0.7), GEXP_ADS_02, atol=1e-15)


@given(st.tuples(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2)),
       st.sampled_from(GENERATOR_PAIRS), st.floats(-3, 3))
def test_group_exp_is_isometry(k, ab, s):
    m = group_exp(k, *ab, s)
    scale = max(1.0, np.max(np.abs(m)) ** 2)
    assert np.max(np.abs(m.T @ I(k) @ m - I(k))) < 1e-12 * scale


@given(triples, st.sampled_from(GENERATOR_PAIRS), st.floats(-1, 1), st.floats(-1, 1))
def test_group_exp_is_one_parameter(k, ab, s, t):
    lhs = group_exp(k, *ab, s) @ group_exp(k, *ab, t)
    assert np.max(np.abs(lhs - group_exp(k, *ab, s + t))) < 1e-12
    # and it is generated by Γ(J_ab)
    h = 1e-6
    fd = (group_exp(k, *ab, h) - group_exp(k, *ab, -h)) / (2 * h)
    assert np.max(np.abs(fd - generator_matrix(k, *ab))) < 1e-8


def test_casimirs():
    assert casimir_invariance((1, 1, 1)) < 1e-10
    assert casimir_invariance((0, 0, 0)) < 1e-10
    t = ck_structure_table((1, 1, 1))
    c = t.c.copy()
    c[0, 1, 3] += 0.1
    c[1, 0, 3] -= 0.1
    assert casimir_invariance((1, 1, 1), StructureTable(c)) > 1e-3


def test_table_rejects_non_antisymmetric():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0
    with pytest.raises(TableInvalid):
        StructureTable(c)


def test_kappa_triple():
    k = KappaTriple.of((1, -1, 0))
    assert (k.k01, k.k02, k.k03, k.k12, k.k13, k.k23) == (1, -1, 0, -1, 0, 0)
    assert k.k(2, 0) == k.k02
    assert k.is_normalized and not KappaTriple.of((0.5, 1, 1)).is_normalized
    assert len(normalized_triples()) == 27 and len(normalized_triples((1,))) == 9
