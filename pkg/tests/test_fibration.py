import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckcontact.calculus import autonomous, integrate
from ckcontact.calculus.ops import d_scalar
from ckcontact.contact import contact_structure
from ckcontact.errors import NotLiouville, NotRegular, UnsupportedKappa
from ckcontact.fibration import (
    commutation_check,
    de_sitter_orbits,
    fibration,
    in_domain,
    project_system,
    reeb_flow,
    verify_pullback,
)
from ckcontact.geometry import AMBIENT, NINE_SPACES, ORIGIN, KappaTriple, embed_parallel, sample_ambient
from ckcontact.ktrig import ck_cos, ck_sin
from ckcontact.reduction import DEFAULT_REDUCTIONS, compare_flows, reduction_pair
from ckcontact.systems import liouville as lv
from ckcontact.systems.catalog import catalog_get, instantiate, pairing_residual, structure_residual

O = np.array(ORIGIN)
REGULAR = [n for n, k in NINE_SPACES.items() if tuple(k) != (-1, -1, 1)]
seeds = st.integers(0, 2 ** 32 - 1)

# mpmath expm of the Reeb generator on H³, 25 digits, rounded to 20
H3_X = np.array([1.0716510864249495898, 0.31218547762303769182, 0.20234352173349332239, 0.10016675001984402582])
H3_FL08 = np.array([3.5037604168735025704, 3.3504269549197054399, 0.094215705046914813489, -0.20518206432230707575])


def _sup(a):
    return float(np.max(np.abs(a)))


def test_reeb_flow_identity_at_zero(rng):
    for k in NINE_SPACES.values():
        x = sample_ambient(k, 10, rng)
        np.testing.assert_array_equal(reeb_flow(k, x, 0.0), x)


def test_reeb_flow_half_period_on_sphere():
    np.testing.assert_allclose(reeb_flow((1, 1, 1), O, math.pi / 2), [-1, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("name", list(NINE_SPACES))
def test_orbit_through_origin(name):
    k = NINE_SPACES[name]
    k1 = KappaTriple.of(k).k1
    for t in (0.3, 1.1, 2.5):
        np.testing.assert_allclose(reeb_flow(k, O, t), [ck_cos(k1, 2 * t), ck_sin(k1, 2 * t), 0, 0], atol=1e-15)


def test_h3_flow_matches_frozen_oracle():
    x = embed_parallel((-1, 1, 1), (0.3, 0.2, 0.1))
    np.testing.assert_allclose(x, H3_X, rtol=1e-15)
    np.testing.assert_allclose(reeb_flow((-1, 1, 1), x, 0.8), H3_FL08, rtol=1e-14)


@pytest.mark.parametrize("name", list(NINE_SPACES))
def test_reeb_flow_solves_the_reeb_equation(name, rng):
    k = NINE_SPACES[name]
    R = contact_structure(k, AMBIENT).reeb
    x0 = sample_ambient(k, 1, rng)[0]
    traj = integrate(autonomous(R), x0, 0.0, 5.0, tol=1e-12)
    ts = np.linspace(0, 5, 21)
    closed = np.array([reeb_flow(k, x0, t) for t in ts])
    scale = max(1.0, _sup(closed))
    assert _sup(traj.at(ts) - closed) < 1e-7 * scale


@given(st.sampled_from(list(NINE_SPACES)), seeds, st.floats(-3, 3), st.floats(-3, 3))
def test_reeb_flow_group_law(name, seed, s, t):
    k = NINE_SPACES[name]
    x = sample_ambient(k, 3, np.random.default_rng(seed))
    mid = reeb_flow(k, x, s)
    a = reeb_flow(k, mid, t)
    b = reeb_flow(k, x, s + t)
    # the second step multiplies the rounding error of mid by the operator size of Fl_t
    scale = max(1.0, _sup(mid)) * max(1.0, _sup(reeb_flow(k, np.eye(4), t)))
    assert _sup(a - b) < 1e-13 * scale


@pytest.mark.parametrize("k", [(1, 1, 1), (1, -1, 1)])
def test_compact_fibers_are_periodic(k, rng):
    x = sample_ambient(k, 20, rng)
    assert _sup(reeb_flow(k, x, math.pi) - x) < 1e-9


@pytest.mark.parametrize("name", [n for n in REGULAR if NINE_SPACES[n][0] <= 0])
def test_noncompact_fibers_do_not_close(name, rng):
    k = NINE_SPACES[name]
    x = sample_ambient(k, 5, rng)
    ts = np.linspace(0.25, 5, 20)
    disp = [np.min(np.linalg.norm(reeb_flow(k, x, t) - x, axis=-1)) for t in ts]
    assert min(disp) > 1e-3


def test_hopf_values():
    f = fibration((1, 1, 1))
    np.testing.assert_allclose(f(O), [1, 0, 0])
    assert f.target == "s2" and f.structure_group == "SO(2)"


@pytest.mark.parametrize("k", [(1, 0, 1), (-1, 0, 1), (0, 1, 1)])
def test_planar_projection(k, rng):
    f = fibration(k)
    x = sample_ambient(k, 10, rng)
    np.testing.assert_array_equal(f(x), x[:, 2:])


def test_de_sitter_is_not_regular():
    with pytest.raises(NotRegular):
        fibration((-1, -1, 1))
    with pytest.raises(UnsupportedKappa):
        fibration((1, 1, -1))


def test_de_sitter_orbits_differ():
    o, q = de_sitter_orbits(np.linspace(0, 2 * math.pi, 200))
    assert np.max(np.abs(o)) > 1e4
    assert np.max(np.abs(q)) <= 1 + 1e-12
    np.testing.assert_allclose(q[-1], q[0], atol=1e-12)


@pytest.mark.parametrize("name", REGULAR)
def test_pullback_identity(name, rng):
    k = NINE_SPACES[name]
    f = fibration(k)
    cs = contact_structure(k, AMBIENT)
    x = sample_ambient(k, 100, rng)
    x = x[in_domain(f, x)]
    assert len(x) >= 50
    assert verify_pullback(f, cs, x) < 1e-9


@pytest.mark.parametrize("k", [(1, 1, 1), (1, -1, 1)])
def test_reeb_direction_is_in_the_kernel(k, rng):
    f = fibration(k)
    cs = contact_structure(k, AMBIENT)
    x = sample_ambient(k, 20, rng)
    x = x[in_domain(f, x)]
    R = cs.reeb.at(x)
    w = rng.normal(size=x.shape)
    w -= np.einsum("ni,i,ni->n", w, KappaTriple.of(k).diag, x)[:, None] * x
    assert verify_pullback(f, cs, x, R, w) < 1e-10


@given(st.sampled_from(REGULAR), seeds)
def test_fiber_invariance(name, seed):
    k = NINE_SPACES[name]
    rng = np.random.default_rng(seed)
    f = fibration(k)
    x = sample_ambient(k, 5, rng)
    x = x[in_domain(f, x)]
    for t in rng.uniform(-2, 2, 20):
        y = reeb_flow(k, x, t)
        assert f.distance(f(y), f(x)) < 1e-9 * max(1.0, _sup(f(x)))


def test_s2_fields_at_the_origin():
    Y1 = lv.s2_fields_parallel()[0]
    np.testing.assert_array_equal(Y1.at(np.array([0.0, 0.0])), [0.0, 0.0])


def test_s2_hamiltonians_close_on_so3(rng):
    f = fibration((1, 1, 1))
    p = rng.normal(size=(30, 3))
    p /= np.linalg.norm(p, axis=-1, keepdims=True)
    Y = [X.at(p) for X in lv.s2_fields()]
    h = [g.at(p) for g in lv.s2_hamiltonians()]
    w = f.omega.at(p)
    eps = np.zeros((3, 3, 3))
    for i, j, m in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, m], eps[j, i, m] = 1, -1
    for i in range(3):
        for j in range(3):
            br = np.einsum("na,nab,nb->n", Y[i], w, Y[j])
            assert _sup(br + sum(eps[i, j, m] * h[m] for m in range(3))) < 1e-12
    # ι_Y ω = dh on tangent vectors
    t = rng.normal(size=p.shape)
    t -= np.einsum("ni,ni->n", t, p)[:, None] * p
    for Yi, hi in zip(Y, lv.s2_hamiltonians()):
        dh = np.broadcast_to(d_scalar(hi).at(p), p.shape)
        lhs = np.einsum("na,nab,nb->n", Yi, w, t)
        assert _sup(lhs - np.einsum("na,na->n", dh, t)) < 1e-12


def test_flat_reduced_fields():
    q, p = 0.7, -1.3
    got = [X.at(np.array([q, p])) for X in lv.plane_fields("flat")]
    want = [[1, 0], [q, -p], [0, 0], [0, -1], [0, -q], [p, 0]]
    np.testing.assert_allclose(got, want)


def test_project_system_rejects_non_liouville():
    with pytest.raises(NotLiouville):
        project_system(catalog_get("sp4-ck", (1, 1, 1), AMBIENT), fibration((1, 1, 1)))


def test_projected_systems_close_on_their_tables(rng):
    for sid, k in DEFAULT_REDUCTIONS.items():
        if k is None:
            continue
        down = reduction_pair(sid, k).downstairs
        pts = down.sample(30, rng)
        assert structure_residual(down, pts) < 1e-9, sid
        if down.chart != "s2":
            assert pairing_residual(down, pts) < 1e-9, sid


def test_zero_coefficients_commute_trivially():
    pair = reduction_pair("liouville-s3", (1, 1, 1))
    res, _, _ = compare_flows(pair, {}, t1=2.0)
    assert res == 0.0


def test_liouville_s3_commutation():
    pair = reduction_pair("liouville-s3", (1, 1, 1))
    res, tu, td = compare_flows(pair, {"a1": "1", "a2": "0.3", "a3": "0.2*sin(t)", "a4": "0.5"}, t1=5.0)
    assert res < 1e-6
    assert tu.t[-1] == td.t[-1] == 5.0


def test_oscillator_commutation():
    pair = reduction_pair("osc2d")
    res, _, _ = compare_flows(pair, {"b1": "1", "b3": "(1+0.5*sin(t))*(1+0.5*sin(t))"}, t1=5.0)
    assert res < 1e-6


@pytest.mark.parametrize("sid", ["liouville-ads", "liouville-flat", "liouville-nh", "liouville-h3", "thermo"])
def test_other_reductions_commute(sid):
    res, _, _ = compare_flows(reduction_pair(sid, DEFAULT_REDUCTIONS[sid]), t1=5.0)
    assert res < 1e-6


def test_commutation_detects_a_wrong_downstairs_flow():
    pair = reduction_pair("liouville-flat", (0, 1, 1))
    up = instantiate(pair.upstairs, {"b2": "1"})
    down = instantiate(pair.downstairs, {"b4": "1"})
    res, _, _ = commutation_check(up, down, pair.project, pair.upstairs.x0, 0.0, 2.0)
    assert res > 1e-2
    assert pair.upstairs.chart == AMBIENT
