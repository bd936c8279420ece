import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckcontact.calculus import ScalarField, lie_bracket
from ckcontact.calculus.fields import components
from ckcontact.calculus.linalg import as_array
from ckcontact.calculus.ops import exterior_d, pullback_twotensor
from ckcontact.contact import contact_structure, verify_contact_condition
from ckcontact.errors import DomainError
from ckcontact.geometry import AMBIENT, NINE_SPACES, PARALLEL, KappaTriple, embed_parallel_fn, quadratic_form, sample_chart
from ckcontact.symplectic import (
    LHSystem,
    SymplecticStructure,
    canonical_omega,
    hamiltonian_field,
    homogeneity_check,
    liouville_form,
    parity_check,
    poisson_bracket,
    poisson_matrix,
    project_field,
    reduce_hamiltonian,
    reduced_contact_form,
)
from ckcontact.systems import oscillator as osc
from ckcontact.systems import sp4, thermo

SS = SymplecticStructure(AMBIENT, canonical_omega(AMBIENT, [(0, 1), (2, 3)], 4))
DELTA = sp4.scaling_field()
seeds = st.integers(0, 2 ** 32 - 1)
space_names = st.sampled_from(list(NINE_SPACES))


def _sup(a):
    return float(np.max(np.abs(a)))


def test_canonical_omega_matrix():
    w = SS.omega.at(np.zeros(4))
    np.testing.assert_array_equal(w, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_hamiltonian_field_of_h5(rng):
    x = rng.uniform(-2, 2, (20, 4))
    X = hamiltonian_field(SS, sp4.r4_hamiltonians()[4]).at(x)
    want = np.zeros_like(x)
    want[:, 1] = -x[:, 0]
    np.testing.assert_allclose(X, want, atol=1e-15)


def test_constant_hamiltonian_has_zero_field(rng):
    x = rng.uniform(-2, 2, (20, 4))
    assert _sup(hamiltonian_field(SS, ScalarField(AMBIENT, lambda p: 2.0 + 0.0 * p[0])).at(x)) == 0.0


def test_r4_pairing(rng):
    x = rng.uniform(-2, 2, (50, 4))
    lh = LHSystem(SS, tuple(sp4.r4_fields()), tuple(sp4.r4_hamiltonians()))
    assert lh.hamiltonian_residual(x) < 1e-12


def test_poisson_bracket_examples(rng):
    x = rng.uniform(-2, 2, (20, 4))
    h = sp4.r4_hamiltonians()
    np.testing.assert_allclose(poisson_bracket(SS, h[0], h[1], x), -h[1].at(x), atol=1e-12)
    z = osc.sample_canonical(20, rng)
    ho = osc.hamiltonians()
    np.testing.assert_allclose(poisson_bracket(osc.structure(), ho[0], ho[2], z), -ho[1].at(z), atol=1e-12)


def test_poisson_table_is_minus_lie_table(rng):
    x = rng.uniform(-2, 2, (50, 4))
    hams = sp4.r4_hamiltonians()
    P = poisson_matrix(SS, hams, x)
    H = np.stack([h.at(x) for h in hams], -1)
    assert _sup(P + np.einsum("ijk,nk->nij", sp4.sp4_table().c, H)) < 1e-10
    # and the fields close on the Lie table with the opposite sign
    F = sp4.r4_fields()
    c = sp4.sp4_table().c
    worst = max(_sup(lie_bracket(F[i], F[j], x) - np.einsum("k,nka->na", c[i, j], np.stack([f.at(x) for f in F], 1)))
                for i in range(10) for j in range(10))
    assert worst < 1e-12


def test_oscillator_angular_momentum_commutes(rng):
    z = osc.sample_canonical(30, rng)
    P = poisson_matrix(osc.structure(), osc.hamiltonians() + [osc.angular_momentum()], z)
    assert _sup(P[:, :3, 3]) < 1e-12


def test_homogeneity_examples(rng):
    x = rng.uniform(-2, 2, (30, 4))
    h5 = sp4.r4_hamiltonians()[4]
    assert homogeneity_check(DELTA, h5, 1.0, x) < 1e-12
    assert homogeneity_check(DELTA, h5, 2.0, x) > 1e-2
    assert homogeneity_check(DELTA, SS.omega, 1.0, x) < 1e-12
    for X in sp4.r4_fields():
        assert homogeneity_check(DELTA, X, 0.0, x) < 1e-12
        assert _sup(lie_bracket(DELTA, X, x)) < 1e-12


def test_thermo_scaling_and_parity(rng):
    w = thermo.sample_phase(30, rng)
    sc = thermo.scaling()
    assert sc.group == "R*"
    for h in thermo.phase_hamiltonians():
        assert homogeneity_check(sc.delta, h, 1.0, w) < 1e-12
        assert parity_check(sc.flip, h, 1, w) < 1e-12
        assert parity_check(sc.flip, h, 2, w) > 1e-3


@pytest.mark.parametrize("ss, delta, sampler", [
    (SS, DELTA, lambda rng: rng.uniform(-2, 2, (30, 4))),
    (osc.structure(), osc.scaling().delta, lambda rng: osc.sample_canonical(30, rng)),
    (thermo.structure(), thermo.scaling().delta, lambda rng: thermo.sample_phase(30, rng)),
])
def test_liouville_potential(ss, delta, sampler, rng):
    # λ = -ι_Δ ω satisfies ω = -dλ exactly when L_Δ ω = ω
    x = sampler(rng)
    lam_neg = liouville_form(ss, delta)
    assert _sup(exterior_d(lam_neg).at(x) - ss.omega.at(x)) < 1e-12


def test_reducing_the_scaling_function_gives_one(rng):
    F = osc.scaling_function()
    r = osc.sample_reduced(20, rng)
    np.testing.assert_allclose(reduce_hamiltonian(F, F, osc.section, osc.REDUCED).at(r), 1.0, atol=1e-15)


def test_reduce_rejects_vanishing_scaling_function():
    F = ScalarField(osc.CANONICAL, lambda p: p[0] + 0.0 * p[1])
    with pytest.raises(DomainError):
        reduce_hamiltonian(F, F, osc.section, osc.REDUCED, probes=np.array([[1.0, np.pi / 2, 0.0]]))


def _sigma_quadric(k):
    kt = KappaTriple.of(k)
    return ScalarField(AMBIENT, lambda p: quadratic_form(kt, p, p), "I")


@pytest.mark.parametrize("name", list(NINE_SPACES))
def test_reduced_hamiltonians_match_ck(name, rng):
    k = NINE_SPACES[name]
    c = sample_chart(k, PARALLEL, 30, rng)
    for h, hk in zip(sp4.r4_hamiltonians(), sp4.ck_hamiltonians(k)):
        red = reduce_hamiltonian(h, _sigma_quadric(k), embed_parallel_fn(k), PARALLEL)
        assert _sup(red.at(c) - hk.at(c)) < 1e-12


@pytest.mark.parametrize("k", [(1, 1, 1), (1, -1, 1)])
def test_reduced_form_is_the_contact_form(k, rng):
    c = sample_chart(k, PARALLEL, 30, rng)
    eta = reduced_contact_form(SS, DELTA, embed_parallel_fn(k), PARALLEL)
    assert _sup(eta.at(c) - contact_structure(k, PARALLEL).eta.at(c)) < 1e-12


def test_oscillator_reduction(rng):
    r = osc.sample_reduced(50, rng)
    ss = osc.structure()
    eta = reduced_contact_form(ss, osc.scaling().delta, osc.section, osc.REDUCED)
    assert _sup(eta.at(r) - osc.reduced_eta().at(r)) < 1e-12
    cs = osc.reduced_contact()
    assert np.min(np.abs(verify_contact_condition(cs, r))) > 1e-6
    for h, hh in zip(osc.hamiltonians(), osc.reduced_hamiltonians()):
        assert _sup(reduce_hamiltonian(h, osc.scaling_function(), osc.section, osc.REDUCED).at(r) - hh.at(r)) < 1e-12
    for X, Y in zip(osc.fields(), osc.reduced_fields()):
        assert _sup(project_field(X, osc.projection, osc.section, osc.REDUCED).at(r) - Y.at(r)) < 1e-12


def test_oscillator_split_polar_chart(rng):
    z = osc.sample_canonical(30, rng)
    u = as_array(osc.split_polar_of(components(z)))
    om = pullback_twotensor(osc.structure().omega, osc.canonical_of, osc.SPLIT_POLAR).at(u)
    assert _sup(om - osc.split_polar_omega().at(u)) < 1e-12
    sp_ss = SymplecticStructure(osc.SPLIT_POLAR, osc.split_polar_omega())
    for X, h in zip(osc.split_polar_fields(), osc.split_polar_hamiltonians()):
        assert _sup(hamiltonian_field(sp_ss, h).at(u) - X.at(u)) < 1e-10


@given(st.integers(0, 9), st.integers(0, 9), seeds)
def test_brackets_of_homogeneous_functions_are_homogeneous(i, j, seed):
    x = np.random.default_rng(seed).uniform(-2, 2, (5, 4))
    h = sp4.r4_hamiltonians()
    assert homogeneity_check(DELTA, poisson_bracket(SS, h[i], h[j]), 1.0, x) < 1e-10


@given(seeds)
def test_poisson_bracket_antisymmetry_and_leibniz(seed):
    x = np.random.default_rng(seed).uniform(-2, 2, (5, 4))
    h = sp4.r4_hamiltonians()
    f, g, k = h[1], h[5], h[8]
    np.testing.assert_allclose(poisson_bracket(SS, f, g, x), -poisson_bracket(SS, g, f, x), atol=1e-12)
    gk = ScalarField(AMBIENT, lambda p: g.fn(p) * k.fn(p))
    lhs = poisson_bracket(SS, f, gk, x)
    rhs = poisson_bracket(SS, f, g, x) * k.at(x) + g.at(x) * poisson_bracket(SS, f, k, x)
    assert _sup(lhs - rhs) < 1e-10


def test_project_field_of_scaling_invariant_field(rng):
    # the scaling direction itself projects to zero
    r = osc.sample_reduced(10, rng)
    D = osc.scaling().delta
    assert _sup(project_field(D, osc.projection, osc.section, osc.REDUCED).at(r)) < 1e-14
