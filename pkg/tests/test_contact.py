import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckcontact.calculus import OneForm, ScalarField, ad
from ckcontact.calculus.ops import d_scalar
from ckcontact.contact import (
    ContactStructure,
    contact_hamiltonian_field,
    contact_structure,
    first_integral_from_killing,
    is_liouville,
    jacobi_bracket,
    jacobi_brackets,
    reeb_residuals,
    sasaki_phi,
    tangent_basis,
    verify_contact_condition,
)
from ckcontact.errors import ChartError, DomainError, NotKilling
from ckcontact.geometry import (
    AMBIENT,
    NINE_SPACES,
    ORIGIN,
    PARALLEL,
    POLAR,
    KappaTriple,
    killing_field,
    sample_ambient,
    sample_chart,
)
from ckcontact.ktrig import ck_cos, ck_sin, ck_tan
from ckcontact.systems import sp4
from ckcontact.systems.catalog import sasaki_first_integrals
from ckcontact.calculus import VectorField

O = np.array(ORIGIN)
space_names = st.sampled_from(list(NINE_SPACES))
seeds = st.integers(0, 2 ** 32 - 1)
FLAT = [(0, 1, 1), (0, 0, 1), (0, -1, 1)]


def test_ambient_values_at_origin():
    for k in NINE_SPACES.values():
        cs = contact_structure(k, AMBIENT)
        np.testing.assert_allclose(cs.eta.at(O), [0, 0.5, 0, 0])
        np.testing.assert_allclose(cs.reeb.at(O), [0, 2, 0, 0])


@pytest.mark.parametrize("k", FLAT)
def test_flat_parallel_form(k, rng):
    cs = contact_structure(k, PARALLEL)
    c = sample_chart(k, PARALLEL, 20, rng)
    x, y, z = c.T
    np.testing.assert_allclose(cs.eta.at(c), 0.5 * np.stack([np.ones_like(x), -z, y], -1), atol=1e-15)
    np.testing.assert_allclose(cs.reeb.at(c), np.tile([2.0, 0, 0], (20, 1)), atol=1e-15)


def test_unknown_chart():
    with pytest.raises(ChartError):
        contact_structure((1, 1, 1), "cylindrical")


def test_density_at_origin_of_sphere():
    # at O the tangent space is spanned by ∂1, ∂2, ∂3 where η = ½dx¹ and dη = dx²∧dx³ + ...
    assert abs(verify_contact_condition(contact_structure((1, 1, 1), AMBIENT), O)) == pytest.approx(0.5)


def test_exact_form_has_zero_density(rng):
    f = ScalarField(PARALLEL, lambda p: p[0] * p[1] + ad.sin(p[2]))
    df = d_scalar(f)
    cs = ContactStructure(KappaTriple(1, 1, 1), PARALLEL, OneForm(PARALLEL, df.fn), contact_structure((1, 1, 1)).reeb)
    c = sample_chart((1, 1, 1), PARALLEL, 10, rng)
    assert np.max(np.abs(verify_contact_condition(cs, c))) < 1e-15


@pytest.mark.parametrize("name", list(NINE_SPACES))
@pytest.mark.parametrize("chart", [PARALLEL, POLAR])
def test_reeb_axioms_and_density(name, chart, rng):
    k = NINE_SPACES[name]
    cs = contact_structure(k, chart)
    c = sample_chart(k, chart, 100, rng)
    n1, n2 = reeb_residuals(cs, c)
    assert max(np.max(n1), np.max(n2)) < 1e-10
    assert np.min(np.abs(verify_contact_condition(cs, c))) > 1e-6


@given(space_names, seeds)
def test_reeb_axioms_ambient(name, seed):
    k = NINE_SPACES[name]
    x = sample_ambient(k, 10, np.random.default_rng(seed))
    n1, n2 = reeb_residuals(contact_structure(k, AMBIENT), x)
    assert max(np.max(n1), np.max(n2)) < 1e-10


@given(space_names, seeds)
def test_tangent_basis_is_orthonormal_and_tangent(name, seed):
    k = KappaTriple.of(NINE_SPACES[name])
    x = sample_ambient(k, 5, np.random.default_rng(seed))
    e = tangent_basis(k, x)
    np.testing.assert_allclose(np.einsum("nia,nib->nab", e, e), np.broadcast_to(np.eye(3), (5, 3, 3)), atol=1e-12)
    normal = x * np.array(k.diag)
    assert np.max(np.abs(np.einsum("ni,nia->na", normal, e))) < 1e-12


def test_constant_hamiltonian_gives_minus_reeb(rng):
    for k in NINE_SPACES.values():
        cs = contact_structure(k, PARALLEL)
        one = ScalarField(PARALLEL, lambda p: 1.0 + 0.0 * p[0])
        c = sample_chart(k, PARALLEL, 20, rng)
        assert np.max(np.abs(contact_hamiltonian_field(cs, one).at(c) + cs.reeb.at(c))) < 1e-10


def _printed_x10(k):
    kt = KappaTriple.of(k)

    def fn(p):
        x, y, z = p
        return [0.0 * x, ck_cos(kt.k02, y) * ck_tan(kt.k03, z), -kt.k02 * ck_sin(kt.k02, y) * ck_sin(kt.k03, z) ** 2]

    return VectorField(PARALLEL, fn)


def _printed_x7(k):
    kt = KappaTriple.of(k)
    return VectorField(PARALLEL, lambda p: [0.0 * p[0], 0.0 * p[0],
                                            -ck_sin(kt.k02, p[1]) * ck_cos(kt.k03, p[2]) ** 2])


@pytest.mark.parametrize("name", list(NINE_SPACES))
def test_hamiltonian_fields_of_h10_and_h7(name, rng):
    k = NINE_SPACES[name]
    cs = contact_structure(k, PARALLEL)
    hs = sp4.ck_hamiltonians(k)
    c = sample_chart(k, PARALLEL, 30, rng)
    assert np.max(np.abs(contact_hamiltonian_field(cs, hs[9]).at(c) - _printed_x10(k).at(c))) < 1e-10
    assert np.max(np.abs(contact_hamiltonian_field(cs, hs[6]).at(c) - _printed_x7(k).at(c))) < 1e-10


@given(space_names, seeds)
def test_minus_eta_recovers_hamiltonian(name, seed):
    k = NINE_SPACES[name]
    cs = contact_structure(k, PARALLEL)
    c = sample_chart(k, PARALLEL, 5, np.random.default_rng(seed))
    for h in sp4.ck_hamiltonians(k)[::3]:
        X = contact_hamiltonian_field(cs, h)
        assert np.max(np.abs(-cs.eta.contract(X).at(c) - h.at(c))) < 1e-10


def test_ambient_hamiltonian_field_matches_projection(rng):
    k = (1, -1, 1)
    cs = contact_structure(k, AMBIENT)
    x = sample_ambient(k, 20, rng)
    for h, X in zip(sp4.restricted_hamiltonians(k), sp4.projected_fields(k)):
        assert np.max(np.abs(contact_hamiltonian_field(cs, h).at(x) - X.at(x))) < 1e-9


def test_bracket_example(rng):
    k = (1, -1, 1)
    cs = contact_structure(k, PARALLEL)
    hs = sp4.ck_hamiltonians(k)
    c = sample_chart(k, PARALLEL, 20, rng)
    assert np.max(np.abs(jacobi_bracket(cs, hs[4], hs[7], c) + hs[0].at(c))) < 1e-8
    assert np.max(np.abs(jacobi_bracket(cs, hs[2], hs[2], c))) < 1e-12


def test_h4_prime_is_central(rng):
    cs = contact_structure((1, 1, 1), AMBIENT)
    h = sasaki_first_integrals(1, AMBIENT)
    x = sample_ambient((1, 1, 1), 20, rng)
    # the ambient bracket solve is numeric, so compare via the batched brackets
    B = jacobi_brackets(cs, list(h), x)
    assert np.max(np.abs(B[:, 3, :])) < 1e-9


@pytest.mark.parametrize("name", list(NINE_SPACES))
def test_jacobi_brackets_match_lie_table(name, rng):
    k = NINE_SPACES[name]
    cs = contact_structure(k, PARALLEL)
    hs = sp4.ck_hamiltonians(k)
    c = sample_chart(k, PARALLEL, 50, rng)
    B = jacobi_brackets(cs, hs, c)
    H = np.stack([h.at(c) for h in hs], -1)
    assert np.max(np.abs(B - np.einsum("ijk,nk->nij", sp4.sp4_table().c, H))) < 1e-8


@given(space_names, seeds)
def test_bracket_antisymmetry(name, seed):
    k = NINE_SPACES[name]
    cs = contact_structure(k, PARALLEL)
    c = sample_chart(k, PARALLEL, 10, np.random.default_rng(seed))
    B = jacobi_brackets(cs, sp4.ck_hamiltonians(k), c)
    # entries reach ~1e2 on the κ1 < 0 chart boxes, so the bound is relative
    assert np.max(np.abs(B + np.swapaxes(B, -1, -2))) < 1e-10 * max(1.0, np.max(np.abs(B)))


@settings(max_examples=10)
@given(space_names, st.lists(st.integers(0, 9), min_size=3, max_size=3, unique=True), seeds)
def test_jacobi_identity(name, ijk, seed):
    k = NINE_SPACES[name]
    cs = contact_structure(k, PARALLEL)
    hs = sp4.ck_hamiltonians(k)
    f, g, h = (hs[i] for i in ijk)
    c = sample_chart(k, PARALLEL, 3, np.random.default_rng(seed))
    total = (jacobi_bracket(cs, f, jacobi_bracket(cs, g, h), c) + jacobi_bracket(cs, g, jacobi_bracket(cs, h, f), c)
             + jacobi_bracket(cs, h, jacobi_bracket(cs, f, g), c))
    assert np.max(np.abs(total)) < 1e-5


@pytest.mark.parametrize("k", FLAT)
def test_is_liouville_flat(k, rng):
    cs = contact_structure(k, PARALLEL)
    hs = sp4.ck_hamiltonians(k)
    c = sample_chart(k, PARALLEL, 30, rng)
    np.testing.assert_allclose(hs[1].at(c), c[:, 2], atol=1e-15)
    assert is_liouville(cs, [hs[1]], c)[0]
    ok, res = is_liouville(cs, [hs[0]], c)
    assert not ok and res > 1e-3
    assert is_liouville(cs, [ScalarField(PARALLEL, lambda p: 3.0 + 0.0 * p[0])], c) == (True, 0.0)


def test_killing_first_integrals(rng):
    cs = contact_structure((1, 1, 1), AMBIENT)
    x = sample_ambient((1, 1, 1), 20, rng)
    f01 = first_integral_from_killing(cs, killing_field((1, 1, 1), 0, 1))
    f23 = first_integral_from_killing(cs, killing_field((1, 1, 1), 2, 3))
    np.testing.assert_allclose(f01.at(x), -0.5 * (x[:, 0] ** 2 + x[:, 1] ** 2), atol=1e-15)
    np.testing.assert_allclose(f23.at(x), -0.5 * (x[:, 2] ** 2 + x[:, 3] ** 2), atol=1e-15)


def test_killing_first_integral_rejects_non_killing():
    cs = contact_structure((1, 1, 1), AMBIENT)
    dilation = VectorField(AMBIENT, lambda p: list(p))
    with pytest.raises(NotKilling):
        first_integral_from_killing(cs, dilation)
    with pytest.raises(ChartError):
        first_integral_from_killing(contact_structure((1, 1, 1)), dilation)


@pytest.mark.parametrize("k2", [1, -1])
def test_sasaki_structure(k2, rng):
    a = sasaki_phi(k2)
    x = sample_ambient(a.kappa, 100, rng)
    R, eta, phi = a.reeb(x), a.eta(x), a.phi(x)
    assert np.max(np.abs(np.einsum("nab,nb->na", phi, R))) < 1e-10
    assert np.max(np.abs(np.einsum("na,nab->nb", eta, phi))) < 1e-10
    assert np.max(np.abs(np.einsum("na,ab,nb->n", R, a.g, R) - 1)) < 1e-12
    # compatibility on random tangent vectors
    e = tangent_basis(a.kappa, x)
    u = np.einsum("nia,na->ni", e, rng.normal(size=(100, 3)))
    v = np.einsum("nia,na->ni", e, rng.normal(size=(100, 3)))
    pu, pv = np.einsum("nab,nb->na", phi, u), np.einsum("nab,nb->na", phi, v)
    lhs = np.einsum("na,ab,nb->n", pu, a.g, pv)
    rhs = np.einsum("na,ab,nb->n", u, a.g, v) - a.epsilon * np.einsum("na,na->n", eta, u) * np.einsum("na,na->n", eta, v)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_sasaki_reeb_is_half_the_contact_reeb(rng):
    a = sasaki_phi(1)
    x = sample_ambient(a.kappa, 10, rng)
    np.testing.assert_allclose(a.reeb(x), 0.5 * contact_structure(a.kappa, AMBIENT).reeb.at(x), atol=1e-15)


def test_sasaki_phi_in_chart_squares_to_minus_identity_off_reeb():
    a = sasaki_phi(1)
    c = np.array([0.3, 0.2, 0.1])
    P = a.phi_chart(c)
    R = contact_structure(a.kappa, PARALLEL).reeb.at(c) / 2
    eta = 2 * contact_structure(a.kappa, PARALLEL).eta.at(c)
    np.testing.assert_allclose(P @ P, -np.eye(3) + np.outer(R, eta), atol=1e-12)


def test_sasaki_phi_domain():
    with pytest.raises(DomainError):
        sasaki_phi(0)
