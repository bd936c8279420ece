"""Contact structure on Σ_κ: contact form, Reeb field, contact Hamiltonian
vector fields, Jacobi brackets and the almost-contact metric structure."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import ad
from .calculus.fields import OneForm, ScalarField, TwoForm, VectorField, components, same_chart
from .calculus.linalg import as_array, as_matrix, dot, solve
from .calculus.ops import d_oneform, lie_derivative_field
from .errors import ChartError, DomainError, NotKilling
from .geometry import (
    AMBIENT,
    PARALLEL,
    POLAR,
    KappaTriple,
    ambient_metric,
    sample_ambient,
)
from .ktrig import check_nonzero, ck_cos, ck_sin

LIOUVILLE_TOL = 1e-9
KILLING_TOL = 1e-6


@dataclass(frozen=True)
class ContactStructure:
    kappa: KappaTriple
    chart: str
    eta: OneForm
    reeb: VectorField

    @property
    def d_eta(self) -> TwoForm:
        return d_oneform(self.eta)


def _eta_ambient(k):
    return lambda p: [-0.5 * p[1], 0.5 * p[0], -0.5 * p[3], 0.5 * p[2]]


def _reeb_ambient(k):
    return lambda p: [-2 * k.k01 * p[1], 2 * p[0], -2 * k.k03 * p[3], 2 * k.k02 * p[2]]


def _eta_parallel(k):
    def fn(p):
        _, y, z = p
        c2, s2 = ck_cos(k.k02, y), ck_sin(k.k02, y)
        c3 = ck_cos(k.k03, z)
        return [0.5 * c2 * c2 * c3 * c3, -0.25 * c2 * ck_sin(k.k03, 2 * z), 0.5 * s2]

    return fn


def _reeb_parallel(k):
    def fn(p):
        _, y, z = p
        c3 = ck_cos(k.k03, z)
        check_nonzero(c3)
        t3 = ck_sin(k.k03, z) / c3
        return [2.0 + 0.0 * y, -2 * k.k03 * ck_cos(k.k02, y) * t3, 2 * k.k02 * ck_sin(k.k02, y)]

    return fn


def _eta_polar(k):
    def fn(p):
        r, th, _ = p
        s1, s2 = ck_sin(k.k1, r), ck_sin(k.k2, th)
        return [0.5 * ck_cos(k.k2, th), -0.25 * k.k2 * ck_sin(k.k1, 2 * r) * s2, 0.5 * s1 * s1 * s2 * s2]

    return fn


def _reeb_polar(k):
    def fn(p):
        r, th, _ = p
        s1 = ck_sin(k.k1, r)
        check_nonzero(s1)
        return [2 * ck_cos(k.k2, th), -2 * ck_sin(k.k2, th) * ck_cos(k.k1, r) / s1, 2 * k.k02 + 0.0 * r]

    return fn


_BUILDERS = {
    AMBIENT: (_eta_ambient, _reeb_ambient),
    PARALLEL: (_eta_parallel, _reeb_parallel),
    POLAR: (_eta_polar, _reeb_polar),
}


def contact_structure(kappa, chart: str = PARALLEL) -> ContactStructure:
    """Contact form and Reeb field of Σ_κ in the requested chart.

    In the ambient chart both objects live on ℝ⁴ and are meaningful only on
    vectors tangent to Σ_κ.
    """
    k = KappaTriple.of(kappa)
    if chart not in _BUILDERS:
        raise ChartError(f"unknown chart {chart!r}")
    e, r = _BUILDERS[chart]
    return ContactStructure(k, chart, OneForm(chart, e(k), "eta"), VectorField(chart, r(k), "R"))


def tangent_basis(kappa, p):
    """Orthonormal (Euclidean) basis of T_pΣ_κ ⊂ ℝ⁴, shape ``(..., 4, 3)``.

    The basis is oriented so that, together with the outward normal, it is
    positively oriented in ℝ⁴.  Numeric input only.
    """
    k = KappaTriple.of(kappa)
    x = np.asarray(p, dtype=float)
    n = x * np.array(k.diag)
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    # complete n to an orthonormal frame with QR, then keep the complement
    frame = np.concatenate([n[..., :, None], np.broadcast_to(np.eye(4), n.shape[:-1] + (4, 4))[..., :, :3]], axis=-1)
    q, _ = np.linalg.qr(frame)
    sign = np.sign(np.einsum("...i,...i->...", q[..., :, 0], n))
    q = q * sign[..., None, None]
    basis = q[..., :, 1:]
    det = np.linalg.det(np.concatenate([n[..., :, None], basis], axis=-1))
    basis[..., :, 2] *= np.sign(det)[..., None]
    return basis


def _three_form_density(eta, deta, e):
    """``(η ∧ dη)(e1, e2, e3)`` for numeric arrays with batch first."""
    pe = np.einsum("...i,...ia->...a", eta, e)
    de = np.einsum("...ia,...ij,...jb->...ab", e, deta, e)
    return pe[..., 0] * de[..., 1, 2] + pe[..., 1] * de[..., 2, 0] + pe[..., 2] * de[..., 0, 1]


def verify_contact_condition(cs: ContactStructure, p):
    """Value of ``η ∧ dη`` on the coordinate frame (or a tangent frame of Σ_κ)."""
    eta = cs.eta.at(p)
    deta = cs.d_eta.at(p)
    if cs.chart == AMBIENT:
        e = tangent_basis(cs.kappa, p)
    else:
        e = np.broadcast_to(np.eye(3), eta.shape[:-1] + (3, 3))
    return _three_form_density(eta, deta, e)


def reeb_residuals(cs: ContactStructure, p):
    """``(|η(R) - 1|, |ι_R dη|)`` at ``p``; ambient chart restricts to TΣ_κ."""
    eta = cs.eta.at(p)
    deta = cs.d_eta.at(p)
    R = cs.reeb.at(p)
    norm = np.abs(np.einsum("...i,...i->...", eta, R) - 1.0)
    iota = np.einsum("...i,...ij->...j", R, deta)
    if cs.chart == AMBIENT:
        iota = np.einsum("...j,...ja->...a", iota, tangent_basis(cs.kappa, p))
    return norm, np.max(np.abs(iota), axis=-1)


def _system(cs, f_fn, p):
    """Matrix ``dηᵀ + η ηᵀ`` and right-hand side for the Hamiltonian field of ``f``.

    ``η(X) = -f`` and ``ι_X dη = df - R(f) η`` combine into
    ``(dηᵀ + η ηᵀ) X = df - (R f) η - f η``; the matrix is invertible
    exactly when η is a contact form.
    """
    eta = cs.eta.fn(p)
    deta = cs.d_eta.fn(p)
    n = len(p)
    A = [[deta[j][i] + eta[i] * eta[j] for j in range(n)] for i in range(n)]
    f = f_fn(p)
    df = ad.gradient(f_fn, p)
    Rf = dot(cs.reeb.fn(p), df)
    b = [df[i] - Rf * eta[i] - f * eta[i] for i in range(n)]
    return A, b


def contact_hamiltonian_field(cs: ContactStructure, h: ScalarField) -> VectorField:
    """The field ``X_h`` with ``η(X_h) = -h`` and ``ι_{X_h} dη = dh - (R h) η``.

    Solved pointwise; raises :class:`SingularSolve` where the system is
    rank deficient.  In the ambient chart the solve is carried out on a
    tangent frame of Σ_κ (numeric points only).
    """
    same_chart(cs.eta, h)
    if cs.chart == AMBIENT:
        return VectorField(AMBIENT, lambda p: _ambient_hamiltonian(cs, h, p), f"X_{h.name}")

    def fn(p):
        A, b = _system(cs, h.fn, p)
        return solve(A, b)

    return VectorField(cs.chart, fn, f"X_{h.name}")


def _ambient_hamiltonian(cs, h, p):
    x = as_array(p)
    e = tangent_basis(cs.kappa, x)
    eta = cs.eta.at(x)
    deta = cs.d_eta.at(x)
    dh = as_array(ad.gradient(h.fn, components(x) if x.ndim == 2 else list(x)))
    R = cs.reeb.at(x)
    f = np.asarray(ad.primal(h.fn(components(x) if x.ndim == 2 else list(x))))
    Rf = np.einsum("...i,...i->...", R, dh)
    eta_e = np.einsum("...i,...ia->...a", eta, e)
    deta_e = np.einsum("...ia,...ij,...jb->...ab", e, deta, e)
    dh_e = np.einsum("...i,...ia->...a", dh, e)
    A = np.swapaxes(deta_e, -1, -2) + eta_e[..., :, None] * eta_e[..., None, :]
    b = dh_e - (Rf + f)[..., None] * eta_e
    c = solve(_rows(A), _cols(b))
    c = np.stack(np.broadcast_arrays(*c), axis=-1)
    X = np.einsum("...ia,...a->...i", e, c)
    return [X[..., i] for i in range(4)]


def _rows(A):
    return [[A[..., i, j] for j in range(A.shape[-1])] for i in range(A.shape[-2])]


def _cols(b):
    return [b[..., i] for i in range(b.shape[-1])]


def jacobi_bracket_fn(cs: ContactStructure, f: ScalarField, g: ScalarField):
    """Generic evaluator of ``{f, g} = X_f(g) + g R(f)``."""
    Xf = contact_hamiltonian_field(cs, f)

    def fn(p):
        dg = ad.gradient(g.fn, p)
        df = ad.gradient(f.fn, p)
        return dot(Xf.fn(p), dg) + g.fn(p) * dot(cs.reeb.fn(p), df)

    return fn


def jacobi_bracket(cs: ContactStructure, f: ScalarField, g: ScalarField, p=None):
    """Jacobi bracket of two functions, as a field or its values at ``p``."""
    sf = ScalarField(cs.chart, jacobi_bracket_fn(cs, f, g), f"{{{f.name},{g.name}}}")
    return sf if p is None else sf.at(p)


def jacobi_brackets(cs: ContactStructure, hams, p):
    """All pairwise brackets ``B[..., i, j] = {h_i, h_j}`` at ``p``, batched.

    Each contact Hamiltonian field is solved once per point, so this is much
    cheaper than calling :func:`jacobi_bracket` for every pair.
    """
    p = components(p)
    grads = [as_array(ad.gradient(h.fn, p)) for h in hams]
    vals = [np.asarray(ad.primal(h.fn(p)), dtype=float) for h in hams]
    R = cs.reeb.at(p)
    fields = [contact_hamiltonian_field(cs, h).at(p) for h in hams]
    Rf = [np.einsum("...i,...i->...", R, g) for g in grads]
    n = len(hams)
    shape = np.broadcast_shapes(*[v.shape for v in vals], R.shape[:-1])
    out = np.zeros(shape + (n, n))
    for i in range(n):
        for j in range(n):
            out[..., i, j] = np.einsum("...i,...i->...", fields[i], grads[j]) + vals[j] * Rf[i]
    return out


def is_liouville(cs: ContactStructure, hams, samples):
    """Check ``R h = 0`` for every Hamiltonian; returns ``(ok, residual)``."""
    p = components(samples)
    R = cs.reeb.at(p)
    worst = 0.0
    for h in hams:
        g = as_array(ad.gradient(h.fn, p))
        worst = max(worst, float(np.max(np.abs(np.einsum("...i,...i->...", R, g)))))
    return worst < LIOUVILLE_TOL, worst


def first_integral_from_killing(cs: ContactStructure, K: VectorField, probes=None, rng=None) -> ScalarField:
    """The function ``η(K)``, checked first to come from a Killing field.

    ``K`` must be an ambient field; Killing is tested against the flat form
    ``g̃ = diag(1, κ01, κ02, κ03)`` at points of Σ_κ.
    """
    if cs.chart != AMBIENT or K.chart != AMBIENT:
        raise ChartError("Killing first integrals are built in the ambient chart")
    if probes is None:
        rng = np.random.default_rng(0) if rng is None else rng
        probes = sample_ambient(cs.kappa, 20, rng)
    res = float(np.max(np.abs(lie_derivative_field(K, ambient_metric(cs.kappa)).at(probes))))
    if res > KILLING_TOL:
        raise NotKilling(f"L_K g has residual {res:.3g}")
    return cs.eta.contract(K)


@dataclass(frozen=True)
class AlmostContactMetric:
    """Almost-contact metric data ``(φ, R̄, η̄, g)`` on ambient tangent vectors.

    Here ``R̄ = R/2`` has unit length, ``η̄ = 2η = g(·, R̄)`` and ``φ`` is the
    tangential part of the complex structure ``𝒥`` followed by projection
    onto the orthogonal complement of ``R̄``.
    """

    kappa: KappaTriple
    epsilon: float = 1.0

    @property
    def J(self):
        k2 = self.kappa.k2
        m = np.zeros((4, 4))
        m[1, 0], m[0, 1] = -1.0, 1.0
        m[3, 2], m[2, 3] = -k2, k2
        return m

    @property
    def g(self):
        return np.diag(self.kappa.diag) / self.kappa.k1

    def reeb(self, x):
        k = self.kappa
        x0, x1, x2, x3 = np.moveaxis(np.asarray(x, dtype=float), -1, 0)
        return np.stack([-k.k01 * x1, x0, -k.k03 * x3, k.k02 * x2], axis=-1)

    def eta(self, x):
        return np.einsum("ij,...j->...i", self.g, self.reeb(x))

    def phi(self, x):
        """4×4 matrix of ``φ`` at ``x`` acting on ambient tangent vectors."""
        x = np.asarray(x, dtype=float)
        g = self.g
        Jm = np.broadcast_to(self.J, x.shape[:-1] + (4, 4))
        nu = x  # unit normal since I_κ(x, x) = 1 and κ1 = 1
        # strip normal part: v -> v - g(v, ν) ν
        normal = np.einsum("...i,...j,jk->...ik", nu, nu, g) / np.einsum("...i,ij,...j->...", nu, g, nu)[..., None, None]
        tang = np.eye(4) - normal
        R = self.reeb(x)
        pr = np.eye(4) - np.einsum("...i,...j->...ij", R, self.eta(x))
        return pr @ tang @ Jm

    def phi_chart(self, c):
        """``φ`` expressed in the parallel chart (3×3)."""
        from .geometry import embed_parallel_fn

        c = components(c)
        E = as_matrix(ad.jacobian(embed_parallel_fn(self.kappa), c))
        x = as_array(embed_parallel_fn(self.kappa)(c))
        return np.linalg.pinv(E) @ self.phi(x) @ E


def sasaki_phi(k2: float) -> AlmostContactMetric:
    """Almost-contact metric structure on Σ_κ for κ = (1, κ2, 1), κ2 = ±1."""
    if k2 not in (1, -1):
        raise DomainError("the almost-contact structure is defined for κ2 = ±1")
    return AlmostContactMetric(KappaTriple(1.0, float(k2), 1.0), 1.0)
