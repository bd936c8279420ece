"""Symplectic structures, Hamiltonian fields and reduction by scaling symmetries.

Conventions: the Hamiltonian field of ``h`` satisfies ``ι_X ω = dh`` and the
Poisson bracket is ``{f, g} = ω(X_f, X_g)``.  A scaling symmetry is a field
``Δ`` with ``L_Δ ω = ω``; a function is ℓ-homogeneous when ``L_Δ f = ℓ f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .calculus import ad
from .calculus.fields import OneForm, ScalarField, TwoForm, VectorField, components, same_chart
from .calculus.linalg import solve
from .calculus.ops import interior, lie_derivative_field, pullback_oneform
from .errors import DomainError

HOMOGENEITY_TOL = 1e-10


@dataclass(frozen=True)
class SymplecticStructure:
    chart: str
    omega: TwoForm
    potential: OneForm | None = None


def canonical_omega(chart: str, pairs, n: int) -> TwoForm:
    """``sum dq_a ∧ dp_a`` for index pairs ``(a, b)`` in an ``n``-dim chart."""
    m = np.zeros((n, n))
    for a, b in pairs:
        m[a, b], m[b, a] = 1.0, -1.0

    def fn(p):
        z = 0.0 * p[0]
        return [[m[i, j] + z for j in range(n)] for i in range(n)]

    return TwoForm(chart, fn, "omega")


def hamiltonian_field(ss: SymplecticStructure, h: ScalarField) -> VectorField:
    """``X_h`` with ``ι_{X_h} ω = dh``."""
    same_chart(ss.omega, h)

    def fn(p):
        w = ss.omega.fn(p)
        n = len(p)
        A = [[w[j][i] for j in range(n)] for i in range(n)]
        return solve(A, ad.gradient(h.fn, p))

    return VectorField(ss.chart, fn, f"X_{h.name}")


def poisson_bracket(ss: SymplecticStructure, f: ScalarField, g: ScalarField, p=None):
    """``{f, g} = ω(X_f, X_g) = X_g(f)``."""
    Xf, Xg = hamiltonian_field(ss, f), hamiltonian_field(ss, g)
    sf = ScalarField(ss.chart, lambda q: ss.omega.pair(q, Xf.fn(q), Xg.fn(q)), f"{{{f.name},{g.name}}}")
    return sf if p is None else sf.at(p)


def homogeneity_check(delta: VectorField, obj, ell: float, samples) -> float:
    """Sup-norm of ``L_Δ obj - ℓ obj`` over ``samples``."""
    lhs = lie_derivative_field(delta, obj).at(samples)
    rhs = obj.at(samples)
    return float(np.max(np.abs(lhs - ell * rhs)))


def parity_check(flip: Callable, obj: ScalarField, ell: int, samples) -> float:
    """``|f(Φ_{-1}(x)) - (-1)^ℓ f(x)|`` for actions of the full group ℝ∖{0}."""
    p = components(samples)
    lhs = np.asarray(ad.primal(obj.fn(flip(p))))
    rhs = np.asarray(ad.primal(obj.fn(p)))
    return float(np.max(np.abs(lhs - (-1) ** ell * rhs)))


def liouville_form(ss: SymplecticStructure, delta: VectorField) -> OneForm:
    """``ι_Δ ω``; its negative is the symplectic potential ``λ``."""
    return interior(delta, ss.omega)


def reduce_hamiltonian(h: ScalarField, F: ScalarField, section: Callable, chart: str, probes=None) -> ScalarField:
    """The function ``ĥ`` on the reduced space with ``π*ĥ = h/F``.

    ``section`` maps reduced coordinates into the symplectic chart; ``F`` must
    be a nonvanishing 1-homogeneous function.
    """
    same_chart(h, F)
    if probes is not None:
        vals = np.asarray(ad.primal(F.fn(section(components(probes)))))
        if np.any(np.abs(vals) < 1e-12):
            raise DomainError("F vanishes on the section")

    def fn(u):
        x = section(u)
        return h.fn(x) / F.fn(x)

    return ScalarField(chart, fn, h.name)


def reduced_contact_form(ss: SymplecticStructure, delta: VectorField, section: Callable, chart: str) -> OneForm:
    """``η = σ*(ι_Δ ω)`` on the reduced space."""
    return pullback_oneform(liouville_form(ss, delta), section, chart)


def project_field(X: VectorField, projection: Callable, section: Callable, chart: str) -> VectorField:
    """Pushforward of a Δ-invariant field along ``projection``, based on ``section``."""

    def fn(u):
        return ad.jvp(projection, section(u), X.fn(section(u)))[1]

    return VectorField(chart, fn, f"pi*{X.name}")


@dataclass(frozen=True)
class ScalingSymmetry:
    """A scaling field with its group (``"R+"`` or ``"R*"``) and, for ``R*``,
    the action of ``-1``."""

    delta: VectorField
    group: str = "R+"
    flip: Callable | None = None


@dataclass(frozen=True)
class LHSystem:
    """A Lie-Hamilton system: symplectic structure, basis fields and Hamiltonians."""

    structure: SymplecticStructure
    fields: tuple
    hamiltonians: tuple

    def hamiltonian_residual(self, samples) -> float:
        worst = 0.0
        for X, h in zip(self.fields, self.hamiltonians):
            Y = hamiltonian_field(self.structure, h)
            worst = max(worst, float(np.max(np.abs(X.at(samples) - Y.at(samples)))))
        return worst


def poisson_matrix(ss: SymplecticStructure, hams, p):
    """All brackets ``B[..., i, j] = {h_i, h_j}`` at ``p`` in one pass."""
    p = components(p)
    fields = [hamiltonian_field(ss, h).at(p) for h in hams]
    w = ss.omega.at(p)
    n = len(hams)
    out = np.zeros(np.broadcast_shapes(*[f.shape[:-1] for f in fields]) + (n, n))
    for i in range(n):
        for j in range(n):
            out[..., i, j] = np.einsum("...a,...ab,...b->...", fields[i], w, fields[j])
    return out


__all__ = [
    "SymplecticStructure", "canonical_omega", "hamiltonian_field", "poisson_bracket",
    "homogeneity_check", "parity_check", "liouville_form", "reduce_hamiltonian",
    "reduced_contact_form", "project_field", "ScalingSymmetry", "LHSystem", "poisson_matrix",
]
