"""Isotropic 2D oscillator with time-dependent frequency and its reduction by
the scaling ``(q, p) ↦ (s q, s p)`` to a contact system on ℝ⁺ × S¹ × S¹.

Upstairs coordinates are ``(q1, q2, p1, p2)``; the reduced chart is
``(ρ, θ1, θ2)`` with ``q = (cos θ1, sin θ1)`` and ``p = ρ (cos θ2, sin θ2)``.
"""
from __future__ import annotations

import numpy as np

from ..calculus import ad
from ..calculus.fields import OneForm, ScalarField, StructureTable, TwoForm, VectorField
from ..contact import ContactStructure
from ..symplectic import ScalingSymmetry, SymplecticStructure, canonical_omega

CANONICAL = "canonical"
SPLIT_POLAR = "split-polar"
REDUCED = "osc-reduced"
OMEGA_PRESET = "(1+0.5*sin(t))*(1+0.5*sin(t))"


def sl2_table() -> StructureTable:
    """``[X1,X2] = 2X1, [X1,X3] = X2, [X2,X3] = 2X3``."""
    return StructureTable.from_brackets(3, {(0, 1): {0: 2.0}, (0, 2): {1: 1.0}, (1, 2): {2: 2.0}}, ("X1", "X2", "X3"))


def structure() -> SymplecticStructure:
    return SymplecticStructure(CANONICAL, canonical_omega(CANONICAL, [(0, 2), (1, 3)], 4))


def fields():
    z = lambda p: 0.0 * p[0]
    return [
        VectorField(CANONICAL, lambda p: [p[2], p[3], z(p), z(p)], "X1"),
        VectorField(CANONICAL, lambda p: [p[0], p[1], -p[2], -p[3]], "X2"),
        VectorField(CANONICAL, lambda p: [z(p), z(p), -p[0], -p[1]], "X3"),
    ]


def hamiltonians():
    return [
        ScalarField(CANONICAL, lambda p: 0.5 * (p[2] ** 2 + p[3] ** 2), "h1"),
        ScalarField(CANONICAL, lambda p: p[0] * p[2] + p[1] * p[3], "h2"),
        ScalarField(CANONICAL, lambda p: 0.5 * (p[0] ** 2 + p[1] ** 2), "h3"),
    ]


def angular_momentum():
    """``q1 p2 - q2 p1``, which Poisson-commutes with the whole sl(2) algebra."""
    return ScalarField(CANONICAL, lambda p: p[0] * p[3] - p[1] * p[2], "L")


def scaling() -> ScalingSymmetry:
    return ScalingSymmetry(VectorField(CANONICAL, lambda p: [0.5 * c for c in p], "Delta"), "R+")


def scaling_function():
    """``F = |q|²``, nonvanishing and 1-homogeneous off the zero section."""
    return ScalarField(CANONICAL, lambda p: p[0] ** 2 + p[1] ** 2, "F")


def section(u):
    rho, t1, t2 = u
    return [ad.cos(t1), ad.sin(t1), rho * ad.cos(t2), rho * ad.sin(t2)]


def projection(x):
    q1, q2, p1, p2 = x
    r1 = ad.sqrt(q1 * q1 + q2 * q2)
    r2 = ad.sqrt(p1 * p1 + p2 * p2)
    return [r2 / r1, ad.arctan2(q2, q1), ad.arctan2(p2, p1)]


# -- the split polar chart (ρ1, θ1, ρ2, θ2) with ρ2 = r2 / r1 ---------------

def split_polar_of(x):
    q1, q2, p1, p2 = x
    r1 = ad.sqrt(q1 * q1 + q2 * q2)
    return [r1, ad.arctan2(q2, q1), ad.sqrt(p1 * p1 + p2 * p2) / r1, ad.arctan2(p2, p1)]


def canonical_of(u):
    r1, t1, r2, t2 = u
    return [r1 * ad.cos(t1), r1 * ad.sin(t1), r1 * r2 * ad.cos(t2), r1 * r2 * ad.sin(t2)]


def split_polar_omega() -> TwoForm:
    """The canonical form written in ``(ρ1, θ1, ρ2, θ2)``."""

    def fn(u):
        r1, t1, r2, t2 = u
        s, c = ad.sin(t1 - t2), ad.cos(t1 - t2)
        z = 0.0 * r1
        w01 = r1 * s * r2
        w03 = r1 * s * r2
        w21 = r1 * s * r1
        w02 = r1 * c
        w13 = r1 * c * r1 * r2
        return [[z, w01, w02, w03], [-w01, z, -w21, w13], [-w02, w21, z, z], [-w03, -w13, z, z]]

    return TwoForm(SPLIT_POLAR, fn, "omega")


def split_polar_fields():
    def x1(u):
        r1, t1, r2, t2 = u
        c, s = ad.cos(t1 - t2), ad.sin(t1 - t2)
        return [r1 * r2 * c, -r2 * s, -r2 * r2 * c, 0.0 * r1]

    def x2(u):
        r1, t1, r2, t2 = u
        return [r1, 0.0 * r1, -2 * r2, 0.0 * r1]

    def x3(u):
        r1, t1, r2, t2 = u
        return [0.0 * r1, 0.0 * r1, -ad.cos(t1 - t2), -ad.sin(t1 - t2) / r2]

    return [VectorField(SPLIT_POLAR, f, f"X{i + 1}") for i, f in enumerate((x1, x2, x3))]


def split_polar_hamiltonians():
    return [
        ScalarField(SPLIT_POLAR, lambda u: 0.5 * u[0] ** 2 * u[2] ** 2, "h1"),
        ScalarField(SPLIT_POLAR, lambda u: u[0] ** 2 * u[2] * ad.cos(u[1] - u[3]), "h2"),
        ScalarField(SPLIT_POLAR, lambda u: 0.5 * u[0] ** 2, "h3"),
    ]


def split_polar_scaling():
    return VectorField(SPLIT_POLAR, lambda u: [0.5 * u[0], 0.0 * u[0], 0.0 * u[0], 0.0 * u[0]], "Delta")


# -- the reduced contact system ---------------------------------------------

def reduced_eta() -> OneForm:
    def fn(u):
        rho, t1, t2 = u
        c, s = ad.cos(t1 - t2), ad.sin(t1 - t2)
        return [0.5 * c, 0.5 * rho * s, 0.5 * rho * s]

    return OneForm(REDUCED, fn, "eta")


def reduced_reeb() -> VectorField:
    """``R = 2 cos(θ1-θ2) ∂ρ + 2 sin(θ1-θ2)/ρ ∂θ2``, i.e. ``-2 π_* X3``."""

    def fn(u):
        rho, t1, t2 = u
        return [2 * ad.cos(t1 - t2), 0.0 * rho, 2 * ad.sin(t1 - t2) / rho]

    return VectorField(REDUCED, fn, "R")


def reduced_contact() -> ContactStructure:
    return ContactStructure(None, REDUCED, reduced_eta(), reduced_reeb())


def reduced_fields():
    def x1(u):
        rho, t1, t2 = u
        return [-rho ** 2 * ad.cos(t1 - t2), -rho * ad.sin(t1 - t2), 0.0 * rho]

    def x2(u):
        return [-2 * u[0], 0.0 * u[0], 0.0 * u[0]]

    def x3(u):
        rho, t1, t2 = u
        return [-ad.cos(t1 - t2), 0.0 * rho, -ad.sin(t1 - t2) / rho]

    return [VectorField(REDUCED, f, f"pi*X{i + 1}") for i, f in enumerate((x1, x2, x3))]


def reduced_hamiltonians():
    """Contact Hamiltonians ``ĥ`` with ``π*ĥ = h/F``."""
    return [
        ScalarField(REDUCED, lambda u: 0.5 * u[0] ** 2, "h1"),
        ScalarField(REDUCED, lambda u: u[0] * ad.cos(u[1] - u[2]), "h2"),
        ScalarField(REDUCED, lambda u: 0.5 + 0.0 * u[0], "h3"),
    ]


def sample_canonical(n, rng, lo=0.3, hi=2.0):
    """Phase-space points with ``|q|`` and ``|p|`` in ``[lo, hi]``."""
    r1 = rng.uniform(lo, hi, n)
    r2 = rng.uniform(lo, hi, n)
    t1 = rng.uniform(-np.pi, np.pi, n)
    t2 = rng.uniform(-np.pi, np.pi, n)
    return np.stack([r1 * np.cos(t1), r1 * np.sin(t1), r2 * np.cos(t2), r2 * np.sin(t2)], -1)


def sample_reduced(n, rng, lo=0.3, hi=2.0):
    return np.stack([rng.uniform(lo, hi, n), rng.uniform(-np.pi, np.pi, n), rng.uniform(-np.pi, np.pi, n)], -1)
