"""A time-dependent thermodynamic system: the linear gl(3) action on T*ℝ³,
reduced by fibre scaling to the projective cotangent bundle and restricted
to the affine chart ``(U, S, V, T, P)`` carrying the Gibbs form
``η = dU - T dS + P dV``.
"""
from __future__ import annotations

from ..calculus.fields import OneForm, ScalarField, StructureTable, VectorField
from ..contact import ContactStructure
from ..symplectic import ScalingSymmetry, SymplecticStructure, canonical_omega

PHASE = "phase6"
GIBBS = "gibbs"

# {h_i, h_j} = sum_k c h_k, 1-based, as listed for the nine bilinear functions
POISSON_BRACKETS = {
    (1, 2): {2: -1}, (1, 3): {3: -1}, (1, 4): {4: 1}, (1, 7): {7: 1},
    (2, 4): {1: -1, 5: 1}, (2, 5): {2: -1}, (2, 6): {3: -1}, (2, 7): {8: 1},
    (3, 4): {6: 1}, (3, 7): {1: -1, 9: 1}, (3, 8): {2: -1}, (3, 9): {3: -1},
    (4, 5): {4: 1}, (4, 8): {7: 1}, (5, 6): {6: -1}, (5, 8): {8: 1},
    (6, 7): {4: -1}, (6, 8): {5: -1, 9: 1}, (6, 9): {6: -1}, (7, 9): {7: 1}, (8, 9): {8: 1},
}

# h_i = q_a p_b for (a, b) below, 0-based
PAIRS = [(a, b) for a in range(3) for b in range(3)]
LABELS = tuple(f"X{i}" for i in range(1, 10))


def table(sign: float = -1.0) -> StructureTable:
    """Lie brackets of the fields (``sign=-1``) or the Poisson table (``sign=1``)."""
    br = {(i - 1, j - 1): {k - 1: sign * v for k, v in rhs.items()} for (i, j), rhs in POISSON_BRACKETS.items()}
    return StructureTable.from_brackets(9, br, LABELS)


def structure() -> SymplecticStructure:
    return SymplecticStructure(PHASE, canonical_omega(PHASE, [(0, 3), (1, 4), (2, 5)], 6))


def phase_hamiltonians():
    return [ScalarField(PHASE, lambda x, a=a, b=b: x[a] * x[3 + b], f"h{i + 1}") for i, (a, b) in enumerate(PAIRS)]


def phase_fields():
    """``X_i = q_a ∂/∂q_b - p_b ∂/∂p_a`` for ``h_i = q_a p_b``."""
    out = []
    for i, (a, b) in enumerate(PAIRS):
        def fn(x, a=a, b=b):
            v = [0.0 * x[0] for _ in range(6)]
            v[b] = v[b] + x[a]
            v[3 + a] = v[3 + a] - x[3 + b]
            return v

        out.append(VectorField(PHASE, fn, f"X{i + 1}"))
    return out


def scaling() -> ScalingSymmetry:
    """Fibre scaling ``Δ = p ∂/∂p`` of the group ℝ∖{0}, with ``Φ_{-1}(q, p) = (q, -p)``."""
    delta = VectorField(PHASE, lambda x: [0.0 * x[0]] * 3 + [x[3], x[4], x[5]], "Delta")
    return ScalingSymmetry(delta, "R*", flip)


def flip(x):
    return [x[0], x[1], x[2], -x[3], -x[4], -x[5]]


def scaling_function():
    """``F = -p1``, positive on the chart image and 1-homogeneous."""
    return ScalarField(PHASE, lambda x: -x[3], "F")


def section(u):
    U, S, V, T, P = u
    return [U, S, V, -1.0 + 0.0 * U, T, -P]


def projection(x):
    q1, q2, q3, p1, p2, p3 = x
    return [q1, q2, q3, -p2 / p1, p3 / p1]


def gibbs_eta() -> OneForm:
    return OneForm(GIBBS, lambda u: [1.0 + 0.0 * u[0], -u[3], u[4], 0.0 * u[0], 0.0 * u[0]], "eta")


def gibbs_reeb() -> VectorField:
    z = lambda u: 0.0 * u[0]
    return VectorField(GIBBS, lambda u: [1.0 + z(u), z(u), z(u), z(u), z(u)], "R")


def gibbs_contact() -> ContactStructure:
    return ContactStructure(None, GIBBS, gibbs_eta(), gibbs_reeb())


def gibbs_fields():
    """The reduced generators in the affine chart."""
    z = lambda u: 0.0 * u[0]
    one = lambda u: 1.0 + z(u)
    fns = [
        lambda u: [u[0], z(u), z(u), u[3], u[4]],
        lambda u: [z(u), u[0], z(u), -u[3] ** 2, -u[3] * u[4]],
        lambda u: [z(u), z(u), u[0], u[3] * u[4], u[4] ** 2],
        lambda u: [u[1], z(u), z(u), one(u), z(u)],
        lambda u: [z(u), u[1], z(u), -u[3], z(u)],
        lambda u: [z(u), z(u), u[1], u[4], z(u)],
        lambda u: [u[2], z(u), z(u), z(u), -one(u)],
        lambda u: [z(u), u[2], z(u), z(u), u[3]],
        lambda u: [z(u), z(u), u[2], z(u), -u[4]],
    ]
    return [VectorField(GIBBS, f, f"pi*X{i + 1}") for i, f in enumerate(fns)]


def gibbs_hamiltonians():
    """Contact Hamiltonians ``-η(π_* X_i)``, equal to ``h_i / F`` on the section."""
    # momenta along the section: p = (-1, T, -P)
    p = [lambda u: -1.0 + 0.0 * u[0], lambda u: u[3], lambda u: -u[4]]
    return [ScalarField(GIBBS, lambda u, a=a, b=b: u[a] * p[b](u), f"h{i + 1}") for i, (a, b) in enumerate(PAIRS)]


def sample_gibbs(n, rng, half_width=2.0):
    return rng.uniform(-half_width, half_width, (n, 5))


def sample_phase(n, rng, half_width=2.0):
    """Points with ``p1`` bounded away from zero so the affine chart applies."""
    x = rng.uniform(-half_width, half_width, (n, 6))
    x[:, 3] = -rng.uniform(0.3, half_width, n) * rng.choice([-1.0, 1.0], n)
    return x
