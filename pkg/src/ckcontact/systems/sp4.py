"""The sp(4,ℝ) Lie-Hamilton system on ℝ⁴ and its contact reductions.

Three realizations of the same ten generators live here:

* linear Hamiltonian fields on ℝ⁴ with ``ω = dx⁰∧dx¹ + dx²∧dx³``;
* the printed tangential fields on the unit sphere (homogeneous cubics), kept
  verbatim as reference data;
* contact Hamiltonian fields on Σ_κ in geodesic parallel coordinates, again
  kept verbatim, together with an ambient version obtained by projecting the
  linear fields along the scaling direction.
"""
from __future__ import annotations

import numpy as np

from ..calculus.fields import ScalarField, StructureTable, VectorField
from ..geometry import AMBIENT, PARALLEL, KappaTriple, quadratic_form
from ..ktrig import check_nonzero, ck_cos, ck_sin

# [X_i, X_j] = sum_k c X_k, 1-based indices, upper triangle only
SP4_BRACKETS = {
    (1, 2): {2: 1}, (1, 3): {3: -1}, (1, 5): {5: 2}, (1, 6): {6: 1}, (1, 8): {8: -2}, (1, 9): {9: -1},
    (2, 3): {1: 1, 4: -1}, (2, 4): {2: 1}, (2, 6): {5: 2}, (2, 7): {6: 1}, (2, 8): {9: -1}, (2, 9): {10: -2},
    (3, 4): {3: -1}, (3, 5): {6: 1}, (3, 6): {7: 2}, (3, 9): {8: -2}, (3, 10): {9: -1},
    (4, 6): {6: 1}, (4, 7): {7: 2}, (4, 9): {9: -1}, (4, 10): {10: -2},
    (5, 8): {1: -1}, (5, 9): {2: -1},
    (6, 8): {3: -1}, (6, 9): {1: -1, 4: -1}, (6, 10): {2: -1},
    (7, 9): {3: -1}, (7, 10): {4: -1},
}

LABELS = tuple(f"X{i}" for i in range(1, 11))


def sp4_table(sign: float = 1.0) -> StructureTable:
    """Lie brackets of the ten generators; ``sign=-1`` gives the Poisson table."""
    br = {(i - 1, j - 1): {k - 1: sign * v for k, v in rhs.items()} for (i, j), rhs in SP4_BRACKETS.items()}
    return StructureTable.from_brackets(10, br, LABELS)


def _r4_fields():
    z = lambda p: 0.0 * p[0]
    return [
        lambda p: [p[0], -p[1], z(p), z(p)],
        lambda p: [z(p), -p[3], p[0], z(p)],
        lambda p: [p[2], z(p), z(p), -p[1]],
        lambda p: [z(p), z(p), p[2], -p[3]],
        lambda p: [z(p), -p[0], z(p), z(p)],
        lambda p: [z(p), -p[2], z(p), -p[0]],
        lambda p: [z(p), z(p), z(p), -p[2]],
        lambda p: [p[1], z(p), z(p), z(p)],
        lambda p: [p[3], z(p), p[1], z(p)],
        lambda p: [z(p), z(p), p[3], z(p)],
    ]


def _r4_hams():
    return [
        lambda p: p[0] * p[1],
        lambda p: p[0] * p[3],
        lambda p: p[1] * p[2],
        lambda p: p[2] * p[3],
        lambda p: 0.5 * p[0] * p[0],
        lambda p: p[0] * p[2],
        lambda p: 0.5 * p[2] * p[2],
        lambda p: 0.5 * p[1] * p[1],
        lambda p: p[1] * p[3],
        lambda p: 0.5 * p[3] * p[3],
    ]


def r4_fields():
    return [VectorField(AMBIENT, f, f"X{i + 1}") for i, f in enumerate(_r4_fields())]


def r4_hamiltonians():
    return [ScalarField(AMBIENT, f, f"h{i + 1}") for i, f in enumerate(_r4_hams())]


def scaling_field():
    """``Δ = ½ x^a ∂_a``."""
    return VectorField(AMBIENT, lambda p: [0.5 * c for c in p], "Delta")


def projected_fields(kappa):
    """Linear fields projected onto T Σ_κ along Δ: ``X - dI_κ(X) Δ``.

    ``I_κ`` is 1-homogeneous for Δ, so the result is tangent to every level
    set of ``I_κ`` and equals the reduced field on the quotient ℝ⁴₀/ℝ⁺.
    """
    k = KappaTriple.of(kappa)
    d = k.diag
    out = []
    for i, f in enumerate(_r4_fields()):
        def fn(p, f=f):
            X = f(p)
            dI = 2 * sum((d[a] * p[a] * X[a] for a in range(4)), 0.0)
            return [X[a] - 0.5 * dI * p[a] for a in range(4)]

        out.append(VectorField(AMBIENT, fn, f"X{i + 1}"))
    return out


def restricted_hamiltonians(kappa):
    """``h_i / I_κ``, which agrees with ``h_i`` on Σ_κ."""
    k = KappaTriple.of(kappa)
    return [ScalarField(AMBIENT, lambda p, f=f: f(p) / quadratic_form(k, p, p), f"h{i + 1}")
            for i, f in enumerate(_r4_hams())]


def _printed_sphere(corrected=False):
    e = 2 if corrected else 3

    def n(*xs):
        return sum((x * x for x in xs), 0.0)

    return [
        lambda p: [p[0] * (2 * p[1] ** 2 + p[2] ** 2 + p[3] ** 2), -p[1] * (2 * p[0] ** 2 + p[2] ** 2 + p[3] ** 2),
                   -p[2] * (p[0] ** 2 - p[1] ** 2), -p[3] * (p[0] ** 2 - p[1] ** 2)],
        lambda p: [-p[0] * (p[0] * p[2] - p[1] * p[3]), -(p[3] * n(p[0], p[2], p[3]) + p[0] * p[1] * p[2]),
                   p[0] * n(p[0], p[1], p[3]) + p[1] * p[2] * p[3], -p[3] * (p[0] * p[2] - p[1] * p[3])],
        # printed with (x²)³ in the first component; kept unless ``corrected``
        lambda p: [p[2] * (p[1] ** 2 + p[2] ** e + p[3] ** 2) + p[0] * p[1] * p[3], -p[1] * (p[0] * p[2] - p[1] * p[3]),
                   -p[2] * (p[0] * p[2] - p[1] * p[3]), -(p[1] * n(p[0], p[1], p[2]) + p[0] * p[2] * p[3])],
        lambda p: [-p[0] * (p[2] ** 2 - p[3] ** 2), -p[1] * (p[2] ** 2 - p[3] ** 2),
                   p[2] * (p[0] ** 2 + p[1] ** 2 + 2 * p[3] ** 2), -p[3] * (p[0] ** 2 + p[1] ** 2 + 2 * p[2] ** 2)],
        lambda p: [p[1] * p[0] ** 2, -p[0] * n(p[0], p[2], p[3]), p[0] * p[1] * p[2], p[0] * p[1] * p[3]],
        lambda p: [p[0] * (p[0] * p[3] + p[1] * p[2]), -(p[2] * n(p[0], p[2], p[3]) - p[0] * p[1] * p[3]),
                   p[2] * (p[0] * p[3] + p[1] * p[2]), -(p[0] * n(p[0], p[1], p[2]) - p[1] * p[2] * p[3])],
        lambda p: [p[0] * p[2] * p[3], p[1] * p[2] * p[3], p[3] * p[2] ** 2, -p[2] * n(p[0], p[1], p[2])],
        lambda p: [p[1] * n(p[1], p[2], p[3]), -p[0] * p[1] ** 2, -p[0] * p[1] * p[2], -p[0] * p[1] * p[3]],
        lambda p: [p[3] * n(p[1], p[2], p[3]) - p[0] * p[1] * p[2], -p[1] * (p[0] * p[3] + p[1] * p[2]),
                   p[1] * n(p[0], p[1], p[3]) - p[0] * p[2] * p[3], -p[3] * (p[0] * p[3] + p[1] * p[2])],
        lambda p: [-p[0] * p[2] * p[3], -p[1] * p[2] * p[3], p[3] * n(p[0], p[1], p[3]), -p[2] * p[3] ** 2],
    ]


def printed_sphere_fields(corrected=False):
    """The printed projected fields on S³ ⊂ ℝ⁴ (valid on the unit sphere).

    ``corrected=True`` replaces the cube in the first component of ``π*X3`` by a
    square, the reading consistent with the pushforward.
    """
    return [VectorField(AMBIENT, f, f"pi*X{i + 1}") for i, f in enumerate(_printed_sphere(corrected))]


def _trig(k, p):
    x, y, z = p
    return dict(
        C1=ck_cos(k.k01, x), S1=ck_sin(k.k01, x), C2=ck_cos(k.k02, y), S2=ck_sin(k.k02, y),
        C3=ck_cos(k.k03, z), S3=ck_sin(k.k03, z),
        S1_2=ck_sin(k.k01, 2 * x), C1_2=ck_cos(k.k01, 2 * x), S2_2=ck_sin(k.k02, 2 * y),
        C2_2=ck_cos(k.k02, 2 * y), S3_2=ck_sin(k.k03, 2 * z),
    )


def ck_hamiltonians(kappa):
    """The printed contact Hamiltonians ``h_{κ,i}`` in parallel coordinates."""
    k = KappaTriple.of(kappa)

    def mk(expr):
        return lambda p: expr(**_trig(k, p))

    exprs = [
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S1_2 * C2 ** 2 * C3 ** 2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * C1 * C2 * S3_2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S1 * S2_2 * C3 ** 2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S2 * S3_2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * C1 ** 2 * C2 ** 2 * C3 ** 2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * C1 * S2_2 * C3 ** 2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S2 ** 2 * C3 ** 2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S1 ** 2 * C2 ** 2 * C3 ** 2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S1 * C2 * S3_2,
        lambda C1, S1, C2, S2, C3, S3, S1_2, C1_2, S2_2, C2_2, S3_2: 0.5 * S3 ** 2,
    ]
    return [ScalarField(PARALLEL, mk(e), f"h{i + 1}") for i, e in enumerate(exprs)]


def ck_fields(kappa):
    """The printed contact Hamiltonian fields ``X_{κ,i}`` in parallel coordinates."""
    k = KappaTriple.of(kappa)
    k01, k02 = k.k01, k.k02

    def f1(t):
        return [-t["S1_2"], -0.5 * t["C1_2"] * t["S2_2"], -0.5 * t["C1_2"] * t["C2"] ** 2 * t["S3_2"]]

    def f2(t):
        return [-t["C1"] * t["T3"] / t["C2"],
                t["C1"] * t["C2"] ** 2 + k01 * t["S1"] * t["S2"] * t["T3"],
                k01 * t["S1"] * t["C2"] * t["S3"] ** 2 - 0.25 * k02 * t["C1"] * t["S2_2"] * t["S3_2"]]

    def f3(t):
        return [-t["S1"] * t["T2"], -t["C1"] * t["S2"] ** 2,
                -t["C2"] * t["C3"] ** 2 * (t["S1"] + t["C1"] * t["S2"] * t["T3"])]

    def f4(t):
        return [0.0 * t["C1"], 0.5 * t["S2_2"], 0.25 * t["S3_2"] * (t["C2_2"] - 3)]

    def f5(t):
        return [-t["C1"] ** 2, 0.25 * k01 * t["S1_2"] * t["S2_2"], 0.25 * k01 * t["S1_2"] * t["C2"] ** 2 * t["S3_2"]]

    def f6(t):
        return [-t["C1"] * t["T2"], k01 * t["S1"] * t["S2"] ** 2,
                -(t["C1"] * t["C2"] * t["C3"] ** 2 - 0.25 * k01 * t["S1"] * t["S2_2"] * t["S3_2"])]

    def f7(t):
        return [0.0 * t["C1"], 0.0 * t["C1"], -t["S2"] * t["C3"] ** 2]

    def f8(t):
        return [-t["S1"] ** 2, -0.25 * t["S1_2"] * t["S2_2"], -0.25 * t["S1_2"] * t["C2"] ** 2 * t["S3_2"]]

    def f9(t):
        return [-t["S1"] * t["T3"] / t["C2"],
                t["S1"] * t["C2"] ** 2 - t["C1"] * t["S2"] * t["T3"],
                -0.5 * t["C2"] * t["S3_2"] * (t["C1"] * t["T3"] + k02 * t["S1"] * t["S2"])]

    def f10(t):
        return [0.0 * t["C1"], t["C2"] * t["T3"], -k02 * t["S2"] * t["S3"] ** 2]

    def wrap(f):
        def fn(p):
            t = _trig(k, p)
            check_nonzero(t["C2"])
            check_nonzero(t["C3"])
            t["T2"] = t["S2"] / t["C2"]
            t["T3"] = t["S3"] / t["C3"]
            return f(t)

        return fn

    return [VectorField(PARALLEL, wrap(f), f"X{i + 1}") for i, f in enumerate((f1, f2, f3, f4, f5, f6, f7, f8, f9, f10))]


def field_discrepancies(printed, reference, points, tol=1e-6):
    """Compare two lists of fields entry by entry.

    Returns ``(worst_matching_residual, [(name, residual), ...])`` where the list
    holds the entries whose residual exceeds ``tol``.
    """
    bad, worst = [], 0.0
    for a, b in zip(printed, reference):
        r = float(np.max(np.abs(a.at(points) - b.at(points))))
        if r > tol:
            bad.append((a.name, r))
        else:
            worst = max(worst, r)
    return worst, bad
