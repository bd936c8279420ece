"""Liouville-type contact subsystems and their reductions to the plane, the
sphere S² and the hyperbolic disk."""
from __future__ import annotations

import numpy as np

from ..calculus import ad
from ..calculus.fields import ScalarField, StructureTable, VectorField, combine
from ..geometry import AMBIENT, PARALLEL, KappaTriple
from ..ktrig import check_nonzero, ck_cos, ck_sin
from .sp4 import ck_fields, ck_hamiltonians, projected_fields, restricted_hamiltonians


def _pick(items, coeffs, name):
    """Linear combination ``sum c_i items[i - 1]`` of fields or functions."""
    idx = [i - 1 for i in coeffs]
    cs = list(coeffs.values())
    if isinstance(items[0], VectorField):
        return combine(cs, [items[i] for i in idx], name)
    chart = items[0].chart
    fns = [items[i].fn for i in idx]
    return ScalarField(chart, lambda p: sum((c * f(p) for c, f in zip(cs, fns)), 0.0), name)


# -- S³ and AdS: κ = (1, κ2, 1) -------------------------------------------

def sasaki_combos(k2):
    """Coefficients expressing Y1..Y4 (and h'1..h'4) in the sp4 basis."""
    return [
        {5: 0.5, 8: 0.5, 7: -0.5 * k2, 10: -0.5 * k2},
        {2: 0.5 * k2, 3: -0.5},
        {6: 0.5, 9: 0.5 * k2},
        {5: -2.0, 8: -2.0, 7: -2.0 * k2, 10: -2.0 * k2},
    ]


def sasaki_table(k2) -> StructureTable:
    """``[Y1,Y2] = Y3, [Y1,Y3] = -Y2, [Y2,Y3] = κ2 Y1`` with ``Y4`` central."""
    return StructureTable.from_brackets(4, {(0, 1): {2: 1.0}, (0, 2): {1: -1.0}, (1, 2): {0: float(k2)}},
                                        ("Y1", "Y2", "Y3", "R"))


def sasaki_fields(k2, chart=PARALLEL):
    k = KappaTriple(1.0, float(k2), 1.0)
    base = ck_fields(k) if chart == PARALLEL else projected_fields(k)
    return [_pick(base, c, f"Y{i + 1}") for i, c in enumerate(sasaki_combos(k2))]


def sasaki_hamiltonians(k2, chart=PARALLEL):
    k = KappaTriple(1.0, float(k2), 1.0)
    base = ck_hamiltonians(k) if chart == PARALLEL else restricted_hamiltonians(k)
    return [_pick(base, c, f"h'{i + 1}") for i, c in enumerate(sasaki_combos(k2))]


def printed_sasaki_fields(k2):
    """The printed Y1..Y4 in parallel coordinates on S³ (κ2 = 1) or AdS (κ2 = -1)."""
    k2 = float(k2)

    def trig(p):
        x, y, z = p
        cy, sy = ck_cos(k2, y), ck_sin(k2, y)
        cz = ck_cos(k2, z)
        check_nonzero(cy)
        check_nonzero(cz)
        return ad.cos(x), ad.sin(x), cy, sy, sy / cy, ck_sin(k2, z) / cz

    def y1(p):
        cx, sx, cy, sy, ty, tz = trig(p)
        return [-0.5 + 0.0 * cx, -0.5 * k2 * cy * tz, 0.5 * k2 * sy]

    def y2(p):
        cx, sx, cy, sy, ty, tz = trig(p)
        return [0.5 * (sx * ty - k2 * cx / cy * tz), 0.5 * k2 * (cx + sx * sy * tz), 0.5 * sx * cy]

    def y3(p):
        cx, sx, cy, sy, ty, tz = trig(p)
        return [-0.5 * (cx * ty + k2 * sx / cy * tz), 0.5 * k2 * (sx - cx * sy * tz), -0.5 * cx * cy]

    def y4(p):
        cx, sx, cy, sy, ty, tz = trig(p)
        return [2.0 + 0.0 * cx, -2 * k2 * cy * tz, 2 * k2 * sy]

    return [VectorField(PARALLEL, f, f"Y{i + 1}") for i, f in enumerate((y1, y2, y3, y4))]


def printed_sasaki_hamiltonians(k2):
    """``h'1..h'3`` as printed (ambient) and ``h'4 = -I_κ``, the Hamiltonian of R."""
    k2 = float(k2)
    return [
        ScalarField(AMBIENT, lambda p: 0.25 * (p[0] ** 2 + p[1] ** 2 - k2 * p[2] ** 2 - k2 * p[3] ** 2), "h'1"),
        ScalarField(AMBIENT, lambda p: 0.5 * (k2 * p[0] * p[3] - p[1] * p[2]), "h'2"),
        ScalarField(AMBIENT, lambda p: 0.5 * (p[0] * p[2] + k2 * p[1] * p[3]), "h'3"),
        ScalarField(AMBIENT, lambda p: -(p[0] ** 2 + p[1] ** 2 + k2 * p[2] ** 2 + k2 * p[3] ** 2), "h'4"),
    ]


def s2_chart(p):
    """Geodesic parallel coordinates ``(x, y)`` of S² to unit vectors."""
    x, y = p
    return [ad.cos(x) * ad.cos(y), ad.sin(x) * ad.cos(y), ad.sin(y)]


def s2_fields_parallel():
    return [
        VectorField("s2-parallel", lambda p: [ad.cos(p[0]) * ad.tan(p[1]), -ad.sin(p[0])], "pY1"),
        VectorField("s2-parallel", lambda p: [1.0 + 0.0 * p[0], 0.0 * p[0]], "pY2"),
        VectorField("s2-parallel", lambda p: [ad.sin(p[0]) * ad.tan(p[1]), ad.cos(p[0])], "pY3"),
    ]


def s2_fields():
    """The same rotation fields written on unit vectors ``(X0, X1, X2)``.

    Obtained by pushing the parallel-chart fields through :func:`s2_chart`;
    the results are linear and free of the polar singularities.
    """
    return [
        VectorField("s2", lambda p: [0.0 * p[0], p[2], -p[1]], "pY1"),
        VectorField("s2", lambda p: [-p[1], p[0], 0.0 * p[0]], "pY2"),
        VectorField("s2", lambda p: [-p[2], 0.0 * p[0], p[0]], "pY3"),
    ]


def s2_hamiltonians_parallel():
    return [
        ScalarField("s2-parallel", lambda p: 0.25 * ad.cos(p[0]) * ad.cos(p[1]), "h1"),
        ScalarField("s2-parallel", lambda p: -0.25 * ad.sin(p[1]), "h2"),
        ScalarField("s2-parallel", lambda p: 0.25 * ad.sin(p[0]) * ad.cos(p[1]), "h3"),
    ]


def s2_hamiltonians():
    """Hamiltonians of :func:`s2_fields` on unit vectors, pulling back to ``h'1..h'3``."""
    return [
        ScalarField("s2", lambda p: 0.25 * p[0], "h1"),
        ScalarField("s2", lambda p: -0.25 * p[2], "h2"),
        ScalarField("s2", lambda p: 0.25 * p[1], "h3"),
    ]


def s2_omega_parallel():
    from ..calculus.fields import TwoForm

    return TwoForm("s2-parallel", lambda p: [[0.0 * p[0], -0.25 * ad.cos(p[1])], [0.25 * ad.cos(p[1]), 0.0 * p[0]]])


def disk_fields():
    return [
        VectorField("disk", lambda p: [p[1], -p[0]], "pY1"),
        VectorField("disk", lambda p: [0.5 * (p[0] ** 2 - p[1] ** 2 - 1), p[0] * p[1]], "pY2"),
        VectorField("disk", lambda p: [p[0] * p[1], -0.5 * (p[0] ** 2 - p[1] ** 2 + 1)], "pY3"),
    ]


def disk_hamiltonians():
    def d(p):
        return 1.0 - p[0] ** 2 - p[1] ** 2

    return [
        ScalarField("disk", lambda p: (1 + p[0] ** 2 + p[1] ** 2) / (4 * d(p)), "h1"),
        ScalarField("disk", lambda p: -p[1] / (2 * d(p)), "h2"),
        ScalarField("disk", lambda p: p[0] / (2 * d(p)), "h3"),
    ]


def so3_table(k2) -> StructureTable:
    """``[Y1,Y2] = Y3, [Y1,Y3] = -Y2, [Y2,Y3] = κ2 Y1`` (three generators)."""
    return StructureTable.from_brackets(3, {(0, 1): {2: 1.0}, (0, 2): {1: -1.0}, (1, 2): {0: float(k2)}})


# -- flat spaces, Newton-Hooke and H³ --------------------------------------

FLAT_INDICES = (2, 4, 5, 6, 7, 10)
NH_COMBOS = lambda k1: [{4: 1.0}, {7: 1.0}, {10: 1.0}, {5: 1.0, 8: float(k1)}]
H3_COMBOS = [{7: 1.0, 10: 1.0}, {5: 1.0, 7: -1.0, 8: -1.0, 10: -1.0}]


def flat_combos():
    return [{i: 1.0} for i in FLAT_INDICES]


def combos_for(kind, kappa):
    k = KappaTriple.of(kappa)
    if kind == "flat":
        return flat_combos()
    if kind == "nh":
        return NH_COMBOS(k.k1)
    if kind == "h3":
        return H3_COMBOS
    return sasaki_combos(k.k2)


def subsystem(kind, kappa, chart=PARALLEL):
    """Basis fields and Hamiltonians of a Liouville subsystem in ``chart``."""
    k = KappaTriple.of(kappa)
    combos = combos_for(kind, k)
    fields = ck_fields(k) if chart == PARALLEL else projected_fields(k)
    hams = ck_hamiltonians(k) if chart == PARALLEL else restricted_hamiltonians(k)
    names = [f"X{'+'.join(str(i) for i in c)}" for c in combos]
    return ([_pick(fields, c, n) for c, n in zip(combos, names)],
            [_pick(hams, c, "h" + n[1:]) for c, n in zip(combos, names)])


def printed_flat():
    """The printed h6 realization on the flat spaces (parallel = Cartesian)."""
    z = lambda p: 0.0 * p[0]
    fields = [
        VectorField(PARALLEL, lambda p: [-p[2], 1.0 + z(p), z(p)], "X2"),
        VectorField(PARALLEL, lambda p: [z(p), p[1], -p[2]], "X4"),
        VectorField(PARALLEL, lambda p: [-1.0 + z(p), z(p), z(p)], "X5"),
        VectorField(PARALLEL, lambda p: [-p[1], z(p), -1.0 + z(p)], "X6"),
        VectorField(PARALLEL, lambda p: [z(p), z(p), -p[1]], "X7"),
        VectorField(PARALLEL, lambda p: [z(p), p[2], z(p)], "X10"),
    ]
    hams = [
        ScalarField(PARALLEL, lambda p: p[2], "h2"),
        ScalarField(PARALLEL, lambda p: p[1] * p[2], "h4"),
        ScalarField(PARALLEL, lambda p: 0.5 + z(p), "h5"),
        ScalarField(PARALLEL, lambda p: p[1], "h6"),
        ScalarField(PARALLEL, lambda p: 0.5 * p[1] ** 2, "h7"),
        ScalarField(PARALLEL, lambda p: 0.5 * p[2] ** 2, "h10"),
    ]
    return fields, hams


def printed_nh():
    z = lambda p: 0.0 * p[0]
    fields = [
        VectorField(PARALLEL, lambda p: [z(p), p[1], -p[2]], "X4"),
        VectorField(PARALLEL, lambda p: [z(p), z(p), -p[1]], "X7"),
        VectorField(PARALLEL, lambda p: [z(p), p[2], z(p)], "X10"),
        VectorField(PARALLEL, lambda p: [-1.0 + z(p), z(p), z(p)], "X5+k1X8"),
    ]
    hams = [
        ScalarField(PARALLEL, lambda p: p[1] * p[2], "h4"),
        ScalarField(PARALLEL, lambda p: 0.5 * p[1] ** 2, "h7"),
        ScalarField(PARALLEL, lambda p: 0.5 * p[2] ** 2, "h10"),
        ScalarField(PARALLEL, lambda p: 0.5 + z(p), "h5+k1h8"),
    ]
    return fields, hams


def printed_h3():
    z = lambda p: 0.0 * p[0]
    fields = [
        VectorField(PARALLEL, lambda p: [z(p), ad.cosh(p[1]) * ad.tanh(p[2]), -ad.sinh(p[1])], "X7+X10"),
        VectorField(PARALLEL, lambda p: [-1.0 + z(p), -ad.cosh(p[1]) * ad.tanh(p[2]), ad.sinh(p[1])], "X5-X7-X8-X10"),
    ]
    hams = [
        ScalarField(PARALLEL, lambda p: 0.5 * (ad.sinh(p[1]) ** 2 * ad.cosh(p[2]) ** 2 + ad.sinh(p[2]) ** 2), "h7+h10"),
        ScalarField(PARALLEL, lambda p: 0.5 + z(p), "h5-h7-h8-h10"),
    ]
    return fields, hams


def plane_fields(kind):
    """Reduced fields on ℝ² with coordinates ``(q, p)``, one per basis element."""
    z = lambda p: 0.0 * p[0]
    one = lambda p: 1.0 + z(p)
    X = lambda f, n: VectorField("plane", f, n)
    if kind == "flat":
        return [
            X(lambda p: [one(p), z(p)], "dq"),
            X(lambda p: [p[0], -p[1]], "q dq - p dp"),
            X(lambda p: [z(p), z(p)], "0"),
            X(lambda p: [z(p), -one(p)], "-dp"),
            X(lambda p: [z(p), -p[0]], "-q dp"),
            X(lambda p: [p[1], z(p)], "p dq"),
        ]
    if kind == "nh":
        return [
            X(lambda p: [p[0], -p[1]], "q dq - p dp"),
            X(lambda p: [z(p), -p[0]], "-q dp"),
            X(lambda p: [p[1], z(p)], "p dq"),
            X(lambda p: [z(p), z(p)], "0"),
        ]
    if kind == "h3":
        # pushforward of X7 + X10 = x³∂₂ - x²∂₃ under z1·exp(i·artanh(x¹/x⁰))
        return [X(lambda p: [p[1], -p[0]], "p dq - q dp"), X(lambda p: [z(p), z(p)], "0")]
    raise KeyError(kind)


def plane_hamiltonians(kind):
    """Hamiltonians on ``(ℝ², dq∧dp)`` of :func:`plane_fields` (``ι_X ω = dh``)."""
    z = lambda p: 0.0 * p[0]
    S = lambda f, n: ScalarField("plane", f, n)
    if kind == "flat":
        return [S(lambda p: p[1], "p"), S(lambda p: p[0] * p[1], "qp"), S(lambda p: 0.5 + z(p), "1/2"),
                S(lambda p: p[0], "q"), S(lambda p: 0.5 * p[0] ** 2, "q²/2"), S(lambda p: 0.5 * p[1] ** 2, "p²/2")]
    if kind == "nh":
        return [S(lambda p: p[0] * p[1], "qp"), S(lambda p: 0.5 * p[0] ** 2, "q²/2"),
                S(lambda p: 0.5 * p[1] ** 2, "p²/2"), S(lambda p: 0.5 + z(p), "1/2")]
    if kind == "h3":
        return [S(lambda p: 0.5 * (p[0] ** 2 + p[1] ** 2), "(q²+p²)/2"), S(lambda p: 0.5 + z(p), "1/2")]
    raise KeyError(kind)


def nh_casimir(hams):
    """``4 h7 h10 - h4²`` for the Newton-Hooke realization ``(h4, h7, h10, ·)``."""
    h4, h7, h10 = hams[0], hams[1], hams[2]
    return ScalarField(h4.chart, lambda p: 4 * h7.fn(p) * h10.fn(p) - h4.fn(p) ** 2, "C")


def angle_residual(a, b):
    d = np.asarray(a) - np.asarray(b)
    return (d + np.pi) % (2 * np.pi) - np.pi
