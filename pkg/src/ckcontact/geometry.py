"""Cayley-Klein geometry of the three-dimensional spaces Σ_κ.

Σ_κ is the component through ``O = (1, 0, 0, 0)`` of the quadric
``I_κ(x, x) = 1`` in ℝ⁴, where ``I_κ = diag(1, κ01, κ02, κ03)``.  Indices of
the ambient coordinates run over 0..3; ``κ_ab`` is the product
``κ_{a+1} ... κ_b``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .calculus import ad
from .calculus.fields import (
    Metric,
    ScalarField,
    StructureTable,
    VectorField,
    components,
    diagonal_metric,
)
from .calculus.linalg import as_array
from .errors import ChartError, DomainError
from .ktrig import ck_angle, ck_cos, ck_sin

AMBIENT = "ambient"
PARALLEL = "parallel"
POLAR = "polar"
SAFE_MARGIN = 0.1
NONCOMPACT_HALF_WIDTH = 1.5


@dataclass(frozen=True)
class KappaTriple:
    k1: float
    k2: float
    k3: float

    @classmethod
    def of(cls, kappa):
        if isinstance(kappa, KappaTriple):
            return kappa
        k1, k2, k3 = (float(v) for v in kappa)
        return cls(k1, k2, k3)

    def __iter__(self):
        return iter((self.k1, self.k2, self.k3))

    def k(self, a: int, b: int) -> float:
        """κ_ab for 0 ≤ a < b ≤ 3; symmetric in its arguments."""
        a, b = min(a, b), max(a, b)
        out = 1.0
        for v in (self.k1, self.k2, self.k3)[a:b]:
            out *= v
        return out

    @property
    def k01(self):
        return self.k1

    @property
    def k02(self):
        return self.k1 * self.k2

    @property
    def k03(self):
        return self.k1 * self.k2 * self.k3

    @property
    def k12(self):
        return self.k2

    @property
    def k13(self):
        return self.k2 * self.k3

    @property
    def k23(self):
        return self.k3

    @property
    def diag(self):
        return (1.0, self.k01, self.k02, self.k03)

    @property
    def is_normalized(self):
        return all(v in (-1.0, 0.0, 1.0) for v in self)

    def __str__(self):
        return ",".join(f"{v:g}" for v in self)


NINE_SPACES = {
    "S3": (1, 1, 1),
    "AdS": (1, -1, 1),
    "NH+": (1, 0, 1),
    "E3": (0, 1, 1),
    "Minkowski": (0, -1, 1),
    "Galilei": (0, 0, 1),
    "H3": (-1, 1, 1),
    "dS": (-1, -1, 1),
    "NH-": (-1, 0, 1),
}


def normalized_triples(k3_values=(-1, 0, 1)):
    """All normalized κ-triples, optionally restricting κ3."""
    return [KappaTriple(a, b, c) for a, b, c in itertools.product((1, 0, -1), (1, 0, -1), k3_values)]


class AmbientPoint(NamedTuple):
    x0: float
    x1: float
    x2: float
    x3: float


class ParallelCoords(NamedTuple):
    x: float
    y: float
    z: float


class PolarCoords(NamedTuple):
    r: float
    theta: float
    phi: float


ORIGIN = AmbientPoint(1.0, 0.0, 0.0, 0.0)


def quadratic_form(kappa, p, q):
    """``I_κ(p, q) = p0 q0 + κ01 p1 q1 + κ02 p2 q2 + κ03 p3 q3``."""
    k = KappaTriple.of(kappa)
    p, q = components(p), components(q)
    return sum((d * a * b for d, a, b in zip(k.diag, p, q)), 0.0)


def constraint(kappa) -> ScalarField:
    k = KappaTriple.of(kappa)
    return ScalarField(AMBIENT, lambda p: quadratic_form(k, p, p), "I")


def embed_parallel_fn(kappa):
    k = KappaTriple.of(kappa)

    def fn(c):
        x, y, z = c
        c1, s1 = ck_cos(k.k01, x), ck_sin(k.k01, x)
        c2, s2 = ck_cos(k.k02, y), ck_sin(k.k02, y)
        c3, s3 = ck_cos(k.k03, z), ck_sin(k.k03, z)
        return [c1 * c2 * c3, s1 * c2 * c3, s2 * c3, s3]

    return fn


def embed_polar_fn(kappa):
    k = KappaTriple.of(kappa)

    def fn(c):
        r, th, ph = c
        s1 = ck_sin(k.k1, r)
        s2 = ck_sin(k.k2, th)
        return [ck_cos(k.k1, r), s1 * ck_cos(k.k2, th), s1 * s2 * ck_cos(k.k3, ph), s1 * s2 * ck_sin(k.k3, ph)]

    return fn


def embed_parallel(kappa, c):
    """Ambient image of geodesic parallel coordinates ``(x, y, z)``."""
    out = as_array(embed_parallel_fn(kappa)(components(c)))
    return AmbientPoint(*out) if out.ndim == 1 else out


def embed_polar(kappa, c):
    """Ambient image of geodesic polar coordinates ``(r, θ, φ)``; needs ``r > 0``."""
    comps = components(c)
    if np.any(np.asarray(ad.primal(comps[0])) <= 0):
        raise ChartError("polar chart requires r > 0")
    out = as_array(embed_polar_fn(kappa)(comps))
    return AmbientPoint(*out) if out.ndim == 1 else out


def parallel_of_ambient_fn(kappa):
    """Inverse of the parallel chart near the origin (generic, nestable)."""
    k = KappaTriple.of(kappa)

    def fn(p):
        x0, x1, x2, x3 = p
        c3 = ad.sqrt(x0 * x0 + k.k01 * x1 * x1 + k.k02 * x2 * x2)
        z = ck_angle(k.k03, c3, x3)
        c2 = ad.sqrt(x0 * x0 + k.k01 * x1 * x1) / c3
        y = ck_angle(k.k02, c2, x2 / c3)
        x = ck_angle(k.k01, x0 / (c2 * c3), x1 / (c2 * c3))
        return [x, y, z]

    return fn


def parallel_of_ambient(kappa, p):
    out = as_array(parallel_of_ambient_fn(kappa)(components(p)))
    return ParallelCoords(*out) if out.ndim == 1 else out


def polar_of_ambient_fn(kappa):
    k = KappaTriple.of(kappa)

    def fn(p):
        x0, x1, x2, x3 = p
        s1 = ad.sqrt(x1 * x1 + k.k2 * x2 * x2 + k.k2 * k.k3 * x3 * x3)
        r = ck_angle(k.k1, x0, s1)
        s2 = ad.sqrt(x2 * x2 + k.k3 * x3 * x3) / s1
        th = ck_angle(k.k2, x1 / s1, s2)
        ph = ck_angle(k.k3, x2 / (s1 * s2), x3 / (s1 * s2))
        return [r, th, ph]

    return fn


def polar_of_ambient(kappa, p):
    out = as_array(polar_of_ambient_fn(kappa)(components(p)))
    return PolarCoords(*out) if out.ndim == 1 else out


def _interval(kv, positive):
    if kv > 0:
        hi = np.pi / (2 * np.sqrt(kv)) - SAFE_MARGIN
    else:
        hi = NONCOMPACT_HALF_WIDTH
    return (SAFE_MARGIN, hi) if positive else (-hi, hi)


def chart_box(kappa, chart: str):
    """Coordinate box on which the chart and its derived objects are regular.

    Compact directions stay ``SAFE_MARGIN`` away from the first zero of the
    κ-cosine; noncompact ones span ``[-1.5, 1.5]``.  The polar radius and
    polar angle stay ``SAFE_MARGIN`` away from 0 where the chart degenerates.
    """
    k = KappaTriple.of(kappa)
    if chart == PARALLEL:
        return [_interval(k.k01, False), _interval(k.k02, False), _interval(k.k03, False)]
    if chart == POLAR:
        return [_interval(k.k1, True), _interval(k.k2, True), _interval(k.k3, False)]
    raise ChartError(f"no coordinate box for chart {chart!r}")


def sample_chart(kappa, chart, n, rng):
    box = chart_box(kappa, chart)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return lo + (hi - lo) * rng.random((n, 3))


def sample_ambient(kappa, n, rng):
    """Points of Σ_κ obtained from random parallel coordinates."""
    return embed_parallel(kappa, sample_chart(kappa, PARALLEL, n, rng))


def metric_parallel(kappa) -> Metric:
    k = KappaTriple.of(kappa)

    def diag(p):
        _, y, z = p
        c2, c3 = ck_cos(k.k02, y), ck_cos(k.k03, z)
        return [c2 * c2 * c3 * c3, k.k2 * c3 * c3, k.k2 * k.k3 + 0.0 * z]

    return diagonal_metric(PARALLEL, diag, "g")


def metric_polar(kappa) -> Metric:
    k = KappaTriple.of(kappa)

    def diag(p):
        r, th, _ = p
        s1, s2 = ck_sin(k.k1, r), ck_sin(k.k2, th)
        return [1.0 + 0.0 * r, k.k2 * s1 * s1, k.k2 * k.k3 * s1 * s1 * s2 * s2]

    return diagonal_metric(POLAR, diag, "g")


def metric_at(kappa, chart: str, c):
    """Main metric components (3×3) at chart coordinates ``c``."""
    m = {PARALLEL: metric_parallel, POLAR: metric_polar}[chart](kappa)
    return m.at(c)


def ambient_metric(kappa) -> Metric:
    """The flat form ``g̃ = diag(1, κ01, κ02, κ03)`` on ℝ⁴."""
    k = KappaTriple.of(kappa)
    d = k.diag
    return diagonal_metric(AMBIENT, lambda p: [v + 0.0 * p[0] for v in d], "g~")


def subsidiary_metric(kappa, x0: float = 0.0):
    """Metric on the leaves ``x = x0`` of the parallel chart when κ2 = 0.

    With κ2 = 0 the main metric only sees ``dx``; the leaves ``x = const``
    carry the Euclidean metric ``dy² + dz²`` (scaled by κ3 in the second slot).
    """
    k = KappaTriple.of(kappa)
    if k.k2 != 0:
        raise DomainError("the subsidiary metric is defined only when κ2 = 0")
    return np.diag([1.0, k.k3])


@dataclass(frozen=True)
class ConnectionAt:
    """Christoffel symbols ``gamma[c, a, b] = Γ^c_ab`` at one point."""

    gamma: np.ndarray

    def acceleration(self, velocity, accel):
        v = np.asarray(velocity)
        return np.asarray(accel) + np.einsum("cab,a,b->c", self.gamma, v, v)


def christoffel_polar_fn(kappa):
    """Generic Christoffel symbols of the main metric in the polar chart."""
    k = KappaTriple.of(kappa)

    def fn(p):
        r, th, _ = p
        zero = 0.0 * r
        g = [[[zero] * 3 for _ in range(3)] for _ in range(3)]
        c1, s1 = ck_cos(k.k1, r), ck_sin(k.k1, r)
        c2, s2 = ck_cos(k.k2, th), ck_sin(k.k2, th)
        inv_t1 = c1 / s1
        g[1][1][0] = g[1][0][1] = inv_t1
        g[2][2][0] = g[2][0][2] = inv_t1
        g[2][2][1] = g[2][1][2] = c2 / s2
        g[0][1][1] = -k.k2 * c1 * s1
        g[0][2][2] = -k.k2 * k.k3 * c1 * s1 * s2 * s2
        g[1][2][2] = -k.k3 * c2 * s2
        return g

    return fn


def connection_polar(kappa, c) -> ConnectionAt:
    g = christoffel_polar_fn(kappa)(components(c))
    arr = np.array([[[float(ad.primal(v)) for v in row] for row in mat] for mat in g])
    return ConnectionAt(arr)


def killing_field(kappa, a: int, b: int) -> VectorField:
    """Ambient generator ``J_ab = κ_ab x^b ∂_a - x^a ∂_b`` (``a < b``)."""
    if not (0 <= a < b <= 3):
        raise ValueError("need 0 <= a < b <= 3")
    k = KappaTriple.of(kappa)
    kab = k.k(a, b)

    def fn(p):
        out = [0.0 * p[0]] * 4
        out[a] = kab * p[b]
        out[b] = -p[a]
        return out

    return VectorField(AMBIENT, fn, f"J{a}{b}")


GENERATOR_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def killing_fields(kappa):
    return [killing_field(kappa, a, b) for a, b in GENERATOR_PAIRS]


def ck_structure_table(kappa) -> StructureTable:
    """Commutation relations of so_κ(4) in the basis J01, J02, J03, J12, J13, J23."""
    k = KappaTriple.of(kappa)
    k1, k2, k3 = k
    i = {p: n for n, p in enumerate(GENERATOR_PAIRS)}
    J = lambda a, b: i[(a, b)]
    br = {
        (J(0, 1), J(0, 2)): {J(1, 2): k1},
        (J(0, 1), J(1, 2)): {J(0, 2): -1.0},
        (J(0, 2), J(1, 2)): {J(0, 1): k2},
        (J(0, 1), J(0, 3)): {J(1, 3): k1},
        (J(0, 1), J(1, 3)): {J(0, 3): -1.0},
        (J(0, 3), J(1, 3)): {J(0, 1): k2 * k3},
        (J(0, 2), J(0, 3)): {J(2, 3): k1 * k2},
        (J(0, 2), J(2, 3)): {J(0, 3): -1.0},
        (J(0, 3), J(2, 3)): {J(0, 2): k3},
        (J(1, 2), J(1, 3)): {J(2, 3): k2},
        (J(1, 2), J(2, 3)): {J(1, 3): -1.0},
        (J(1, 3), J(2, 3)): {J(1, 2): k3},
    }
    return StructureTable.from_brackets(6, br, ("J01", "J02", "J03", "J12", "J13", "J23"))


def group_exp(kappa, a: int, b: int, s: float) -> np.ndarray:
    """Closed-form ``exp(s Γ(J_ab))`` in the vector representation."""
    k = KappaTriple.of(kappa)
    kab = k.k(a, b)
    m = np.eye(4)
    c, sn = ck_cos(kab, s), ck_sin(kab, s)
    m[a, a] = m[b, b] = c
    m[a, b] = -kab * sn
    m[b, a] = sn
    return m


def generator_matrix(kappa, a: int, b: int) -> np.ndarray:
    """``Γ(J_ab) = -κ_ab E_ab + E_ba``."""
    k = KappaTriple.of(kappa)
    m = np.zeros((4, 4))
    m[a, b] = -k.k(a, b)
    m[b, a] = 1.0
    return m


def casimirs(kappa):
    """The two Casimir polynomials of so_κ(4) as functions of ``(J01..J23)``."""
    k1, k2, k3 = KappaTriple.of(kappa)

    def c1(j):
        j01, j02, j03, j12, j13, j23 = j
        return (k2 * k3 * j01 * j01 + k3 * j02 * j02 + j03 * j03
                + k1 * k3 * j12 * j12 + k1 * j13 * j13 + k1 * k2 * j23 * j23)

    def c2(j):
        j01, j02, j03, j12, j13, j23 = j
        return k2 * j01 * j23 - j02 * j13 + j03 * j12

    return c1, c2


def lie_poisson(table: StructureTable, f, g, xi):
    """Linear Poisson bracket ``{f, g}(ξ) = c_ij^k ξ_k ∂_i f ∂_j g``."""
    xi = components(xi)
    df = ad.gradient(f, xi)
    dg = ad.gradient(g, xi)
    n = table.dim
    out = 0.0
    for i in range(n):
        for j in range(n):
            for kk in range(n):
                c = table.c[i, j, kk]
                if c:
                    out = out + c * xi[kk] * df[i] * dg[j]
    return out


def casimir_invariance(kappa, table: StructureTable | None = None, samples: int = 100, rng=None):
    """Sup over samples and generators of ``|{C, ξ_m}|`` for both Casimirs."""
    rng = np.random.default_rng(0) if rng is None else rng
    table = ck_structure_table(kappa) if table is None else table
    xi = rng.uniform(-2, 2, (samples, 6))
    worst = 0.0
    for C in casimirs(kappa):
        for m in range(6):
            val = lie_poisson(table, C, lambda x, m=m: x[m], xi)
            worst = max(worst, float(np.max(np.abs(ad.primal(val)))))
    return worst


