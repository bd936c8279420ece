"""Reeb flows of Σ_κ and the projections onto their leaf spaces.

For κ3 = 1 and κ ≠ (-1, -1, 1) the Reeb orbits of Σ_κ are the fibres of a
principal bundle with structure group SO(2) (κ1 > 0) or ℝ (κ1 ≤ 0).  Each
:class:`FibrationMap` realizes the bundle projection in ambient coordinates
together with the symplectic form ``ω`` on the base with ``π*ω = dη``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .calculus import ad
from .calculus.fields import ScalarField, TwoForm, VectorField, components
from .calculus.integrate import TimeDependentField, integrate
from .calculus.linalg import as_array
from .contact import ContactStructure, tangent_basis
from .errors import NotLiouville, NotRegular, UnsupportedKappa
from .geometry import KappaTriple
from .ktrig import ck_cos, ck_sin
from .symplectic import SymplecticStructure

DISK_MARGIN = 1e-6
CONE_MARGIN = 1e-9


def reeb_flow_fn(kappa, t):
    """Generic evaluator of the time-``t`` Reeb flow on ambient points."""
    k = KappaTriple.of(kappa)
    c1, s1 = ck_cos(k.k1, 2 * t), ck_sin(k.k1, 2 * t)
    c3, s3 = ck_cos(k.k3, 2 * k.k02 * t), ck_sin(k.k3, 2 * k.k02 * t)

    def fn(p):
        x0, x1, x2, x3 = p
        return [x0 * c1 - k.k1 * x1 * s1, x0 * s1 + x1 * c1,
                x2 * c3 - k.k3 * x3 * s3, x2 * s3 + x3 * c3]

    return fn


def reeb_flow(kappa, x, t):
    """Closed-form Reeb flow ``Fl_t(x)`` on ambient points."""
    return as_array(reeb_flow_fn(kappa, t)(components(x)))


def de_sitter_orbits(ts):
    """Reeb orbits of de Sitter space through ``O`` and ``Q = (0, 0, 1, 0)``.

    The first is unbounded and the second periodic, so the orbit space is not
    a manifold with a free proper ℝ- or SO(2)-action.
    """
    k = (-1, -1, 1)
    ts = np.asarray(ts, dtype=float)
    o = np.array([reeb_flow(k, [1.0, 0, 0, 0], t) for t in ts])
    q = np.array([reeb_flow(k, [0, 0, 1.0, 0], t) for t in ts])
    return o, q


@dataclass(frozen=True)
class FibrationMap:
    kappa: KappaTriple
    name: str
    target: str
    fn: Callable
    omega: TwoForm
    structure_group: str
    angular: tuple = field(default=())

    def __call__(self, x):
        return as_array(self.fn(components(x)))

    def distance(self, a, b):
        """Sup distance between target points, comparing angles modulo 2π."""
        d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        for i in self.angular:
            d[..., i] = (d[..., i] + np.pi) % (2 * np.pi) - np.pi
        return float(np.max(np.abs(d)))


def _const_form(chart, m):
    return TwoForm(chart, lambda p: [[c + 0.0 * p[0] for c in r] for r in m], "omega")


def _hopf(p):
    x0, x1, x2, x3 = p
    return [x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3, 2 * (x0 * x2 + x1 * x3), 2 * (-x0 * x3 + x1 * x2)]


def _s2_omega():
    def fn(p):
        a, b, c = p
        # -1/4 (c da∧db - b da∧dc + a db∧dc)
        return [[0.0 * a, -0.25 * c, 0.25 * b], [0.25 * c, 0.0 * a, -0.25 * a], [-0.25 * b, 0.25 * a, 0.0 * a]]

    return TwoForm("s2", fn, "omega")


def _ads(p):
    x0, x1, x2, x3 = p
    r = x0 * x0 + x1 * x1
    return [(x0 * x2 - x1 * x3) / r, (x0 * x3 + x1 * x2) / r]


def _disk_omega():
    def fn(p):
        u, v = p
        w = 1.0 / (1.0 - u * u - v * v) ** 2
        return [[0.0 * u, w], [-w, 0.0 * u]]

    return TwoForm("disk", fn, "omega")


def _planar(p):
    return [p[2], p[3]]


def _h3(p):
    x0, x1, x2, x3 = p
    phase = 0.5 * ad.log((x0 + x1) / (x0 - x1))
    c, s = ad.cos(phase), ad.sin(phase)
    return [x2 * c - x3 * s, x2 * s + x3 * c]


def _ads_guard(p):
    u, v = _ads(p)
    if np.any(np.asarray(ad.primal(u * u + v * v)) >= 1 - DISK_MARGIN):
        raise ValueError("point projects outside the open unit disk")


def fibration(kappa) -> FibrationMap:
    """Bundle projection for a regular normalized κ with κ3 = 1."""
    k = KappaTriple.of(kappa)
    key = tuple(int(v) for v in k) if k.is_normalized else None
    if key == (-1, -1, 1):
        raise NotRegular("the Reeb flow of de Sitter space has both periodic and unbounded orbits; "
                         "its orbit space carries no principal bundle structure")
    plane = _const_form("plane", [[0.0, 1.0], [-1.0, 0.0]])
    if key == (1, 1, 1):
        return FibrationMap(k, "hopf", "s2", _hopf, _s2_omega(), "SO(2)")
    if key == (1, -1, 1):
        return FibrationMap(k, "ads", "disk", _ads, _disk_omega(), "SO(2)")
    if key in ((1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, 0, 1), (0, -1, 1)):
        group = "SO(2)" if k.k1 > 0 else "R"
        return FibrationMap(k, "planar", "plane", _planar, plane, group)
    if key == (-1, 1, 1):
        return FibrationMap(k, "h3", "plane", _h3, plane, "R")
    raise UnsupportedKappa(f"no fibration for κ = ({k})")


def in_domain(f: FibrationMap, x) -> np.ndarray:
    """Boolean mask of ambient points where ``f`` is evaluated safely."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if f.name == "ads":
        u, v = _ads(list(x.T))
        return u * u + v * v < 1 - DISK_MARGIN
    if f.name == "h3":
        return x[:, 0] > np.abs(x[:, 1]) + CONE_MARGIN
    return np.ones(len(x), dtype=bool)


def verify_pullback(f: FibrationMap, cs: ContactStructure, p, v=None, w=None, rng=None):
    """``|ω(π_* v, π_* w) - dη(v, w)|`` at ambient points ``p``.

    Without explicit ``v, w`` every pair from a tangent frame of Σ_κ is used
    and the sup is returned.
    """
    x = np.atleast_2d(np.asarray(p, dtype=float))
    comps = components(x)
    deta = cs.d_eta.at(x)
    om = f.omega.at(f(x))
    if v is None:
        e = tangent_basis(cs.kappa, x)
        vecs = [e[..., :, i] for i in range(3)]
        pairs = [(0, 1), (0, 2), (1, 2)]
    else:
        vecs = [np.atleast_2d(v), np.atleast_2d(w)]
        pairs = [(0, 1)]
    pushed = [np.stack(np.broadcast_arrays(*ad.jvp(f.fn, comps, list(u.T))[1]), -1) for u in vecs]
    worst = 0.0
    for i, j in pairs:
        lhs = np.einsum("...a,...ab,...b->...", pushed[i], om, pushed[j])
        rhs = np.einsum("...a,...ab,...b->...", vecs[i], deta, vecs[j])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def commutation_check(up: TimeDependentField, down: TimeDependentField, project: Callable, x0, t0: float,
                      t1: float, tol: float = 1e-10, distance: Callable | None = None, samples: int = 51):
    """Sup over sample times of ``dist(π(Fl_up(t, x0)), Fl_down(t, π(x0)))``.

    ``project`` maps upstairs coordinates to downstairs ones.  Returns the
    residual and the two trajectories.
    """
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(project(x0), dtype=float)
    tu = integrate(up, x0, t0, t1, tol)
    td = integrate(down, y0, t0, t1, tol)
    ts = np.linspace(t0, t1, samples)
    a = np.asarray(project(tu.at(ts)))
    b = td.at(ts)
    dist = distance or (lambda p, q: float(np.max(np.abs(p - q))))
    return dist(a, b), tu, td


def _zero(chart, n):
    return VectorField(chart, lambda p: [0.0 * p[0]] * n, "0")


def _const(chart, c, name):
    return ScalarField(chart, lambda p: c + 0.0 * p[0], name)


def _s2_sampler(n, rng):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _disk_sampler(n, rng):
    r = 0.9 * np.sqrt(rng.random(n))
    a = rng.uniform(-np.pi, np.pi, n)
    return np.stack([r * np.cos(a), r * np.sin(a)], -1)


def _plane_sampler(n, rng):
    return rng.uniform(-2.0, 2.0, (n, 2))


_KIND = {"liouville-s3": "sasaki", "liouville-ads": "sasaki", "liouville-flat": "flat",
         "liouville-nh": "nh", "liouville-h3": "h3"}


def project_system(d, f: FibrationMap, samples: int = 50, rng=None):
    """The reduced Lie-Hamilton system on the base of ``f``.

    ``d`` must be a Liouville-type descriptor on the same space.  Basis
    elements along the Reeb direction become zero fields with constant
    Hamiltonians, so coefficients and the bracket table carry over unchanged.
    """
    from .contact import is_liouville
    from .systems import liouville as lv
    from .systems.catalog import SystemDescriptor

    if d.id not in _KIND or d.contact is None:
        raise NotLiouville(f"{d.id} is not a Liouville-type contact system")
    if tuple(d.kappa) != tuple(f.kappa):
        raise UnsupportedKappa(f"fibration is for κ = ({f.kappa}), system lives on κ = ({d.kappa})")
    rng = np.random.default_rng(0) if rng is None else rng
    ok, res = is_liouville(d.contact, d.hamiltonians, d.sample(samples, rng))
    if not ok:
        raise NotLiouville(f"Reeb derivative of the Hamiltonians reaches {res:.3g}")
    kind = _KIND[d.id]
    if kind == "sasaki":
        if f.target == "s2":
            fields, hams, sampler = lv.s2_fields(), lv.s2_hamiltonians(), _s2_sampler
        else:
            fields, hams, sampler = lv.disk_fields(), lv.disk_hamiltonians(), _disk_sampler
        fields = fields + [_zero(f.target, 3 if f.target == "s2" else 2)]
        hams = hams + [_const(f.target, -1.0, "h'4")]
    else:
        fields, hams, sampler = lv.plane_fields(kind), lv.plane_hamiltonians(kind), _plane_sampler
    ss = SymplecticStructure(f.target, f.omega)
    return SystemDescriptor(
        f"{d.id}/{f.target}", None, f.target, tuple(fields), tuple(hams), d.table, d.coeff_ids, d.presets,
        symplectic=ss, label=d.label, sampler=sampler, x0=(), mixing=d.mixing)
