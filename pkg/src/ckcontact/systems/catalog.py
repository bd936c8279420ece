"""Catalog of the concrete Lie systems: each entry bundles its chart, basis
fields, Hamiltonians, bracket table, coefficient presets and first integrals."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from ..calculus.expr import CoefficientExpr, constant, parse_coeff
from ..calculus.fields import ScalarField, StructureTable
from ..calculus.integrate import TimeDependentField
from ..calculus.ops import d_scalar, verify_structure
from ..contact import ContactStructure, contact_hamiltonian_field, contact_structure, first_integral_from_killing
from ..errors import ChartError, KappaRequired, UnknownCoefficient, UnknownSystem
from ..geometry import (
    AMBIENT,
    PARALLEL,
    KappaTriple,
    constraint as ck_constraint,
    embed_parallel_fn,
    killing_field,
    sample_ambient,
    sample_chart,
)
from ..symplectic import SymplecticStructure, canonical_omega, hamiltonian_field
from . import liouville as lv
from . import oscillator as osc
from . import sp4
from . import thermo


@dataclass(frozen=True)
class SystemDescriptor:
    """A Lie system ``X_t = sum_i c_i(t) X_i`` with its geometric data.

    ``coeff_ids`` name the user-facing coefficients; ``mixing[i]`` gives the
    coefficient of basis field ``i`` as a linear combination of them (the
    identity unless the parametrization couples several fields).  ``reference``
    is either empty or a pair ``(printed, derived)`` of field lists that must
    agree entry by entry.
    """

    id: str
    kappa: KappaTriple | None
    chart: str
    fields: tuple
    hamiltonians: tuple
    table: StructureTable
    coeff_ids: tuple
    presets: Mapping[str, str] = field(default_factory=dict)
    first_integrals: tuple = ()
    contact: ContactStructure | None = None
    symplectic: SymplecticStructure | None = None
    label: str = ""
    sampler: Callable | None = None
    x0: tuple = ()
    mixing: tuple = ()
    reference: tuple = ()
    constraint: ScalarField | None = None
    liouville: bool = False

    def sample(self, n, rng):
        return self.sampler(n, rng)

    @property
    def dim(self):
        return len(self.x0)


@dataclass(frozen=True)
class _Entry:
    build: Callable
    needs_kappa: bool
    kappas: tuple = ()
    description: str = ""


def _identity(ids):
    return tuple({c: 1.0} for c in ids)


def _ck_sampler(kappa, chart):
    if chart == AMBIENT:
        return lambda n, rng: sample_ambient(kappa, n, rng)
    return lambda n, rng: sample_chart(kappa, chart, n, rng)


def _ck_x0(kappa, chart):
    c = [0.3, 0.2, 0.1]
    if chart == AMBIENT:
        return tuple(float(v) for v in embed_parallel_fn(kappa)(c))
    return tuple(c)


def _check_chart(chart, allowed, sid):
    if chart not in allowed:
        raise ChartError(f"{sid} is available in charts {sorted(allowed)}, not {chart!r}")


# -- individual entries -------------------------------------------------------

def _osc2d(kappa, chart):
    _check_chart(chart or osc.CANONICAL, {osc.CANONICAL}, "osc2d")
    ids = ("b1", "b2", "b3")
    return SystemDescriptor(
        "osc2d", None, osc.CANONICAL, tuple(osc.fields()), tuple(osc.hamiltonians()), osc.sl2_table(), ids,
        MappingProxyType({"b1": "1", "b3": osc.OMEGA_PRESET}), (osc.angular_momentum(),),
        symplectic=osc.structure(), label="sl(2,R)", sampler=osc.sample_canonical,
        x0=(1.0, 0.0, 0.0, 1.0), mixing=_identity(ids))


def _thermo(kappa, chart):
    _check_chart(chart or thermo.GIBBS, {thermo.GIBBS, thermo.PHASE}, "thermo")
    ids = tuple(f"b{i}" for i in range(1, 10))
    presets = MappingProxyType({"b1": "0.2", "b2": "0.3*sin(t)", "b5": "-0.1", "b6": "0.2*cos(t)", "b9": "0.1"})
    if chart == thermo.PHASE:
        return SystemDescriptor(
            "thermo", None, thermo.PHASE, tuple(thermo.phase_fields()), tuple(thermo.phase_hamiltonians()),
            thermo.table(), ids, presets, symplectic=thermo.structure(), label="sl(3,R)+R",
            sampler=thermo.sample_phase, x0=(1.0, 0.5, 2.0, -1.0, 0.5, -0.3), mixing=_identity(ids))
    return SystemDescriptor(
        "thermo", None, thermo.GIBBS, tuple(thermo.gibbs_fields()), tuple(thermo.gibbs_hamiltonians()),
        thermo.table(), ids, presets, contact=thermo.gibbs_contact(), label="sl(3,R)+R",
        sampler=thermo.sample_gibbs, x0=(1.0, 0.5, 2.0, 0.5, 0.3), mixing=_identity(ids))


_SP4_IDS = tuple(f"b{i}" for i in range(1, 11))
_SP4_PRESETS = MappingProxyType({"b1": "0.5*cos(t)", "b2": "0.3", "b4": "0.2*sin(t)", "b5": "1",
                                 "b7": "0.4", "b8": "1", "b10": "0.5*cos(2*t)"})


def _sp4_r4(kappa, chart):
    _check_chart(chart or AMBIENT, {AMBIENT}, "sp4-r4")
    ss = SymplecticStructure(AMBIENT, canonical_omega(AMBIENT, [(0, 1), (2, 3)], 4))
    return SystemDescriptor(
        "sp4-r4", None, AMBIENT, tuple(sp4.r4_fields()), tuple(sp4.r4_hamiltonians()), sp4.sp4_table(),
        _SP4_IDS, _SP4_PRESETS, symplectic=ss, label="sp(4,R)",
        sampler=lambda n, rng: rng.uniform(-2, 2, (n, 4)), x0=(1.0, 0.5, -0.3, 0.2), mixing=_identity(_SP4_IDS))


def _sp4_s3(kappa, chart):
    _check_chart(chart or AMBIENT, {AMBIENT}, "sp4-s3")
    k = KappaTriple(1.0, 1.0, 1.0)
    return SystemDescriptor(
        "sp4-s3", k, AMBIENT, tuple(sp4.projected_fields(k)), tuple(sp4.restricted_hamiltonians(k)),
        sp4.sp4_table(), _SP4_IDS, _SP4_PRESETS, contact=contact_structure(k, AMBIENT), label="sp(4,R)",
        sampler=_ck_sampler(k, AMBIENT), x0=_ck_x0(k, AMBIENT), mixing=_identity(_SP4_IDS),
        reference=(tuple(sp4.printed_sphere_fields()), tuple(sp4.projected_fields(k))), constraint=_unit(k))


def _unit(k):
    I = ck_constraint(k)
    return ScalarField(AMBIENT, lambda p: I.fn(p) - 1.0, "I-1")


def _sp4_ck(kappa, chart):
    k = KappaTriple.of(kappa)
    chart = chart or PARALLEL
    _check_chart(chart, {PARALLEL, AMBIENT}, "sp4-ck")
    cs = contact_structure(k, chart)
    if chart == PARALLEL:
        fields, hams = sp4.ck_fields(k), sp4.ck_hamiltonians(k)
        ref = (tuple(fields), tuple(contact_hamiltonian_field(cs, h) for h in hams))
    else:
        fields, hams = sp4.projected_fields(k), sp4.restricted_hamiltonians(k)
        ref = ()
    return SystemDescriptor(
        "sp4-ck", k, chart, tuple(fields), tuple(hams), sp4.sp4_table(), _SP4_IDS, _SP4_PRESETS,
        contact=cs, label="sp(4,R)", sampler=_ck_sampler(k, chart), x0=_ck_x0(k, chart),
        mixing=_identity(_SP4_IDS), reference=ref, constraint=_unit(k) if chart == AMBIENT else None)


def sasaki_first_integrals(k2, chart):
    """The Reeb first integrals ``h'1..h'4`` as combinations of ``η(J_ab)``.

    Built from Killing fields in the ambient chart and rewritten in parallel
    coordinates when ``chart`` is parallel.
    """
    k = KappaTriple(1.0, float(k2), 1.0)
    cs = contact_structure(k, AMBIENT)
    e = {ab: first_integral_from_killing(cs, killing_field(k, *ab)) for ab in ((0, 1), (1, 3), (0, 3), (2, 3))}
    combos = [
        ("h'1", lambda p: -0.5 * (e[0, 1].fn(p) - k2 * e[2, 3].fn(p))),
        ("h'2", lambda p: e[1, 3].fn(p)),
        ("h'3", lambda p: -e[0, 3].fn(p)),
        ("h'4", lambda p: -2.0 * (e[0, 1].fn(p) + k2 * e[2, 3].fn(p))),
    ]
    out = [ScalarField(AMBIENT, fn, name) for name, fn in combos]
    if chart == PARALLEL:
        emb = embed_parallel_fn(k)
        out = [f.pullback(PARALLEL, emb) for f in out]
    return tuple(out)


def _liouville_sasaki(k2):
    def build(kappa, chart):
        sid = "liouville-s3" if k2 > 0 else "liouville-ads"
        k = KappaTriple(1.0, float(k2), 1.0)
        if kappa is not None and tuple(KappaTriple.of(kappa)) != tuple(k):
            raise ValueError(f"{sid} lives on κ = ({k})")
        chart = chart or PARALLEL
        _check_chart(chart, {PARALLEL, AMBIENT}, sid)
        ids = ("a1", "a2", "a3", "a4")
        if chart == PARALLEL:
            fields = lv.printed_sasaki_fields(k2)
            ref = (tuple(fields), tuple(lv.sasaki_fields(k2, PARALLEL)))
        else:
            fields, ref = lv.sasaki_fields(k2, AMBIENT), ()
        return SystemDescriptor(
            sid, k, chart, tuple(fields), tuple(lv.sasaki_hamiltonians(k2, chart)), lv.sasaki_table(k2), ids,
            MappingProxyType({"a1": "1", "a2": "0.3", "a3": "0.2*sin(t)", "a4": "0.5"}),
            sasaki_first_integrals(k2, chart), contact=contact_structure(k, chart),
            label="P1 (spherical)" if k2 > 0 else "P1 (hyperbolic)", sampler=_ck_sampler(k, chart),
            x0=_ck_x0(k, chart), mixing=_identity(ids), reference=ref,
            constraint=_unit(k) if chart == AMBIENT else None, liouville=True)

    return build


FLAT_KAPPAS = ((0, 1, 1), (0, 0, 1), (0, -1, 1))
NH_KAPPAS = ((1, 0, 1), (-1, 0, 1))
H3_KAPPAS = ((-1, 1, 1),)


def _liouville_sub(kind, sid, kappas, ids, mixing, presets, label, printed):
    def build(kappa, chart):
        k = KappaTriple.of(kappa if kappa is not None else kappas[0])
        if tuple(int(v) for v in k) not in kappas:
            raise ValueError(f"{sid} requires κ in {list(kappas)}, got ({k})")
        chart = chart or PARALLEL
        _check_chart(chart, {PARALLEL, AMBIENT}, sid)
        fields, hams = lv.subsystem(kind, k, chart)
        ref = ()
        if chart == PARALLEL:
            derived = tuple(fields)
            fields, hams = printed()
            ref = (tuple(fields), derived)
        table = _sub_table(kind, k)
        return SystemDescriptor(
            sid, k, chart, tuple(fields), tuple(hams), table, ids, MappingProxyType(presets), tuple(hams),
            contact=contact_structure(k, chart), label=label, sampler=_ck_sampler(k, chart), x0=_ck_x0(k, chart),
            mixing=mixing, reference=ref, constraint=_unit(k) if chart == AMBIENT else None, liouville=True)

    return build


def _sub_table(kind, k):
    full = sp4.sp4_table()
    if kind == "flat":
        return full.sub([i - 1 for i in lv.FLAT_INDICES])
    if kind == "nh":
        # X4, X7, X10 span sl(2) and X5 + κ1 X8 = -R/2 is central
        base = full.sub([3, 6, 9])
        c = np.zeros((4, 4, 4))
        c[:3, :3, :3] = base.c
        return StructureTable(c, ("X4", "X7", "X10", "X5+k1X8"))
    return StructureTable(np.zeros((2, 2, 2)), ("X7+X10", "X5-X7-X8-X10"))


_FLAT_IDS = ("b2", "b4", "b5", "b6", "b7", "b10")
_NH_IDS = ("b4", "b7", "b10", "b5")

CATALOG = {
    "osc2d": _Entry(_osc2d, False, description="2D oscillator with time-dependent frequency (sl(2,R))"),
    "thermo": _Entry(_thermo, False, description="gl(3) action on T*R^3 reduced to the Gibbs chart"),
    "sp4-r4": _Entry(_sp4_r4, False, description="linear sp(4,R) Lie-Hamilton system on R^4"),
    "sp4-s3": _Entry(_sp4_s3, False, description="sp(4,R) contact system on S^3 (projected fields)"),
    "sp4-ck": _Entry(_sp4_ck, True, description="sp(4,R) contact system on a Cayley-Klein space"),
    "liouville-s3": _Entry(_liouville_sasaki(1), False, ((1, 1, 1),), "Liouville subsystem on S^3"),
    "liouville-ads": _Entry(_liouville_sasaki(-1), False, ((1, -1, 1),), "Liouville subsystem on AdS"),
    "liouville-flat": _Entry(
        _liouville_sub("flat", "liouville-flat", FLAT_KAPPAS, _FLAT_IDS, _identity(_FLAT_IDS),
                       {"b2": "1", "b4": "0.5*cos(t)", "b5": "1", "b6": "0.3", "b7": "0.2*sin(t)", "b10": "0.4"},
                       "P5", lv.printed_flat),
        True, FLAT_KAPPAS, "h6 Liouville subsystem on the flat spaces"),
    "liouville-nh": _Entry(
        _liouville_sub("nh", "liouville-nh", NH_KAPPAS, _NH_IDS, _identity(_NH_IDS),
                       {"b4": "0.5*cos(t)", "b7": "0.3", "b10": "0.2+0.1*sin(t)", "b5": "1"}, "I5", lv.printed_nh),
        True, NH_KAPPAS, "sl(2,R)+R Liouville subsystem on the Newton-Hooke spaces"),
    "liouville-h3": _Entry(
        _liouville_sub("h3", "liouville-h3", H3_KAPPAS, ("b5", "b7"), ({"b5": 1.0, "b7": 1.0}, {"b5": 1.0}),
                       {"b5": "1", "b7": "0.5*sin(t)"}, "I1", lv.printed_h3),
        False, H3_KAPPAS, "abelian Liouville subsystem on H^3"),
}


def catalog_ids():
    return tuple(CATALOG)


def catalog_get(sid: str, kappa=None, chart: str | None = None) -> SystemDescriptor:
    """Look up and build a catalog entry."""
    if sid not in CATALOG:
        raise UnknownSystem(f"unknown system {sid!r}; known: {', '.join(CATALOG)}")
    entry = CATALOG[sid]
    if entry.needs_kappa and kappa is None:
        raise KappaRequired(f"{sid} needs a κ triple")
    return entry.build(kappa, chart)


def parse_coeffs(d: SystemDescriptor, coeffs: Mapping[str, str | CoefficientExpr | float]):
    """Coefficient expressions keyed by id; unknown ids raise, missing ids are 0."""
    out = {}
    for name, v in coeffs.items():
        if name not in d.coeff_ids:
            raise UnknownCoefficient(f"{d.id} has coefficients {list(d.coeff_ids)}, not {name!r}")
        if isinstance(v, CoefficientExpr):
            out[name] = v
        elif isinstance(v, str):
            out[name] = parse_coeff(v)
        else:
            out[name] = constant(float(v))
    return out


class _Mixed:
    """Basis coefficient ``sum_j m_j c_j(t)``."""

    def __init__(self, weights, exprs):
        self.terms = [(w, exprs[n]) for n, w in weights.items() if n in exprs]

    def __call__(self, t):
        return sum((w * float(e(t)) for w, e in self.terms), 0.0)

    @property
    def is_constant(self):
        return all(e.is_constant for _, e in self.terms)


def instantiate(d: SystemDescriptor, coeffs: Mapping | None = None) -> TimeDependentField:
    """The t-dependent field for the given coefficients (presets when ``None``)."""
    exprs = parse_coeffs(d, d.presets if coeffs is None else coeffs)
    basis_coeffs = tuple(_Mixed(m, exprs) for m in d.mixing)
    return TimeDependentField(basis_coeffs, d.fields)


def time_hamiltonian(d: SystemDescriptor, coeffs: Mapping, t: float = 0.0) -> ScalarField:
    """``H = sum_i c_i(t) h_i`` at a fixed time."""
    exprs = parse_coeffs(d, coeffs)
    w = [_Mixed(m, exprs)(t) for m in d.mixing]
    hs = d.hamiltonians
    return ScalarField(d.chart, lambda p: sum((c * h.fn(p) for c, h in zip(w, hs) if c != 0), 0.0 * p[0]), "H")


def known_first_integrals(d: SystemDescriptor):
    return list(d.first_integrals)


def system_first_integrals(d: SystemDescriptor, samples: int = 40, tol: float = 1e-9, rng=None):
    """Known first integrals annihilated by every basis field, hence conserved
    along the flow for any coefficients.

    Liouville entries list the first integrals of the Reeb field; most of
    those are not integrals of the Lie system itself and are dropped here.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    pts = d.sample(samples, rng)
    keep = []
    for f in d.first_integrals:
        grad = d_scalar(f).at(pts)
        if all(_sup(np.einsum("...i,...i->...", X.at(pts), grad)) < tol for X in d.fields):
            keep.append(f)
    return keep


def _sup(a):
    return float(np.max(np.abs(a)))


def structure_residual(d: SystemDescriptor, points) -> float:
    return verify_structure(list(d.fields), d.table, points)


def pairing_residual(d: SystemDescriptor, points) -> float:
    """Sup distance between each basis field and the field generated by its Hamiltonian."""
    worst = 0.0
    for X, h in zip(d.fields, d.hamiltonians):
        if d.symplectic is not None:
            Y = hamiltonian_field(d.symplectic, h)
        else:
            Y = contact_hamiltonian_field(d.contact, h)
        worst = max(worst, float(np.max(np.abs(X.at(points) - Y.at(points)))))
    return worst


def reference_discrepancies(d: SystemDescriptor, points, tol=1e-6):
    """Compare the stored fields against the independently derived ones."""
    if not d.reference:
        return 0.0, []
    printed, derived = d.reference
    return sp4.field_discrepancies(printed, derived, points, tol)
