"""Upstairs/downstairs pairs for every reduction in the catalog, and the
dual-integration comparison of their flows."""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable

import numpy as np

from .calculus.fields import components
from .calculus.linalg import as_array
from .errors import NotLiouville
from .fibration import FibrationMap, commutation_check, fibration, project_system
from .geometry import AMBIENT
from .systems import oscillator as osc
from .systems import thermo
from .systems.catalog import SystemDescriptor, catalog_get, instantiate


@dataclass(frozen=True)
class ReductionPair:
    upstairs: SystemDescriptor
    downstairs: SystemDescriptor
    project: Callable
    angular: tuple = ()
    fibration: FibrationMap | None = None

    def distance(self, a, b):
        d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        for i in self.angular:
            d[..., i] = (d[..., i] + np.pi) % (2 * np.pi) - np.pi
        return float(np.max(np.abs(d)))


def _numeric(fn):
    return lambda x: as_array(fn(components(np.asarray(x, dtype=float))))


def _osc_pair():
    up = catalog_get("osc2d")
    down = SystemDescriptor(
        "osc2d/reduced", None, osc.REDUCED, tuple(osc.reduced_fields()), tuple(osc.reduced_hamiltonians()),
        osc.sl2_table(), up.coeff_ids, up.presets, contact=osc.reduced_contact(), label="sl(2,R)",
        sampler=osc.sample_reduced, x0=(1.0, 0.0, np.pi / 2), mixing=up.mixing)
    return ReductionPair(up, down, _numeric(osc.projection), (1, 2))


def _thermo_pair():
    up = catalog_get("thermo", chart=thermo.PHASE)
    down = catalog_get("thermo")
    return ReductionPair(up, down, _numeric(thermo.projection))


def reduction_pair(sid: str, kappa=None) -> ReductionPair:
    """The reduction attached to a catalog id.

    Liouville systems reduce along the Reeb fibration (integrated upstairs in
    the ambient chart); the two scaling examples reduce by their scaling
    symmetry.
    """
    if sid == "osc2d":
        return _osc_pair()
    if sid == "thermo":
        return _thermo_pair()
    up = catalog_get(sid, kappa, AMBIENT)
    if not up.liouville:
        raise NotLiouville(f"{sid} has no reduction: it is neither Liouville-type nor a scaling example")
    f = fibration(up.kappa)
    down = project_system(up, f)
    return ReductionPair(up, down, f, f.angular, f)


def compare_flows(pair: ReductionPair, coeffs=None, x0=None, t0=0.0, t1=5.0, tol=1e-11, samples=51):
    """Sup distance between the projected upstairs flow and the downstairs flow."""
    x0 = np.asarray(pair.upstairs.x0 if x0 is None else x0, dtype=float)
    up = instantiate(pair.upstairs, coeffs)
    down = instantiate(pair.downstairs, coeffs)
    return commutation_check(up, down, pair.project, x0, t0, t1, tol, pair.distance, samples)


DEFAULT_REDUCTIONS = MappingProxyType({
    "osc2d": None,
    "liouville-s3": (1, 1, 1),
    "liouville-ads": (1, -1, 1),
    "liouville-flat": (0, 1, 1),
    "liouville-nh": (1, 0, 1),
    "liouville-h3": (-1, 1, 1),
    "thermo": None,
})
