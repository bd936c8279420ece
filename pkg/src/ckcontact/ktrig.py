"""Curvature-dependent trigonometric functions.

``C_κ``, ``S_κ`` and ``T_κ`` interpolate between circular (κ > 0), parabolic
(κ = 0) and hyperbolic (κ < 0) behaviour.  The branch is chosen on the exact
sign of κ, so very small nonzero κ still uses the circular or hyperbolic
formula; both agree with the parabolic one to O(κ).

All three accept floats, numpy arrays and dual numbers from
:mod:`ckcontact.calculus.ad`.  κ itself must be a plain real number.
"""
from __future__ import annotations

import math

import numpy as np

from .calculus import ad
from .errors import PoleError

POLE_TOL = 1e-13


def ck_cos(kappa: float, x):
    kappa = float(kappa)
    if kappa > 0:
        return ad.cos(math.sqrt(kappa) * x)
    if kappa < 0:
        return ad.cosh(math.sqrt(-kappa) * x)
    return 1.0 + 0.0 * x


def ck_sin(kappa: float, x):
    kappa = float(kappa)
    if kappa > 0:
        r = math.sqrt(kappa)
        return ad.sin(r * x) / r
    if kappa < 0:
        r = math.sqrt(-kappa)
        return ad.sinh(r * x) / r
    return 1.0 * x


def ck_tan(kappa: float, x):
    c = ck_cos(kappa, x)
    check_nonzero(c)
    return ck_sin(kappa, x) / c


def check_nonzero(c, tol=POLE_TOL):
    """Raise :class:`PoleError` if any primal entry of ``c`` is below ``tol``."""
    if np.any(np.abs(ad.primal(c)) < tol):
        raise PoleError("κ-cosine vanishes: quotient evaluated at a pole")


def ck_angle(kappa: float, c, s):
    """Inverse of ``x -> (C_κ(x), S_κ(x))``.

    Given ``c = C_κ(x)`` and ``s = S_κ(x)`` return ``x``; for κ > 0 the result
    lies in (-π/√κ, π/√κ].
    """
    kappa = float(kappa)
    if kappa > 0:
        r = math.sqrt(kappa)
        return ad.arctan2(r * s, c) / r
    if kappa < 0:
        r = math.sqrt(-kappa)
        return ad.arctanh(r * s / c) / r
    return s
