"""Time-dependent vector fields and their numerical integration."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import StepFailure
from .fields import VectorField, same_chart

MAX_SAMPLE_SPACING = 0.05
MIN_STEP = 1e-12
DRIFT_FLAG = 1e-4


@dataclass(frozen=True)
class TimeDependentField:
    """``X_t = sum_i b_i(t) X_i`` over a fixed basis of vector fields."""

    coeffs: tuple
    basis: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.basis):
            raise ValueError("coefficient and basis lengths differ")
        same_chart(*self.basis)

    @property
    def chart(self):
        return self.basis[0].chart

    def __call__(self, t, x):
        x = list(x)
        out = None
        for b, X in zip(self.coeffs, self.basis):
            c = b(t)
            if c == 0:
                continue
            v = np.asarray(X.at(np.asarray(x, dtype=float)), dtype=float)
            out = c * v if out is None else out + c * v
        return np.zeros(len(x)) if out is None else out


def autonomous(X: VectorField) -> TimeDependentField:
    from .expr import constant

    return TimeDependentField((constant(1.0),), (X,))


@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray
    accepted: np.ndarray
    drifts: dict = field(default_factory=dict)
    flagged: dict = field(default_factory=dict)
    dense: Callable | None = None

    def at(self, t):
        """State at arbitrary times via the integrator's dense output."""
        t = np.asarray(t, dtype=float)
        return self.dense(t).T if t.ndim else self.dense(t)

    @property
    def final(self):
        return self.states[-1]


def integrate(F: TimeDependentField, x0: Sequence[float], t0: float, t1: float, tol: float = 1e-10,
              monitors: Mapping[str, Callable] | None = None, method: str = "DOP853") -> Trajectory:
    """Adaptive embedded Runge-Kutta integration of ``x' = F(t, x)``.

    Uses an order 8(5,3) Dormand-Prince pair with ``tol`` as both absolute and
    relative tolerance.  Steps are capped at 0.05 so the recorded samples are
    dense.  ``monitors`` maps names to functions ``(t, x) -> float`` whose
    absolute values are reported as drift columns; drifts above 1e-4 are
    flagged but never corrected.
    """
    x0 = np.asarray(x0, dtype=float)
    if t1 == t0:
        states = x0[None, :]
        return Trajectory(np.array([t0]), states, np.array([True]), dense=lambda t: x0)
    sol = solve_ivp(lambda t, x: F(t, x), (t0, t1), x0, method=method, rtol=tol, atol=tol,
                    max_step=MAX_SAMPLE_SPACING, dense_output=True, first_step=None)
    if sol.status < 0:
        raise StepFailure(sol.message)
    steps = np.diff(sol.t)
    if steps.size and np.min(np.abs(steps)) < MIN_STEP:
        raise StepFailure("step size fell below 1e-12")
    states = sol.y.T
    drifts, flagged = {}, {}
    for name, fn in (monitors or {}).items():
        d = np.array([abs(fn(t, x)) for t, x in zip(sol.t, states)])
        drifts[name] = d
        flagged[name] = bool(np.max(d) > DRIFT_FLAG)
    return Trajectory(sol.t, states, np.ones(len(sol.t), dtype=bool), drifts, flagged, sol.sol)
