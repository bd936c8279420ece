"""Lie brackets, exterior derivatives, Lie derivatives and pullbacks."""
from __future__ import annotations

import numpy as np

from . import ad
from .fields import (
    OneForm,
    ScalarField,
    StructureTable,
    TwoForm,
    TwoTensor,
    VectorField,
    components,
    same_chart,
)


def bracket_field(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y] = DY·X - DX·Y`` as a new field (nestable)."""
    same_chart(X, Y)

    def fn(p):
        xp, yp = X.fn(p), Y.fn(p)
        dy = Y.jvp(p, xp)
        dx = X.jvp(p, yp)
        return [a - b for a, b in zip(dy, dx)]

    return VectorField(X.chart, fn, f"[{X.name},{Y.name}]", X.mode)


def lie_bracket(X: VectorField, Y: VectorField, p):
    return bracket_field(X, Y).at(p)


def verify_structure(fields, table: StructureTable, points):
    """Sup-norm of ``[X_i, X_j] - sum_k c_ij^k X_k`` over pairs and points."""
    if len(fields) != table.dim:
        raise ValueError("number of fields does not match table dimension")
    p = components(points)
    vals = [f.at(p) for f in fields]
    worst = 0.0
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            lhs = lie_bracket(fields[i], fields[j], p)
            rhs = sum(table.c[i, j, k] * vals[k] for k in range(len(fields)) if table.c[i, j, k])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _partials(fn, p):
    """``D[i][j] = d fn_i / d p_j`` in generic form."""
    return ad.jacobian(fn, p)


def d_scalar(f: ScalarField) -> OneForm:
    return OneForm(f.chart, lambda p: ad.gradient(f.fn, p), f"d{f.name}")


def d_oneform(alpha: OneForm) -> TwoForm:
    def fn(p):
        D = _partials(alpha.fn, p)  # D[j][i] = d_i alpha_j
        n = len(p)
        return [[D[j][i] - D[i][j] for j in range(n)] for i in range(n)]

    return TwoForm(alpha.chart, fn, f"d{alpha.name}")


def exterior_d(obj, p=None):
    """Exterior derivative of a scalar field or 1-form.

    With ``p`` given, returns numeric components there; otherwise the form.
    """
    if isinstance(obj, ScalarField):
        form = d_scalar(obj)
    elif isinstance(obj, OneForm):
        form = d_oneform(obj)
    else:
        raise TypeError(f"exterior_d not defined for {type(obj).__name__}")
    return form if p is None else form.at(p)


def lie_derivative_field(X: VectorField, T):
    """Lie derivative along ``X`` as a field of the same type as ``T``."""
    same_chart(X, T)
    if isinstance(T, ScalarField):
        return X.apply(T)
    if isinstance(T, VectorField):
        return bracket_field(X, T)
    if isinstance(T, OneForm):
        def fn(p):
            xp = X.fn(p)
            dT = ad.jvp(T.fn, p, xp)[1]
            DX = _partials(X.fn, p)  # DX[k][i] = d_i X^k
            a = T.fn(p)
            n = len(p)
            return [dT[i] + sum((a[k] * DX[k][i] for k in range(n)), 0.0) for i in range(n)]

        return OneForm(X.chart, fn)
    if isinstance(T, TwoTensor):
        def fn(p):
            xp = X.fn(p)
            n = len(p)
            flat = lambda q: [c for r in T.fn(q) for c in r]
            dT = ad.jvp(flat, p, xp)[1]
            DX = _partials(X.fn, p)
            t = T.fn(p)
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    v = dT[i * n + j]
                    v = v + sum((t[k][j] * DX[k][i] + t[i][k] * DX[k][j] for k in range(n)), 0.0)
                    row.append(v)
                out.append(row)
            return out

        return type(T)(X.chart, fn)
    raise TypeError(f"lie_derivative not defined for {type(T).__name__}")


def lie_derivative(X: VectorField, T, p):
    """Numeric components of the Lie derivative ``L_X T`` at ``p``."""
    return lie_derivative_field(X, T).at(p)


def interior(X: VectorField, w: TwoTensor) -> OneForm:
    """``ι_X w``, i.e. ``(ι_X w)_j = X^i w_ij``."""
    same_chart(X, w)

    def fn(p):
        x = X.fn(p)
        t = w.fn(p)
        n = len(x)
        return [sum((x[i] * t[i][j] for i in range(n)), 0.0) for j in range(n)]

    return OneForm(X.chart, fn)


def pushforward(phi, X: VectorField, chart: str, inverse) -> VectorField:
    """Push ``X`` through ``phi`` using a right inverse to locate base points."""

    def fn(q):
        p = inverse(q)
        return ad.jvp(phi, p, X.fn(p))[1]

    return VectorField(chart, fn, X.name)


def pullback_oneform(alpha: OneForm, phi, chart: str) -> OneForm:
    """``(φ*α)_a(u) = α_i(φ(u)) ∂φ^i/∂u^a``."""

    def fn(u):
        J = ad.jacobian(phi, u)
        a = alpha.fn(phi(u))
        return [sum((a[i] * J[i][b] for i in range(len(a))), 0.0) for b in range(len(u))]

    return OneForm(chart, fn)


def pullback_twotensor(w: TwoTensor, phi, chart: str, cls=None) -> TwoTensor:
    def fn(u):
        J = ad.jacobian(phi, u)
        t = w.fn(phi(u))
        m, n = len(t), len(u)
        return [
            [sum((J[i][a] * t[i][j] * J[j][b] for i in range(m) for j in range(m)), 0.0) for b in range(n)]
            for a in range(n)
        ]

    return (cls or type(w))(chart, fn)
