"""Pointwise small dense linear algebra over floats, arrays and duals."""
from __future__ import annotations

import numpy as np

from ..errors import SingularSolve
from . import ad

RANK_TOL = 1e-10


def as_array(components):
    """Stack scalar components into an array with the batch axis first.

    Scalars give shape ``(n,)``; batch arrays of shape ``(N,)`` give ``(N, n)``.
    """
    arrs = np.broadcast_arrays(*[np.asarray(ad.primal(c), dtype=float) for c in components])
    return np.stack(arrs, axis=-1)


def as_matrix(rows):
    """Nested lists ``rows[i][j]`` to an array of shape ``(..., m, n)``."""
    flat = [np.asarray(ad.primal(c), dtype=float) for r in rows for c in r]
    flat = np.broadcast_arrays(*flat)
    m, n = len(rows), len(rows[0])
    a = np.stack(flat, axis=-1)
    return a.reshape(a.shape[:-1] + (m, n))


def matvec(a, x):
    return [sum((a[i][j] * x[j] for j in range(len(x))), 0.0) for i in range(len(a))]


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), 0.0)


def _split_all(rows, tag):
    lo = [[ad.split(c, tag)[0] for c in r] for r in rows]
    hi = [[ad.split(c, tag)[1] for c in r] for r in rows]
    return lo, hi


def solve(a, b, rank_tol=RANK_TOL):
    """Solve ``a x = b`` for square nested-list ``a`` and list ``b``.

    Entries may be batched arrays and duals.  Dual layers are peeled one tag at
    a time: with ``a = a0 + ε a1`` and ``b = b0 + ε b1`` the solution is
    ``x0 + ε x1`` where ``a0 x1 = b1 - a1 x0``.  The numeric base case uses
    LU with partial pivoting and rejects systems whose smallest singular value
    is below ``rank_tol`` times the largest.
    """
    tag = ad.max_tag([c for r in a for c in r] + list(b))
    if tag:
        a0, a1 = _split_all(a, tag)
        b0 = [ad.split(c, tag)[0] for c in b]
        b1 = [ad.split(c, tag)[1] for c in b]
        x0 = solve(a0, b0, rank_tol)
        r = [bi - ai for bi, ai in zip(b1, matvec(a1, x0))]
        x1 = solve(a0, r, rank_tol)
        return [ad.Dual(tag, u, v) for u, v in zip(x0, x1)]
    A = as_matrix(a)
    n = A.shape[-1]
    B = np.asarray(as_array(b))
    shape = np.broadcast_shapes(A.shape[:-2], B.shape[:-1])
    A = np.broadcast_to(A, shape + (n, n))
    B = np.broadcast_to(B, shape + (n,))
    sv = np.linalg.svd(A, compute_uv=False)
    if np.any(sv[..., -1] <= rank_tol * np.maximum(sv[..., 0], 1e-300)):
        raise SingularSolve("pointwise system is rank deficient")
    x = np.linalg.solve(A, B[..., None])[..., 0]
    return [x[..., i] for i in range(n)]
