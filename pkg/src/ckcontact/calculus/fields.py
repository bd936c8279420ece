"""Chart-tagged scalar, vector and tensor fields.

Every field wraps an evaluator that maps a sequence of coordinate values to
its components.  Evaluators must be written with the functions from
:mod:`ckcontact.calculus.ad` (or plain arithmetic) so that they accept
floats, batched arrays and dual numbers alike.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..errors import ChartMismatch
from . import ad
from .linalg import as_array, as_matrix

AD = "ad"
FD = "fd"


def components(p):
    """Normalize a point or a batch of points to a list of coordinate values.

    A 1-D array gives floats; an ``(N, n)`` array gives ``n`` arrays of length
    ``N``; a list or tuple of scalars or duals is returned as a list.
    """
    if isinstance(p, np.ndarray):
        if p.ndim == 1:
            return [float(v) for v in p]
        return [p[:, i] for i in range(p.shape[1])]
    return list(p)


def same_chart(*objs):
    charts = {o.chart for o in objs}
    if len(charts) > 1:
        raise ChartMismatch(f"objects live in different charts: {sorted(charts)}")
    return charts.pop()


def fd_step(x):
    return np.maximum(1.0, np.abs(x)) * np.finfo(float).eps ** (1.0 / 3.0)


def fd_jvp(fn, x, v):
    """Central finite-difference directional derivative (numeric only)."""
    x = [np.asarray(ad.primal(c), dtype=float) for c in x]
    v = [np.asarray(ad.primal(c), dtype=float) for c in v]
    h = np.max([fd_step(c) for c in x], axis=0)
    plus = fn([a + h * b for a, b in zip(x, v)])
    minus = fn([a - h * b for a, b in zip(x, v)])
    if np.ndim(plus) == 0 and not isinstance(plus, (list, tuple)):
        return (plus - minus) / (2 * h)
    return [(a - b) / (2 * h) for a, b in zip(plus, minus)]


def _linear(coeffs, fns):
    def fn(p):
        outs = [f(p) for f in fns]
        return [sum((c * o[i] for c, o in zip(coeffs, outs)), 0.0) for i in range(len(outs[0]))]

    return fn


@dataclass(frozen=True)
class ScalarField:
    chart: str
    fn: Callable[[Sequence], object]
    name: str = ""

    def __call__(self, p):
        return self.fn(p)

    def at(self, p):
        return np.asarray(ad.primal(self.fn(components(p))), dtype=float) + 0.0 * _zero_like(p)

    def gradient(self, p):
        return as_array(ad.gradient(self.fn, components(p)))

    def __add__(self, o):
        same_chart(self, o)
        return ScalarField(self.chart, lambda p: self.fn(p) + o.fn(p), f"({self.name}+{o.name})")

    def __sub__(self, o):
        same_chart(self, o)
        return ScalarField(self.chart, lambda p: self.fn(p) - o.fn(p), f"({self.name}-{o.name})")

    def __mul__(self, o):
        if isinstance(o, ScalarField):
            same_chart(self, o)
            return ScalarField(self.chart, lambda p: self.fn(p) * o.fn(p), f"{self.name}*{o.name}")
        return ScalarField(self.chart, lambda p: o * self.fn(p), f"{o}*{self.name}")

    __rmul__ = __mul__

    def __truediv__(self, o):
        same_chart(self, o)
        return ScalarField(self.chart, lambda p: self.fn(p) / o.fn(p), f"{self.name}/{o.name}")

    def __neg__(self):
        return ScalarField(self.chart, lambda p: -self.fn(p), f"-{self.name}")

    def pullback(self, chart, phi):
        """Compose with a coordinate map ``phi`` from ``chart`` into this chart."""
        return ScalarField(chart, lambda p: self.fn(phi(p)), self.name)


def _zero_like(p):
    if isinstance(p, np.ndarray) and p.ndim == 2:
        return np.zeros(p.shape[0])
    return 0.0


@dataclass(frozen=True)
class VectorField:
    chart: str
    fn: Callable[[Sequence], Sequence]
    name: str = ""
    mode: str = AD

    def __call__(self, p):
        return list(self.fn(p))

    def at(self, p):
        return as_array(self.fn(components(p)))

    def jvp(self, p, v):
        """Directional derivative ``DX(p) v`` in generic (possibly dual) form."""
        if self.mode == FD:
            return fd_jvp(self.fn, p, v)
        return ad.jvp(self.fn, p, v)[1]

    def jacobian(self, p):
        p = components(p)
        n = len(p)
        cols = [self.jvp(p, [1.0 if k == j else 0.0 for k in range(n)]) for j in range(n)]
        return as_matrix([[cols[j][i] for j in range(n)] for i in range(len(cols[0]))])

    def apply(self, f: ScalarField):
        """The derivation ``X(f)`` as a scalar field."""
        same_chart(self, f)
        return ScalarField(self.chart, lambda p: ad.jvp_scalar(f.fn, p, self.fn(p))[1], f"{self.name}({f.name})")

    def with_mode(self, mode):
        return VectorField(self.chart, self.fn, self.name, mode)

    def __add__(self, o):
        same_chart(self, o)
        return VectorField(self.chart, _linear((1.0, 1.0), (self.fn, o.fn)), f"({self.name}+{o.name})", self.mode)

    def __sub__(self, o):
        same_chart(self, o)
        return VectorField(self.chart, _linear((1.0, -1.0), (self.fn, o.fn)), f"({self.name}-{o.name})", self.mode)

    def __rmul__(self, c):
        return VectorField(self.chart, _linear((c,), (self.fn,)), f"{c}*{self.name}", self.mode)

    __mul__ = __rmul__

    def __neg__(self):
        return (-1.0) * self


def combine(coeffs, fields, name=""):
    """Constant-coefficient linear combination of vector fields."""
    same_chart(*fields)
    return VectorField(fields[0].chart, _linear(tuple(coeffs), tuple(f.fn for f in fields)), name)


@dataclass(frozen=True)
class OneForm:
    chart: str
    fn: Callable[[Sequence], Sequence]
    name: str = ""

    def __call__(self, p):
        return list(self.fn(p))

    def at(self, p):
        return as_array(self.fn(components(p)))

    def contract(self, X: VectorField) -> ScalarField:
        """The function ``α(X)``."""
        same_chart(self, X)
        return ScalarField(self.chart, lambda p: sum((a * b for a, b in zip(self.fn(p), X.fn(p))), 0.0))

    def __add__(self, o):
        same_chart(self, o)
        return OneForm(self.chart, _linear((1.0, 1.0), (self.fn, o.fn)))

    def __sub__(self, o):
        same_chart(self, o)
        return OneForm(self.chart, _linear((1.0, -1.0), (self.fn, o.fn)))

    def __rmul__(self, c):
        return OneForm(self.chart, _linear((c,), (self.fn,)))


@dataclass(frozen=True)
class TwoTensor:
    """A covariant 2-tensor; ``fn`` returns nested lists ``T[i][j]``."""

    chart: str
    fn: Callable[[Sequence], Sequence]
    name: str = ""

    def __call__(self, p):
        return [list(r) for r in self.fn(p)]

    def at(self, p):
        return as_matrix(self.fn(components(p)))

    def pair(self, p, u, v):
        t = self.fn(p)
        return sum((t[i][j] * u[i] * v[j] for i in range(len(u)) for j in range(len(v))), 0.0)

    def __sub__(self, o):
        same_chart(self, o)
        return type(self)(self.chart, lambda p: [[a - b for a, b in zip(r, s)] for r, s in zip(self.fn(p), o.fn(p))])

    def __add__(self, o):
        same_chart(self, o)
        return type(self)(self.chart, lambda p: [[a + b for a, b in zip(r, s)] for r, s in zip(self.fn(p), o.fn(p))])

    def __rmul__(self, c):
        return type(self)(self.chart, lambda p: [[c * a for a in r] for r in self.fn(p)])


class TwoForm(TwoTensor):
    """Antisymmetric covariant 2-tensor."""


class Metric(TwoTensor):
    """Symmetric covariant 2-tensor."""


def constant_twoform(chart, matrix, name=""):
    m = [list(map(float, r)) for r in matrix]
    return TwoForm(chart, lambda p: [[c + 0.0 * p[0] for c in r] for r in m], name)


def diagonal_metric(chart, diag_fn, name=""):
    def fn(p):
        d = diag_fn(p)
        n = len(d)
        return [[d[i] if i == j else 0.0 for j in range(n)] for i in range(n)]

    return Metric(chart, fn, name)


@dataclass(frozen=True)
class StructureTable:
    """Structure constants ``[e_i, e_j] = sum_k c[i, j, k] e_k``."""

    c: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        from ..errors import TableInvalid

        c = np.asarray(self.c, dtype=float)
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2]:
            raise TableInvalid(f"structure constants must be n×n×n, got {c.shape}")
        if not np.allclose(c, -np.transpose(c, (1, 0, 2))):
            raise TableInvalid("structure constants are not antisymmetric")
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.c.shape[0]

    @classmethod
    def from_brackets(cls, n, brackets, labels=()):
        """Build from ``{(i, j): {k: coeff}}`` with 0-based indices, ``i < j``."""
        c = np.zeros((n, n, n))
        for (i, j), rhs in brackets.items():
            for k, v in rhs.items():
                c[i, j, k] += v
                c[j, i, k] -= v
        return cls(c, tuple(labels))

    def bracket(self, u, v):
        """Bracket of two coefficient vectors."""
        return np.einsum("i,j,ijk->k", u, v, self.c)

    def jacobi_residual(self):
        c = self.c
        # sum over cyclic permutations of c_ij^m c_mk^l
        t = np.einsum("ijm,mkl->ijkl", c, c)
        s = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        return float(np.max(np.abs(s))) if c.size else 0.0

    def sub(self, idx):
        """Restriction to the basis elements ``idx`` (must close)."""
        idx = list(idx)
        c = self.c[np.ix_(idx, idx, range(self.dim))]
        other = [k for k in range(self.dim) if k not in idx]
        if other and np.max(np.abs(c[:, :, other])) > 1e-12:
            from ..errors import TableInvalid

            raise TableInvalid("selected elements do not span a subalgebra")
        return StructureTable(c[:, :, idx], tuple(self.labels[i] for i in idx) if self.labels else ())
