"""Forward-mode automatic differentiation with tagged dual numbers.

A :class:`Dual` carries a primal value and a tangent.  Both may be floats,
numpy arrays (for batched evaluation over many points) or further duals, so
derivatives nest.  Every call to :func:`jvp` creates a fresh tag; when two
duals with different tags meet, the newer one treats the older one as a
constant, which avoids perturbation confusion in nested derivatives.
"""
from __future__ import annotations

import itertools

import numpy as np

_tags = itertools.count(1)


class Dual:
    __slots__ = ("tag", "val", "eps")
    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, tag, val, eps):
        self.tag = tag
        self.val = val
        self.eps = eps

    def __repr__(self):
        return f"Dual(tag={self.tag}, val={self.val!r}, eps={self.eps!r})"

    def _outer(self, o):
        # True when ``o`` is a dual that must be differentiated first
        return isinstance(o, Dual) and o.tag > self.tag

    def __add__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                return Dual(self.tag, self.val + o.val, self.eps + o.eps)
            if o.tag > self.tag:
                return o.__radd__(self)
        return Dual(self.tag, self.val + o, self.eps)

    def __radd__(self, o):
        return Dual(self.tag, o + self.val, self.eps)

    def __sub__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                return Dual(self.tag, self.val - o.val, self.eps - o.eps)
            if o.tag > self.tag:
                return o.__rsub__(self)
        return Dual(self.tag, self.val - o, self.eps)

    def __rsub__(self, o):
        return Dual(self.tag, o - self.val, -self.eps)

    def __mul__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                return Dual(self.tag, self.val * o.val, self.val * o.eps + self.eps * o.val)
            if o.tag > self.tag:
                return o.__rmul__(self)
        return Dual(self.tag, self.val * o, self.eps * o)

    def __rmul__(self, o):
        return Dual(self.tag, o * self.val, o * self.eps)

    def __truediv__(self, o):
        if isinstance(o, Dual):
            if o.tag == self.tag:
                q = self.val / o.val
                return Dual(self.tag, q, (self.eps - q * o.eps) / o.val)
            if o.tag > self.tag:
                return o.__rtruediv__(self)
        return Dual(self.tag, self.val / o, self.eps / o)

    def __rtruediv__(self, o):
        q = o / self.val
        return Dual(self.tag, q, -q * self.eps / self.val)

    def __neg__(self):
        return Dual(self.tag, -self.val, -self.eps)

    def __pos__(self):
        return self

    def __abs__(self):
        return self * np.sign(primal(self))

    def __pow__(self, n):
        if isinstance(n, Dual):
            return exp(n * log(self))
        if n == 0:
            return Dual(self.tag, self.val ** 0, 0 * self.eps)
        if n == 1:
            return self
        if n == 2:
            return self * self
        return Dual(self.tag, self.val ** n, n * self.val ** (n - 1) * self.eps)

    def __rpow__(self, base):
        return exp(self * np.log(base))

    # comparisons look at the primal value only
    def __lt__(self, o):
        return primal(self) < primal(o)

    def __le__(self, o):
        return primal(self) <= primal(o)

    def __gt__(self, o):
        return primal(self) > primal(o)

    def __ge__(self, o):
        return primal(self) >= primal(o)


def primal(x):
    """Strip every dual layer and return the underlying float or array."""
    while isinstance(x, Dual):
        x = x.val
    return x


def max_tag(values):
    t = 0
    for v in values:
        if isinstance(v, Dual) and v.tag > t:
            t = v.tag
    return t


def split(x, tag):
    """Return the (value, tangent) parts of ``x`` with respect to ``tag``."""
    if isinstance(x, Dual) and x.tag == tag:
        return x.val, x.eps
    return x, 0.0


def _unary(np_fn, deriv):
    def fn(x):
        if isinstance(x, Dual):
            return Dual(x.tag, fn(x.val), deriv(x.val) * x.eps)
        return np_fn(x)

    fn.__name__ = np_fn.__name__
    return fn


sin = _unary(np.sin, lambda v: cos(v))
cos = _unary(np.cos, lambda v: -sin(v))
exp = _unary(np.exp, lambda v: exp(v))
log = _unary(np.log, lambda v: 1.0 / v)
sqrt = _unary(np.sqrt, lambda v: 0.5 / sqrt(v))
sinh = _unary(np.sinh, lambda v: cosh(v))
cosh = _unary(np.cosh, lambda v: sinh(v))
tanh = _unary(np.tanh, lambda v: 1.0 - tanh(v) ** 2)
tan = _unary(np.tan, lambda v: 1.0 / cos(v) ** 2)
arctan = _unary(np.arctan, lambda v: 1.0 / (1.0 + v * v))
arctanh = _unary(np.arctanh, lambda v: 1.0 / (1.0 - v * v))


def arctan2(y, x):
    if isinstance(y, Dual) or isinstance(x, Dual):
        t = max_tag((y, x))
        y0, y1 = split(y, t)
        x0, x1 = split(x, t)
        r2 = x0 * x0 + y0 * y0
        return Dual(t, arctan2(y0, x0), (x0 * y1 - y0 * x1) / r2)
    return np.arctan2(y, x)


def new_tag():
    return next(_tags)


def jvp(f, x, v):
    """Directional derivative of ``f`` at ``x`` along ``v``.

    ``f`` maps a sequence of scalars to a sequence of scalars.  Returns the
    pair ``(f(x), Df(x) v)`` as lists.
    """
    tag = new_tag()
    xd = [Dual(tag, xi, vi) for xi, vi in zip(x, v)]
    out = f(xd)
    vals, tans = [], []
    for y in out:
        a, b = split(y, tag)
        vals.append(a)
        tans.append(b)
    return vals, tans


def jvp_scalar(f, x, v):
    tag = new_tag()
    xd = [Dual(tag, xi, vi) for xi, vi in zip(x, v)]
    return split(f(xd), tag)


def jacobian(f, x):
    """Full Jacobian ``J[i][j] = d f_i / d x_j`` as nested lists."""
    n = len(x)
    cols = []
    for j in range(n):
        e = [1.0 if k == j else 0.0 for k in range(n)]
        cols.append(jvp(f, x, e)[1])
    m = len(cols[0]) if cols else 0
    return [[cols[j][i] for j in range(n)] for i in range(m)]


def gradient(f, x):
    """Gradient of a scalar function as a list of partial derivatives."""
    n = len(x)
    out = []
    for j in range(n):
        e = [1.0 if k == j else 0.0 for k in range(n)]
        out.append(jvp_scalar(f, x, e)[1])
    return out
