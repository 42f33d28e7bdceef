"""Forward-mode automatic differentiation with dual numbers.

A :class:`Dual` carries a value and a vector of partial derivatives with
respect to a fixed set of seed variables.  Values may be plain floats or
numpy arrays, in which case the leading axes are a batch dimension and the
partial axis comes last.  All arithmetic propagates derivatives exactly
(no finite differencing), so Jacobians of smooth expressions are accurate
to machine precision.

The module-level ``sin``/``cos``/... helpers dispatch on the argument type
so the same physics code can run on floats (simulation), numpy arrays
(batched evaluation) and duals (differentiation).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Union

import numpy as np

from .errors import NonDifferentiablePoint

Scalar = Union[float, np.ndarray, "Dual"]


def _col(v):
    """Align a value with the trailing partials axis of a ``der`` array."""
    return v[..., None] if isinstance(v, np.ndarray) else v


class Dual:
    """Value plus partial derivatives w.r.t. the seeded variables."""

    __slots__ = ("val", "der")

    def __init__(self, val, der):
        self.val = val
        self.der = der

    def __repr__(self):
        return f"Dual({self.val!r}, {self.der!r})"

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        return Dual(self.val + other, self.der)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        return Dual(self.val - other, self.der)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.der)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val * other.val,
                self.der * _col(other.val) + other.der * _col(self.val),
            )
        return Dual(self.val * other, self.der * _col(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            ov = other.val
            _check_nonzero(ov, "division by zero")
            return Dual(
                self.val / ov,
                (self.der * _col(ov) - other.der * _col(self.val)) / _col(ov * ov),
            )
        _check_nonzero(other, "division by zero")
        return Dual(self.val / other, self.der / _col(other))

    def __rtruediv__(self, other):
        _check_nonzero(self.val, "division by zero")
        return Dual(other / self.val, -self.der * _col(other / (self.val * self.val)))

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pow__(self, p):
        if isinstance(p, Dual):
            raise NonDifferentiablePoint("dual exponents are not supported")
        return Dual(self.val ** p, self.der * _col(p * self.val ** (p - 1)))

    # -- comparisons act on values (used only for branching) ------------

    def __lt__(self, other):
        return self.val < _value(other)

    def __le__(self, other):
        return self.val <= _value(other)

    def __gt__(self, other):
        return self.val > _value(other)

    def __ge__(self, other):
        return self.val >= _value(other)


def _value(x):
    return x.val if isinstance(x, Dual) else x


def _check_nonzero(v, what):
    if isinstance(v, np.ndarray):
        if np.any(v == 0.0):
            raise NonDifferentiablePoint(what)
    elif v == 0.0:
        raise NonDifferentiablePoint(what)


def value(x: Scalar):
    """Strip the derivative part, if any."""
    return x.val if isinstance(x, Dual) else x


def chain(x: Dual, val, slope) -> Dual:
    """Lift ``f(x)`` given the primal value and local slope of ``f``."""
    return Dual(val, x.der * _col(slope))


# -- elementary functions, dispatched on argument type -------------------


def sin(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return chain(x, sin(x.val), cos(x.val))
    return np.sin(x) if isinstance(x, np.ndarray) else math.sin(x)


def cos(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return chain(x, cos(x.val), -sin(x.val))
    return np.cos(x) if isinstance(x, np.ndarray) else math.cos(x)


def tan(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        c = cos(x.val)
        _check_nonzero(c, "tan at its pole")
        return chain(x, tan(x.val), 1.0 / (c * c))
    return np.tan(x) if isinstance(x, np.ndarray) else math.tan(x)


def arctan(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return chain(x, arctan(x.val), 1.0 / (1.0 + x.val * x.val))
    return np.arctan(x) if isinstance(x, np.ndarray) else math.atan(x)


def sqrt(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        _check_nonzero(x.val, "sqrt at zero")
        r = sqrt(x.val)
        return chain(x, r, 0.5 / r)
    return np.sqrt(x) if isinstance(x, np.ndarray) else math.sqrt(x)


def arctan2(y: Scalar, x: Scalar) -> Scalar:
    if isinstance(y, Dual) or isinstance(x, Dual):
        yv, xv = value(y), value(x)
        denom = xv * xv + yv * yv
        _check_nonzero(denom, "arctan2 at the origin")
        val = arctan2(yv, xv)
        dy = y.der if isinstance(y, Dual) else 0.0
        dx = x.der if isinstance(x, Dual) else 0.0
        return Dual(val, (dy * _col(xv) - dx * _col(yv)) / _col(denom))
    if isinstance(y, np.ndarray) or isinstance(x, np.ndarray):
        return np.arctan2(y, x)
    return math.atan2(y, x)


def hypot(x: Scalar, y: Scalar) -> Scalar:
    return sqrt(x * x + y * y)


# -- seeding and Jacobians ------------------------------------------------


def seed(x: Sequence[float]) -> list[Dual]:
    """One dual per entry of ``x``, seeded with identity partials."""
    x = np.asarray(x, dtype=float)
    eye = np.eye(x.size)
    return [Dual(float(x[i]), eye[i].copy()) for i in range(x.size)]


def seed_batched(columns: Sequence[np.ndarray]) -> list[Dual]:
    """Seed a batch: column ``i`` gets unit partial ``i``, batched over rows."""
    k = len(columns)
    out = []
    for i, c in enumerate(columns):
        c = np.asarray(c, dtype=float)
        der = np.zeros(c.shape + (k,))
        der[..., i] = 1.0
        out.append(Dual(c, der))
    return out


def dual_jacobian(f: Callable[[Sequence[Scalar]], Sequence[Scalar]], x) -> np.ndarray:
    """Exact Jacobian of ``f`` at ``x`` by forward-mode differentiation.

    ``f`` must map a sequence of n scalars to a sequence of m scalars built
    from the supported primitives (+, -, *, /, powers, sin, cos, tan,
    arctan, arctan2, sqrt and 2x2 inversion via those).  Returns the m-by-n
    Jacobian matrix.
    """
    x = np.asarray(x, dtype=float)
    outputs = f(seed(x))
    rows = []
    for out in outputs:
        if isinstance(out, Dual):
            rows.append(np.asarray(out.der, dtype=float))
        else:
            rows.append(np.zeros(x.size))
    return np.vstack(rows) if rows else np.zeros((0, x.size))
