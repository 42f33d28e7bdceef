"""Piecewise-polynomial interpolation for road profiles.

Thin wrapper around local-power-basis coefficients (the scipy ``PPoly``
layout) that adds what the road charts need: evaluation on floats, numpy
arrays and :class:`~nonplanar.ad.Dual` scalars, exact derivatives and
antiderivatives, and controlled extrapolation beyond the breakpoint range.

Extrapolation modes
    ``poly``      continue the end polynomial
    ``constant``  hold the end value, derivatives vanish outside
    ``linear``    continue with the end slope (antiderivative of constant)
    ``zero``      evaluate to zero outside the domain
"""

from __future__ import annotations

import bisect

import numpy as np

from . import ad

_DERIV_MODE = {"poly": "poly", "constant": "zero", "linear": "constant", "zero": "zero"}
_ANTIDERIV_MODE = {"poly": "poly", "constant": "linear", "zero": "constant"}


class PiecewisePoly:
    """Piecewise polynomial on strictly increasing breakpoints.

    ``coeffs[m, i]`` multiplies ``(x - breaks[i]) ** (order - 1 - m)`` on
    interval ``i``, matching the scipy convention.
    """

    __slots__ = ("breaks", "coeffs", "extrapolate", "_deriv")

    def __init__(self, breaks, coeffs, extrapolate: str = "poly"):
        breaks = np.asarray(breaks, dtype=float)
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if breaks.ndim != 1 or breaks.size < 2:
            raise ValueError("need at least two breakpoints")
        if np.any(np.diff(breaks) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if coeffs.shape[1] != breaks.size - 1:
            raise ValueError("coefficient count does not match interval count")
        if extrapolate not in _DERIV_MODE:
            raise ValueError(f"unknown extrapolation mode {extrapolate!r}")
        self.breaks = breaks
        self.coeffs = coeffs
        self.extrapolate = extrapolate
        self._deriv = None

    # -- construction ----------------------------------------------------

    @classmethod
    def from_spline(cls, x, y, bc: str = "clamped", extrapolate: str = "constant"):
        """Cubic spline through samples; ``clamped`` pins zero end slopes."""
        from scipy.interpolate import CubicSpline

        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.size == 2:
            # scipy needs >= 3 points for a clamped cubic; build the unique
            # cubic with the requested end slopes directly.
            if bc == "clamped":
                d0 = dN = 0.0
            elif bc == "natural":
                # natural through two points is the straight line
                return cls(x, [[(y[1] - y[0]) / (x[1] - x[0])], [y[0]]], extrapolate)
            else:
                raise ValueError(f"unsupported bc {bc!r} for two samples")
            h = x[1] - x[0]
            dy = y[1] - y[0]
            c3 = (d0 + dN - 2 * dy / h) / (h * h)
            c2 = (dy / h - d0) / h - c3 * h
            return cls(x, [[c3], [c2], [d0], [y[0]]], extrapolate)
        cs = CubicSpline(x, y, bc_type=bc)
        return cls(cs.x, cs.c, extrapolate)

    @classmethod
    def constant(cls, value: float, domain):
        return cls(domain, [[float(value)]], extrapolate="constant")

    # -- calculus ---------------------------------------------------------

    def derivative(self) -> "PiecewisePoly":
        if self._deriv is None:
            order = self.coeffs.shape[0]
            if order == 1:
                dc = np.zeros((1, self.coeffs.shape[1]))
            else:
                powers = np.arange(order - 1, 0, -1, dtype=float)
                dc = self.coeffs[:-1] * powers[:, None]
            self._deriv = PiecewisePoly(self.breaks, dc, _DERIV_MODE[self.extrapolate])
        return self._deriv

    def antiderivative(self) -> "PiecewisePoly":
        if self.extrapolate not in _ANTIDERIV_MODE:
            raise ValueError(f"cannot antidifferentiate mode {self.extrapolate!r}")
        order, k = self.coeffs.shape
        powers = np.arange(order, 0, -1, dtype=float)
        ac = np.zeros((order + 1, k))
        ac[:-1] = self.coeffs / powers[:, None]
        # accumulate interval constants so the result is continuous
        h = np.diff(self.breaks)
        run = 0.0
        for i in range(k):
            ac[-1, i] = run
            run += sum(ac[m, i] * h[i] ** (order - m) for m in range(order))
        return PiecewisePoly(self.breaks, ac, _ANTIDERIV_MODE[self.extrapolate])

    @property
    def domain(self):
        return float(self.breaks[0]), float(self.breaks[-1])

    # -- evaluation --------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, ad.Dual):
            return ad.chain(x, self._eval(x.val), self.derivative()._eval(x.val))
        return self._eval(x)

    def _eval(self, x):
        if isinstance(x, np.ndarray):
            return self._eval_array(x)
        return self._eval_float(float(x))

    def _eval_float(self, x: float) -> float:
        lo, hi = self.breaks[0], self.breaks[-1]
        if self.extrapolate == "zero" and not (lo <= x <= hi):
            return 0.0
        if self.extrapolate == "linear" and not (lo <= x <= hi):
            xe = lo if x < lo else hi
            return self._eval_float(xe) + self._end_slope(x > hi) * (x - xe)
        if self.extrapolate == "constant":
            x = min(max(x, lo), hi)
        i = bisect.bisect_right(self.breaks, x) - 1
        i = min(max(i, 0), self.breaks.size - 2)
        dx = x - self.breaks[i]
        acc = 0.0
        for m in range(self.coeffs.shape[0]):
            acc = acc * dx + self.coeffs[m, i]
        return acc

    def _eval_array(self, x: np.ndarray) -> np.ndarray:
        lo, hi = self.breaks[0], self.breaks[-1]
        xq = np.clip(x, lo, hi) if self.extrapolate != "poly" else x
        i = np.clip(np.searchsorted(self.breaks, xq, side="right") - 1, 0, self.breaks.size - 2)
        dx = xq - self.breaks[i]
        acc = np.zeros_like(dx)
        for m in range(self.coeffs.shape[0]):
            acc = acc * dx + self.coeffs[m, i]
        if self.extrapolate == "zero":
            acc = np.where((x < lo) | (x > hi), 0.0, acc)
        elif self.extrapolate == "linear":
            acc = np.where(x < lo, acc + self._end_slope(False) * (x - lo), acc)
            acc = np.where(x > hi, acc + self._end_slope(True) * (x - hi), acc)
        return acc

    def _end_slope(self, upper: bool) -> float:
        d = self.derivative()
        return d._eval_float(self.breaks[-1] if upper else self.breaks[0])
