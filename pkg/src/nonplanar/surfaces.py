"""Concrete road charts: centerline surfaces in three flavors.

All shipped roads are "centerline plus linear lateral offset" charts.  The
centerline frame (tangent, lateral, normal) can be described three ways:

* ``frenet``     planar frame driven by a curvature profile kappa(s)
* ``tait-bryan`` frame given by heading/slope/bank angles (a, b, c)(s)
* ``darboux``    frame propagated from torsion / normal / geodesic
                 curvature profiles by the moving-frame ODE

Profiles are interpolated with clamped cubic splines so the chart has the
two continuous frame derivatives its second partials require.  Global
positions come from a fixed-step Simpson quadrature of the tangent and are
cached on a deterministic grid; they are output-only and never feed back
into the dynamics.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import yaml

from . import ad
from .ad import Scalar
from .errors import DomainError, ParseError, RegularityError
from .geom import (
    EPS_REGULAR,
    ParametricPose,
    SurfaceJet,
    Vec3,
    add3,
    jet_from_partials,
    smul3,
    tangent_basis,
)
from .interp import PiecewisePoly

_ZERO3: Vec3 = (0.0, 0.0, 0.0)


# -- profiles ---------------------------------------------------------------


@dataclass(frozen=True)
class AngleProfile:
    """Heading/slope/bank angles of the centerline as functions of s."""

    heading: PiecewisePoly
    slope: PiecewisePoly
    bank: PiecewisePoly

    @classmethod
    def from_samples(cls, s, a, b, c, bc: str = "clamped") -> "AngleProfile":
        s = np.asarray(s, dtype=float)
        if s.size < 2 or np.any(np.diff(s) <= 0):
            raise ValueError("breakpoints must be strictly increasing, >= 2 samples")
        return cls(
            PiecewisePoly.from_spline(s, a, bc=bc),
            PiecewisePoly.from_spline(s, b, bc=bc),
            PiecewisePoly.from_spline(s, c, bc=bc),
        )

    @classmethod
    def from_curvature(cls, kappa: PiecewisePoly) -> "AngleProfile":
        """Planar profile whose heading rate equals ``kappa`` exactly."""
        zero = PiecewisePoly.constant(0.0, kappa.breaks[[0, -1]])
        return cls(kappa.antiderivative(), zero, zero)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.heading.domain


@dataclass(frozen=True)
class CurvatureProfile:
    """Planar centerline curvature kappa(s)."""

    kappa: PiecewisePoly

    @classmethod
    def from_samples(cls, s, kappa, bc: str = "clamped") -> "CurvatureProfile":
        s = np.asarray(s, dtype=float)
        if s.size < 2 or np.any(np.diff(s) <= 0):
            raise ValueError("breakpoints must be strictly increasing, >= 2 samples")
        return cls(PiecewisePoly.from_spline(s, kappa, bc=bc))

    @property
    def domain(self) -> Tuple[float, float]:
        return self.kappa.domain


@dataclass(frozen=True)
class DarbouxProfile:
    """Torsion, normal curvature and geodesic curvature of the centerline."""

    torsion: PiecewisePoly
    normal_curvature: PiecewisePoly
    geodesic_curvature: PiecewisePoly

    @classmethod
    def from_samples(cls, s, ks, ky, kn, bc: str = "clamped") -> "DarbouxProfile":
        s = np.asarray(s, dtype=float)
        if s.size < 2 or np.any(np.diff(s) <= 0):
            raise ValueError("breakpoints must be strictly increasing, >= 2 samples")
        return cls(
            PiecewisePoly.from_spline(s, ks, bc=bc),
            PiecewisePoly.from_spline(s, ky, bc=bc),
            PiecewisePoly.from_spline(s, kn, bc=bc),
        )

    @property
    def domain(self) -> Tuple[float, float]:
        return self.torsion.domain


# -- centerline frame algebra -----------------------------------------------


def _frame_columns(a: Scalar, b: Scalar, c: Scalar) -> Tuple[Vec3, Vec3, Vec3]:
    """Tangent/lateral/normal columns of the yaw-pitch-roll rotation."""
    ca, sa = ad.cos(a), ad.sin(a)
    cb, sb = ad.cos(b), ad.sin(b)
    cc, sc = ad.cos(c), ad.sin(c)
    e_s = (ca * cb, sa * cb, sb)
    e_y = (-ca * sb * sc - sa * cc, -sa * sb * sc + ca * cc, cb * sc)
    e_n = (-ca * sb * cc + sa * sc, -sa * sb * cc - ca * sc, cb * cc)
    return e_s, e_y, e_n


def frame_from_angles(a: float, b: float, c: float) -> np.ndarray:
    """Centerline rotation matrix with tangent/lateral/normal columns."""
    e_s, e_y, e_n = _frame_columns(float(a), float(b), float(c))
    return np.column_stack([e_s, e_y, e_n])


def _darboux_from_angle_rates(a, b, c, da, db, dc):
    """(torsion, normal curvature, geodesic curvature) from angle rates.

    Derived from the skew matrix of the frame derivative.  Signs follow the
    moving-frame convention used by the chart formulas below (a planar left
    turn, heading rate +kappa, has geodesic curvature +kappa).
    """
    sb, cb = ad.sin(b), ad.cos(b)
    sc, cc = ad.sin(c), ad.cos(c)
    ks = da * sb + dc
    ky = da * sc * cb - db * cc
    kn = da * cb * cc + db * sc
    return ks, ky, kn


def _darboux_rate_derivatives(a, b, c, da, db, dc, dda, ddb, ddc):
    """s-derivatives of the torsion and geodesic curvature."""
    sb, cb = ad.sin(b), ad.cos(b)
    sc, cc = ad.sin(c), ad.cos(c)
    dks = dda * sb + da * db * cb + ddc
    dkn = dda * cb * cc - da * db * sb * cc - da * dc * cb * sc + ddb * sc + db * dc * cc
    return dks, dkn


def tait_bryan_to_darboux(profile: AngleProfile, s):
    """Darboux curvatures (torsion, normal, geodesic) of an angle profile."""
    a, b, c = profile.heading(s), profile.slope(s), profile.bank(s)
    da = profile.heading.derivative()(s)
    db = profile.slope.derivative()(s)
    dc = profile.bank.derivative()(s)
    return _darboux_from_angle_rates(a, b, c, da, db, dc)


def darboux_profile_from_angles(
    profile: AngleProfile, pitch: float = 0.05
) -> DarbouxProfile:
    """Resample an angle profile into Darboux curvature splines.

    Samples the conversion on a grid refining the angle breakpoints (the
    converted curvatures have curvature kinks there) and pins the exact
    one-sided end slopes so the moving-frame integration starts unbiased.
    """
    breaks = profile.heading.breaks
    lo, hi = float(breaks[0]), float(breaks[-1])
    n = max(2, int(math.ceil((hi - lo) / pitch)) + 1)
    grid = np.unique(np.concatenate([np.linspace(lo, hi, n), breaks]))
    ks, ky, kn = (np.asarray(v, dtype=float) for v in tait_bryan_to_darboux(profile, grid))
    h = 1e-6 * max(1.0, hi - lo)
    lo_vals = np.asarray(tait_bryan_to_darboux(profile, lo), dtype=float)
    lo_plus = np.asarray(tait_bryan_to_darboux(profile, lo + h), dtype=float)
    hi_vals = np.asarray(tait_bryan_to_darboux(profile, hi), dtype=float)
    hi_minus = np.asarray(tait_bryan_to_darboux(profile, hi - h), dtype=float)
    d_lo = (lo_plus - lo_vals) / h
    d_hi = (hi_vals - hi_minus) / h
    polys = [
        PiecewisePoly.from_spline(grid, col, bc=((1, float(d_lo[i])), (1, float(d_hi[i]))))
        for i, col in enumerate((ks, ky, kn))
    ]
    return DarbouxProfile(*polys)


def _centerline_partials(
    frame: Tuple[Vec3, Vec3, Vec3],
    ks: Scalar,
    ky: Scalar,
    kn: Scalar,
    dks: Scalar,
    dkn: Scalar,
    y: Scalar,
) -> Tuple[Vec3, Vec3, Vec3, Vec3, Vec3]:
    """Chart partials of x(s, y) = centerline(s) + y * lateral(s)."""
    e_s, e_y, e_n = frame
    dey = add3(smul3(-kn, e_s), smul3(ks, e_n))
    des = add3(smul3(kn, e_y), smul3(-ky, e_n))
    d2ey = add3(
        add3(smul3(ks * ky - dkn, e_s), smul3(-(kn * kn + ks * ks), e_y)),
        smul3(kn * ky + dks, e_n),
    )
    xs = add3(e_s, smul3(y, dey))
    xss = add3(des, smul3(y, d2ey))
    return xs, e_y, xss, dey, _ZERO3


def _frame_ode_rhs(cols, ks, ky, kn):
    """Moving-frame derivative: d/ds of (tangent, lateral, normal, position)."""
    e_s, e_y, e_n, _ = cols
    des = add3(smul3(kn, e_y), smul3(-ky, e_n))
    dey = add3(smul3(-kn, e_s), smul3(ks, e_n))
    den = add3(smul3(ky, e_s), smul3(-ks, e_y))
    return des, dey, den, e_s


# -- quadrature cache ---------------------------------------------------------


class _CumulativeSimpson:
    """Deterministic cumulative integral of a smooth 3-vector function.

    Nodes refine every profile interval to a step <= ``max_step``; queries
    integrate the remainder from the nearest node below with one Simpson
    panel, so the result depends only on s (never on query history).
    """

    def __init__(self, fn, breaks, max_step: float = 0.1):
        self.fn = fn
        nodes = [float(breaks[0])]
        for left, right in zip(breaks[:-1], breaks[1:]):
            n = max(1, int(math.ceil((right - left) / max_step)))
            nodes.extend(float(left + (right - left) * (i + 1) / n) for i in range(n))
        self.nodes = np.asarray(nodes)
        vals = np.array([fn(s) for s in self.nodes])
        cum = np.zeros_like(vals)
        for i in range(len(self.nodes) - 1):
            a, b = self.nodes[i], self.nodes[i + 1]
            mid = fn(0.5 * (a + b))
            cum[i + 1] = cum[i] + (b - a) / 6.0 * (vals[i] + 4.0 * mid + vals[i + 1])
        self.cum = cum
        self.node_vals = vals

    def __call__(self, s: float) -> np.ndarray:
        i = bisect.bisect_right(self.nodes, s) - 1
        i = min(max(i, 0), len(self.nodes) - 1)
        a = self.nodes[i]
        h = s - a
        if h == 0.0:
            return self.cum[i].copy()
        mid = self.fn(a + 0.5 * h)
        return self.cum[i] + h / 6.0 * (self.node_vals[i] + 4.0 * mid + self.fn(s))


# -- road surfaces -------------------------------------------------------------


class RoadSurface:
    """Base class: a regular centerline chart over [s0, sN] x [-y_max, y_max]."""

    kind = "abstract"

    def __init__(self, domain, lane_half_width, anchor, com_height, name=""):
        if lane_half_width <= 0:
            raise ValueError("lane_half_width must be positive")
        self.s_min, self.s_max = float(domain[0]), float(domain[1])
        self.y_max = float(lane_half_width)
        self.anchor = np.asarray(anchor, dtype=float).reshape(3)
        self.com_height = float(com_height)
        self.name = name or self.kind

    # subclass API ---------------------------------------------------------

    def _partials(self, s, y):
        raise NotImplementedError

    def frame(self, s):
        """Centerline frame columns (tangent, lateral, normal) at s."""
        raise NotImplementedError

    def planar_curvature(self, s):
        """Geodesic curvature of the centerline (planar-model equivalent)."""
        raise NotImplementedError

    def centerline_position(self, s: float) -> np.ndarray:
        raise NotImplementedError

    # shared behaviour --------------------------------------------------------

    @property
    def domain(self):
        return (self.s_min, self.s_max)

    def contains(self, s: float, y: float) -> bool:
        return self.s_min <= s <= self.s_max and -self.y_max <= y <= self.y_max

    def check_domain(self, s: float, y: float) -> None:
        if not self.contains(s, y):
            raise DomainError(
                f"(s={s:.3f}, y={y:.3f}) outside "
                f"[{self.s_min:.3f}, {self.s_max:.3f}] x [-{self.y_max:.3f}, {self.y_max:.3f}]"
            )

    def jet(self, s, y, *, with_position: bool = False, check_domain: bool = True) -> SurfaceJet:
        """Evaluate the chart jet; floats, arrays and duals are accepted.

        Domain and regularity violations raise only on the float path; the
        batched/dual path is reserved for solver internals that manage
        their own iterates.
        """
        floats = not isinstance(s, (np.ndarray, ad.Dual)) and not isinstance(
            y, (np.ndarray, ad.Dual)
        )
        if floats and check_domain:
            self.check_domain(float(s), float(y))
        parts = self._partials(s, y)
        pos = None
        if with_position:
            pos = tuple(self.surface_position(float(s), float(y)))
        return jet_from_partials(*parts, position=pos, check=floats)

    def surface_position(self, s: float, y: float) -> np.ndarray:
        e_y = np.asarray(self.frame(float(s))[1], dtype=float)
        return self.centerline_position(s) + y * e_y

    def _regularity_grid_check(self, pitch: float = 0.5, lateral_nodes: int = 4):
        s_grid = np.linspace(
            self.s_min, self.s_max, max(2, int(math.ceil((self.s_max - self.s_min) / pitch)) + 1)
        )
        for y in np.linspace(-self.y_max, self.y_max, lateral_nodes):
            jet = self.jet(s_grid, float(y), check_domain=False)
            xs, xy = jet.xs, jet.xy
            ee = np.asarray(
                (xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2])
                * (xy[0] * xy[0] + xy[1] * xy[1] + xy[2] * xy[2])
                - (xs[0] * xy[0] + xs[1] * xy[1] + xs[2] * xy[2]) ** 2
            )
            if np.any(ee <= EPS_REGULAR**2):
                i = int(np.argmax(ee <= EPS_REGULAR**2))
                raise RegularityError(
                    f"chart degenerate at s={s_grid[i]:.2f}, y={y:.2f} "
                    f"(det I = {float(ee[i]):.3e})"
                )


class FrenetRoad(RoadSurface):
    """Planar chart driven by centerline curvature; normal is the global up."""

    kind = "frenet"

    def __init__(self, profile, lane_half_width, anchor=(0.0, 0.0, 0.0),
                 com_height=0.592, name=""):
        super().__init__(profile.domain, lane_half_width, anchor, com_height, name)
        self.profile = profile
        self._kappa = profile.kappa
        self._dkappa = profile.kappa.derivative()
        self._alpha = profile.kappa.antiderivative()
        self._quad = _CumulativeSimpson(self._tangent_float, profile.kappa.breaks)
        self._regularity_grid_check()

    def _tangent_float(self, s: float) -> np.ndarray:
        alpha = self._alpha(s)
        return np.array([math.cos(alpha), math.sin(alpha), 0.0])

    def frame(self, s):
        alpha = self._alpha(s)
        ca, sa = ad.cos(alpha), ad.sin(alpha)
        zero = 0.0 * ca
        one = 1.0 + zero
        return (ca, sa, zero), (-sa, ca, zero), (zero, zero, one)

    def planar_curvature(self, s):
        return self._kappa(s)

    def _partials(self, s, y):
        e_s, e_y, _ = self.frame(s)
        k = self._kappa(s)
        dk = self._dkappa(s)
        w = 1.0 - y * k
        xs = smul3(w, e_s)
        xss = add3(smul3(-y * dk, e_s), smul3(w * k, e_y))
        xsy = smul3(-k, e_s)
        return xs, e_y, xss, xsy, _ZERO3

    def centerline_position(self, s: float) -> np.ndarray:
        return self.anchor + self._quad(float(s))


class TaitBryanRoad(RoadSurface):
    """Chart whose centerline frame comes from heading/slope/bank angles."""

    kind = "tait-bryan"

    def __init__(self, profile, lane_half_width, anchor=(0.0, 0.0, 0.0),
                 com_height=0.592, name=""):
        super().__init__(profile.domain, lane_half_width, anchor, com_height, name)
        self.profile = profile
        self._a0, self._b0, self._c0 = profile.heading, profile.slope, profile.bank
        self._a1, self._b1, self._c1 = (p.derivative() for p in (self._a0, self._b0, self._c0))
        self._a2, self._b2, self._c2 = (p.derivative() for p in (self._a1, self._b1, self._c1))
        self._quad = _CumulativeSimpson(self._tangent_float, profile.heading.breaks)
        self._regularity_grid_check()

    def _tangent_float(self, s: float) -> np.ndarray:
        return np.array(self.frame(s)[0])

    def frame(self, s):
        return _frame_columns(self._a0(s), self._b0(s), self._c0(s))

    def darboux_curvatures(self, s):
        a, b, c = self._a0(s), self._b0(s), self._c0(s)
        return _darboux_from_angle_rates(
            a, b, c, self._a1(s), self._b1(s), self._c1(s)
        )

    def planar_curvature(self, s):
        return self.darboux_curvatures(s)[2]

    def _partials(self, s, y):
        a, b, c = self._a0(s), self._b0(s), self._c0(s)
        da, db, dc = self._a1(s), self._b1(s), self._c1(s)
        dda, ddb, ddc = self._a2(s), self._b2(s), self._c2(s)
        frame = _frame_columns(a, b, c)
        ks, ky, kn = _darboux_from_angle_rates(a, b, c, da, db, dc)
        dks, dkn = _darboux_rate_derivatives(a, b, c, da, db, dc, dda, ddb, ddc)
        return _centerline_partials(frame, ks, ky, kn, dks, dkn, y)

    def centerline_position(self, s: float) -> np.ndarray:
        return self.anchor + self._quad(float(s))


class DarbouxRoad(RoadSurface):
    """Chart whose frame is propagated from Darboux curvature profiles.

    The frame has no closed form here; it is integrated once on a fine
    fixed grid (classical RK4, re-orthonormalized at the nodes) and queries
    take a single RK4 step from the node below, which keeps evaluation
    deterministic and smooth in s.
    """

    kind = "darboux"

    GRID_STEP = 0.05

    def __init__(self, profile, lane_half_width, anchor=(0.0, 0.0, 0.0),
                 com_height=0.592, initial_angles=(0.0, 0.0, 0.0), name=""):
        super().__init__(profile.domain, lane_half_width, anchor, com_height, name)
        self.profile = profile
        self._ks, self._ky, self._kn = (
            profile.torsion,
            profile.normal_curvature,
            profile.geodesic_curvature,
        )
        self._dks = profile.torsion.derivative()
        self._dkn = profile.geodesic_curvature.derivative()
        self._build_frame_grid(initial_angles)
        self._regularity_grid_check()

    def _rhs(self, s, cols):
        return _frame_ode_rhs(cols, self._ks(s), self._ky(s), self._kn(s))

    def _rk4_frame_step(self, s0, h, cols):
        k1 = self._rhs(s0, cols)
        k2 = self._rhs(s0 + h * 0.5, _axpy(cols, h * 0.5, k1))
        k3 = self._rhs(s0 + h * 0.5, _axpy(cols, h * 0.5, k2))
        k4 = self._rhs(s0 + h, _axpy(cols, h, k3))
        out = []
        for c0, a, bb, cc, d in zip(cols, k1, k2, k3, k4):
            out.append(
                tuple(
                    c0[j] + h / 6.0 * (a[j] + 2.0 * bb[j] + 2.0 * cc[j] + d[j])
                    for j in range(3)
                )
            )
        return tuple(out)

    def _build_frame_grid(self, initial_angles):
        breaks = self._ks.breaks
        nodes = [float(breaks[0])]
        for left, right in zip(breaks[:-1], breaks[1:]):
            n = max(1, int(math.ceil((right - left) / self.GRID_STEP)))
            nodes.extend(float(left + (right - left) * (i + 1) / n) for i in range(n))
        self._nodes = np.asarray(nodes)
        R0 = frame_from_angles(*initial_angles)
        state = (tuple(R0[:, 0]), tuple(R0[:, 1]), tuple(R0[:, 2]), tuple(self.anchor))
        frames = np.zeros((len(nodes), 4, 3))
        frames[0] = [state[0], state[1], state[2], state[3]]
        for i in range(len(nodes) - 1):
            h = self._nodes[i + 1] - self._nodes[i]
            state = self._rk4_frame_step(self._nodes[i], h, state)
            es, ey, en, xc = (np.asarray(v) for v in state)
            # re-orthonormalize to stop drift from accumulating
            es = es / np.linalg.norm(es)
            ey = ey - np.dot(ey, es) * es
            ey = ey / np.linalg.norm(ey)
            en = np.cross(es, ey)
            state = (tuple(es), tuple(ey), tuple(en), tuple(xc))
            frames[i + 1] = [es, ey, en, xc]
        self._node_frames = frames

    def _state_at(self, s):
        """Frame plus centerline position at s (float or array query)."""
        if isinstance(s, np.ndarray):
            idx = np.clip(
                np.searchsorted(self._nodes, s, side="right") - 1, 0, len(self._nodes) - 1
            )
            base = self._node_frames[idx]  # (B, 4, 3)
            cols = tuple(tuple(base[:, r, j] for j in range(3)) for r in range(4))
            h = s - self._nodes[idx]
            return self._rk4_frame_step(self._nodes[idx], h, cols)
        i = bisect.bisect_right(self._nodes, s) - 1
        i = min(max(i, 0), len(self._nodes) - 1)
        base = self._node_frames[i]
        cols = tuple(tuple(base[r]) for r in range(4))
        return self._rk4_frame_step(self._nodes[i], float(s) - self._nodes[i], cols)

    def _frame_generic(self, s):
        if isinstance(s, ad.Dual):
            cols = self._state_at(s.val)
            rhs = self._rhs(s.val, cols)
            return tuple(
                tuple(ad.chain(s, cols[r][j], rhs[r][j]) for j in range(3))
                for r in range(4)
            )
        return self._state_at(s)

    def frame(self, s):
        return self._frame_generic(s)[:3]

    def planar_curvature(self, s):
        return self._kn(s)

    def _partials(self, s, y):
        frame = self._frame_generic(s)[:3]
        ks, ky, kn = self._ks(s), self._ky(s), self._kn(s)
        return _centerline_partials(frame, ks, ky, kn, self._dks(s), self._dkn(s), y)

    def centerline_position(self, s: float) -> np.ndarray:
        return np.asarray(self._state_at(float(s))[3], dtype=float)


def _axpy(cols, h, deriv):
    return tuple(
        tuple(c[j] + h * d[j] for j in range(3)) for c, d in zip(cols, deriv)
    )


# -- global pose ---------------------------------------------------------------


def global_pose(road: RoadSurface, pose: ParametricPose) -> Tuple[np.ndarray, np.ndarray]:
    """Global position and body rotation matrix for a parametric pose."""
    jet = road.jet(pose.s, pose.y, with_position=True)
    e1, e2 = tangent_basis(jet, pose.heading)
    rot = np.column_stack([np.asarray(e1), np.asarray(e2), np.asarray(jet.normal)])
    return np.asarray(jet.position, dtype=float), rot


# -- road files ------------------------------------------------------------------

_TOP_KEYS = {
    "kind",
    "anchor",
    "com_height",
    "lane_half_width",
    "initial_frame",
    "breakpoints",
}


def load_road(path) -> RoadSurface:
    """Parse a road definition file (YAML, one document per road)."""
    from pathlib import Path

    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: road file must contain a mapping")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        kind = doc["kind"]
        half_width = float(doc["lane_half_width"])
        points = doc["breakpoints"]
    except KeyError as exc:
        raise ParseError(f"{path}: missing required field {exc}") from exc
    anchor = [float(v) for v in doc.get("anchor", (0.0, 0.0, 0.0))]
    com_height = float(doc.get("com_height", 0.592))
    if not isinstance(points, list) or len(points) < 2:
        raise ParseError(f"{path}: need at least 2 breakpoints")

    def column(key):
        out = []
        for i, row in enumerate(points):
            if not isinstance(row, dict) or key not in row:
                raise ParseError(f"{path}: breakpoint {i} missing field {key!r}")
            out.append(float(row[key]))
        return out

    s = column("s")
    if any(b <= a for a, b in zip(s[:-1], s[1:])):
        raise ParseError(f"{path}: breakpoint s values must be strictly increasing")

    name = path.stem
    if kind == "frenet":
        profile = CurvatureProfile.from_samples(s, column("kappa"))
        return FrenetRoad(profile, half_width, anchor, com_height, name)
    if kind == "tait-bryan":
        profile = AngleProfile.from_samples(s, column("a"), column("b"), column("c"))
        return TaitBryanRoad(profile, half_width, anchor, com_height, name)
    if kind == "darboux":
        profile = DarbouxProfile.from_samples(s, column("ks"), column("ky"), column("kn"))
        init = doc.get("initial_frame", {}) or {}
        angles = (
            float(init.get("a", 0.0)),
            float(init.get("b", 0.0)),
            float(init.get("c", 0.0)),
        )
        return DarbouxRoad(profile, half_width, anchor, com_height, angles, name)
    raise ParseError(f"{path}: unknown road kind {kind!r}")
