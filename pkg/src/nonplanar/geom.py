"""Surface-agnostic differential geometry of the constraint chart.

Everything here works on a local "jet" of the chart at one query point:
the first and second partial derivatives plus the unit normal.  From the
jet we build the two fundamental forms, the 2x2 pose Jacobian that couples
body-frame velocity to parameter rates, the shape-operator roll/pitch
rates, and the rate of the relative heading angle.

Vectors are plain 3-tuples and 2x2 matrices nested 2-tuples so that every
entry may be a float, a numpy batch array, or an AD dual; all formulas are
branch-free in the values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import math

from . import ad
from .ad import Scalar
from .errors import NonOrthogonalError, RegularityError

Vec3 = Tuple[Scalar, Scalar, Scalar]
Mat2 = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]

#: below this tangent cross-product norm a chart point is treated as singular
EPS_REGULAR = 1e-9


# -- small vector/matrix helpers -----------------------------------------


def dot3(u: Vec3, v: Vec3) -> Scalar:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross3(u: Vec3, v: Vec3) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def add3(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def smul3(a: Scalar, v: Vec3) -> Vec3:
    return (a * v[0], a * v[1], a * v[2])


def norm3(v: Vec3) -> Scalar:
    return ad.sqrt(dot3(v, v))


def mat2_vec(m: Mat2, v) -> Tuple[Scalar, Scalar]:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def mat2_det(m: Mat2) -> Scalar:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat2_inv(m: Mat2) -> Mat2:
    """Adjugate closed-form inverse; caller is responsible for regularity."""
    d = mat2_det(m)
    return ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))


def mat2_mul(a: Mat2, b: Mat2) -> Mat2:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def mat2_condition(m: Mat2) -> float:
    """2-norm condition number of a symmetric 2x2 matrix (diagnostics)."""
    a, b, c = float(m[0][0]), float(m[0][1]), float(m[1][1])
    mean = 0.5 * (a + c)
    rad = math.hypot(0.5 * (a - c), b)
    lo, hi = mean - rad, mean + rad
    if lo == 0.0:
        return math.inf
    return abs(hi / lo)


# -- domain types ----------------------------------------------------------


@dataclass(frozen=True)
class SurfaceJet:
    """Partial derivatives and unit normal of the chart at one (s, y).

    ``position`` is optional: it needs a quadrature along the centerline
    and is only relevant for global-frame output, never for the dynamics.
    """

    xs: Vec3
    xy: Vec3
    xss: Vec3
    xsy: Vec3
    xyy: Vec3
    normal: Vec3
    position: Optional[Vec3] = None


@dataclass(frozen=True)
class ParametricPose:
    """Curvilinear pose: arc parameter, lateral offset, relative heading."""

    s: float
    y: float
    heading: float

    def wrapped(self) -> "ParametricPose":
        return ParametricPose(self.s, self.y, wrap_angle(self.heading))


@dataclass(frozen=True)
class FundamentalForms:
    """First (metric) and second (curvature) fundamental forms."""

    first: Mat2
    second: Mat2


@dataclass(frozen=True)
class BodyVelocity:
    """Body-frame velocity of a tangent-contact rigid body.

    The normal component is identically zero; roll/pitch rates are induced
    by the surface shape operator and carried here once populated.
    """

    v1: Scalar
    v2: Scalar
    omega3: Scalar
    omega1: Scalar = 0.0
    omega2: Scalar = 0.0
    v3: float = 0.0


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    r = math.fmod(theta + math.pi, 2.0 * math.pi)
    if r <= 0.0:
        r += 2.0 * math.pi
    return r - math.pi


# -- jet construction -------------------------------------------------------


def jet_from_partials(
    xs: Vec3,
    xy: Vec3,
    xss: Vec3,
    xsy: Vec3,
    xyy: Vec3,
    position: Optional[Vec3] = None,
    eps_reg: float = EPS_REGULAR,
    check: bool = True,
) -> SurfaceJet:
    """Assemble a jet, deriving the unit normal from the tangent cross product.

    With ``check`` (float inputs only) a degenerate tangent pair raises
    :class:`RegularityError` instead of producing a garbage normal.
    """
    n = cross3(xs, xy)
    nn = norm3(n)
    if check and isinstance(nn, float) and nn < eps_reg:
        raise RegularityError(f"tangent cross product norm {nn:.3e} < {eps_reg:.1e}")
    return SurfaceJet(xs, xy, xss, xsy, xyy, smul3(1.0 / nn, n), position)


def regularity_norm(jet: SurfaceJet) -> Scalar:
    return norm3(cross3(jet.xs, jet.xy))


# -- operations -------------------------------------------------------------


def tangent_basis(jet: SurfaceJet, heading: Scalar) -> Tuple[Vec3, Vec3]:
    """Body tangent axes at the given relative heading.

    The forward axis sits at angle ``heading`` from the s-tangent, measured
    about the surface normal; the lateral axis completes the right-handed
    triad with the normal.
    """
    t1 = smul3(1.0 / norm3(jet.xs), jet.xs)
    t2 = cross3(jet.normal, t1)
    c, s = ad.cos(heading), ad.sin(heading)
    e1 = add3(smul3(c, t1), smul3(s, t2))
    e2 = add3(smul3(-s, t1), smul3(c, t2))
    return e1, e2


def extract_heading(jet: SurfaceJet, e1: Vec3, e2: Vec3) -> Scalar:
    """Relative heading via the two-argument arctangent (no pole at 90 deg)."""
    return ad.arctan2(-dot3(e2, jet.xs), dot3(e1, jet.xs))


def pose_jacobian(
    jet: SurfaceJet,
    heading: Scalar,
    orthogonal_tol: float = 1e-8,
    require_orthogonal: bool = False,
) -> Mat2:
    """2x2 matrix of dot products between chart tangents and body tangent axes.

    For orthogonal charts this is the closed form
    ``[[cos h * |xs|, -sin h * |xs|], [sin h * |xy|, cos h * |xy|]]``;
    non-orthogonal charts fall back to explicit body axes unless the caller
    insisted on orthogonality.
    """
    ns = norm3(jet.xs)
    ny = norm3(jet.xy)
    cross_dot = dot3(jet.xs, jet.xy)
    if isinstance(cross_dot, float):
        if abs(cross_dot) <= orthogonal_tol * float(ns * ny):
            c, s = ad.cos(heading), ad.sin(heading)
            return ((c * ns, -s * ns), (s * ny, c * ny))
        if require_orthogonal:
            raise NonOrthogonalError(f"tangents not orthogonal: xs.xy = {cross_dot:.3e}")
    e1, e2 = tangent_basis(jet, heading)
    return (
        (dot3(jet.xs, e1), dot3(jet.xs, e2)),
        (dot3(jet.xy, e1), dot3(jet.xy, e2)),
    )


def fundamental_forms(jet: SurfaceJet, eps_reg: float = EPS_REGULAR) -> FundamentalForms:
    """Metric and curvature forms from tangent/second-partial dot products."""
    first = (
        (dot3(jet.xs, jet.xs), dot3(jet.xs, jet.xy)),
        (dot3(jet.xs, jet.xy), dot3(jet.xy, jet.xy)),
    )
    d = mat2_det(first)
    if isinstance(d, float) and d < eps_reg * eps_reg:
        raise RegularityError(f"first fundamental form is singular (det {d:.3e})")
    off = dot3(jet.xsy, jet.normal)
    second = (
        (dot3(jet.xss, jet.normal), off),
        (off, dot3(jet.xyy, jet.normal)),
    )
    return FundamentalForms(first, second)


def parametric_velocity(
    forms: FundamentalForms, pose_jac: Mat2, v1: Scalar, v2: Scalar
) -> Tuple[Scalar, Scalar]:
    """Parameter rates (s_dot, y_dot) from body tangent velocity."""
    return mat2_vec(mat2_inv(forms.first), mat2_vec(pose_jac, (v1, v2)))


def surface_angular_velocity(
    forms: FundamentalForms, pose_jac: Mat2, v1: Scalar, v2: Scalar
) -> Tuple[Scalar, Scalar]:
    """Shape-operator roll and pitch rates (omega1, omega2).

    The chart forces ``(-omega2, omega1)`` to equal
    ``J^-1 II I^-1 J (v1, v2)`` for a body gliding in tangent contact.
    """
    rates = mat2_vec(mat2_inv(forms.first), mat2_vec(pose_jac, (v1, v2)))
    w = mat2_vec(mat2_inv(pose_jac), mat2_vec(forms.second, rates))
    return (w[1], -w[0])


def heading_rate(
    jet: SurfaceJet, omega3: Scalar, s_dot: Scalar, y_dot: Scalar
) -> Scalar:
    """Rate of the relative heading angle.

    Uses the cross-product form whose coefficients are independent of the
    body orientation, so it has no pole when the body axis aligns with the
    s-tangent.
    """
    den = dot3(jet.xs, jet.xs)
    cs = dot3(cross3(jet.xss, jet.xs), jet.normal) / den
    cy = dot3(cross3(jet.xsy, jet.xs), jet.normal) / den
    return omega3 + cs * s_dot + cy * y_dot
