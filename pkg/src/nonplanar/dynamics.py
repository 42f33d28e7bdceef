"""Constrained rigid-body force relations on the contact surface.

These are the force-level consequences of tangent contact: the dynamic
equations given a net body wrench, the tangential gravity component seen
by the velocity direction, the total contact normal force, and the normal
constraint reaction.  Everything is a pure function of a chart jet plus
body state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from . import ad
from .ad import Scalar
from .geom import (
    BodyVelocity,
    FundamentalForms,
    Mat2,
    SurfaceJet,
    mat2_inv,
    mat2_vec,
    surface_angular_velocity,
)

GRAVITY = 9.81  # m/s^2, configurable per scenario


@dataclass(frozen=True)
class RigidBodyParams:
    """Mass, diagonal body-frame inertia and gravity magnitude."""

    mass: float
    inertia1: float
    inertia2: float
    inertia3: float
    gravity: float = GRAVITY

    def __post_init__(self):
        if self.mass <= 0 or min(self.inertia1, self.inertia2, self.inertia3) <= 0:
            raise ValueError("mass and inertias must be positive")
        if self.gravity < 0:
            raise ValueError("gravity magnitude must be non-negative")


@dataclass(frozen=True)
class NetWrench:
    """Net body-frame force and torque components."""

    f1: float = 0.0
    f2: float = 0.0
    f3: float = 0.0
    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0


def constrained_dynamic_rates(
    params: RigidBodyParams, velocity: BodyVelocity, wrench: NetWrench
) -> Tuple[Scalar, Scalar, Scalar]:
    """In-plane accelerations and yaw acceleration under a net wrench.

    The out-of-plane velocity is constrained to zero, so only v1, v2 and
    the yaw rate evolve dynamically; roll/pitch rates enter through the
    gyroscopic yaw term.
    """
    dv1 = velocity.omega3 * velocity.v2 + wrench.f1 / params.mass
    dv2 = -velocity.omega3 * velocity.v1 + wrench.f2 / params.mass
    dw3 = (
        (params.inertia1 - params.inertia2) * velocity.omega1 * velocity.omega2
        + wrench.k3
    ) / params.inertia3
    return dv1, dv2, dw3


def gravity_tangential(
    jet: SurfaceJet, pose_jac: Mat2, slip: Scalar, gravity: float = GRAVITY
) -> Scalar:
    """Component of gravity along the velocity direction set by the slip angle.

    Equals -g * (up . (e1 cos(slip) + e2 sin(slip))) but is expressed with
    chart tangents only, so no explicit body basis is needed.
    """
    xs, xy = jet.xs, jet.xy
    row = (xs[2] / (xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2]),
           xy[2] / (xy[0] * xy[0] + xy[1] * xy[1] + xy[2] * xy[2]))
    jc = mat2_vec(pose_jac, (ad.cos(slip), ad.sin(slip)))
    return -gravity * (row[0] * jc[0] + row[1] * jc[1])


def _normal_curvature_along(
    forms: FundamentalForms, pose_jac: Mat2, c: Scalar, s: Scalar
) -> Scalar:
    """Quadratic form (c,s) J^-1 II I^-1 J (c,s): path curvature toward normal."""
    rates = mat2_vec(mat2_inv(forms.first), mat2_vec(pose_jac, (c, s)))
    w = mat2_vec(mat2_inv(pose_jac), mat2_vec(forms.second, rates))
    return c * w[0] + s * w[1]


def normal_force(
    jet: SurfaceJet,
    forms: FundamentalForms,
    pose_jac: Mat2,
    slip: Scalar,
    speed: Scalar,
    mass: float,
    gravity: float = GRAVITY,
) -> Scalar:
    """Total contact normal force: centripetal surface term plus gravity."""
    c, s = ad.cos(slip), ad.sin(slip)
    quad = _normal_curvature_along(forms, pose_jac, c, s)
    return mass * speed * speed * quad + jet.normal[2] * mass * gravity


def constraint_reaction(
    jet: SurfaceJet,
    forms: FundamentalForms,
    pose_jac: Mat2,
    v1: Scalar,
    v2: Scalar,
    mass: float,
) -> Scalar:
    """Normal constraint force holding the body on the surface.

    From the zero normal-acceleration constraint: f3 = m (w1 v2 - w2 v1)
    with the shape-operator roll/pitch rates.
    """
    w1, w2 = surface_angular_velocity(forms, pose_jac, v1, v2)
    return mass * (w1 * v2 - w2 * v1)
