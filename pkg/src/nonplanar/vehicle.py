"""Kinematic bicycle model on a road chart, plus the time integrators.

State is (speed, s, y, relative heading); inputs are traction acceleration
and steering angle.  The same derivative core serves three callers: the
simulator (floats), the predictive controller (numpy batches and AD duals)
and the planar baseline (closed-form flat-road reduction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from . import ad
from .ad import Scalar
from .dynamics import gravity_tangential, normal_force
from .errors import DomainError, SimulationDiverged
from .geom import (
    ParametricPose,
    fundamental_forms,
    heading_rate,
    mat2_inv,
    mat2_vec,
    wrap_angle,
)
from .surfaces import RoadSurface


@dataclass(frozen=True)
class VehicleParams:
    """Inertial and actuation limits of the test vehicle."""

    mass: float = 2303.0
    front_axle: float = 1.52
    rear_axle: float = 1.50
    accel_min: float = -10.0
    accel_max: float = 10.0
    steer_min: float = -0.5
    steer_max: float = 0.5
    com_height: float = 0.592
    gravity: float = 9.81

    def __post_init__(self):
        if self.front_axle + self.rear_axle <= 0:
            raise ValueError("wheelbase must be positive")
        if self.accel_min >= self.accel_max or self.steer_min >= self.steer_max:
            raise ValueError("input bounds must satisfy lower < upper")

    @property
    def wheelbase(self) -> float:
        return self.front_axle + self.rear_axle


@dataclass(frozen=True)
class VehicleState:
    speed: float
    pose: ParametricPose

    def as_array(self) -> np.ndarray:
        return np.array([self.speed, self.pose.s, self.pose.y, self.pose.heading])

    @classmethod
    def from_array(cls, z) -> "VehicleState":
        return cls(float(z[0]), ParametricPose(float(z[1]), float(z[2]), float(z[3])))


@dataclass(frozen=True)
class ControlInput:
    accel: float = 0.0
    steer: float = 0.0


def saturate(u: ControlInput, params: VehicleParams) -> ControlInput:
    return ControlInput(
        min(max(u.accel, params.accel_min), params.accel_max),
        min(max(u.steer, params.steer_min), params.steer_max),
    )


def slip_angle(steer: Scalar, params: VehicleParams) -> Scalar:
    """Velocity angle of the single-track model with front steering only."""
    if isinstance(steer, float) and not abs(steer) < 0.5 * math.pi:
        raise DomainError(f"steering angle {steer:.3f} outside (-pi/2, pi/2)")
    ratio = params.rear_axle / params.wheelbase
    return ad.arctan(ratio * ad.tan(steer))


def kinematic_rates_core(
    road: RoadSurface,
    speed: Scalar,
    s: Scalar,
    y: Scalar,
    heading: Scalar,
    accel: Scalar,
    steer: Scalar,
    params: VehicleParams,
    check_domain: bool = False,
):
    """Time derivatives (dv, ds, dy, dheading) of the nonplanar model.

    Scalar-generic: floats, numpy batches and AD duals all work.  The pose
    Jacobian uses the orthogonal-tangent closed form, valid for every
    centerline chart.
    """
    jet = road.jet(s, y, check_domain=check_domain)
    beta = slip_angle(steer, params)
    cb, sb = ad.cos(beta), ad.sin(beta)
    ch, sh = ad.cos(heading), ad.sin(heading)
    xs, xy = jet.xs, jet.xy
    ns = ad.sqrt(xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2])
    ny = ad.sqrt(xy[0] * xy[0] + xy[1] * xy[1] + xy[2] * xy[2])
    pose_jac = ((ch * ns, -sh * ns), (sh * ny, ch * ny))

    forms = fundamental_forms(jet)
    v1, v2 = speed * cb, speed * sb
    s_dot, y_dot = mat2_vec(mat2_inv(forms.first), mat2_vec(pose_jac, (v1, v2)))

    omega3 = speed * cb * ad.tan(steer) / params.wheelbase
    h_dot = heading_rate(jet, omega3, s_dot, y_dot)
    v_dot = accel + gravity_tangential(jet, pose_jac, beta, params.gravity)
    return v_dot, s_dot, y_dot, h_dot


def kinematic_rates(
    road: RoadSurface, state: VehicleState, u: ControlInput, params: VehicleParams
) -> Tuple[float, float, float, float]:
    """Typed wrapper over the derivative core with domain checking."""
    return kinematic_rates_core(
        road,
        state.speed,
        state.pose.s,
        state.pose.y,
        state.pose.heading,
        u.accel,
        u.steer,
        params,
        check_domain=True,
    )


def planar_rates_core(
    curvature: Callable[[Scalar], Scalar],
    speed: Scalar,
    s: Scalar,
    y: Scalar,
    heading: Scalar,
    accel: Scalar,
    steer: Scalar,
    params: VehicleParams,
):
    """Closed-form flat-road reduction driven by a curvature function.

    No gravity and no out-of-plane curvature: this is the planar baseline
    model the comparison controller predicts with.
    """
    kappa = curvature(s)
    beta = slip_angle(steer, params)
    cb = ad.cos(beta)
    s_dot = speed * ad.cos(heading + beta) / (1.0 - kappa * y)
    y_dot = speed * ad.sin(heading + beta)
    h_dot = speed * cb * ad.tan(steer) / params.wheelbase - kappa * s_dot
    return 0.0 * speed + accel, s_dot, y_dot, h_dot


def contact_normal_force(
    road: RoadSurface, state: VehicleState, u: ControlInput, params: VehicleParams
) -> float:
    """Total normal force at the current state and steering."""
    jet = road.jet(state.pose.s, state.pose.y, check_domain=False)
    beta = slip_angle(u.steer, params)
    ch, sh = math.cos(state.pose.heading), math.sin(state.pose.heading)
    ns = math.sqrt(sum(c * c for c in jet.xs))
    ny = math.sqrt(sum(c * c for c in jet.xy))
    pose_jac = ((ch * ns, -sh * ns), (sh * ny, ch * ny))
    forms = fundamental_forms(jet)
    return normal_force(jet, forms, pose_jac, beta, state.speed, params.mass, params.gravity)


# -- integrators ---------------------------------------------------------------


def rk4_step(
    f: Callable[[VehicleState, ControlInput], Sequence[float]],
    state: VehicleState,
    u: ControlInput,
    dt: float,
) -> VehicleState:
    """Classical fourth-order step with the input held constant."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    z = state.as_array()

    def fz(zz):
        return np.asarray(f(VehicleState.from_array(zz), u), dtype=float)

    k1 = fz(z)
    k2 = fz(z + 0.5 * dt * k1)
    k3 = fz(z + 0.5 * dt * k2)
    k4 = fz(z + dt * k3)
    return VehicleState.from_array(z + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    z0: np.ndarray,
    t_span: float,
    atol: float = 1e-9,
    rtol: float = 1e-8,
    max_steps: int = 100_000,
) -> np.ndarray:
    """Dormand-Prince 5(4) embedded pair with standard step control.

    Propagates the 5th-order solution; the difference to the embedded
    4th-order one drives the step size.  Autonomous right-hand side.
    """
    z = np.asarray(z0, dtype=float).copy()
    t = 0.0
    h = min(t_span, 1e-3)
    steps = 0
    while t < t_span:
        if steps > max_steps:
            raise RuntimeError("adaptive integrator exceeded its step budget")
        h = min(h, t_span - t)
        k = [f(z)]
        for i in range(1, 7):
            zi = z + h * sum(a * ki for a, ki in zip(_DP_A[i], k))
            k.append(f(zi))
        z5 = z + h * sum(b * ki for b, ki in zip(_DP_B5, k))
        z4 = z + h * sum(b * ki for b, ki in zip(_DP_B4, k))
        scale = atol + rtol * np.maximum(np.abs(z), np.abs(z5))
        err = math.sqrt(float(np.mean(((z5 - z4) / scale) ** 2)))
        if err <= 1.0 or h <= 1e-12:
            z = z5
            t += h
        factor = 0.9 * (err ** -0.2) if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        steps += 1
    return z


# -- simulation -----------------------------------------------------------------


@dataclass
class LogRow:
    t: float
    state: VehicleState
    u: ControlInput
    slip: float
    normal: float
    position: np.ndarray
    v_ref_adjusted: float
    solve_ms: float
    solver_status: str
    iterations: int


@dataclass
class SimulationLog:
    rows: list

    def column(self, getter) -> np.ndarray:
        return np.asarray([getter(r) for r in self.rows])


def simulate(
    road: RoadSurface,
    initial: VehicleState,
    controller,
    duration: float,
    params: VehicleParams = VehicleParams(),
    dt: float = 0.05,
    atol: float = 1e-9,
    rtol: float = 1e-8,
) -> SimulationLog:
    """Closed-loop run: controller at a fixed period, adaptive RK between ticks.

    The controller object must expose ``step(road, state, t) -> (input,
    diagnostics)``; inputs are saturated before reaching the model.  Raises
    :class:`SimulationDiverged` if the state leaves the road or goes
    non-finite.
    """
    state = initial
    rows = []
    n_ticks = int(round(duration / dt))
    for step_idx in range(n_ticks):
        t = step_idx * dt
        z = state.as_array()
        if not np.all(np.isfinite(z)):
            raise SimulationDiverged("state became non-finite", step_idx)
        if not road.contains(state.pose.s, state.pose.y):
            raise SimulationDiverged(
                f"state left the road domain at s={state.pose.s:.2f}, y={state.pose.y:.2f}",
                step_idx,
            )
        u, diag = controller.step(road, state, t)
        u = saturate(u, params)
        beta = slip_angle(u.steer, params)
        rows.append(
            LogRow(
                t=t,
                state=state,
                u=u,
                slip=beta,
                normal=contact_normal_force(road, state, u, params),
                position=road.surface_position(state.pose.s, state.pose.y),
                v_ref_adjusted=diag.get("v_ref_adjusted", math.nan),
                solve_ms=diag.get("solve_ms", 0.0),
                solver_status=diag.get("status", ""),
                iterations=diag.get("iterations", 0),
            )
        )

        def rhs(zz):
            return np.asarray(
                kinematic_rates_core(
                    road, zz[0], zz[1], zz[2], zz[3], u.accel, u.steer, params
                ),
                dtype=float,
            )

        z_next = integrate_adaptive(rhs, z, dt, atol=atol, rtol=rtol)
        state = VehicleState(
            float(z_next[0]),
            ParametricPose(float(z_next[1]), float(z_next[2]), wrap_angle(float(z_next[3]))),
        )
    return SimulationLog(rows)


class ConstantController:
    """Feeds a fixed input every tick; handy for open-loop tests."""

    def __init__(self, u: ControlInput = ControlInput()):
        self.u = u

    def step(self, road, state, t):
        return self.u, {"status": "constant", "solve_ms": 0.0}
