"""Dense NLP stack for the predictive controller.

Three layers, each usable on its own:

* :func:`dual_jacobian` (re-exported from :mod:`nonplanar.ad`) gives exact
  derivatives of the model maps;
* :func:`solve_qp`, a primal active-set solver for strictly convex QPs with
  dense equality constraints and variable bounds;
* :func:`solve_sqp`, a Gauss-Newton SQP driver for least-squares NLPs with
  equality constraints (multiple-shooting defects) and bounds, globalized
  by a backtracking line search on an l1 merit function with adaptive
  Levenberg damping.

Everything is deterministic: no randomized pivoting, no time-dependent
heuristics, bitwise-identical solutions for identical inputs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .ad import dual_jacobian, value
from .errors import InfeasibleQp

__all__ = [
    "NlpProblem",
    "SolveResult",
    "SolveStatus",
    "SqpSolver",
    "dual_jacobian",
    "solve_qp",
    "solve_sqp",
]


class SolveStatus(Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    LINE_SEARCH_FAILURE = "line_search_failure"


@dataclass
class SolveResult:
    status: SolveStatus
    x: np.ndarray
    iterations: int
    kkt_residual: float
    solve_time_ms: float

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED


@dataclass
class NlpProblem:
    """Least-squares NLP: minimize 0.5 ||r(x)||^2 subject to c(x) = 0, bounds.

    ``residuals`` and ``equality`` must be written with the supported AD
    primitives; pass ``residual_jacobian`` / ``equality_jacobian`` to
    override the generic dual-number differentiation with structured
    evaluators (the MPC transcription does, for speed).
    """

    n: int
    residuals: Callable[[Sequence], Sequence]
    equality: Optional[Callable[[Sequence], Sequence]] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    residual_jacobian: Optional[Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]] = None
    equality_jacobian: Optional[Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]] = None

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        lo = np.full(self.n, -np.inf) if self.lower is None else np.asarray(self.lower, float)
        hi = np.full(self.n, np.inf) if self.upper is None else np.asarray(self.upper, float)
        if np.any(lo > hi):
            raise ValueError("box constraints must satisfy lower <= upper")
        return lo, hi

    def eval_residuals(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if self.residual_jacobian is not None:
            return self.residual_jacobian(x)
        vals = np.asarray([value(v) for v in self.residuals(list(x))], float)
        return vals, dual_jacobian(self.residuals, x)

    def residual_values(self, x: np.ndarray) -> np.ndarray:
        return np.asarray([value(v) for v in self.residuals(list(x))], float)

    def eval_equality(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if self.equality is None and self.equality_jacobian is None:
            return np.zeros(0), np.zeros((0, self.n))
        if self.equality_jacobian is not None:
            return self.equality_jacobian(x)
        vals = np.asarray([value(v) for v in self.equality(list(x))], float)
        return vals, dual_jacobian(self.equality, x)

    def equality_values(self, x: np.ndarray) -> np.ndarray:
        if self.equality_jacobian is not None and self.equality is None:
            return self.equality_jacobian(x)[0]
        if self.equality is None:
            return np.zeros(0)
        return np.asarray([value(v) for v in self.equality(list(x))], float)


# -- quadratic programming ----------------------------------------------------


def _solve_eqp(H, g, A, b, fixed_mask, x_fixed):
    """Equality-constrained QP with some variables pinned at their bounds."""
    free = ~fixed_mask
    nf = int(free.sum())
    m = A.shape[0]
    Hff = H[np.ix_(free, free)]
    rhs_top = -g[free]
    if fixed_mask.any():
        rhs_top = rhs_top - H[np.ix_(free, fixed_mask)] @ x_fixed[fixed_mask]
    if m:
        Af = A[:, free]
        rhs_bot = b - (A[:, fixed_mask] @ x_fixed[fixed_mask] if fixed_mask.any() else 0.0)
        kkt = np.zeros((nf + m, nf + m))
        kkt[:nf, :nf] = Hff
        kkt[:nf, nf:] = Af.T
        kkt[nf:, :nf] = Af
        rhs = np.concatenate([rhs_top, rhs_bot])
    else:
        kkt = Hff
        rhs = rhs_top
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise InfeasibleQp(f"singular KKT system: {exc}") from exc
    x = x_fixed.copy()
    x[free] = sol[:nf]
    nu = sol[nf:] if m else np.zeros(0)
    return x, nu


def _feasible_start(x0, A, b, lo, hi):
    """Project a guess onto the equality manifold, respecting bounds.

    Clamps box-violating components to their bounds and re-solves the
    equality system in the remaining free components by least squares.
    """
    n = lo.size
    x = np.zeros(n) if x0 is None else np.asarray(x0, float).copy()
    x = np.clip(x, lo, hi)
    if A.shape[0] == 0:
        return x
    res = A @ x - b
    if np.max(np.abs(res)) <= 1e-10:
        return x
    clamped = (x <= lo) | (x >= hi)
    free = ~clamped
    if not free.any():
        raise InfeasibleQp("all variables clamped; equality system unsatisfiable")
    sol, *_ = np.linalg.lstsq(A[:, free], b - A[:, clamped] @ x[clamped], rcond=None)
    x[free] = sol
    # a component may now stick out of its box; one more clamp + re-solve pass
    if np.any((x < lo - 1e-12) | (x > hi + 1e-12)):
        x = np.clip(x, lo, hi)
        clamped = (x <= lo) | (x >= hi)
        free = ~clamped
        sol, *_ = np.linalg.lstsq(A[:, free], b - A[:, clamped] @ x[clamped], rcond=None)
        x[free] = sol
        x = np.clip(x, lo, hi)
    if np.max(np.abs(A @ x - b)) > 1e-8:
        raise InfeasibleQp("could not find a feasible start for the QP")
    return x


def solve_qp(
    H: np.ndarray,
    g: np.ndarray,
    A: Optional[np.ndarray] = None,
    b: Optional[np.ndarray] = None,
    lower: Optional[np.ndarray] = None,
    upper: Optional[np.ndarray] = None,
    x0: Optional[np.ndarray] = None,
    working_set: Optional[dict] = None,
    max_iter: int = 200,
    tol: float = 1e-10,
):
    """Minimize 0.5 x'Hx + g'x s.t. Ax = b, lower <= x <= upper.

    Primal active-set method on the variable bounds; equalities stay in the
    KKT system throughout.  H must be positive definite on the equality
    null space (the SQP driver guarantees this with Levenberg damping).

    Returns ``(x, eq_multipliers, bound_multipliers, working_set)`` where
    bound multipliers are signed (+ at lower, - at upper, 0 inactive).
    """
    H = np.asarray(H, float)
    g = np.asarray(g, float)
    n = g.size
    lo = np.full(n, -np.inf) if lower is None else np.asarray(lower, float)
    hi = np.full(n, np.inf) if upper is None else np.asarray(upper, float)
    A = np.zeros((0, n)) if A is None else np.asarray(A, float)
    b = np.zeros(0) if b is None else np.asarray(b, float)

    x = _feasible_start(x0, A, b, lo, hi)
    # working set: variable index -> -1 (at lower) / +1 (at upper)
    ws = dict(working_set) if working_set else {}
    ws = {
        i: side
        for i, side in ws.items()
        if (side < 0 and x[i] <= lo[i] + 1e-12) or (side > 0 and x[i] >= hi[i] - 1e-12)
    }

    nu = np.zeros(A.shape[0])
    for _ in range(max_iter):
        fixed = np.zeros(n, dtype=bool)
        x_fixed = x.copy()
        for i, side in ws.items():
            fixed[i] = True
            x_fixed[i] = lo[i] if side < 0 else hi[i]
        x_star, nu = _solve_eqp(H, g, A, b, fixed, x_fixed)

        step = x_star - x
        # ratio test against the bounds not in the working set
        alpha = 1.0
        blocker = None
        for i in range(n):
            if fixed[i] or abs(step[i]) <= tol:
                continue
            if step[i] > 0 and np.isfinite(hi[i]):
                a = (hi[i] - x[i]) / step[i]
                if a < alpha - tol:
                    alpha, blocker = a, (i, +1)
            elif step[i] < 0 and np.isfinite(lo[i]):
                a = (lo[i] - x[i]) / step[i]
                if a < alpha - tol:
                    alpha, blocker = a, (i, -1)
        if blocker is not None:
            x = x + max(alpha, 0.0) * step
            i, side = blocker
            x[i] = hi[i] if side > 0 else lo[i]
            ws[i] = side
            continue

        x = x_star
        # optimal for this working set; check bound multiplier signs
        grad = H @ x + g + (A.T @ nu if A.shape[0] else 0.0)
        worst_i, worst_val = None, -tol
        for i, side in ws.items():
            mult = grad[i] if side < 0 else -grad[i]
            if mult < worst_val:
                worst_i, worst_val = i, mult
        if worst_i is None:
            # signed Lagrangian gradient: >= 0 at lower bounds, <= 0 at upper
            mult = np.zeros(n)
            for i in ws:
                mult[i] = grad[i]
            return x, nu, mult, ws
        del ws[worst_i]
    raise InfeasibleQp("active-set iteration limit reached")


# -- sequential quadratic programming ------------------------------------------


@dataclass
class SqpOptions:
    max_iterations: int = 50
    kkt_tolerance: float = 1e-6
    damping: float = 0.0
    damping_max: float = 1e8
    merit_penalty: float = 10.0
    armijo: float = 1e-4
    min_step: float = 1e-10


class SqpSolver:
    """Gauss-Newton SQP with warm-startable workspaces.

    One instance per control loop: it remembers the QP working set and the
    damping/penalty state between solves.  Instances are not thread-safe;
    run concurrent loops with separate instances.
    """

    def __init__(self, options: SqpOptions = SqpOptions()):
        self.options = options
        self._working_set: dict = {}
        self._damping = options.damping
        self._penalty = options.merit_penalty

    def solve(self, problem: NlpProblem, x0) -> SolveResult:
        t_start = time.perf_counter()
        opts = self.options
        lo, hi = problem.bounds()
        x = np.clip(np.asarray(x0, float).copy(), lo, hi)

        r, Jr = problem.eval_residuals(x)
        c, Jc = problem.eval_equality(x)
        nu = np.zeros(c.size)
        status = SolveStatus.MAX_ITERATIONS
        iterations = 0
        kkt = self._kkt_residual(x, r, Jr, c, Jc, nu, lo, hi)
        if kkt <= opts.kkt_tolerance:
            status = SolveStatus.CONVERGED
        else:
            for iterations in range(1, opts.max_iterations + 1):
                grad = Jr.T @ r
                H = Jr.T @ Jr
                if self._damping > 0.0:
                    H = H + self._damping * np.eye(problem.n)
                try:
                    d, nu, _, ws = solve_qp(
                        H,
                        grad,
                        Jc if c.size else None,
                        -c if c.size else None,
                        lo - x,
                        hi - x,
                        x0=self._qp_start(x, c, Jc, lo, hi),
                        working_set=self._working_set,
                    )
                except InfeasibleQp:
                    self._damping = max(10.0 * max(self._damping, 1e-6), 1e-6)
                    status = SolveStatus.LINE_SEARCH_FAILURE
                    break
                self._working_set = ws

                if c.size:
                    self._penalty = max(
                        self._penalty, 2.0 * float(np.max(np.abs(nu))) if nu.size else 0.0
                    )
                merit0 = 0.5 * float(r @ r) + self._penalty * float(np.sum(np.abs(c)))
                # directional derivative of the merit along d
                ddir = float(grad @ d) - self._penalty * float(np.sum(np.abs(c)))

                alpha = 1.0
                accepted = False
                while alpha >= opts.min_step:
                    x_try = np.clip(x + alpha * d, lo, hi)
                    r_try = problem.residual_values(x_try)
                    c_try = problem.equality_values(x_try)
                    merit_try = 0.5 * float(r_try @ r_try) + self._penalty * float(
                        np.sum(np.abs(c_try))
                    )
                    if merit_try <= merit0 + opts.armijo * alpha * min(ddir, 0.0):
                        accepted = True
                        break
                    alpha *= 0.5
                if not accepted:
                    status = SolveStatus.LINE_SEARCH_FAILURE
                    break

                predicted = -(float(grad @ d) * alpha + 0.5 * alpha * alpha * float(d @ H @ d)) \
                    + self._penalty * (float(np.sum(np.abs(c))) - float(np.sum(np.abs(c + alpha * (Jc @ d if c.size else 0.0)))))
                actual = merit0 - merit_try
                self._update_damping(actual, predicted)

                x = x_try
                r, Jr = problem.eval_residuals(x)
                c, Jc = problem.eval_equality(x)
                kkt = self._kkt_residual(x, r, Jr, c, Jc, nu, lo, hi)
                if kkt <= opts.kkt_tolerance:
                    status = SolveStatus.CONVERGED
                    break

        ms = (time.perf_counter() - t_start) * 1e3
        return SolveResult(status, x, iterations, kkt, ms)

    def _qp_start(self, x, c, Jc, lo, hi):
        # zero step is box-feasible; equality feasibility is restored inside
        return np.zeros(x.size)

    def _update_damping(self, actual, predicted):
        if predicted <= 0.0:
            return
        ratio = actual / predicted
        if ratio > 0.75:
            self._damping = max(self._damping / 3.0, 0.0)
        elif ratio < 0.25:
            self._damping = min(max(self._damping * 5.0, 1e-8), self.options.damping_max)

    @staticmethod
    def _kkt_residual(x, r, Jr, c, Jc, nu, lo, hi, tol=1e-9):
        grad = Jr.T @ r
        if c.size and nu.size == c.size:
            grad = grad + Jc.T @ nu
        stat = np.abs(grad.copy())
        at_lo = x <= lo + tol
        at_hi = x >= hi - tol
        # at an active bound a correctly signed multiplier absorbs the gradient
        stat[at_lo] = np.abs(np.minimum(grad[at_lo], 0.0))
        stat[at_hi] = np.abs(np.maximum(grad[at_hi], 0.0))
        res = float(np.max(stat)) if stat.size else 0.0
        if c.size:
            res = max(res, float(np.max(np.abs(c))))
        return res


def solve_sqp(problem: NlpProblem, x0, options: SqpOptions = SqpOptions()) -> SolveResult:
    """One-shot Gauss-Newton SQP solve (fresh workspaces)."""
    return SqpSolver(options).solve(problem, x0)
