"""Deterministic switching mirror descent.

``adaptive_md`` uses adaptive stepsizes ``eps / M_k^2`` with ``M_k`` the dual
norm of the subgradient in use, ``general_md`` normalizes productive steps
for objectives that are not Lipschitz, and ``restarted_md`` halves the
squared radius at every stage for strongly convex problems.  A step is
productive when ``g(x^k) <= eps`` (exact float comparison).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _qp, bounds
from ._accum import CompensatedSum
from .problems import lipschitz_max
from .prox import BallIntersection, EuclideanSetup, ShiftedSetup, UnsupportedSetupError
from .reports import (
    DualCertificate,
    Guarantee,
    RunTrace,
    SolveReport,
    StageRecord,
    TraceRecord,
)

__all__ = [
    "SolverConfig",
    "adaptive_md",
    "general_md",
    "restarted_md",
    "dual_value",
    "default_guard",
]

DEFAULT_GUARD = 10**6
# relative slack absorbing rounding when the stopping rule holds with equality
STOP_RTOL = 1e-12


@dataclass
class SolverConfig:
    """Parameters of the deterministic solvers.

    ``max_iterations_guard`` defaults to ten times the theoretical bound (or
    ``10**6`` when no bound is computable) and may not be set below the
    bound.  ``audit`` checks the one-step mirror-descent inequality at the
    known optimum on every step.  ``mu``, ``omega``, ``x0`` and ``r0_sq``
    are used by ``restarted_md`` and fall back to the instance values;
    ``grad_norm_at_opt`` and ``smoothness`` feed the accuracy estimate of
    ``general_md``.
    """

    epsilon: float
    max_iterations_guard: Optional[int] = None
    record_trace: bool = False
    record_points: bool = False
    recover_dual: bool = True
    audit: bool = False
    theta0_sq: Optional[float] = None
    mu: Optional[float] = None
    omega: Optional[float] = None
    x0: Optional[np.ndarray] = None
    r0_sq: Optional[float] = None
    grad_norm_at_opt: Optional[float] = None
    smoothness: Optional[float] = None
    dual_grid_resolution: Optional[float] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


def default_guard(bound):
    return DEFAULT_GUARD if bound is None else max(1, 10 * math.ceil(bound))


def _resolve_guard(guard, bound):
    if guard is None:
        return default_guard(bound)
    guard = int(guard)
    if bound is not None and guard < bound:
        raise ValueError(f"max_iterations_guard {guard} is below the theoretical bound {bound}")
    return guard


@dataclass
class _Run:
    """Internal result of one switching run."""

    x_out: Optional[np.ndarray]
    iterations: int
    productive: int
    h_productive: float
    lam_h: np.ndarray
    status: str
    trace: Optional[RunTrace]
    audit_max: Optional[float]


def _step_violation(setup, fn, x, x_next, grad, h, u):
    lhs = h * (fn.value(x) - fn.value(u))
    rhs = 0.5 * h**2 * setup.dual_norm(grad) ** 2 + setup.bregman(x, u) - setup.bregman(x_next, u)
    return lhs - rhs


def _switching_run(instance, setup, theta0_sq, eps, guard, *, normalized=False,
                   record_trace=False, record_points=False, audit_point=None):
    """Shared loop of the adaptive (``normalized=False``) and general methods.

    The adaptive method stops once ``sum 1/M_j^2 >= 2 theta0_sq / eps^2`` and
    returns the ``h``-weighted mean of productive iterates; the general one
    stops once ``|I| + sum_J 1/M_j^2`` reaches the same threshold and returns
    the productive iterate with the smallest objective value.
    """
    f, con = instance.objective, instance.constraint
    threshold = 2.0 * theta0_sq / eps**2
    x = setup.prox_center()
    trace = RunTrace() if record_trace else None
    lam_h = np.zeros(con.m)
    wsum = np.zeros(setup.dim)
    hsum = CompensatedSum()
    stop_sum = CompensatedSum()
    best_x, best_f = None, math.inf
    productive = 0
    audit_max = -math.inf if audit_point is not None else None
    k = 0
    while True:
        if k >= guard:
            status = "guard_exhausted"
            break
        gval, idx = con.eval_with_active(x)
        fval = f.value(x) if (record_trace or normalized or gval <= eps) else math.nan
        if gval <= eps:
            fn = f
            grad = f.subgrad(x)
            M = setup.dual_norm(grad)
            if M == 0.0:
                # x minimizes f over X and is eps-feasible
                if trace is not None:
                    trace.records.append(TraceRecord(k, "productive", 0.0, 0.0, fval, gval, None))
                    if record_points:
                        trace.points.append(x.copy())
                return _Run(x.copy(), k + 1, productive + 1, 0.0, np.zeros(con.m),
                            "zero_subgradient", trace, audit_max)
            h = eps / M if normalized else eps / M**2
            productive += 1
            if normalized:
                if fval < best_f:
                    best_f, best_x = fval, x.copy()
                stop_sum.add(1.0)
            else:
                wsum += h * x
                stop_sum.add(1.0 / M**2)
            hsum.add(h)
            kind, active = "productive", None
        else:
            fn = con.parts[idx]
            grad = fn.subgrad(x)
            M = setup.dual_norm(grad)
            if M == 0.0:
                raise ValueError("zero constraint subgradient at an infeasible point: "
                                 "the constraint has no feasible point")
            h = eps / M**2
            lam_h[idx] += h
            stop_sum.add(1.0 / M**2)
            kind, active = "nonproductive", idx
        if trace is not None:
            trace.records.append(TraceRecord(k, kind, M, h, fval, gval, active))
            if record_points:
                trace.points.append(x.copy())
        x_next = setup.mirror_step(x, h * grad)
        if audit_point is not None:
            audit_max = max(audit_max, _step_violation(setup, fn, x, x_next, grad, h, audit_point))
        x = x_next
        k += 1
        if stop_sum.value >= threshold * (1.0 - STOP_RTOL):
            status = "converged"
            break
    if productive == 0:
        x_out = None
        status = "no_productive_steps"
    elif normalized:
        x_out = best_x
    else:
        x_out = wsum / hsum.value
    return _Run(x_out, k, productive, hsum.value, lam_h, status, trace, audit_max)


def _audit_point(instance, config):
    if not config.audit:
        return None
    if instance.known_optimum is None:
        raise ValueError("the step audit needs a known optimum")
    return instance.known_optimum.x_star


def _certificate(instance, run, theta0_sq, config):
    if run.h_productive > 0:
        lam = run.lam_h / run.h_productive
    else:
        lam = np.zeros_like(run.lam_h)
    try:
        phi = dual_value(instance, lam, grid_resolution=config.dual_grid_resolution)
    except UnsupportedSetupError:
        phi = None
    certified = theta0_sq >= instance.setup.max_d
    return DualCertificate(lam, phi, certified)


def _finish(instance, run, eps, bound, guarantee_ok, dual=None):
    if run.x_out is None:
        f_bar = g_bar = None
    else:
        f_bar, g_bar = instance.f(run.x_out), instance.g(run.x_out)
    ok = guarantee_ok and run.status in ("converged", "zero_subgradient") and g_bar is not None
    return SolveReport(
        x_bar=run.x_out,
        f_bar=f_bar,
        g_bar=g_bar,
        iterations=run.iterations,
        productive_count=run.productive,
        epsilon=eps,
        theoretical_bound=bound,
        dual=dual,
        guarantee=Guarantee.EPS_SOLUTION if ok and g_bar <= eps else Guarantee.NONE,
        status=run.status,
        trace=run.trace,
        audit_max_violation=run.audit_max,
    )


def adaptive_md(instance, config):
    """Switching mirror descent with adaptive stepsizes.

    Parameters
    ----------
    instance : ProblemInstance
        ``theta0_sq`` (or ``config.theta0_sq``) must satisfy
        ``d(x*) <= theta0_sq``; this is the caller's responsibility.
    config : SolverConfig

    Returns
    -------
    SolveReport
        ``x_bar`` is the stepsize-weighted mean of productive iterates.
        With ``recover_dual`` the multipliers ``lambda_i`` are the
        non-productive stepsizes spent on part ``i`` divided by the total
        productive stepsize.
    """
    eps = config.epsilon
    theta0_sq = instance.theta0_sq if config.theta0_sq is None else float(config.theta0_sq)
    M = lipschitz_max(instance)
    bound = None if M is None else bounds.adaptive_md_bound(M, theta0_sq, eps)
    guard = _resolve_guard(config.max_iterations_guard, bound)
    run = _switching_run(instance, instance.setup, theta0_sq, eps, guard,
                         record_trace=config.record_trace, record_points=config.record_points,
                         audit_point=_audit_point(instance, config))
    dual = None
    if config.recover_dual and run.x_out is not None:
        dual = _certificate(instance, run, theta0_sq, config)
    return _finish(instance, run, eps, bound, True, dual)


def general_md(instance, config):
    """Switching mirror descent for objectives that need not be Lipschitz.

    Productive steps use ``h = eps / ||grad f||_*``; the output is the
    productive iterate with the smallest objective.  When the objective is
    smooth (``smoothness`` known) and ``||grad f(x*)||_*`` is available from
    the config or the known optimum, the report carries the objective
    accuracy ``eps_tilde`` and guarantee ``eps_tilde_solution``.
    """
    eps = config.epsilon
    theta0_sq = instance.theta0_sq if config.theta0_sq is None else float(config.theta0_sq)
    mg = instance.constraint.lipschitz
    bound = None if mg is None else bounds.general_md_bound(mg, theta0_sq, eps)
    guard = _resolve_guard(config.max_iterations_guard, bound)
    run = _switching_run(instance, instance.setup, theta0_sq, eps, guard, normalized=True,
                         record_trace=config.record_trace, record_points=config.record_points,
                         audit_point=None)
    report = _finish(instance, run, eps, bound, False)
    if run.x_out is None or run.status not in ("converged", "zero_subgradient"):
        return report
    if run.status == "zero_subgradient":
        report.guarantee = Guarantee.EPS_SOLUTION
        return report
    eps_tilde = _eps_tilde(instance, config)
    if eps_tilde is not None and report.g_bar <= eps:
        report.eps_tilde = eps_tilde
        report.guarantee = Guarantee.EPS_TILDE_SOLUTION
    return report


def _eps_tilde(instance, config):
    L = config.smoothness if config.smoothness is not None else instance.objective.smoothness
    gn = config.grad_norm_at_opt
    if gn is None and instance.known_optimum is not None:
        gn = instance.setup.dual_norm(instance.objective.subgrad(instance.known_optimum.x_star))
    if L is None or gn is None:
        return None
    return bounds.smooth_eps_tilde(config.epsilon, gn, L)


def _restart_params(instance, config):
    mu = config.mu if config.mu is not None else instance.mu
    if not mu or mu <= 0:
        raise ValueError("restarts need a strong convexity parameter mu > 0")
    x0 = config.x0 if config.x0 is not None else instance.x0
    r0_sq = config.r0_sq if config.r0_sq is not None else instance.r0_sq
    if x0 is None or r0_sq is None:
        raise ValueError("restarts need a starting point x0 and r0_sq")
    base = instance.setup
    if not isinstance(base, EuclideanSetup):
        raise UnsupportedSetupError("restarts are supported for the Euclidean setup only")
    omega = config.omega if config.omega is not None else base.omega
    return float(mu), base.check(x0, "x0"), float(r0_sq), float(omega), base


def _dist_sq(instance, x):
    if instance.known_optimum is None or x is None:
        return None
    d = x - instance.known_optimum.x_star
    return float(d @ d)


def restarted_md(instance, config):
    """Restarted switching mirror descent for strongly convex problems.

    Stage ``p`` runs :func:`adaptive_md` with accuracy ``mu R_p^2 / 2`` and
    the prox-function ``d((x - x_{p-1}) / R_{p-1})`` with ``theta0_sq =
    omega / 2``, where ``R_p^2 = R_0^2 2^-p``.  When the optimum is known,
    ``||x_p - x*||^2`` is recorded for every stage.  The dual certificate
    of the last stage is attached when requested.
    """
    eps = config.epsilon
    mu, x_prev, r0_sq, omega, base = _restart_params(instance, config)
    M = lipschitz_max(instance)
    bound = None if M is None else bounds.restarted_md_bound(M, omega, mu, r0_sq, eps)
    guard = _resolve_guard(config.max_iterations_guard, bound)
    audit_point = _audit_point(instance, config)
    trace = RunTrace() if config.record_trace else None
    total, productive = 0, 0
    stages = []
    audit_max = None
    last = None
    status = "converged"
    for p, r_prev_sq, r_sq, eps_p in bounds.restart_schedule(mu, r0_sq, eps):
        setup = ShiftedSetup(base, x_prev, math.sqrt(r_prev_sq))
        run = _switching_run(instance, setup, omega / 2.0, eps_p, guard - total,
                             record_trace=config.record_trace, record_points=config.record_points,
                             audit_point=audit_point)
        if trace is not None:
            trace.extend(run.trace, total)
        total += run.iterations
        productive += run.productive
        if run.audit_max is not None:
            audit_max = run.audit_max if audit_max is None else max(audit_max, run.audit_max)
        if run.x_out is None or run.status not in ("converged", "zero_subgradient"):
            status = run.status
            stages.append(StageRecord(p, eps_p, r_prev_sq, r_sq, run.iterations, None))
            last = run
            break
        x_prev = run.x_out
        stages.append(StageRecord(p, eps_p, r_prev_sq, r_sq, run.iterations, _dist_sq(instance, x_prev)))
        last = run
    final = _Run(x_prev if status == "converged" else None, total, productive,
                 last.h_productive, last.lam_h, status, trace, audit_max)
    dual = None
    if config.recover_dual and final.x_out is not None:
        dual = _certificate(instance, last, math.inf, config)
        dual.certified = False
    report = _finish(instance, final, eps, bound, True, dual)
    report.stages = stages
    return report


def _lagrangian_quad(instance, lam):
    f = instance.objective
    if f.quad is None or any(p.quad is None for p in instance.constraint.parts):
        return None
    Q, q, c0 = (np.array(f.quad[0]), np.array(f.quad[1]), f.quad[2])
    for li, part in zip(lam, instance.constraint.parts):
        Qi, qi, ci = part.quad
        Q = Q + li * Qi
        q = q + li * qi
        c0 = c0 + li * ci
    return Q, q, c0


def dual_value(instance, lam, grid_resolution=None):
    """Dual function ``phi(lam) = min_X f(x) + sum_i lam_i g_i(x)``.

    Exact when ``f`` and every ``g_i`` are quadratic (including affine) and
    the set is a box or simplex: the convex quadratic Lagrangian is
    minimized by active-set enumeration over the set's faces.  Otherwise a
    grid scan at ``grid_resolution`` is used when given.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (instance.constraint.m,):
        raise ValueError(f"lambda must have length {instance.constraint.m}")
    if np.any(lam < 0):
        raise ValueError("multipliers must be nonnegative")
    s = instance.setup.set
    quad = _lagrangian_quad(instance, lam)
    if quad is not None and not isinstance(s, BallIntersection):
        A_ub, b_ub, A_eq, b_eq = s.linear_constraints()
        val, _ = _qp.minimize_quadratic(*quad, A_ub, b_ub, A_eq, b_eq)
        return val
    if grid_resolution is not None:
        from .verify import grid_minimize

        def lagrangian(x):
            return instance.f(x) + sum(li * p.value(x) for li, p in zip(lam, instance.constraint.parts))

        return grid_minimize(lagrangian, s, grid_resolution)[0]
    raise UnsupportedSetupError("no exact dual evaluation for this instance; pass grid_resolution")
