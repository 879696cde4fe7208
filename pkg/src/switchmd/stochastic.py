"""Stochastic switching mirror descent.

The switching test ``g(x^k) <= eps`` uses the exact constraint value; the
steps use stochastic subgradients from the instance's oracles.  Every run
owns a generator built from ``config.seed`` so identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bounds
from ._accum import CompensatedSum
from .problems import make_rng, stochastic_bound_max
from .prox import BallIntersection, EuclideanSetup, ShiftedSetup, UnsupportedSetupError
from .reports import RunTrace, StageRecord, StochasticReport, TraceRecord

# relative slack absorbing rounding when the stopping rule holds with equality
STOP_RTOL = 1e-12

__all__ = [
    "StochasticRunConfig",
    "adaptive_smd",
    "fixed_smd",
    "restarted_smd_expectation",
    "restarted_smd_deviation",
]


@dataclass
class StochasticRunConfig:
    """Parameters of the stochastic solvers.

    ``sigma`` is the confidence level of the large-deviation methods and
    must lie in ``(0, 0.5)``.  ``fixed_N`` overrides the iteration count of
    :func:`fixed_smd`.  ``theta0_sq`` must bound ``V[x](y)`` over all pairs
    of the set; it defaults to the setup's certified value.
    """

    epsilon: float
    sigma: Optional[float] = None
    seed: int = 0
    fixed_N: Optional[int] = None
    theta0_sq: Optional[float] = None
    record_trace: bool = False
    mu: Optional[float] = None
    omega: Optional[float] = None
    x0: Optional[np.ndarray] = None
    r0_sq: Optional[float] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.sigma is not None:
            bounds.check_sigma(self.sigma)
        if self.fixed_N is not None and int(self.fixed_N) < 1:
            raise ValueError("fixed_N must be a positive integer")


def _require_oracles(instance):
    if instance.stoch_objective is None or instance.stoch_constraint is None:
        raise ValueError("stochastic solvers need stochastic objective and constraint oracles")
    return stochastic_bound_max(instance)


def _pair_theta0_sq(instance, config):
    """``theta0_sq`` bounding ``V[x](y)`` for all ``x, y`` in the set."""
    sup_v = instance.setup.max_bregman
    if config.theta0_sq is not None:
        t = float(config.theta0_sq)
        if math.isfinite(sup_v) and t < sup_v * (1 - 1e-12):
            raise ValueError(f"theta0_sq {t} does not bound the Bregman divergence (sup {sup_v})")
        return t
    if not math.isfinite(sup_v):
        raise UnsupportedSetupError("the Bregman divergence is unbounded on this set; "
                                    "pass theta0_sq explicitly")
    return float(sup_v)


def _sample(instance, x, eps, rng):
    """One switching decision with its stochastic subgradient."""
    gval, idx = instance.constraint.eval_with_active(x)
    if gval <= eps:
        return True, gval, None, instance.stoch_objective.sample(x, rng)
    return False, gval, idx, instance.stoch_constraint.sample(x, rng)


def _record(trace, instance, k, productive, M, h, gval, idx, x):
    if trace is not None:
        trace.records.append(TraceRecord(k, "productive" if productive else "nonproductive",
                                         M, h, instance.f(x), gval, None if productive else idx))


def _finish(instance, x_bar, k, n_prod, eps, bound, seed, trace):
    report = StochasticReport(x_bar, k, n_prod, eps, theoretical_bound=bound, seed=seed, trace=trace)
    if x_bar is not None:
        report.f_bar, report.g_bar = instance.f(x_bar), instance.g(x_bar)
    return report


def adaptive_smd(instance, config):
    """Stochastic switching mirror descent with adaptive stepsizes.

    ``h_k = Theta0 / sqrt(sum_{i<=k} M_i^2)`` with ``M_i`` the realized dual
    norms; stop once ``k >= (2 Theta0 / eps) sqrt(sum_{i<k} M_i^2)``.  The
    output is the plain mean of productive iterates (``None`` when there
    are none).  While all realized norms are zero the iterate does not move
    (``h_k = 0``).
    """
    eps = config.epsilon
    M = _require_oracles(instance)
    theta0_sq = _pair_theta0_sq(instance, config)
    theta0 = math.sqrt(theta0_sq)
    bound = bounds.adaptive_smd_bound(M, theta0_sq, eps)
    setup = instance.setup
    rng = make_rng(config.seed)
    trace = RunTrace() if config.record_trace else None
    x = setup.prox_center()
    sq_sum = CompensatedSum()
    xsum = np.zeros(setup.dim)
    n_prod = 0
    k = 0
    while True:
        productive, gval, idx, grad = _sample(instance, x, eps, rng)
        Mk = setup.dual_norm(grad)
        sq_sum.add(Mk * Mk)
        s = sq_sum.value
        h = theta0 / math.sqrt(s) if s > 0 else 0.0
        _record(trace, instance, k, productive, Mk, h, gval, idx, x)
        if productive:
            xsum += x
            n_prod += 1
        if h > 0:
            x = setup.mirror_step(x, h * grad)
        k += 1
        if k >= 2.0 * theta0 / eps * math.sqrt(sq_sum.value) * (1.0 - STOP_RTOL):
            break
    x_bar = xsum / n_prod if n_prod else None
    return _finish(instance, x_bar, k, n_prod, eps, bound, config.seed, trace)


def _fixed_run(instance, setup, eps, N, M, rng, trace=None, offset=0):
    """``N`` steps with ``h = eps / M_s^2``, ``M_s`` measured in ``setup``'s dual norm."""
    h = eps / (M * setup.dual_scale) ** 2
    x = setup.prox_center()
    xsum = np.zeros(setup.dim)
    n_prod = 0
    for k in range(N):
        productive, gval, idx, grad = _sample(instance, x, eps, rng)
        if trace is not None:
            _record(trace, instance, k + offset, productive, setup.dual_norm(grad), h, gval, idx, x)
        if productive:
            xsum += x
            n_prod += 1
        x = setup.mirror_step(x, h * grad)
    return (xsum / n_prod if n_prod else None), n_prod


def fixed_smd(instance, config, N=None, feasible_override=None):
    """Stochastic mirror descent with constant stepsize ``eps / M^2`` for
    exactly ``N`` iterations.

    ``N`` defaults to ``config.fixed_N`` and then to
    ``ceil(70 M^2 Theta0^2 ln(1/sigma) / eps^2)``.  ``feasible_override``
    replaces the feasible set (Euclidean setups only).  ``x_bar`` is the
    mean of productive iterates, or ``None`` when there were none.
    """
    eps = config.epsilon
    M = _require_oracles(instance)
    setup = instance.setup
    if feasible_override is not None:
        if not isinstance(setup, EuclideanSetup):
            raise UnsupportedSetupError("feasible set override needs a Euclidean setup")
        setup = setup.with_set(feasible_override)
    default_N = None
    if config.sigma is not None:
        try:
            default_N = bounds.fixed_smd_iterations(M, _pair_theta0_sq(instance, config), eps, config.sigma)
        except UnsupportedSetupError:
            if N is None and config.fixed_N is None:
                raise
    if N is None:
        N = config.fixed_N if config.fixed_N is not None else default_N
    if N is None:
        raise ValueError("fixed_smd needs N, fixed_N or sigma")
    N = int(N)
    if N < 1:
        raise ValueError("N must be a positive integer")
    rng = make_rng(config.seed)
    trace = RunTrace() if config.record_trace else None
    x_bar, n_prod = _fixed_run(instance, setup, eps, N, M, rng, trace)
    return _finish(instance, x_bar, N, n_prod, eps, default_N, config.seed, trace)


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
        raise UnsupportedSetupError("stochastic restarts are supported for the Euclidean setup only")
    omega = config.omega if config.omega is not None else base.omega
    return float(mu), base.check(x0, "x0"), float(r0_sq), float(omega), base


def _dist_sq(instance, x):
    if instance.known_optimum is None or x is None:
        return None
    d = x - instance.known_optimum.x_star
    return float(d @ d)


def _restart(instance, config, stage_iterations, restrict, bound):
    eps = config.epsilon
    M = _require_oracles(instance)
    mu, x_prev, r0_sq, omega, base = _restart_params(instance, config)
    rng = make_rng(config.seed)
    trace = RunTrace() if config.record_trace else None
    total = n_prod_total = 0
    stages = []
    x_out = x_prev
    for p, r_prev_sq, r_sq, eps_p in bounds.restart_schedule(mu, r0_sq, eps):
        N_p = stage_iterations(M, omega, r_prev_sq, eps_p)
        fset = BallIntersection(base.set, x_prev, r_prev_sq) if restrict else None
        setup = ShiftedSetup(base, x_prev, math.sqrt(r_prev_sq), set=fset)
        x_p, n_prod = _fixed_run(instance, setup, eps_p, N_p, M, rng, trace, total)
        total += N_p
        n_prod_total += n_prod
        stages.append(StageRecord(p, eps_p, r_prev_sq, r_sq, N_p, _dist_sq(instance, x_p)))
        if x_p is None:
            x_out = None
            break
        x_prev = x_out = x_p
    report = _finish(instance, x_out, total, n_prod_total, eps, bound(M, omega, mu, r0_sq), config.seed, trace)
    report.stages = stages
    return report


def restarted_smd_expectation(instance, config):
    """Restarts of :func:`fixed_smd` with ``N_p = ceil(M^2 omega R_{p-1}^2 / eps_p^2)``.

    Each stage uses the prox-function ``d((x - x_{p-1}) / R_{p-1})`` with
    ``theta0_sq = omega / 2``.  An empty stage output ends the run with
    ``x_bar = None``.
    """
    return _restart(
        instance, config,
        bounds.restart_expectation_stage_iterations,
        False,
        lambda M, omega, mu, r0_sq: bounds.restarted_md_bound(M, omega, mu, r0_sq, config.epsilon),
    )


def restarted_smd_deviation(instance, config):
    """Restarts of :func:`fixed_smd` for large-deviation control.

    Stage ``p`` works on ``X ∩ {||x - x_{p-1}||^2 <= R_{p-1}^2}`` with
    ``N_p = ceil(70 M^2 omega R_{p-1}^2 / eps_p^2 ln(L / sigma))`` where
    ``L = max(1, log2(mu R_0^2 / (2 eps)))``.
    """
    if config.sigma is None:
        raise ValueError("restarted_smd_deviation needs sigma")
    if not isinstance(instance.setup, EuclideanSetup):
        raise UnsupportedSetupError("ball-intersection feasible sets need the Euclidean setup")
    mu, _, r0_sq, _, _ = _restart_params(instance, config)
    log_factor = bounds.deviation_log_factor(mu, r0_sq, config.epsilon, config.sigma)
    return _restart(
        instance, config,
        lambda M, omega, r_prev_sq, eps_p: bounds.restart_deviation_stage_iterations(
            M, omega, r_prev_sq, eps_p, log_factor),
        True,
        lambda M, omega, mu, r0_sq: bounds.restarted_smd_deviation_bound(
            M, omega, mu, r0_sq, config.epsilon, config.sigma),
    )
