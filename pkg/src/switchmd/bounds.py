"""Iteration bounds and stepsize constants of the switching methods.

``M`` always denotes ``max(M_f, M_g)`` in the dual norm of the setup.
"""

import math


def _check_eps(eps):
    if not eps > 0:
        raise ValueError("epsilon must be positive")


def adaptive_md_bound(M, theta0_sq, eps):
    """``ceil(2 M^2 Theta0^2 / eps^2)`` for the adaptive method."""
    _check_eps(eps)
    return math.ceil(2.0 * M**2 * theta0_sq / eps**2)


def general_md_bound(M_g, theta0_sq, eps):
    """``ceil(2 max(1, M_g^2) Theta0^2 / eps^2)`` for the non-Lipschitz objective method."""
    _check_eps(eps)
    return math.ceil(2.0 * max(1.0, M_g**2) * theta0_sq / eps**2)


def adaptive_smd_bound(M, theta0_sq, eps):
    """``ceil(4 M^2 Theta0^2 / eps^2)`` for the adaptive stochastic method."""
    _check_eps(eps)
    return math.ceil(4.0 * M**2 * theta0_sq / eps**2)


def check_sigma(sigma):
    if not 0 < sigma < 0.5:
        raise ValueError(f"sigma out of (0,0.5): {sigma}")


def fixed_smd_iterations(M, theta0_sq, eps, sigma):
    """``ceil(70 M^2 Theta0^2 ln(1/sigma) / eps^2)`` iterations of the fixed-step method."""
    _check_eps(eps)
    check_sigma(sigma)
    return math.ceil(70.0 * M**2 * theta0_sq * math.log(1.0 / sigma) / eps**2)


def fixed_smd_stepsize(M, eps):
    return eps / M**2


def restart_log_ratio(mu, r0_sq, eps):
    """``log2(mu R0^2 / (2 eps))``."""
    _check_eps(eps)
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not r0_sq > 0:
        raise ValueError("r0_sq must be positive")
    return math.log2(mu * r0_sq / (2.0 * eps))


def restart_count(mu, r0_sq, eps):
    """Number of outer stages ``max(1, ceil(log2(mu R0^2 / (2 eps))))``."""
    return max(1, math.ceil(restart_log_ratio(mu, r0_sq, eps)))


def restart_schedule(mu, r0_sq, eps):
    """``[(p, R_{p-1}^2, R_p^2, eps_p), ...]`` for ``p = 1..p_hat``.

    When ``eps >= mu R0^2 / 2`` no halving is needed: a single stage runs at
    accuracy ``eps`` itself, with target radius ``R_1^2 = 2 eps / mu``.
    """
    if restart_log_ratio(mu, r0_sq, eps) <= 0:
        return [(1, r0_sq, 2.0 * eps / mu, eps)]
    out = []
    for p in range(1, restart_count(mu, r0_sq, eps) + 1):
        r_prev = r0_sq * 2.0 ** (-(p - 1))
        r_p = r0_sq * 2.0 ** (-p)
        out.append((p, r_prev, r_p, mu * r_p / 2.0))
    return out


def restarted_md_bound(M, omega, mu, r0_sq, eps):
    """``ceil(log2(mu R0^2/(2 eps))) + 32 Omega M^2 / (mu eps)``.

    Shared by the deterministic restart and the stochastic restart with
    expectation control.  The log term is floored at one stage.
    """
    return restart_count(mu, r0_sq, eps) + 32.0 * omega * M**2 / (mu * eps)


def deviation_log_factor(mu, r0_sq, eps, sigma):
    """``ln((1/sigma) log2(mu R0^2/(2 eps)))`` with the log2 term floored at 1."""
    check_sigma(sigma)
    return math.log(max(1.0, restart_log_ratio(mu, r0_sq, eps)) / sigma)


def restarted_smd_deviation_bound(M, omega, mu, r0_sq, eps, sigma):
    """``ceil(log2(.)) + 2240 Omega M^2/(mu eps) (ln(1/sigma) + ln log2(.))``."""
    return restart_count(mu, r0_sq, eps) + (
        2240.0 * omega * M**2 / (mu * eps) * deviation_log_factor(mu, r0_sq, eps, sigma)
    )


def restart_expectation_stage_iterations(M, omega, r_prev_sq, eps_p):
    """``ceil(M^2 Omega R_{p-1}^2 / eps_p^2)``."""
    return math.ceil(M**2 * omega * r_prev_sq / eps_p**2)


def restart_deviation_stage_iterations(M, omega, r_prev_sq, eps_p, log_factor):
    """``ceil(70 M^2 Omega R_{p-1}^2 / eps_p^2 * log_factor)``."""
    return math.ceil(70.0 * M**2 * omega * r_prev_sq / eps_p**2 * log_factor)


def smooth_eps_tilde(eps, grad_norm_at_opt, smoothness):
    """Accuracy in objective value for a max of smooth parts:
    ``max(eps, eps ||grad f_i(x*)||_* + eps^2 L / 2)``."""
    return max(eps, eps * grad_norm_at_opt + eps**2 * smoothness / 2.0)
