"""Restarts on a strongly convex problem: watch the distance to x* halve.

f = ||x - a||^2, g = ||x||^2 - r^2 on the unit box; x* is the point of the
disc closest to a.

    python3 demos/restarts.py
"""

import numpy as np

from switchmd.deterministic import SolverConfig, restarted_md
from switchmd.problems import OracleResult, make_quadratic_problem
from switchmd.prox import Box, EuclideanSetup
from switchmd.stochastic import StochasticRunConfig, restarted_smd_expectation


def instance(noise=None):
    a, r = np.array([1.5, 1.0]), 0.8
    x_star = r * a / np.linalg.norm(a)
    x0 = np.array([0.0, 1.0])
    opt = OracleResult(float((x_star - a) @ (x_star - a)), x_star, "analytic")
    return make_quadratic_problem((2 * np.eye(2), -2 * a, float(a @ a)), [(2 * np.eye(2), np.zeros(2), -r**2)],
                                  EuclideanSetup(Box([0.0, 0.0], [1.0, 1.0])), mu=2.0, known_optimum=opt,
                                  x0=x0, r0_sq=float((x0 - x_star) @ (x0 - x_star)) + 0.05, noise=noise)


def stages(title, rep):
    print(title)
    for s in rep.stages:
        print(f"  stage {s.p}: eps_p {s.epsilon:.4f}  iters {s.iterations:>6}  "
              f"|x-x*|^2 {s.dist_sq:.2e} <= R_p^2 {s.r_sq:.2e}")
    print(f"  total {rep.iterations} iterations (bound {rep.theoretical_bound:.0f})\n")


def main():
    stages("deterministic, eps = 0.01", restarted_md(instance(), SolverConfig(0.01)))
    stages("stochastic (expectation), eps = 0.05, noisy oracles",
           restarted_smd_expectation(instance(noise=(0.3, 0.3)), StochasticRunConfig(0.05, seed=1)))


if __name__ == "__main__":
    main()
