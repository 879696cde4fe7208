"""Solve one small constrained problem with every method and compare.

min x1 over the 2-simplex subject to x1 >= 0.4; the optimum is f* = 0.4.

    python3 demos/walkthrough.py
"""

import numpy as np

from switchmd.deterministic import SolverConfig, adaptive_md
from switchmd.problems import make_linear_max_problem, make_quadratic_simplex_problem
from switchmd.prox import EntropySetup, EuclideanSetup, Simplex
from switchmd.stochastic import StochasticRunConfig, adaptive_smd, fixed_smd
from switchmd.verify import grid_optimum


def show(name, rep, f_star):
    print(f"{name:<14} iters {rep.iterations:>6} / bound {rep.theoretical_bound:>6}   "
          f"f-f* {rep.f_bar - f_star:+.4f}   g {rep.g_bar:+.4f}")


def main():
    eps = 0.05
    for setup in (EntropySetup(Simplex(2)), EuclideanSetup(Simplex(2))):
        inst = make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], setup)
        rep = adaptive_md(inst, SolverConfig(eps, record_trace=True))
        show(f"md/{type(setup).__name__[:-5].lower()}", rep, 0.4)
        kinds = [r.step_kind for r in rep.trace.records]
        print(f"{'':14} productive {kinds.count('productive')}, non-productive "
              f"{kinds.count('nonproductive')}, lambda {np.round(rep.dual.lambda_bar, 4)}, "
              f"phi {rep.dual.phi_value:.4f}")

    # stochastic gradients of 1/2 x'Ax by sampling one column of A
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    inst = make_quadratic_simplex_problem(A, [[-1.0, 0.0]], EuclideanSetup(Simplex(2)), offsets=[0.6])
    f_star = grid_optimum(inst, 1e-3).f_star
    print(f"\nquadratic instance, grid f* = {f_star:.4f}")
    for seed in range(3):
        show(f"smd seed {seed}", adaptive_smd(inst, StochasticRunConfig(0.1, seed=seed)), f_star)
    show("fixed N", fixed_smd(inst, StochasticRunConfig(0.25, sigma=0.1, seed=0)), f_star)


if __name__ == "__main__":
    main()
