"""Exact minimization of a convex quadratic over a small polyhedron.

Enumerates active sets of the inequality constraints, solves the
equality-constrained stationarity system for each, and keeps the best
primal-feasible candidate.  Every candidate is feasible, so the result is an
upper bound on the minimum; an extreme point of the optimal set is always
produced by its own active set, so the bound is attained.  Intended for
dimension <= ~6 and a handful of constraints.
"""

from itertools import combinations

import numpy as np

FEAS_TOL = 1e-10


def minimize_quadratic(Q, q, c0, A_ub, b_ub, A_eq=None, b_eq=None, tol=FEAS_TOL):
    """Minimize ``1/2 x'Qx + q'x + c0`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    ``Q`` must be symmetric positive semidefinite and the feasible set
    bounded and nonempty.

    Returns
    -------
    value : float
    x : ndarray
    """
    Q = np.asarray(Q, dtype=float)
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, float).ravel()

    n_ub = A_ub.shape[0]
    max_active = max(0, n - A_eq.shape[0])
    best_val, best_x = np.inf, None
    for k in range(0, min(max_active, n_ub) + 1):
        for active in combinations(range(n_ub), k):
            A_e = np.vstack([A_eq, A_ub[list(active)]])
            b_e = np.concatenate([b_eq, b_ub[list(active)]])
            m = A_e.shape[0]
            kkt = np.zeros((n + m, n + m))
            kkt[:n, :n] = Q
            kkt[:n, n:] = A_e.T
            kkt[n:, :n] = A_e
            rhs = np.concatenate([-q, b_e])
            sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
            if np.max(np.abs(kkt @ sol - rhs), initial=0.0) > 1e-8 * (1 + np.max(np.abs(rhs))):
                continue
            x = sol[:n]
            if n_ub and np.max(A_ub @ x - b_ub) > tol:
                continue
            if A_eq.shape[0] and np.max(np.abs(A_eq @ x - b_eq)) > tol:
                continue
            val = 0.5 * x @ Q @ x + q @ x + c0
            if val < best_val:
                best_val, best_x = float(val), x
    if best_x is None:
        raise ValueError("no feasible point found (empty or unbounded polyhedron)")
    return best_val, best_x
