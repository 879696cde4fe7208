"""Independent oracles and statistical checks for solver outputs.

``grid_optimum`` scans a regular grid of the feasible set; for affine
constraints it reduces the scan to lines along the last free coordinate,
where the feasible grid points form an interval that is found analytically
and confirmed by direct evaluation.  All grid coordinates are built as
``integer / K`` so that, for example, ``0.4`` is represented exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import bounds
from .problems import (
    OracleResult,
    column_sampling_oracle,
    make_linear_max_problem,
    make_quadratic_simplex_problem,
    make_rng,
    StochasticOracle,
)
from .prox import BallIntersection, Box, EntropySetup, EuclideanSetup, ShiftedSetup, Simplex, UnsupportedSetupError

__all__ = [
    "OracleResult",
    "GridError",
    "grid_optimum",
    "grid_minimize",
    "grid_consistency",
    "check_step_inequality",
    "unbiasedness_test",
    "DeviationExperiment",
    "deviation_experiment",
    "CheckResult",
    "verify_suite",
]

MAX_GRID_DIM = 4
BRUTE_FORCE_CAP = 20_000_000
CHUNK = 200_000


class GridError(ValueError):
    """The grid contains no feasible point (or is too large to scan)."""


# ---------------------------------------------------------------------------
# grid geometry


class _Grid:
    """Grid of a box or simplex with lines along the last free coordinate.

    Simplex points are ``z / K`` with ``z`` integer and ``sum z = K``; the
    line parameter ``t`` is ``z_{n-1}`` and ``z_n = K - s - t``.  Box points
    are ``lower + z * (upper - lower) / K_i``; ``t`` is ``z_n``.
    """

    def __init__(self, fset, resolution):
        if not resolution > 0:
            raise ValueError("resolution must be positive")
        self.set = fset
        self.n = fset.dim
        if isinstance(fset, Simplex):
            self.simplex = True
            self.K = max(1, int(round(1.0 / resolution)))
            self.n_prefix = max(0, self.n - 2)
        elif isinstance(fset, Box):
            self.simplex = False
            width = fset.upper - fset.lower
            self.Ks = np.maximum(1, np.ceil(width / resolution - 1e-9)).astype(int)
            self.Ks[width == 0] = 0
            self.n_prefix = self.n - 1
        else:
            raise UnsupportedSetupError(f"grid scan needs a box or simplex, got {fset.kind}")

    def prefixes(self):
        if self.simplex:
            if self.n_prefix == 0:
                return np.zeros((1, 0), dtype=np.int64)
            axes = [np.arange(self.K + 1)] * self.n_prefix
            Z = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, self.n_prefix)
            return Z[Z.sum(1) <= self.K]
        if self.n_prefix == 0:
            return np.zeros((1, 0), dtype=np.int64)
        axes = [np.arange(k + 1) for k in self.Ks[:-1]]
        return np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, self.n_prefix)

    def t_max(self, Z):
        if self.simplex:
            if self.n == 1:
                return np.zeros(len(Z), dtype=np.int64)
            return self.K - Z.sum(1)
        return np.full(len(Z), self.Ks[-1], dtype=np.int64)

    def points(self, Z, t, s=None):
        """Grid points for prefixes ``Z`` and line parameters ``t``.

        ``s`` optionally passes the cached row sums of ``Z`` (simplex only).
        """
        t = np.asarray(t, dtype=np.int64)
        m = len(Z)
        if self.simplex:
            if self.n == 1:
                return np.ones((m, 1))
            s = Z.sum(1) if s is None else s
            out = np.empty((m, self.n))
            p = self.n_prefix
            out[:, :p] = Z
            out[:, p] = t
            out[:, p + 1] = self.K - s - t
            out /= self.K
            return out
        zz = np.column_stack([Z, t]).astype(float)
        lo, hi = self.set.lower, self.set.upper
        step = np.where(self.Ks > 0, (hi - lo) / np.maximum(self.Ks, 1), 0.0)
        out = lo + zz * step
        # land exactly on the upper face
        top = np.asarray(np.column_stack([Z, t]) == self.Ks, dtype=bool)
        return np.where(top, hi, out)

    def count(self):
        if self.simplex:
            return math.comb(self.K + self.n - 1, self.n - 1)
        return int(np.prod(self.Ks + 1))

    def all_points(self):
        Z = self.prefixes()
        T = self.t_max(Z)
        step = max(1, CHUNK // (int(T.max()) + 1))
        for start in range(0, len(Z), step):
            Zc, Tc = Z[start:start + step], T[start:start + step]
            reps = Tc + 1
            tr = np.concatenate([np.arange(r) for r in reps])
            yield self.points(np.repeat(Zc, reps, axis=0), tr)


def _quad_eval(quad, X):
    Q, q, c0 = quad
    val = X @ q + c0
    if np.any(Q):
        val = val + 0.5 * np.einsum("ij,jk,ik->i", X, Q, X)
    return val


def _vector_fn(oracle):
    if oracle.quad is not None:
        return lambda X: _quad_eval(oracle.quad, X)
    return lambda X: np.array([oracle.value(x) for x in X])


def _affine(oracle):
    return oracle.quad is not None and not np.any(oracle.quad[0])


# ---------------------------------------------------------------------------
# grid oracle


def grid_optimum(instance, resolution):
    """Minimum of ``f`` over the grid points of ``X`` with ``g(x) <= 0``.

    Parameters
    ----------
    instance : ProblemInstance
        Dimension at most 4; the set must be a box or simplex.
    resolution : float
        Grid spacing (simplex: ``1/K`` with ``K = round(1/resolution)``).

    Returns
    -------
    OracleResult
        With ``method="grid"``.  ``f_star`` is within
        ``L_f * resolution * sqrt(dim)`` of the true optimum for
        ``L_f``-Lipschitz ``f`` when the grid resolves the feasible set.

    Raises
    ------
    GridError
        When no grid point is feasible.
    """
    if instance.dim > MAX_GRID_DIM:
        raise ValueError(f"grid oracle supports dimension <= {MAX_GRID_DIM}")
    grid = _Grid(instance.setup.set, resolution)
    parts = instance.constraint.parts
    f = instance.objective
    if all(_affine(p) for p in parts) and f.quad is not None:
        best = _line_scan(grid, f.quad, [p.quad for p in parts])
    else:
        best = _brute_force(grid, _vector_fn(f), [_vector_fn(p) for p in parts])
    if best is None:
        x_s = instance.slater_point
        raise GridError(
            f"no feasible grid point at resolution {resolution}; the Slater witness "
            f"{np.round(x_s, 6).tolist()} has g = {instance.g(x_s):.3e}, refine the resolution"
        )
    return OracleResult(best[0], best[1], "grid", resolution)


def _line_scan(grid, fquad, gquads):
    Z = grid.prefixes()
    T = grid.t_max(Z)
    m = len(Z)
    S = Z.sum(1) if grid.simplex else None
    zero = np.zeros(m, dtype=np.int64)
    P0 = grid.points(Z, zero, S)
    P1 = grid.points(Z, np.minimum(T, 1), S)
    D = P1 - P0  # zero direction when the line is a single point

    def feasible(t):
        X = grid.points(Z, t, S)
        ok = np.ones(m, dtype=bool)
        for gq in gquads:
            ok &= _quad_eval(gq, X) <= 0.0
        return ok & (t >= 0) & (t <= T)

    lo = np.zeros(m)
    hi = T.astype(float)
    for gq in gquads:
        a = _quad_eval(gq, P0)
        b = D @ gq[1]
        with np.errstate(divide="ignore", invalid="ignore"):
            r = -a / b
        hi = np.where(b > 0, np.minimum(hi, r), hi)
        lo = np.where(b < 0, np.maximum(lo, r), lo)
        empty = (b == 0) & (a > 0)
        lo = np.where(empty, np.inf, lo)
    lo_est = np.clip(np.ceil(np.where(np.isfinite(lo), lo, T + 2)), 0, T + 2).astype(np.int64)
    hi_est = np.clip(np.floor(hi), -2, T).astype(np.int64)

    # confirm interval ends by direct evaluation
    lo_t = np.full(m, -1, dtype=np.int64)
    for d in (1, 0, -1):
        t = lo_est + d
        ok = feasible(np.clip(t, 0, T)) & (t >= 0) & (t <= T)
        lo_t = np.where(ok, t, lo_t)
    hi_t = np.full(m, -1, dtype=np.int64)
    for d in (-1, 0, 1):
        t = hi_est + d
        ok = feasible(np.clip(t, 0, T)) & (t >= 0) & (t <= T)
        hi_t = np.where(ok, t, hi_t)
    valid = (lo_t >= 0) & (hi_t >= 0) & (lo_t <= hi_t)
    if not np.any(valid):
        return None
    Z, T, lo_t, hi_t, P0, D = Z[valid], T[valid], lo_t[valid], hi_t[valid], P0[valid], D[valid]
    S = None if S is None else S[valid]
    m = len(Z)

    cands = [lo_t, hi_t]
    Q, q, _ = fquad
    curv = np.einsum("ij,jk,ik->i", D, Q, D) if np.any(Q) else np.zeros(m)
    if np.any(curv > 0):
        slope = (P0 @ Q + q) * 1.0
        slope = np.einsum("ij,ij->i", slope, D)
        with np.errstate(divide="ignore", invalid="ignore"):
            t_star = np.where(curv > 0, -slope / curv, lo_t)
        for t in (np.floor(t_star), np.ceil(t_star)):
            cands.append(np.clip(np.nan_to_num(t, nan=0.0), lo_t, hi_t).astype(np.int64))
    best_val, best_x = np.inf, None
    for t in cands:
        X = grid.points(Z, t, S)
        ok = np.ones(m, dtype=bool)
        for gq in gquads:
            ok &= _quad_eval(gq, X) <= 0.0
        vals = np.where(ok, _quad_eval(fquad, X), np.inf)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_x = float(vals[i]), X[i].copy()
    return None if best_x is None else (best_val, best_x)


def _brute_force(grid, f_vec, g_vecs):
    if grid.count() > BRUTE_FORCE_CAP:
        raise GridError(f"grid of {grid.count()} points is too large for a brute-force scan")
    best_val, best_x = np.inf, None
    for X in grid.all_points():
        ok = np.ones(len(X), dtype=bool)
        for g in g_vecs:
            ok &= g(X) <= 0.0
        if not np.any(ok):
            continue
        vals = np.where(ok, f_vec(X), np.inf)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_x = float(vals[i]), X[i].copy()
    return None if best_x is None else (best_val, best_x)


def grid_minimize(fn, fset, resolution, cap=200_000):
    """Minimum of a scalar function over the grid of a box or simplex.

    A ball intersection is scanned on the grid of its base set, keeping the
    points inside the ball.  ``fn`` takes one point at a time.  Returns
    ``(value, x)``.
    """
    keep = None
    if isinstance(fset, BallIntersection):
        keep, fset = fset.contains, fset.base
    grid = _Grid(fset, resolution)
    if grid.count() > cap:
        raise GridError(f"grid of {grid.count()} points exceeds the cap {cap}")
    best_val, best_x = np.inf, None
    for X in grid.all_points():
        for x in X:
            if keep is not None and not keep(x):
                continue
            v = fn(x)
            if v < best_val:
                best_val, best_x = float(v), x.copy()
    if best_x is None:
        raise GridError("no grid point lies in the set; refine the resolution")
    return best_val, best_x


def grid_consistency(instance, resolution, lipschitz=None):
    """Compare the grid optimum at ``resolution`` and ``resolution / 2``.

    Returns ``(coarse, fine, ok)`` where ``ok`` means the two values differ
    by at most ``L_f * resolution * sqrt(dim)``.
    """
    L = instance.objective.lipschitz if lipschitz is None else lipschitz
    coarse = grid_optimum(instance, resolution)
    fine = grid_optimum(instance, resolution / 2)
    ok = abs(coarse.f_star - fine.f_star) <= L * resolution * math.sqrt(instance.dim) + 1e-12
    return coarse, fine, ok


# ---------------------------------------------------------------------------
# one-step inequality


def check_step_inequality(setup, f_oracle, x, u, h, delta=None, bregman=None, tol=1e-9):
    """Both sides of the one-step mirror-descent inequality.

    With ``x_+ = Mirr[x](h (grad f(x) + delta))``::

        lhs = h (f(x) - f(u) + <delta, x - u>)
        rhs = h^2 / 2 ||grad f(x) + delta||_*^2 + V[x](u) - V[x_+](u)

    ``bregman`` replaces the setup's divergence (a test hook).

    Returns
    -------
    lhs, rhs : float
    holds : bool
        ``lhs <= rhs + tol``.
    """
    x = setup.check(x)
    u = setup.check(u, "u")
    delta = np.zeros(setup.dim) if delta is None else setup.check(delta, "delta")
    V = setup.bregman if bregman is None else bregman
    direction = f_oracle.subgrad(x) + delta
    x_next = setup.mirror_step(x, h * direction)
    lhs = h * (f_oracle.value(x) - f_oracle.value(u) + float(delta @ (x - u)))
    rhs = 0.5 * h**2 * setup.dual_norm(direction) ** 2 + V(x, u) - V(x_next, u)
    return lhs, rhs, bool(lhs <= rhs + tol)


# ---------------------------------------------------------------------------
# statistical tests


def unbiasedness_test(oracle, truth, x, n_samples, rng=None):
    """Empirical mean of ``n_samples`` draws against ``truth(x)``.

    Returns ``(max_dev, passed)`` where ``max_dev`` is the dual norm of the
    difference and ``passed`` means ``max_dev <= 5 bound_M / sqrt(n)``.
    """
    if n_samples < 10_000:
        raise ValueError("the unbiasedness test needs at least 10^4 samples")
    rng = make_rng(0) if rng is None else rng
    G = oracle.sample_batch(np.asarray(x, dtype=float), rng, n_samples)
    # averaging the differences keeps a zero-noise oracle at exactly zero
    diff = (G - np.asarray(truth(x), dtype=float)).mean(axis=0)
    if oracle.norm_kind == "l2":
        dev = float(np.linalg.norm(diff))
    else:
        dev = float(np.max(np.abs(diff)))
    return dev, bool(dev <= 5.0 * oracle.bound_M / math.sqrt(n_samples))


def biased_oracle(oracle, offset):
    """Negative control: ``oracle`` shifted by the constant vector ``offset``."""
    offset = np.asarray(offset, dtype=float)
    extra = float(np.linalg.norm(offset)) if oracle.norm_kind == "l2" else float(np.max(np.abs(offset)))

    def batch(x, rng, n):
        return oracle.sample_batch(x, rng, n) + offset

    return StochasticOracle(lambda x, rng: oracle.sample(x, rng) + offset,
                            oracle.bound_M + extra, oracle.norm_kind, batch)


@dataclass
class DeviationExperiment:
    """Failure count of repeated fixed-step runs.

    A run fails unless ``f(x) - f* <= eps`` and ``g(x) <= eps``; an empty
    output counts as a failure.
    """

    n_seeds: int
    failures: int
    sigma_target: float
    epsilon: float = 0.0
    N: int = 0
    f_star: float = 0.0
    gaps: List[Optional[float]] = field(default_factory=list)

    @property
    def failure_rate(self):
        return self.failures / self.n_seeds

    @property
    def band(self):
        s = self.sigma_target
        return s + 3.0 * math.sqrt(s * (1 - s) / self.n_seeds)

    @property
    def passed(self):
        return self.failure_rate <= self.band


def deviation_experiment(instance, epsilon, sigma, n_seeds, N=None, f_star=None, seed0=0):
    """Run :func:`fixed_smd` on ``n_seeds`` consecutive seeds and count
    failures of the ``(eps, sigma)`` predicate.

    ``f_star`` defaults to the instance's known optimum, then to a grid
    optimum at ``1e-3``.
    """
    from .stochastic import StochasticRunConfig, fixed_smd

    if f_star is None:
        f_star = (instance.known_optimum.f_star if instance.known_optimum is not None
                  else grid_optimum(instance, 1e-3).f_star)
    failures = 0
    gaps = []
    used_N = None
    for s in range(seed0, seed0 + n_seeds):
        cfg = StochasticRunConfig(epsilon=epsilon, sigma=sigma, seed=s, fixed_N=N)
        rep = fixed_smd(instance, cfg)
        used_N = rep.iterations
        if rep.x_bar is None:
            failures += 1
            gaps.append(None)
            continue
        gap = rep.f_bar - f_star
        gaps.append(gap)
        if not (gap <= epsilon and rep.g_bar <= epsilon):
            failures += 1
    return DeviationExperiment(n_seeds, failures, sigma, epsilon, used_N, f_star, gaps)


# ---------------------------------------------------------------------------
# battery


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""


def _setups():
    return {
        "euclidean_simplex3": EuclideanSetup(Simplex(3)),
        "euclidean_box2": EuclideanSetup(Box([0.0, 0.0], [1.0, 1.0]), center=[0.2, 0.2]),
        "entropy_simplex3": EntropySetup(Simplex(3)),
    }


def _interior(setup, rng, n):
    pts = setup.set.sample(rng, n)
    if isinstance(setup, EntropySetup):
        pts = np.maximum(pts, 1e-12)
        pts /= pts.sum(1, keepdims=True)
    return pts


def _check_prox(rng, n):
    out = []
    for name, st in _setups().items():
        xs, ys = _interior(st, rng, n), st.set.sample(rng, n)
        worst = min(st.bregman(x, y) - 0.5 * st.norm(y - x) ** 2 for x, y in zip(xs, ys))
        out.append(CheckResult(f"strong_convexity[{name}]", "pass" if worst >= -1e-9 else "fail",
                               f"min slack {worst:.3e}"))
        worst_vi = math.inf
        for x in xs[: max(1, n // 10)]:
            p = rng.normal(size=st.dim)
            xp = st.mirror_step(x, p)
            us = st.set.sample(rng, 20)
            gd = p + st.grad_d(xp) - st.grad_d(x)
            worst_vi = min(worst_vi, float(np.min((us - xp) @ gd)))
        out.append(CheckResult(f"mirror_step_variational[{name}]",
                               "pass" if worst_vi >= -1e-8 else "fail", f"min {worst_vi:.3e}"))
        gs = rng.normal(size=(n, st.dim))
        worst_pair = 0.0
        for gvec in gs[:50]:
            ys_unit = rng.normal(size=(2000, st.dim))
            ys_unit /= np.array([st.norm(y) for y in ys_unit])[:, None]
            best = float(np.max(ys_unit @ gvec))
            # the maximizer for l1 is a signed coordinate vector
            if st.norm_kind == "l1":
                best = max(best, float(np.max(np.abs(gvec))))
            else:
                best = max(best, float(np.linalg.norm(gvec)))
            worst_pair = max(worst_pair, abs(best - st.dual_norm(gvec)))
        out.append(CheckResult(f"dual_norm_pairing[{name}]", "pass" if worst_pair <= 1e-6 else "fail",
                               f"max gap {worst_pair:.3e}"))
    st = EntropySetup(Simplex(3))
    worst = 0.0
    for x in _interior(st, rng, n):
        p = rng.normal(size=3)
        w = x * np.exp(-p)
        worst = max(worst, float(np.max(np.abs(st.mirror_step(x, p) - w / w.sum()))))
    out.append(CheckResult("entropy_multiplicative_weights", "pass" if worst <= 1e-12 else "fail",
                           f"max diff {worst:.3e}"))
    base = EuclideanSetup(Simplex(3))
    sh = ShiftedSetup(base, base.prox_center(), 1.0)
    xs, ys = base.set.sample(rng, n), base.set.sample(rng, n)
    worst = max(abs(sh.bregman(x, y) - base.bregman(x, y)) for x, y in zip(xs, ys))
    out.append(CheckResult("shifted_setup_identity", "pass" if worst <= 1e-14 else "fail",
                           f"max diff {worst:.3e}"))
    return out


def _check_step_inequality(rng, n, corrupt_bregman):
    from .problems import quadratic_oracle

    out_fail = 0
    worst = -math.inf
    for st in _setups().values():
        A = rng.normal(size=(st.dim, st.dim))
        f = quadratic_oracle(A @ A.T, rng.normal(size=st.dim), 0.0, st)
        V = (lambda z, x: 0.0) if corrupt_bregman else None
        xs, us = _interior(st, rng, n), st.set.sample(rng, n)
        hs = rng.uniform(0.0, 2.0, size=n)
        deltas = rng.normal(size=(n, st.dim))
        for x, u, h, dl in zip(xs, us, hs, deltas):
            lhs, rhs, ok = check_step_inequality(st, f, x, u, h, dl, bregman=V)
            worst = max(worst, lhs - rhs)
            out_fail += not ok
    status = "pass" if out_fail == 0 else "fail"
    return [CheckResult("step_inequality", status, f"{out_fail} violations, max excess {worst:.3e}")]


def _check_stochastic(rng):
    out = []
    A = rng.uniform(-1, 1, size=(3, 3))
    A = A @ A.T
    oracle = column_sampling_oracle(A)
    x = np.array([0.3, 0.5, 0.2])
    dev, ok = unbiasedness_test(oracle, lambda z: A @ z, x, 100_000, rng)
    out.append(CheckResult("unbiasedness[column_sampling]", "pass" if ok else "fail", f"dev {dev:.3e}"))
    off = np.zeros(3)
    off[0] = 10 * oracle.bound_M / math.sqrt(100_000)
    _, ok_b = unbiasedness_test(biased_oracle(oracle, off), lambda z: A @ z, x, 100_000, rng)
    out.append(CheckResult("unbiasedness_negative_control", "pass" if not ok_b else "fail",
                           "biased oracle rejected" if not ok_b else "biased oracle accepted"))
    try:
        oracle.sample_batch(rng.dirichlet(np.ones(3)), rng, 1_000_000)
        out.append(CheckResult("as_bound_stress", "pass", "10^6 draws within bound"))
    except AssertionError as e:
        out.append(CheckResult("as_bound_stress", "fail", str(e)))
    return out


def _check_bounds():
    from .deterministic import SolverConfig, adaptive_md

    out = []
    spots = {
        "adaptive_md_bound": (bounds.adaptive_md_bound(1, 1, 0.1), 200),
        "general_md_bound": (bounds.general_md_bound(1, 1, 0.1), 200),
        "adaptive_smd_bound": (bounds.adaptive_smd_bound(1, 1, 0.1), 400),
        "fixed_smd_iterations": (bounds.fixed_smd_iterations(1, 1, 0.1, 0.1), 16119),
        "restarted_md_bound": (bounds.restarted_md_bound(1, 1, 1, 4, 0.1), 325),
    }
    for name, (got, want) in spots.items():
        out.append(CheckResult(f"bound_spot[{name}]", "pass" if got == want else "fail",
                               f"{got} vs {want}"))
    inst = make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], EntropySetup(Simplex(2)),
                                   theta0_sq=math.log(2))
    rep = adaptive_md(inst, SolverConfig(epsilon=0.05))
    ok = rep.iterations <= 555 and rep.g_bar <= 0.05 and rep.f_bar <= 0.45 + 1e-9
    out.append(CheckResult("bound_regression[adaptive_md]", "pass" if ok else "fail",
                           f"iterations {rep.iterations}, f {rep.f_bar:.6f}, g {rep.g_bar:.3e}"))
    q = make_quadratic_simplex_problem(np.eye(2), [[0.0, 0.0]], EuclideanSetup(Simplex(2)), offsets=[-1.0])
    from .stochastic import StochasticRunConfig, adaptive_smd

    r = adaptive_smd(q, StochasticRunConfig(epsilon=0.1, seed=1))
    ok = r.iterations <= r.theoretical_bound and r.g_bar <= 0.1
    out.append(CheckResult("bound_regression[adaptive_smd]", "pass" if ok else "fail",
                           f"iterations {r.iterations} <= {r.theoretical_bound}"))
    return out


def _check_unsupported():
    from .stochastic import StochasticRunConfig, restarted_smd_deviation

    inst = make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], EntropySetup(Simplex(2)),
                                   x0=[0.5, 0.5], r0_sq=2.0, audit=False)
    try:
        restarted_smd_deviation(inst, StochasticRunConfig(epsilon=0.1, sigma=0.1, mu=1.0))
    except UnsupportedSetupError as e:
        return [CheckResult("restarted_smd_deviation[entropy]", "skip", f"unsupported: {e}")]
    return [CheckResult("restarted_smd_deviation[entropy]", "fail", "entropy restart was not rejected")]


def verify_suite(seed=2024, n_samples=1000, corrupt_bregman=False):
    """Run the invariant and oracle battery.

    Returns a list of :class:`CheckResult`; the suite fails when any entry
    has status ``"fail"``.  ``corrupt_bregman`` replaces the Bregman
    divergence in the one-step audit by zero (a negative control).
    """
    rng = make_rng(seed)
    results = []
    results += _check_prox(rng, n_samples)
    results += _check_step_inequality(rng, n_samples, corrupt_bregman)
    results += _check_stochastic(rng)
    results += _check_bounds()
    results += _check_unsupported()
    return results
