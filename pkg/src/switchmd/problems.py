"""Problem instances: objective and max-type constraint oracles, stochastic
subgradient oracles and instance generators.

Indices of constraint parts are 0-based throughout; ties in the max are
broken towards the lowest index.

Random numbers come from ``numpy.random.Generator`` over the PCG64 bit
generator.  Every stochastic call takes its generator explicitly; use
:func:`make_rng` to build one from a 64-bit seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _qp
from .prox import (
    BallIntersection,
    Box,
    EntropySetup,
    EuclideanSetup,
    Simplex,
    as_vector,
)

__all__ = [
    "BoundViolation",
    "SlaterError",
    "OracleResult",
    "SubgradientOracle",
    "MaxConstraint",
    "StochasticOracle",
    "ProblemInstance",
    "make_rng",
    "quadratic_oracle",
    "audit_oracle",
    "column_sample_gradient",
    "column_sampling_oracle",
    "exact_stochastic_oracle",
    "coordinate_noise_oracle",
    "make_linear_max_problem",
    "make_quadratic_simplex_problem",
    "make_quadratic_problem",
    "eval_constraint_with_active",
    "exact_optimum",
    "setup_from_dict",
    "instance_from_dict",
]

SLATER_SAMPLES = 10_000
AUDIT_TOL = 1e-9


class BoundViolation(AssertionError):
    """A stochastic subgradient exceeded its almost-sure norm bound."""


class SlaterError(ValueError):
    """No strictly feasible point was found."""


def make_rng(seed):
    """PCG64-backed generator; independent streams come from distinct seeds."""
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class OracleResult:
    """A reference optimum together with how it was obtained.

    ``method`` is one of ``"grid"``, ``"vertex_enumeration"``, ``"analytic"``.
    """

    f_star: float
    x_star: np.ndarray
    method: str
    resolution: Optional[float] = None

    def __post_init__(self):
        if self.method not in ("grid", "vertex_enumeration", "analytic"):
            raise ValueError(f"unknown oracle method {self.method!r}")
        if self.method == "grid" and self.resolution is None:
            raise ValueError("grid results must carry their resolution")
        object.__setattr__(self, "x_star", as_vector(self.x_star, name="x_star"))
        object.__setattr__(self, "f_star", float(self.f_star))


# ---------------------------------------------------------------------------
# deterministic oracles


@dataclass(frozen=True, eq=False)
class SubgradientOracle:
    """Function value and subgradient of a convex function.

    ``lipschitz`` bounds the dual norm of subgradients over the feasible set,
    ``mu`` is the declared strong-convexity modulus in the setup norm and
    ``smoothness`` the Lipschitz constant of the gradient (when smooth).
    ``quad = (Q, q, c0)`` is set when the function is the quadratic
    ``1/2 x'Qx + q'x + c0``.
    """

    value: Callable
    subgrad: Callable
    lipschitz: Optional[float] = None
    mu: float = 0.0
    smoothness: Optional[float] = None
    quad: Optional[tuple] = None

    def __call__(self, x):
        return self.value(x)


def _set_vertices(s):
    if isinstance(s, BallIntersection):
        s = s.base
    if isinstance(s, Box) and s.dim > 14:
        return None
    return s.vertices()


def _dual_norm_fn(norm_kind):
    if norm_kind == "l2":
        return lambda g: float(np.linalg.norm(g))
    if norm_kind == "l1":
        return lambda g: float(np.max(np.abs(g)))
    raise ValueError(f"unknown norm kind {norm_kind!r}")


def _row_dual_norms(G, norm_kind):
    if norm_kind == "l2":
        return np.linalg.norm(G, axis=1)
    return np.max(np.abs(G), axis=1)


def quadratic_oracle(Q, q, c0, setup, mu=0.0):
    """Oracle for ``1/2 x'Qx + q'x + c0`` with constants computed on ``setup.set``.

    ``Q`` is symmetrized.  The Lipschitz constant is the maximum of
    ``||Qx + q||_*`` over the vertices of the set (a convex function attains
    its maximum at a vertex).
    """
    n = setup.dim
    q = as_vector(q, n, "q")
    if Q is None:
        Q = np.zeros((n, n))
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (n, n):
        raise ValueError(f"Q must be {n}x{n}, got {Q.shape}")
    Q = 0.5 * (Q + Q.T)
    c0 = float(c0)
    linear = not np.any(Q)

    if linear:
        def value(x):
            return float(q @ x) + c0

        def subgrad(x):
            return q.copy()
    else:
        def value(x):
            return 0.5 * float(x @ Q @ x) + float(q @ x) + c0

        def subgrad(x):
            return Q @ x + q

    dn = _dual_norm_fn(setup.norm_kind)
    verts = _set_vertices(setup.set)
    lip = None if verts is None else max(dn(Q @ v + q) for v in verts)
    if setup.norm_kind == "l2":
        smooth = float(np.max(np.abs(np.linalg.eigvalsh(Q))))
    else:
        smooth = float(np.max(np.abs(Q)))
    return SubgradientOracle(value, subgrad, lipschitz=lip, mu=float(mu),
                             smoothness=smooth, quad=(Q, q, c0))


@dataclass(frozen=True, eq=False)
class MaxConstraint:
    """``g(x) = max_i g_i(x)`` with the active part's subgradient."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("a max constraint needs at least one part")
        object.__setattr__(self, "parts", parts)

    @property
    def m(self):
        return len(self.parts)

    @property
    def lipschitz(self):
        lips = [p.lipschitz for p in self.parts]
        return None if any(v is None for v in lips) else max(lips)

    @property
    def mu(self):
        return min(p.mu for p in self.parts)

    def eval_with_active(self, x):
        best, i = float(self.parts[0].value(x)), 0
        for j in range(1, len(self.parts)):
            v = float(self.parts[j].value(x))
            if v > best:  # strict: the first maximal index wins ties
                best, i = v, j
        return best, i

    def value(self, x):
        return self.eval_with_active(x)[0]

    __call__ = value

    def subgrad_with_active(self, x):
        val, i = self.eval_with_active(x)
        return val, i, self.parts[i].subgrad(x)

    def subgrad(self, x):
        return self.subgrad_with_active(x)[2]


def audit_oracle(oracle, setup, n_samples=1000, rng=None, tol=AUDIT_TOL):
    """Check the subgradient inequality (with the declared ``mu``) and the
    Lipschitz bound on sampled pairs of the set.

    Returns the largest violation found; raises ``ValueError`` when it
    exceeds ``tol``.
    """
    rng = make_rng(12345) if rng is None else rng
    pts = setup.set.sample(rng, 2 * n_samples)
    if len(pts) < 2:
        return 0.0
    xs, ys = pts[: len(pts) // 2], pts[len(pts) // 2:]
    if oracle.quad is not None and setup.dual_scale == 1.0 and setup.norm_kind in ("l1", "l2"):
        return _audit_quadratic(oracle, setup, xs, ys, tol)
    worst = 0.0
    for x, y in zip(xs, ys):
        g = oracle.subgrad(x)
        gap = oracle.value(y) - oracle.value(x) - g @ (y - x) - 0.5 * oracle.mu * setup.norm(y - x) ** 2
        worst = max(worst, -gap)
        if oracle.lipschitz is not None and setup.dual_norm(g) > oracle.lipschitz + 1e-12:
            raise ValueError(f"oracle audit failed: ||subgrad||_* = {setup.dual_norm(g):.6g} "
                             f"exceeds declared Lipschitz constant {oracle.lipschitz:.6g}")
    if worst > tol:
        raise ValueError(f"oracle audit failed: subgradient inequality violated by {worst:.3e}")
    return worst


def _audit_quadratic(oracle, setup, xs, ys, tol):
    # batched form of the loop in audit_oracle
    Q, q, c0 = oracle.quad
    xs, ys = xs[: len(ys)], ys[: len(xs)]

    def val(X):
        return X @ q + c0 + 0.5 * np.einsum("ij,jk,ik->i", X, Q, X)

    G = xs @ Q + q
    D = ys - xs
    nrm = np.linalg.norm(D, axis=1) if setup.norm_kind == "l2" else np.abs(D).sum(1)
    gap = val(ys) - val(xs) - np.einsum("ij,ij->i", G, D) - 0.5 * oracle.mu * nrm**2
    worst = max(0.0, float(np.max(-gap)))
    if oracle.lipschitz is not None:
        dn = _row_dual_norms(G, setup.norm_kind)
        i = int(np.argmax(dn))
        if dn[i] > oracle.lipschitz + 1e-12:
            raise ValueError(f"oracle audit failed: ||subgrad||_* = {dn[i]:.6g} "
                             f"exceeds declared Lipschitz constant {oracle.lipschitz:.6g}")
    if worst > tol:
        raise ValueError(f"oracle audit failed: subgradient inequality violated by {worst:.3e}")
    return worst


# ---------------------------------------------------------------------------
# stochastic oracles


@dataclass(frozen=True, eq=False)
class StochasticOracle:
    """Unbiased stochastic subgradient with an almost-sure dual-norm bound.

    Every draw is checked against ``bound_M`` and raises ``BoundViolation``
    when exceeded.
    """

    sample_fn: Callable
    bound_M: float
    norm_kind: str = "l2"
    batch_fn: Optional[Callable] = None

    def sample(self, x, rng):
        g = self.sample_fn(x, rng)
        nrm = _dual_norm_fn(self.norm_kind)(g)
        if not nrm <= self.bound_M:
            raise BoundViolation(f"stochastic subgradient norm {nrm!r} exceeds bound {self.bound_M!r}")
        return g

    def sample_batch(self, x, rng, n):
        if self.batch_fn is None:
            return np.array([self.sample(x, rng) for _ in range(n)])
        G = self.batch_fn(x, rng, n)
        norms = _row_dual_norms(G, self.norm_kind)
        if not np.all(norms <= self.bound_M):
            raise BoundViolation(f"stochastic subgradient norm {norms.max()!r} exceeds bound {self.bound_M!r}")
        return G


def _simplex_weights(x, tol=1e-9):
    x = np.asarray(x, dtype=float)
    if np.any(x < -tol):
        raise ValueError("column sampling needs a point of the simplex (negative component)")
    w = np.maximum(x, 0.0)
    s = w.sum()
    if not s > 0:
        raise ValueError("column sampling needs a point of the simplex (zero mass)")
    return np.cumsum(w / s)


def _pick_columns(cdf, u):
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.shape[0] - 1)


def column_sample_gradient(A, x, rng):
    """Column ``A[:, xi]`` with ``xi ~ Categorical(x)``; its mean is ``A x``.

    ``x`` is renormalized onto the simplex first; components below ``-1e-9``
    are rejected.
    """
    A = np.asarray(A, dtype=float)
    cdf = _simplex_weights(x)
    j = int(_pick_columns(cdf, rng.random()))
    return A[:, j].copy()


def column_sampling_oracle(A, norm_kind="l2"):
    """Stochastic gradient of ``1/2 x'Ax`` on the simplex (``A`` symmetric)."""
    A = np.asarray(A, dtype=float)
    bound = float(np.max(_row_dual_norms(A.T, norm_kind)))

    def batch(x, rng, n):
        cdf = _simplex_weights(x)
        return A[:, _pick_columns(cdf, rng.random(n))].T

    return StochasticOracle(lambda x, rng: column_sample_gradient(A, x, rng), bound, norm_kind, batch)


def _zero_noise_bound(bound):
    # rounding slack on a bound computed at vertices for a smooth gradient
    return bound * (1.0 + 1e-12) + 1e-300


def exact_stochastic_oracle(subgrad, bound, norm_kind="l2"):
    """Zero-noise oracle: returns the deterministic subgradient."""

    def batch(x, rng, n):
        return np.tile(subgrad(x), (n, 1))

    return StochasticOracle(lambda x, rng: subgrad(x), _zero_noise_bound(bound), norm_kind, batch)


def coordinate_noise_oracle(subgrad, bound, scale, dim, norm_kind="l2"):
    """Subgradient plus ``+-scale`` on one uniformly chosen coordinate.

    The perturbation has mean zero and dual norm ``scale`` in both l2 and
    l-infinity, so ``bound + scale`` bounds every draw.
    """
    scale = float(scale)

    def sample(x, rng):
        g = np.array(subgrad(x), dtype=float)
        r = int(rng.integers(2 * dim))
        g[r // 2] += scale if r % 2 == 0 else -scale
        return g

    def batch(x, rng, n):
        G = np.tile(np.asarray(subgrad(x), dtype=float), (n, 1))
        r = rng.integers(2 * dim, size=n)
        G[np.arange(n), r // 2] += np.where(r % 2 == 0, scale, -scale)
        return G

    return StochasticOracle(sample, _zero_noise_bound(bound) + scale, norm_kind, batch)


# ---------------------------------------------------------------------------
# instances


@dataclass(eq=False)
class ProblemInstance:
    """``min f(x)`` over ``x in X`` subject to ``g(x) = max_i g_i(x) <= 0``.

    ``theta0_sq`` defaults to ``max_X d``.  ``mu`` is the declared common
    strong-convexity modulus of ``f`` and ``g`` (0 when not strongly
    convex).  Construction searches for a Slater point and raises
    ``SlaterError`` when none is found.
    """

    setup: object
    objective: SubgradientOracle
    constraint: MaxConstraint
    stoch_objective: Optional[StochasticOracle] = None
    stoch_constraint: Optional[StochasticOracle] = None
    theta0_sq: Optional[float] = None
    x0: Optional[np.ndarray] = None
    r0_sq: Optional[float] = None
    known_optimum: Optional[OracleResult] = None
    mu: float = 0.0
    kind: str = "custom"
    seed: int = 0
    description: dict = field(default_factory=dict)
    slater_point: Optional[np.ndarray] = None
    audit: bool = True

    def __post_init__(self):
        if not isinstance(self.constraint, MaxConstraint):
            self.constraint = MaxConstraint((self.constraint,))
        if self.theta0_sq is None:
            self.theta0_sq = float(self.setup.theta0_sq_default)
        if not self.theta0_sq > 0:
            raise ValueError("theta0_sq must be positive")
        if self.x0 is not None:
            self.x0 = self.setup.check(self.x0, "x0")
        if self.slater_point is None:
            self.slater_point = self._find_slater()
        if self.audit:
            rng = make_rng(self.seed + 1)
            audit_oracle(self.objective, self.setup, rng=rng)
            for part in self.constraint.parts:
                audit_oracle(part, self.setup, rng=rng)
        self.check_start()

    def check_start(self):
        """Raise when ``||x0 - x*||^2 > r0_sq`` for a known optimum."""
        opt = self.known_optimum
        if opt is not None and self.x0 is not None and self.r0_sq is not None:
            diff = self.x0 - opt.x_star
            if self.setup.norm(diff) ** 2 > self.r0_sq * (1 + 1e-12):
                raise ValueError("||x0 - x_star||^2 exceeds r0_sq")

    @property
    def dim(self):
        return self.setup.dim

    @property
    def dual_certified(self):
        """True when ``theta0_sq >= max_X d`` (bounded set)."""
        return self.theta0_sq >= self.setup.max_d

    def f(self, x):
        return self.objective.value(x)

    def g(self, x):
        return self.constraint.value(x)

    def _find_slater(self):
        rng = make_rng(self.seed)
        x_c = self.setup.prox_center()
        if self.constraint.value(x_c) < 0:
            return x_c
        pts = self.setup.set.sample(rng, SLATER_SAMPLES)
        for x in pts:
            if self.constraint.value(x) < 0:
                return x
        raise SlaterError(f"no point with g(x) < 0 among {SLATER_SAMPLES} interior samples")


def eval_constraint_with_active(instance, x):
    """``(g(x), i)`` where part ``i`` attains the max (lowest index on ties)."""
    return instance.constraint.eval_with_active(x)


def exact_optimum(setup, objective, parts):
    """Exact optimum for a quadratic objective with linear constraint parts
    over a box or simplex, by active-set enumeration."""
    if objective.quad is None or any(p.quad is None or np.any(p.quad[0]) for p in parts):
        raise ValueError("exact optimum needs a quadratic objective and linear constraints")
    s = setup.set
    if isinstance(s, BallIntersection):
        raise ValueError("exact optimum is not available on ball intersections")
    A_ub, b_ub, A_eq, b_eq = s.linear_constraints()
    rows = [p.quad[1] for p in parts]
    offs = [-p.quad[2] for p in parts]
    A_ub = np.vstack([A_ub, np.array(rows)])
    b_ub = np.concatenate([b_ub, np.array(offs)])
    Q, q, c0 = objective.quad
    val, x = _qp.minimize_quadratic(Q, q, c0, A_ub, b_ub, A_eq, b_eq)
    return OracleResult(val, x, "vertex_enumeration")


def _linear_parts(constraint_vectors, offsets, setup):
    vecs = [as_vector(c, setup.dim, "constraint vector") for c in constraint_vectors]
    if offsets is None:
        offsets = [0.0] * len(vecs)
    if len(offsets) != len(vecs):
        raise ValueError("one offset per constraint vector is required")
    return [quadratic_oracle(None, c, b, setup) for c, b in zip(vecs, offsets)]


def make_linear_max_problem(c, constraint_vectors, offsets, setup, **kwargs):
    """``f(x) = <c, x>``, ``g_i(x) = <c_i, x> + b_i``.

    The optimum is computed exactly by vertex enumeration and stored as
    ``known_optimum``.
    """
    c = as_vector(c, setup.dim, "c")
    objective = quadratic_oracle(None, c, 0.0, setup)
    parts = _linear_parts(constraint_vectors, offsets, setup)
    inst = ProblemInstance(setup, objective, MaxConstraint(parts), kind="linear_max", **kwargs)
    if inst.known_optimum is None:
        inst.known_optimum = exact_optimum(setup, objective, parts)
        inst.check_start()
    return inst


def make_quadratic_simplex_problem(A, constraint_vectors, setup, offsets=None, noise=None, **kwargs):
    """``f(x) = 1/2 <Ax, x>`` on the simplex with ``g(x) = max_i <c_i, x> + b_i``.

    ``A`` is symmetrized.  The stochastic objective oracle samples a column
    of ``A`` with probabilities ``x``; the stochastic constraint oracle is
    exact unless ``noise`` (a coordinate-noise scale) is given.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if not isinstance(setup.set, Simplex):
        raise ValueError("the quadratic simplex problem needs a simplex setup")
    A = 0.5 * (A + A.T)
    objective = quadratic_oracle(A, np.zeros(setup.dim), 0.0, setup)
    parts = _linear_parts(constraint_vectors, offsets, setup)
    constraint = MaxConstraint(parts)
    kwargs.setdefault("stoch_objective", column_sampling_oracle(A, setup.norm_kind))
    kwargs.setdefault("stoch_constraint", _constraint_stoch(constraint, setup, noise))
    inst = ProblemInstance(setup, objective, constraint, kind="quadratic_simplex", **kwargs)
    if inst.known_optimum is None:
        inst.known_optimum = exact_optimum(setup, objective, parts)
        inst.check_start()
    return inst


def _constraint_stoch(constraint, setup, noise):
    if constraint.lipschitz is None:
        return None
    if noise:
        return coordinate_noise_oracle(constraint.subgrad, constraint.lipschitz, noise,
                                       setup.dim, setup.norm_kind)
    return exact_stochastic_oracle(constraint.subgrad, constraint.lipschitz, setup.norm_kind)


def make_quadratic_problem(objective, constraints, setup, mu=0.0, noise=None, constraint_mu=None,
                           **kwargs):
    """General quadratic objective and quadratic constraint parts.

    ``objective`` and each constraint are ``(Q, q, c0)`` triples
    (``Q`` may be ``None`` for affine functions).  ``mu`` is the declared
    common strong-convexity modulus, audited by sampling.  ``noise`` is an
    optional ``(objective_scale, constraint_scale)`` pair for coordinate
    noise oracles; zero-noise oracles are installed otherwise.  The optimum
    is computed exactly when all constraints are affine.

    ``constraint_mu`` declares a different modulus for the constraint parts
    (e.g. 0 for affine constraints); the restart guarantees assume the
    common value ``mu``.
    """
    Q, q, c0 = objective
    f = quadratic_oracle(Q, q, c0, setup, mu=mu)
    cmu = mu if constraint_mu is None else constraint_mu
    parts = [quadratic_oracle(Qi, qi, ci, setup, mu=cmu) for Qi, qi, ci in constraints]
    constraint = MaxConstraint(parts)
    s_f, s_g = noise if noise else (0.0, 0.0)
    if s_f:
        stoch_f = coordinate_noise_oracle(f.subgrad, f.lipschitz, s_f, setup.dim, setup.norm_kind)
    else:
        stoch_f = exact_stochastic_oracle(f.subgrad, f.lipschitz, setup.norm_kind)
    kwargs.setdefault("stoch_objective", stoch_f)
    kwargs.setdefault("stoch_constraint", _constraint_stoch(constraint, setup, s_g))
    inst = ProblemInstance(setup, f, constraint, mu=mu, kind="quadratic", **kwargs)
    if inst.known_optimum is None and all(not np.any(p.quad[0]) for p in parts):
        inst.known_optimum = exact_optimum(setup, f, parts)
        inst.check_start()
    return inst


# ---------------------------------------------------------------------------
# JSON descriptions


def _set_from_dict(desc, dim):
    kind = desc.get("kind", "simplex")
    if kind == "simplex":
        return Simplex(desc.get("dim", dim))
    if kind == "box":
        return Box(desc["lower"], desc["upper"])
    raise ValueError(f"unknown set kind {kind!r}")


def setup_from_dict(desc, dim):
    """Build a setup from ``"entropy"``/``"euclidean"`` or a dict with
    ``name``, ``set`` and (Euclidean only) ``center``."""
    if isinstance(desc, str):
        desc = {"name": desc}
    name = desc["name"]
    fset = _set_from_dict(desc.get("set", {"kind": "simplex"}), dim)
    if name == "entropy":
        return EntropySetup(fset)
    if name == "euclidean":
        return EuclideanSetup(fset, desc.get("center"))
    raise ValueError(f"unknown setup {name!r}")


def _quad_triple(d, dim):
    Q = d.get("Q")
    return (None if Q is None else np.asarray(Q, dtype=float),
            np.asarray(d.get("q", [0.0] * dim), dtype=float),
            float(d.get("c", 0.0)))


def instance_from_dict(desc):
    """Instance from a JSON-style description.

    Keys: ``kind`` (``linear_max``, ``quadratic_simplex`` or ``quadratic``),
    ``setup``, the kind's data (``c``/``constraint_vectors``/``offsets``,
    ``A``, or ``objective``/``constraints`` triples), and optionally
    ``theta0_sq``, ``mu``, ``seed``, ``x0``, ``r0_sq``, ``noise`` and
    ``known_optimum``.
    """
    kind = desc["kind"]
    if kind == "linear_max":
        dim = len(desc["c"])
    elif kind == "quadratic_simplex":
        dim = len(desc["A"])
    elif kind == "quadratic":
        dim = len(desc["objective"]["q"])
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    setup = setup_from_dict(desc.get("setup", "euclidean"), dim)
    kw = {"seed": int(desc.get("seed", 0)), "description": dict(desc)}
    for key in ("theta0_sq", "r0_sq"):
        if desc.get(key) is not None:
            kw[key] = float(desc[key])
    if desc.get("x0") is not None:
        kw["x0"] = np.asarray(desc["x0"], dtype=float)
    if desc.get("known_optimum") is not None:
        ko = desc["known_optimum"]
        kw["known_optimum"] = OracleResult(ko["f_star"], ko["x_star"], ko.get("provenance", "analytic"),
                                           ko.get("resolution"))
    noise = desc.get("noise") or {}
    if kind == "linear_max":
        if desc.get("mu"):
            kw["mu"] = float(desc["mu"])
        return make_linear_max_problem(desc["c"], desc["constraint_vectors"],
                                       desc.get("offsets"), setup, **kw)
    if kind == "quadratic_simplex":
        if desc.get("mu"):
            kw["mu"] = float(desc["mu"])
        return make_quadratic_simplex_problem(desc["A"], desc["constraint_vectors"], setup,
                                              offsets=desc.get("offsets"),
                                              noise=noise.get("constraint"), **kw)
    objective = _quad_triple(desc["objective"], dim)
    constraints = [_quad_triple(c, dim) for c in desc["constraints"]]
    pair = (noise.get("objective", 0.0), noise.get("constraint", 0.0)) if noise else None
    cmu = desc.get("constraint_mu")
    return make_quadratic_problem(objective, constraints, setup, mu=float(desc.get("mu", 0.0)),
                                  noise=pair, constraint_mu=None if cmu is None else float(cmu), **kw)


def lipschitz_max(instance):
    """``max(M_f, M_g)`` or ``None`` when either is unknown."""
    mf, mg = instance.objective.lipschitz, instance.constraint.lipschitz
    if mf is None or mg is None:
        return None
    return max(mf, mg)


def stochastic_bound_max(instance):
    """``max`` of the almost-sure bounds of the installed stochastic oracles."""
    so, sc = instance.stoch_objective, instance.stoch_constraint
    if so is None or sc is None:
        return None
    return max(so.bound_M, sc.bound_M)

