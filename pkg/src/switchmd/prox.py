"""Proximal setups: feasible sets, prox-functions, Bregman divergences and
the mirror-descent step.

Two setups are provided:

* ``EuclideanSetup`` -- l2 norm, ``d(x) = 1/2 ||x - c||^2`` (shifted so that
  ``min_X d = 0``) on a box, a simplex or a box/simplex intersected with a
  ball.  The mirror step is a Euclidean projection.
* ``EntropySetup`` -- l1 norm, ``d(x) = sum x_i ln x_i + ln n`` on the unit
  simplex.  The mirror step is the multiplicative-weights update.

``ShiftedSetup`` wraps a Euclidean setup with the rescaled prox-function
``d((x - center) / radius)`` used by the restart schemes.

All objects are immutable; all functions are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainError",
    "UnsupportedSetupError",
    "Box",
    "Simplex",
    "BallIntersection",
    "ProximalSetup",
    "EuclideanSetup",
    "EntropySetup",
    "ShiftedSetup",
    "as_vector",
    "norm",
    "dual_norm",
    "bregman",
    "mirror_step",
    "prox_center",
    "project_simplex",
    "project_box",
    "project_ball",
    "dykstra_projection",
]

# lower clamp applied inside the entropy gradient
ENTROPY_FLOOR = 1e-300
MEMBERSHIP_TOL = 1e-12


class DomainError(ValueError):
    """A point lies outside the region where an operation is defined."""


class UnsupportedSetupError(ValueError):
    """The requested combination of setup and feasible set is not supported."""


def as_vector(x, dim=None, name="x"):
    """Return ``x`` as a finite 1-d float array, checking its dimension."""
    v = x if type(x) is np.ndarray and x.dtype == np.float64 else np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"{name} has dimension {v.shape[0]}, expected {dim}")
    if not np.isfinite(v).all():
        raise ValueError(f"{name} has non-finite components")
    return v


# ---------------------------------------------------------------------------
# Euclidean projections


def project_simplex(y):
    """Euclidean projection onto the unit simplex (sort-based, exact).

    Finds ``tau`` with ``sum(max(y - tau, 0)) = 1`` from the sorted
    components and returns ``max(y - tau, 0)``.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, n + 1)
    cond = u - css / ind > 0
    rho = ind[cond][-1]
    tau = css[rho - 1] / rho
    return np.maximum(y - tau, 0.0)


def project_box(y, lower, upper):
    return np.minimum(np.maximum(y, lower), upper)


def project_ball(y, center, radius_sq):
    diff = y - center
    dist_sq = float(diff @ diff)
    if dist_sq <= radius_sq:
        return np.array(y, dtype=float)
    return center + diff * math.sqrt(radius_sq / dist_sq)


def dykstra_projection(y, proj_a, proj_b, tol=1e-12, max_iter=10_000):
    """Project ``y`` onto the intersection of two closed convex sets.

    Dykstra's alternating projections with correction terms.  Stops when the
    iterate and both correction terms change by less than ``tol`` (sup
    norm) over one sweep; the iterate alone can stall while the corrections
    still move.

    Returns
    -------
    x : ndarray
    n_iter : int
    """
    x = np.array(y, dtype=float)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for it in range(1, max_iter + 1):
        a = proj_a(x + p)
        p_new = x + p - a
        x_new = proj_b(a + q)
        q_new = a + q - x_new
        moved = max(np.max(np.abs(x_new - x)), np.max(np.abs(p_new - p)), np.max(np.abs(q_new - q)))
        x, p, q = x_new, p_new, q_new
        if moved <= tol:
            return x, it
    return x, max_iter


# ---------------------------------------------------------------------------
# Feasible sets


@dataclass(frozen=True)
class Box:
    """Coordinate box ``lower <= x <= upper``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lower, name="lower")
        hi = as_vector(self.upper, dim=lo.shape[0], name="upper")
        if np.any(lo > hi):
            raise ValueError("box has lower > upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    kind = "box"

    @property
    def dim(self):
        return self.lower.shape[0]

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def project(self, y):
        return project_box(y, self.lower, self.upper)

    def vertices(self):
        pts = itertools.product(*zip(self.lower, self.upper))
        return np.array(list(pts), dtype=float)

    def linear_constraints(self):
        """``(A_ub, b_ub, A_eq, b_eq)`` describing the set."""
        n = self.dim
        eye = np.eye(n)
        return np.vstack([-eye, eye]), np.concatenate([-self.lower, self.upper]), None, None

    def sample(self, rng, size):
        return rng.uniform(self.lower, self.upper, size=(size, self.dim))


@dataclass(frozen=True)
class Simplex:
    """Unit simplex ``{x >= 0, sum x = 1}`` in ``R^dim``."""

    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("simplex dimension must be >= 1")
        object.__setattr__(self, "dim", int(self.dim))

    kind = "simplex"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol)

    def project(self, y):
        return project_simplex(y)

    def vertices(self):
        return np.eye(self.dim)

    def linear_constraints(self):
        n = self.dim
        return -np.eye(n), np.zeros(n), np.ones((1, n)), np.ones(1)

    def sample(self, rng, size):
        return rng.dirichlet(np.ones(self.dim), size=size)


@dataclass(frozen=True)
class BallIntersection:
    """``base ∩ {||x - center||_2^2 <= radius_sq}``; projection by Dykstra."""

    base: object
    center: np.ndarray
    radius_sq: float
    tol: float = 1e-12
    max_iter: int = 10_000

    def __post_init__(self):
        c = as_vector(self.center, dim=self.base.dim, name="center")
        if not self.radius_sq > 0:
            raise ValueError("radius_sq must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius_sq", float(self.radius_sq))

    kind = "ball_intersection"

    @property
    def dim(self):
        return self.base.dim

    def contains(self, x, tol=MEMBERSHIP_TOL):
        d = np.asarray(x, dtype=float) - self.center
        return self.base.contains(x, tol) and float(d @ d) <= self.radius_sq + tol

    def _in_ball(self, x):
        d = x - self.center
        return float(d @ d) <= self.radius_sq

    def project(self, y):
        # exact shortcuts when one of the two sets is not binding
        a = self.base.project(y)
        if self._in_ball(a):
            return a
        b = project_ball(y, self.center, self.radius_sq)
        if self.base.contains(b, tol=0.0):
            return b
        x, _ = dykstra_projection(
            y,
            self.base.project,
            lambda z: project_ball(z, self.center, self.radius_sq),
            tol=self.tol,
            max_iter=self.max_iter,
        )
        return x

    def linear_constraints(self):
        return self.base.linear_constraints()

    def sample(self, rng, size):
        pts = self.base.sample(rng, size)
        keep = np.array([self._in_ball(p) for p in pts], dtype=bool)
        return pts[keep]


# ---------------------------------------------------------------------------
# Setups


class ProximalSetup:
    """Base class: a norm, a 1-strongly convex prox-function and its set.

    Subclasses implement ``d``, ``grad_d``, ``norm``, ``dual_norm`` and
    ``mirror_step``.  ``bregman`` is derived from ``d`` and ``grad_d``.
    """

    norm_kind = None
    set = None

    # scale applied to dual norms relative to the unshifted geometry
    dual_scale = 1.0

    @property
    def dim(self):
        return self.set.dim

    def check(self, x, name="x"):
        return as_vector(x, dim=self.dim, name=name)

    def in_domain(self, z):
        """True if ``d`` is differentiable at ``z``."""
        return True

    def bregman(self, z, x):
        z = self.check(z, "z")
        x = self.check(x)
        if not self.in_domain(z):
            raise DomainError("Bregman divergence needs z where d is differentiable")
        return float(self.d(x) - self.d(z) - self.grad_d(z) @ (x - z))

    def prox_center(self):
        raise NotImplementedError

    @property
    def theta0_sq_default(self):
        """Certified bound on ``d`` over the set (``max_X d``)."""
        return self.max_d


@dataclass(frozen=True, eq=False)
class EuclideanSetup(ProximalSetup):
    """l2 geometry with ``d(x) = 1/2 ||x - center||^2 - const``.

    ``const`` is ``1/2 dist(center, X)^2`` so that ``min_X d = 0``; the
    minimizer is the projection of ``center`` onto the set.  ``center``
    defaults to the Euclidean projection of the origin.
    """

    set: object
    center: np.ndarray = None
    _offset: float = field(default=0.0, init=False, repr=False)
    _x_c: np.ndarray = field(default=None, init=False, repr=False)

    norm_kind = "l2"

    def __post_init__(self):
        n = self.set.dim
        c = np.zeros(n) if self.center is None else as_vector(self.center, n, "center")
        object.__setattr__(self, "center", c)
        x_c = self.set.project(c)
        diff = x_c - c
        object.__setattr__(self, "_x_c", x_c)
        object.__setattr__(self, "_offset", 0.5 * float(diff @ diff))

    def d(self, x):
        diff = np.asarray(x, dtype=float) - self.center
        return 0.5 * float(diff @ diff) - self._offset

    def grad_d(self, x):
        return np.asarray(x, dtype=float) - self.center

    def norm(self, x):
        return float(np.linalg.norm(self.check(x)))

    def dual_norm(self, g):
        return float(np.linalg.norm(self.check(g, "g")))

    def bregman(self, z, x):
        z = self.check(z, "z")
        x = self.check(x)
        diff = x - z
        return 0.5 * float(diff @ diff)

    def mirror_step(self, x, p):
        x = self.check(x)
        p = self.check(p, "p")
        return self.set.project(x - p)

    def prox_center(self):
        return self._x_c.copy()

    def with_set(self, new_set):
        """Same prox-function on another feasible set."""
        return EuclideanSetup(new_set, self.center)

    @property
    def max_d(self):
        s = self.set
        if isinstance(s, BallIntersection):
            s = s.base
        return max(self.d(v) for v in s.vertices())

    @property
    def max_bregman(self):
        """``sup_{x,y in X} V[x](y)``: half the squared diameter."""
        if isinstance(self.set, Simplex):
            return 1.0 if self.set.dim > 1 else 0.0
        if isinstance(self.set, Box):
            w = self.set.upper - self.set.lower
            return 0.5 * float(w @ w)
        base = EuclideanSetup(self.set.base).max_bregman
        return min(base, 2.0 * self.set.radius_sq)

    # d(x) = 1/2 ||x||^2 is bounded by 1/2 on the unit ball, and
    # V[z](x) = 1/2 ||x - z||^2 has quadratic growth constant 1.
    omega = 1.0


@dataclass(frozen=True, eq=False)
class EntropySetup(ProximalSetup):
    """l1 geometry with the negative entropy on the unit simplex."""

    set: Simplex

    norm_kind = "l1"

    def __post_init__(self):
        if not isinstance(self.set, Simplex):
            raise UnsupportedSetupError("entropy setup is defined on the simplex only")

    @classmethod
    def on_simplex(cls, n):
        return cls(Simplex(n))

    def in_domain(self, z):
        return bool(np.all(np.asarray(z) > 0))

    def d(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        return float(np.sum(x[pos] * np.log(x[pos]))) + math.log(self.dim)

    def grad_d(self, x):
        return np.log(np.maximum(np.asarray(x, dtype=float), ENTROPY_FLOOR)) + 1.0

    def norm(self, x):
        return float(np.sum(np.abs(self.check(x))))

    def dual_norm(self, g):
        return float(np.max(np.abs(self.check(g, "g"))))

    def mirror_step(self, x, p):
        x = self.check(x)
        p = self.check(p, "p")
        if np.any(x < 0):
            raise DomainError("entropy mirror step needs a point of the simplex")
        with np.errstate(divide="ignore"):
            logits = np.log(x) - p
        logits -= np.max(logits)
        w = np.exp(logits)
        out = w / w.sum()
        return np.maximum(out, ENTROPY_FLOOR)

    def prox_center(self):
        return np.full(self.dim, 1.0 / self.dim)

    @property
    def max_d(self):
        return math.log(self.dim)

    max_bregman = math.inf
    omega = None


@dataclass(frozen=True, eq=False)
class ShiftedSetup(ProximalSetup):
    """Rescaled prox-function ``d_p(x) = d((x - center) / radius)``.

    ``d_p`` is 1-strongly convex with respect to ``||.|| / radius`` whose dual
    norm is ``radius * ||.||_*``.  Only Euclidean bases are supported: the
    rescaled entropy is not defined outside the simplex.  ``set`` defaults
    to the base set.
    """

    base: EuclideanSetup
    center: np.ndarray
    radius: float
    set: object = None

    def __post_init__(self):
        if not isinstance(self.base, EuclideanSetup):
            raise UnsupportedSetupError("shifted setups need a Euclidean base")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        c = as_vector(self.center, self.base.dim, "center")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if self.set is None:
            object.__setattr__(self, "set", self.base.set)

    norm_kind = "l2"

    @property
    def dual_scale(self):
        return self.radius

    def _scaled(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.radius

    def d(self, x):
        w = self._scaled(x)
        return 0.5 * float(w @ w)

    def grad_d(self, x):
        return self._scaled(x) / self.radius

    def norm(self, x):
        return float(np.linalg.norm(self.check(x))) / self.radius

    def dual_norm(self, g):
        return float(np.linalg.norm(self.check(g, "g"))) * self.radius

    def bregman(self, z, x):
        z = self.check(z, "z")
        x = self.check(x)
        return self.base.bregman(self._scaled(z), self._scaled(x))

    def mirror_step(self, x, p):
        x = self.check(x)
        p = self.check(p, "p")
        return self.set.project(x - self.radius**2 * p)

    def prox_center(self):
        return self.set.project(self.center)


# ---------------------------------------------------------------------------
# functional interface


def norm(setup, x):
    return setup.norm(x)


def dual_norm(setup, g):
    return setup.dual_norm(g)


def bregman(setup, z, x):
    """Bregman divergence ``V[z](x) = d(x) - d(z) - <grad d(z), x - z>``."""
    return setup.bregman(z, x)


def mirror_step(setup, x, p):
    """``argmin_{u in X} <p, u> + V[x](u)``; the stepsize is folded into ``p``."""
    return setup.mirror_step(x, p)


def prox_center(setup):
    return setup.prox_center()
