import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from switchmd.problems import (
    MaxConstraint,
    ProblemInstance,
    column_sampling_oracle,
    exact_stochastic_oracle,
    make_linear_max_problem,
    make_quadratic_problem,
    make_quadratic_simplex_problem,
    make_rng,
    quadratic_oracle,
)
from switchmd.prox import BallIntersection, Box, EntropySetup, EuclideanSetup, Simplex
from switchmd.verify import (
    GridError,
    biased_oracle,
    check_step_inequality,
    deviation_experiment,
    grid_consistency,
    grid_minimize,
    grid_optimum,
    unbiasedness_test,
    verify_suite,
)


def p1():
    return make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], EntropySetup(Simplex(2)))


# --- grid oracle ---------------------------------------------------------------


def test_grid_p1():
    res = grid_optimum(p1(), 1e-3)
    assert res.method == "grid" and res.resolution == 1e-3
    assert abs(res.f_star - 0.4) <= 1.5e-3
    coarse, fine, ok = grid_consistency(p1(), 1e-3)
    assert ok


def test_grid_unconstrained_vertex():
    inst = make_linear_max_problem([1.0, 0.0], [[0.0, 0.0]], [-1.0], EuclideanSetup(Simplex(2)))
    res = grid_optimum(inst, 1e-3)
    assert res.f_star == 0.0
    np.testing.assert_array_equal(res.x_star, [0.0, 1.0])


def test_grid_infeasible_names_slater_witness():
    s = EuclideanSetup(Simplex(2))
    g = quadratic_oracle(None, [0.0, 0.0], 1.0, s)
    # an explicit (wrong) witness skips the construction-time search
    inst = ProblemInstance(s, quadratic_oracle(None, [1.0, 0.0], 0.0, s), MaxConstraint((g,)),
                           slater_point=np.array([0.5, 0.5]))
    with pytest.raises(GridError, match="Slater witness"):
        grid_optimum(inst, 1e-2)


def test_grid_dimension_cap():
    inst = make_linear_max_problem(np.ones(5), [np.zeros(5)], [-1.0], EuclideanSetup(Simplex(5)))
    with pytest.raises(ValueError):
        grid_optimum(inst, 0.1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["euclid", "entropy"]))
def test_grid_matches_exact_optimum(seed, kind):
    rng = make_rng(seed)
    n = int(rng.integers(2, 5))
    setup = EuclideanSetup(Simplex(n)) if kind == "euclid" else EntropySetup(Simplex(n))
    C = rng.uniform(-1, 1, (2, n))
    inst = make_linear_max_problem(rng.uniform(-1, 1, n), C, -(C.mean(1)) - 0.1, setup)
    r = 1e-2 if n == 4 else 1e-3
    res = grid_optimum(inst, r)
    L = inst.objective.lipschitz
    assert res.f_star >= inst.known_optimum.f_star - 1e-12
    # an l1-Lipschitz constant is converted to l2 by sqrt(n)
    slack = L * r * math.sqrt(n) * (math.sqrt(n) if kind == "entropy" else 1.0)
    assert res.f_star - inst.known_optimum.f_star <= slack
    assert inst.g(res.x_star) <= 0.0


def test_grid_two_resolutions_box_quadratic():
    s = EuclideanSetup(Box([0.0, 0.0], [1.0, 1.0]))
    inst = make_quadratic_problem((np.array([[2.0, 0.3], [0.3, 1.0]]), [-1.0, -0.2], 0.0),
                                  [(None, [1.0, 1.0], -1.2)], s)
    coarse, fine, ok = grid_consistency(inst, 1e-2)
    assert ok
    assert abs(fine.f_star - inst.known_optimum.f_star) <= inst.objective.lipschitz * 5e-3 * math.sqrt(2)


def test_grid_brute_force_path_quadratic_constraint():
    s = EuclideanSetup(Box([0.0, 0.0], [1.0, 1.0]))
    inst = make_quadratic_problem((None, [-1.0, -1.0], 0.0), [(2 * np.eye(2), [0.0, 0.0], -0.5)], s)
    res = grid_optimum(inst, 1e-3)
    # max x1 + x2 on the quarter disc of radius sqrt(0.5): 1 at (0.5, 0.5)
    assert abs(res.f_star + 1.0) <= math.sqrt(2) * 1e-3 * math.sqrt(2)
    assert inst.g(res.x_star) <= 0


def test_grid_minimize_ball_intersection():
    fset = BallIntersection(Box([0.0, 0.0], [1.0, 1.0]), np.array([0.0, 0.0]), 0.25)
    val, x = grid_minimize(lambda x: -(x[0] + x[1]), fset, 1e-2)
    assert abs(val + math.sqrt(0.5)) <= 2e-2
    assert float(x @ x) <= 0.25 + 1e-12


# --- one-step inequality -------------------------------------------------------


@pytest.mark.parametrize("setup", [EuclideanSetup(Simplex(3)), EntropySetup(Simplex(3)),
                                   EuclideanSetup(Box([-1.0, 0.0, 0.0], [1.0, 2.0, 1.0]))])
def test_step_inequality_u_equals_x(setup):
    f = quadratic_oracle(None, [0.3, -0.5, 0.2], 0.0, setup)
    x = setup.prox_center()
    for h in (1e-3, 0.1, 10.0):
        lhs, rhs, holds = check_step_inequality(setup, f, x, x, h)
        assert lhs == 0.0 and rhs >= -1e-15 and holds


def test_step_inequality_small_h_limit():
    setup = EntropySetup(Simplex(3))
    f = quadratic_oracle(None, [0.3, -0.5, 0.2], 0.0, setup)
    x, u = np.array([0.2, 0.3, 0.5]), np.array([0.6, 0.1, 0.3])
    lhs, rhs, _ = check_step_inequality(setup, f, x, u, 1e-10)
    assert abs(lhs) <= 1e-9 and abs(rhs) <= 1e-9


@pytest.mark.parametrize("kind", ["euclid_simplex", "entropy", "euclid_box"])
def test_step_inequality_randomized(kind):
    rng = make_rng({"euclid_simplex": 1, "entropy": 2, "euclid_box": 3}[kind])
    if kind == "euclid_simplex":
        setup = EuclideanSetup(Simplex(4))
    elif kind == "entropy":
        setup = EntropySetup(Simplex(4))
    else:
        setup = EuclideanSetup(Box(-np.ones(4), np.ones(4)))
    B = rng.normal(size=(4, 4))
    f = quadratic_oracle(B @ B.T, rng.normal(size=4), 0.0, setup)
    X = setup.set.sample(rng, 10_000)
    U = setup.set.sample(rng, 10_000)
    H = 10 ** rng.uniform(-3, 1, 10_000)
    D = rng.normal(size=(10_000, 4))
    for x, u, h, d in zip(X, U, H, D):
        if kind == "entropy":
            x = np.maximum(x, 1e-6)
            x /= x.sum()
        assert check_step_inequality(setup, f, x, u, h, d)[2]


def test_step_inequality_detects_corrupted_bregman():
    rng = make_rng(1)
    setup = EuclideanSetup(Simplex(3))
    f = quadratic_oracle(None, [1.0, -1.0, 0.5], 0.0, setup)
    bad = 0
    for x, u in zip(setup.set.sample(rng, 200), setup.set.sample(rng, 200)):
        bad += not check_step_inequality(setup, f, x, u, 0.01, bregman=lambda z, x: 0.0)[2]
    assert bad > 0


# --- unbiasedness ----------------------------------------------------------------


def test_column_sampler_unbiased_and_biased_control():
    rng = make_rng(3)
    A = rng.uniform(-1, 1, (3, 3))
    A = A + A.T
    oracle = column_sampling_oracle(A)
    x = rng.dirichlet(np.ones(3))
    dev, ok = unbiasedness_test(oracle, lambda x: A @ x, x, 100_000, rng)
    assert ok
    n = 100_000
    shift = np.array([10 * oracle.bound_M / math.sqrt(n), 0.0, 0.0])
    dev, ok = unbiasedness_test(biased_oracle(oracle, shift), lambda x: A @ x, x, n, rng)
    assert not ok


def test_zero_noise_has_zero_deviation():
    g = np.array([0.3, -0.4])
    oracle = exact_stochastic_oracle(lambda x: g, 0.5)
    dev, ok = unbiasedness_test(oracle, lambda x: g, np.zeros(2), 10_000)
    assert dev == 0.0 and ok


def test_unbiasedness_needs_enough_samples():
    oracle = column_sampling_oracle(np.eye(2))
    with pytest.raises(ValueError):
        unbiasedness_test(oracle, lambda x: x, np.array([0.5, 0.5]), 999)


# --- deviation experiment ------------------------------------------------------


def test_deviation_zero_noise_no_failures():
    s = EuclideanSetup(Simplex(2))
    inst = make_quadratic_problem((np.eye(2), np.zeros(2), 0.0), [(None, [0.0, 0.0], -1.0)], s)
    exp = deviation_experiment(inst, 0.25, 0.1, 10)
    assert exp.failures == 0
    assert exp.passed


def test_deviation_undersized_N_fails():
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    inst = make_quadratic_simplex_problem(A, [[-1.0, 0.0]], EuclideanSetup(Simplex(2)), offsets=[0.6])
    exp = deviation_experiment(inst, 0.01, 0.1, 50, N=1)
    assert exp.failures == 50
    assert not exp.passed


def test_deviation_band():
    from switchmd.verify import DeviationExperiment
    exp = DeviationExperiment(200, 30, 0.1)
    assert exp.band == pytest.approx(0.1 + 3 * math.sqrt(0.09 / 200))
    assert exp.passed
    assert not DeviationExperiment(200, 40, 0.1).passed


# --- suite -----------------------------------------------------------------------


def test_verify_suite_pristine():
    results = verify_suite(n_samples=200)
    assert not [r for r in results if r.status == "fail"]
    skips = [r for r in results if r.status == "skip"]
    assert skips and all("unsupported" in r.detail for r in skips)


def test_verify_suite_corrupted_bregman():
    results = verify_suite(n_samples=200, corrupt_bregman=True)
    failed = {r.name for r in results if r.status == "fail"}
    assert "step_inequality" in failed
