import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from switchmd.problems import (
    BoundViolation,
    MaxConstraint,
    OracleResult,
    SlaterError,
    StochasticOracle,
    audit_oracle,
    column_sample_gradient,
    column_sampling_oracle,
    coordinate_noise_oracle,
    eval_constraint_with_active,
    instance_from_dict,
    make_linear_max_problem,
    make_quadratic_problem,
    make_quadratic_simplex_problem,
    make_rng,
    quadratic_oracle,
)
from switchmd.prox import Box, EntropySetup, EuclideanSetup, Simplex


def const(v, setup):
    return quadratic_oracle(None, np.zeros(setup.dim), v, setup)


# --- max constraint ----------------------------------------------------------


def test_eval_with_active_examples():
    s = EuclideanSetup(Simplex(2))
    x = np.array([0.5, 0.5])
    assert MaxConstraint([const(-1.0, s), const(-2.0, s)]).eval_with_active(x) == (-1.0, 0)
    assert MaxConstraint([const(0.0, s), const(0.0, s)]).eval_with_active(x) == (0.0, 0)
    assert MaxConstraint([const(-3.0, s)]).eval_with_active(x) == (-3.0, 0)


def test_eval_constraint_with_active_on_instance():
    s = EuclideanSetup(Simplex(2))
    inst = make_linear_max_problem([1.0, 0.0], [[0.0, 0.0], [0.0, 0.0]], [-1.0, -2.0], s)
    assert eval_constraint_with_active(inst, np.array([0.3, 0.7])) == (-1.0, 0)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6))
def test_max_value_and_lowest_index(vals):
    s = EuclideanSetup(Simplex(2))
    g = MaxConstraint([const(v, s) for v in vals])
    val, i = g.eval_with_active(np.array([0.5, 0.5]))
    assert val == max(vals)
    assert i == vals.index(max(vals))


def test_active_subgradient_is_subgradient_of_active_part():
    s = EuclideanSetup(Simplex(3))
    rng = make_rng(1)
    parts = [quadratic_oracle(None, rng.normal(size=3), rng.normal(), s) for _ in range(4)]
    g = MaxConstraint(parts)
    for x in s.set.sample(rng, 100):
        val, i, grad = g.subgrad_with_active(x)
        np.testing.assert_array_equal(grad, parts[i].subgrad(x))
        for y in s.set.sample(rng, 20):
            assert g.value(y) >= val + grad @ (y - x) - 1e-12


# --- linear max problems -----------------------------------------------------


def test_linear_max_example_p1():
    inst = make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], EntropySetup(Simplex(2)))
    assert inst.known_optimum.method == "vertex_enumeration"
    assert abs(inst.known_optimum.f_star - 0.4) < 1e-12
    np.testing.assert_allclose(inst.known_optimum.x_star, [0.4, 0.6], atol=1e-12)
    assert inst.objective.lipschitz == 1.0
    assert inst.constraint.lipschitz == 1.0


def test_linear_max_zero_constraint_reduces_to_vertex_min():
    c = [0.7, -0.2, 0.4]
    inst = make_linear_max_problem(c, [[0.0, 0.0, 0.0]], [-1.0], EuclideanSetup(Simplex(3)))
    assert inst.known_optimum.f_star == pytest.approx(min(c), abs=1e-12)
    assert inst.g(np.array([0.1, 0.2, 0.7])) == -1.0


def test_linear_max_constant_objective():
    inst = make_linear_max_problem([0.0, 0.0], [[-1.0, 0.0]], [0.4], EuclideanSetup(Simplex(2)))
    assert inst.known_optimum.f_star == 0.0
    for x in Simplex(2).sample(make_rng(0), 20):
        assert inst.f(x) == 0.0


def test_lipschitz_constants_are_exact_dual_norms():
    s1 = EntropySetup(Simplex(3))
    inst = make_linear_max_problem([1.0, -3.0, 2.0], [[1.0, 2.0, -0.5]], [-5.0], s1)
    assert inst.objective.lipschitz == 3.0
    assert inst.constraint.lipschitz == 2.0
    s2 = EuclideanSetup(Simplex(3))
    inst = make_linear_max_problem([1.0, -3.0, 2.0], [[1.0, 2.0, -0.5]], [-5.0], s2)
    assert inst.objective.lipschitz == pytest.approx(math.sqrt(14))


def test_no_slater_point_raises():
    with pytest.raises(SlaterError):
        make_linear_max_problem([1.0, 0.0], [[0.0, 0.0]], [1.0], EuclideanSetup(Simplex(2)))
    # g = x1 on the simplex is never negative
    with pytest.raises(SlaterError):
        make_linear_max_problem([1.0, 0.0], [[1.0, 0.0]], [0.0], EuclideanSetup(Simplex(2)))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        make_linear_max_problem([1.0, 0.0, 0.0], [[-1.0, 0.0]], [0.4], EuclideanSetup(Simplex(2)))


def test_r0_sq_checked_against_known_optimum():
    s = EuclideanSetup(Simplex(2))
    with pytest.raises(ValueError):
        make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], s, x0=[1.0, 0.0], r0_sq=0.1)
    inst = make_linear_max_problem([1.0, 0.0], [[-1.0, 0.0]], [0.4], s, x0=[1.0, 0.0], r0_sq=1.0)
    assert inst.r0_sq == 1.0


def test_audit_rejects_wrong_mu():
    s = EuclideanSetup(Simplex(3))
    bad = quadratic_oracle(np.eye(3), np.zeros(3), 0.0, s, mu=5.0)
    with pytest.raises(ValueError):
        audit_oracle(bad, s)
    ok = quadratic_oracle(np.eye(3), np.zeros(3), 0.0, s, mu=1.0)
    assert audit_oracle(ok, s) <= 1e-9


def test_every_instance_passes_audit():
    rng = make_rng(3)
    for setup in (EuclideanSetup(Simplex(3)), EntropySetup(Simplex(3))):
        c = rng.normal(size=3)
        inst = make_linear_max_problem(c, rng.normal(size=(2, 3)), [-2.0, -2.0], setup)
        assert audit_oracle(inst.objective, setup, n_samples=1000, rng=rng) <= 1e-9
        for p in inst.constraint.parts:
            assert audit_oracle(p, setup, n_samples=1000, rng=rng) <= 1e-9


# --- quadratic problems ------------------------------------------------------


def test_quadratic_simplex_examples():
    s = EuclideanSetup(Simplex(2))
    inst = make_quadratic_simplex_problem(np.eye(2), [[0.0, 0.0]], s, offsets=[-1.0])
    assert inst.known_optimum.f_star == pytest.approx(0.25, abs=1e-12)
    np.testing.assert_allclose(inst.known_optimum.x_star, [0.5, 0.5], atol=1e-12)
    zero = make_quadratic_simplex_problem(np.zeros((2, 2)), [[0.0, 0.0]], s, offsets=[-1.0])
    assert zero.f(np.array([0.3, 0.7])) == 0.0


def test_quadratic_simplex_diag_matches_grid():
    s = EuclideanSetup(Simplex(2))
    inst = make_quadratic_simplex_problem([[2.0, 0.0], [0.0, 1.0]], [[0.0, 0.0]], s, offsets=[-1.0])
    t = np.arange(10_001) / 10_000
    vals = 0.5 * (2 * t**2 + (1 - t) ** 2)
    i = int(np.argmin(vals))
    assert abs(inst.known_optimum.f_star - vals[i]) <= 1e-3
    assert abs(inst.known_optimum.x_star[0] - t[i]) <= 1e-3
    # analytic: x1 = 1/3, f* = 1/3
    assert inst.known_optimum.f_star == pytest.approx(1 / 3, abs=1e-12)


def test_quadratic_symmetrized_and_square_checked():
    s = EuclideanSetup(Simplex(2))
    inst = make_quadratic_simplex_problem([[1.0, 2.0], [0.0, 1.0]], [[0.0, 0.0]], s, offsets=[-1.0])
    x = np.array([0.3, 0.7])
    np.testing.assert_allclose(inst.objective.subgrad(x), [[1.0, 1.0], [1.0, 1.0]] @ x)
    with pytest.raises(ValueError):
        make_quadratic_simplex_problem(np.ones((2, 3)), [[0.0, 0.0]], s, offsets=[-1.0])


def test_quadratic_gradient_matches_finite_differences():
    rng = make_rng(11)
    B = rng.normal(size=(4, 4))
    s = EuclideanSetup(Simplex(4))
    inst = make_quadratic_simplex_problem(B @ B.T, [[0.0] * 4], s, offsets=[-1.0])
    for x in s.set.sample(rng, 100):
        g = inst.objective.subgrad(x)
        fd = np.array([(inst.f(x + 1e-6 * e) - inst.f(x - 1e-6 * e)) / 2e-6 for e in np.eye(4)])
        assert np.linalg.norm(fd - g) <= 1e-5 * max(1.0, np.linalg.norm(g))


# --- column sampling ---------------------------------------------------------


def test_column_sample_at_vertex():
    A = np.arange(9.0).reshape(3, 3)
    rng = make_rng(0)
    for _ in range(100):
        np.testing.assert_array_equal(column_sample_gradient(A, [1.0, 0.0, 0.0], rng), A[:, 0])


def test_column_sample_identity_mean():
    rng = make_rng(5)
    oracle = column_sampling_oracle(np.eye(2))
    G = oracle.sample_batch(np.array([0.5, 0.5]), rng, 100_000)
    assert set(map(tuple, G)) <= {(1.0, 0.0), (0.0, 1.0)}
    assert np.all(np.abs(G.mean(0) - 0.5) <= 0.02)


def test_column_sample_mean_is_ax():
    rng = make_rng(6)
    A = rng.uniform(-1, 1, size=(2, 2))
    A = A + A.T
    x = np.array([0.3, 0.7])
    G = np.array([column_sample_gradient(A, x, rng) for _ in range(100_000)])
    assert np.max(np.abs(G.mean(0) - A @ x)) <= 5 * np.max(np.abs(A)) / math.sqrt(100_000)


def test_column_sample_batch_matches_single_draws_in_law():
    A = np.diag([1.0, 2.0, 3.0])
    x = np.array([0.2, 0.3, 0.5])
    G = column_sampling_oracle(A).sample_batch(x, make_rng(2), 50_000)
    freq = np.array([(G[:, j] != 0).mean() for j in range(3)])
    np.testing.assert_allclose(freq, x, atol=0.01)


def test_column_sample_renormalizes_and_rejects_negative():
    A = np.eye(2)
    rng = make_rng(0)
    assert column_sample_gradient(A, [2.0, 0.0], rng)[0] == 1.0
    with pytest.raises(ValueError):
        column_sample_gradient(A, [-0.1, 1.1], rng)


def test_bound_stress_million_draws():
    rng = make_rng(9)
    A = rng.uniform(-2, 2, size=(3, 3))
    oracle = column_sampling_oracle(A @ A.T)
    G = oracle.sample_batch(rng.dirichlet(np.ones(3)), rng, 1_000_000)
    assert np.all(np.linalg.norm(G, axis=1) <= oracle.bound_M)


def test_bound_violation_is_hard_error():
    bad = StochasticOracle(lambda x, rng: np.array([2.0, 0.0]), bound_M=1.0)
    with pytest.raises(BoundViolation):
        bad.sample(np.zeros(2), make_rng(0))
    with pytest.raises(BoundViolation):
        bad.sample_batch(np.zeros(2), make_rng(0), 10)


def test_coordinate_noise_is_unbiased_and_bounded():
    g = np.array([0.3, -0.1, 0.2])
    o = coordinate_noise_oracle(lambda x: g, float(np.linalg.norm(g)), 0.5, 3)
    G = o.sample_batch(np.zeros(3), make_rng(4), 200_000)
    assert np.linalg.norm(G.mean(0) - g) <= 5 * o.bound_M / math.sqrt(200_000)
    assert np.all(np.linalg.norm(G, axis=1) <= o.bound_M)


def test_rng_streams_reproducible():
    a = make_rng(123).random(5)
    b = make_rng(123).random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, make_rng(124).random(5))


# --- descriptions --------------------------------------------------------------


def test_instance_from_dict_linear_max():
    inst = instance_from_dict({
        "kind": "linear_max", "setup": "entropy", "c": [1.0, 0.0],
        "constraint_vectors": [[-1.0, 0.0]], "offsets": [0.4], "theta0_sq": math.log(2),
    })
    assert isinstance(inst.setup, EntropySetup)
    assert inst.theta0_sq == math.log(2)
    assert inst.known_optimum.f_star == pytest.approx(0.4)


def test_instance_from_dict_quadratic_on_box():
    inst = instance_from_dict({
        "kind": "quadratic",
        "setup": {"name": "euclidean", "set": {"kind": "box", "lower": [0, 0], "upper": [1, 1]}},
        "objective": {"Q": [[2, 0], [0, 2]], "q": [0, 0], "c": 0},
        "constraints": [{"q": [-1, 0], "c": 0.5}, {"q": [0, -1], "c": 0.5}],
        "mu": 2.0, "constraint_mu": 0.0, "x0": [1, 1], "r0_sq": 2.0,
    })
    assert isinstance(inst.setup.set, Box)
    assert inst.known_optimum.f_star == pytest.approx(0.5)
    assert inst.mu == 2.0


def test_oracle_result_requires_resolution_for_grid():
    with pytest.raises(ValueError):
        OracleResult(0.0, [0.0], "grid")
    with pytest.raises(ValueError):
        OracleResult(0.0, [0.0], "guess")
    assert OracleResult(0.0, [0.0], "grid", 1e-3).resolution == 1e-3


def test_make_quadratic_problem_affine_optimum_exact():
    s = EuclideanSetup(Box([0.0, 0.0], [1.0, 1.0]))
    inst = make_quadratic_problem((2 * np.eye(2), np.zeros(2), 0.0),
                                  [(None, [-1.0, 0.0], 0.5), (None, [0.0, -1.0], 0.5)],
                                  s, mu=2.0, constraint_mu=0.0)
    np.testing.assert_allclose(inst.known_optimum.x_star, [0.5, 0.5], atol=1e-12)
