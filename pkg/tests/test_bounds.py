import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from switchmd import bounds


def test_spot_values():
    assert bounds.adaptive_md_bound(1, 1, 0.1) == 200
    assert bounds.adaptive_md_bound(1, math.log(2), 0.05) == 555
    assert bounds.general_md_bound(1, 1, 0.1) == 200
    assert bounds.general_md_bound(0.5, 1, 0.1) == 200  # max{1, M_g^2}
    assert bounds.adaptive_smd_bound(1, 1, 0.1) == 400
    assert bounds.fixed_smd_iterations(1, 1, 0.1, 0.1) == 16119
    assert bounds.restarted_md_bound(1, 1, 1, 4, 0.1) == 325


def test_fixed_smd_matches_independent_arithmetic():
    # 70 ln 10 / 0.01 = 16118.09...
    assert 70 * math.log(10) / 0.01 == pytest.approx(16118.0957, abs=1e-3)
    assert bounds.fixed_smd_stepsize(2.0, 0.1) == 0.025


def test_restart_schedule():
    sched = bounds.restart_schedule(1.0, 4.0, 0.1)
    assert len(sched) == 5  # ceil(log2 20)
    p, r_prev, r_p, eps_p = sched[-1]
    assert (p, r_prev, r_p) == (5, 4.0 / 16, 4.0 / 32)
    assert eps_p == 0.5 * 4.0 / 32
    assert eps_p <= 0.1


def test_restart_edge_case_single_stage():
    # eps >= mu R0^2 / 2: log ratio <= 0, one stage with eps_1 <= eps
    sched = bounds.restart_schedule(1.0, 1.0, 0.6)
    assert len(sched) == 1
    assert sched[0][3] <= 0.6
    assert sched[0][1] == 1.0


def test_deviation_bound_spot():
    want = 5 + 2240 * 10 * (math.log(10) + math.log(math.log2(20)))
    assert bounds.restarted_smd_deviation_bound(1, 1, 1, 4, 0.1, 0.1) == pytest.approx(want, rel=1e-15)


def test_sigma_range():
    for bad in (0.0, 0.5, 0.7, -0.1):
        with pytest.raises(ValueError, match="sigma out of"):
            bounds.check_sigma(bad)
    bounds.check_sigma(0.1)


def test_epsilon_positive():
    with pytest.raises(ValueError):
        bounds.adaptive_md_bound(1, 1, 0.0)


def test_smooth_eps_tilde():
    assert bounds.smooth_eps_tilde(0.01, 0.5, 1.0) == 0.01
    assert bounds.smooth_eps_tilde(0.1, 2.0, 1.0) == pytest.approx(0.205)


@given(st.floats(0.05, 2.0), st.floats(0.5, 8.0), st.floats(1e-3, 0.5))
def test_final_stage_accuracy_reaches_eps(mu, r0_sq, eps):
    sched = bounds.restart_schedule(mu, r0_sq, eps)
    assert sched[-1][3] <= eps * (1 + 1e-12)
    # stage iteration counts sum below the total bound with M = Omega = 1
    total = sum(bounds.restart_expectation_stage_iterations(1.0, 1.0, rp, ep) for _, rp, _, ep in sched)
    assert total <= bounds.restarted_md_bound(1.0, 1.0, mu, r0_sq, eps)
