import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmdcop import ContinuousDomain, SwarmParams
from swarmdcop.rng import AgentStreams
from swarmdcop.swarm import (
    BestInfo,
    apply_best,
    counters_update,
    fresh_state,
    init_components,
    position_update,
    rho_update,
    root_update,
    velocity_gbest,
    velocity_standard,
)


def test_init_components_zero_velocity_in_range():
    domain = ContinuousDomain(-10.0, 10.0)
    positions, velocities = init_components(64, domain, AgentStreams(9, 0))
    assert (velocities == 0.0).all()
    assert (positions >= -10.0).all() and (positions <= 10.0).all()
    again, _ = init_components(64, domain, AgentStreams(9, 0))
    assert np.array_equal(positions, again)


def test_velocity_standard_degenerate_cases():
    assert velocity_standard(5.0, 1.0, 3.0, -2.0, 0.0, 0.0, 0.0, 0.5, 0.5) == 0.0
    assert velocity_standard(0.0, 2.0, 2.0, 2.0, 0.7, 0.9, 0.1, 0.3, 0.8) == 0.0


def test_velocity_standard_hand_value():
    # 0.9*1 + 1*0.9*2 + 1*0.1*(-1) = 0.9 + 1.8 - 0.1 = 2.6
    got = velocity_standard(1.0, 0.0, 2.0, -1.0, 0.9, 0.9, 0.1, 1.0, 1.0)
    assert got == pytest.approx(2.6, abs=1e-12)


def test_velocity_gbest_hand_values():
    assert velocity_gbest(0.0, 4.0, 4.0, 0.9, 1.0, 0.5) == 0.0
    # -1 + 3 + 0.9*2 + 1*(1 - 2*0.5) = 3.8
    assert velocity_gbest(2.0, 1.0, 3.0, 0.9, 1.0, 0.5) == pytest.approx(3.8, abs=1e-12)


@given(
    v=st.floats(-5, 5), x=st.floats(-10, 10), g=st.floats(-10, 10),
    w=st.floats(0, 1), rho=st.floats(0.001, 4), r2=st.floats(0, 1),
)
def test_velocity_gbest_perturbation_bound(v, x, g, w, rho, r2):
    v_new = velocity_gbest(v, x, g, w, rho, r2)
    # unclamped landing point stays within w|v| + rho of the global best
    assert abs((x + v_new) - g) <= w * abs(v) + rho + 1e-9


def test_gbest_particle_collapses_onto_best_in_one_step():
    # with w=0 and a vanishing search radius the update reduces to x <- gbest
    v_new = velocity_gbest(3.0, 7.0, -2.0, 0.0, 1e-12, 0.25)
    domain = ContinuousDomain(-10.0, 10.0)
    landed = position_update(7.0, v_new, domain)
    assert landed == pytest.approx(-2.0, abs=1e-11)


def test_position_update_and_clamping():
    domain = ContinuousDomain(-10.0, 10.0)
    assert position_update(1.0, 2.0, domain) == 3.0
    assert position_update(9.0, 5.0, domain) == 10.0
    assert position_update(-9.0, -5.0, domain) == -10.0
    assert position_update(4.5, 0.0, domain) == 4.5


def test_rho_update_cases():
    assert rho_update(0.25, 99, 0, 15, 5, 0) == 1.0   # t=0 resets to 1
    assert rho_update(1.0, 16, 0, 15, 5, 3) == 2.0    # success run past the ceiling
    assert rho_update(1.0, 0, 6, 15, 5, 3) == 0.5     # failure run past the ceiling
    assert rho_update(1.0, 3, 0, 15, 5, 3) == 1.0     # otherwise unchanged


def _verdict(pbest, g_idx, g_fit, changed, improved=None, t=1):
    pbest = np.asarray(pbest, dtype=float)
    improved = np.asarray(
        improved if improved is not None else [False] * len(pbest), dtype=bool
    )
    return BestInfo(t, improved, pbest, g_idx, g_fit, changed)


def test_counters_previous_gbest_improves():
    best = _verdict([5.0, 1.0], g_idx=1, g_fit=1.0, changed=True, improved=[False, True])
    s_c, f_c = counters_update(2, 0, best, prev_gbest_index=1, prev_gbest_fitness=3.0)
    assert (s_c, f_c) == (3, 0)


def test_counters_nobody_improves():
    best = _verdict([5.0, 3.0], g_idx=1, g_fit=3.0, changed=False)
    s_c, f_c = counters_update(2, 1, best, prev_gbest_index=1, prev_gbest_fitness=3.0)
    assert (s_c, f_c) == (0, 2)


def test_counters_other_particle_overtakes():
    # particle 0 overtakes while the old global-best particle 1 stagnates
    best = _verdict([2.0, 3.0], g_idx=0, g_fit=2.0, changed=True, improved=[True, False])
    s_c, f_c = counters_update(4, 0, best, prev_gbest_index=1, prev_gbest_fitness=3.0)
    assert (s_c, f_c) == (0, 0)


@given(
    st.lists(
        st.tuples(st.floats(-100, 100), st.floats(-100, 100)), min_size=1, max_size=40
    )
)
def test_counters_mutual_exclusion_and_rho_dyadic(fitness_pairs):
    pbest = np.array([math.inf, math.inf])
    g_fit, g_idx = math.inf, 0
    s_c = f_c = 0
    rho = 1.0
    prev_idx, prev_fit = 0, math.inf
    for t, pair in enumerate(fitness_pairs):
        best = root_update(np.array(pair), pbest, g_fit, g_idx, t)
        pbest, g_fit, g_idx = best.pbest_fitness, best.gbest_fitness, best.gbest_index
        s_c, f_c = counters_update(s_c, f_c, best, prev_idx, prev_fit)
        rho = rho_update(rho, s_c, f_c, 3, 2, t)
        prev_idx, prev_fit = g_idx, g_fit
        assert not (s_c > 0 and f_c > 0)
        assert math.frexp(rho)[0] == 0.5  # rho stays an exact power of two


def test_root_update_worked_example():
    fresh = np.array([math.inf, math.inf])
    best = root_update(np.array([94.25, 32.99]), fresh, math.inf, 0, t=0)
    assert best.pbest_fitness.tolist() == [94.25, 32.99]
    assert best.gbest_index == 1
    assert best.gbest_fitness == 32.99
    assert best.gbest_changed
    assert best.improved.tolist() == [True, True]


def test_root_update_ties_keep_incumbents():
    pbest = np.array([4.0, 7.0])
    best = root_update(np.array([4.0, 7.0]), pbest, 4.0, 0, t=3)
    assert not best.improved.any()
    assert not best.gbest_changed
    assert best.gbest_index == 0
    assert best.gbest_fitness == 4.0


def test_root_update_simultaneous_improvers_lowest_index_wins():
    pbest = np.array([math.inf] * 3)
    best = root_update(np.array([5.0, 2.0, 2.0]), pbest, math.inf, 0, t=0)
    assert best.gbest_index == 1


def test_root_update_single_particle():
    best = root_update(np.array([3.0]), np.array([math.inf]), math.inf, 0, t=0)
    assert best.gbest_index == 0
    assert best.gbest_fitness == 3.0
    again = root_update(np.array([9.0]), best.pbest_fitness, best.gbest_fitness, 0, t=1)
    assert again.gbest_fitness == 3.0  # gbest tracks the single pbest


@given(st.lists(st.lists(st.floats(-50, 50), min_size=3, max_size=3), min_size=1, max_size=30))
def test_best_fitness_sequences_never_increase(rounds):
    pbest = np.array([math.inf] * 3)
    g_fit, g_idx = math.inf, 0
    for t, fitness in enumerate(rounds):
        best = root_update(np.array(fitness), pbest, g_fit, g_idx, t)
        assert (best.pbest_fitness <= pbest).all()
        assert best.gbest_fitness <= g_fit
        assert best.gbest_fitness == best.pbest_fitness.min()
        if best.gbest_changed:
            assert best.improved[best.gbest_index]
        pbest, g_fit, g_idx = best.pbest_fitness, best.gbest_fitness, best.gbest_index


def test_apply_best_refreshes_components_from_evaluated_positions():
    domain = ContinuousDomain(-10.0, 10.0)
    params = SwarmParams(K=3, w=0.0, c1=0.0, c2=0.0, seed=1)
    state = fresh_state(3, domain, AgentStreams(1, 0), forced=np.array([1.0, -2.0, 5.0]))
    best = _verdict([10.0, 3.0, 8.0], g_idx=1, g_fit=3.0, changed=True,
                    improved=[False, True, True], t=0)
    before = state.evaluated_position.copy()
    apply_best(state, best, params, domain, np.full(3, 0.5), np.full(3, 0.5))
    assert state.pbest_component.tolist() == [1.0, -2.0, 5.0]  # improved slots refreshed
    assert state.gbest_component == before[1]
    assert state.rho == 1.0  # t=0 case
    assert (state.s_c, state.f_c) == (1, 0)
    # the non-gbest particles froze (w=c1=c2=0); the gbest one landed on gbest_c
    assert state.position[0] == before[0]
    assert state.position[2] == before[2]
    assert state.position[1] == pytest.approx(state.gbest_component, abs=1.0)  # within rho


def test_velocity_clamp_limits_speed():
    domain = ContinuousDomain(-1.0, 1.0)
    params = SwarmParams(K=2, w=1.0, c1=10.0, c2=10.0, clamp_velocity=True, seed=2)
    state = fresh_state(2, domain, AgentStreams(2, 0), forced=np.array([-1.0, 1.0]))
    best = _verdict([1.0, 2.0], g_idx=0, g_fit=1.0, changed=True,
                    improved=[True, True], t=0)
    apply_best(state, best, params, domain, np.ones(2), np.ones(2))
    assert (np.abs(state.velocity) <= domain.width).all()


def test_params_validation():
    with pytest.raises(ValueError):
        SwarmParams(K=0)
    with pytest.raises(ValueError):
        SwarmParams(w=-0.1)
    with pytest.raises(ValueError):
        SwarmParams(max_sc=0)
    with pytest.raises(ValueError):
        SwarmParams(seed=-1)
