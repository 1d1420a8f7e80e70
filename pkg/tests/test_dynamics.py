import math

import numpy as np
import pytest

from ttcgame import (
    Converged,
    DynamicsConfig,
    InvalidArgumentError,
    is_nash,
    potential,
    run,
    step,
    utilities,
)
from ttcgame.dynamics import initial_profile, improving_providers
from ttcgame.rng import SplitMix64
from ttcgame import serialize
from helpers import worked_example_game, random_strict_game

LOW, HIGH = 0, 1


def test_splitmix_reference_vectors():
    r = SplitMix64(0)
    assert [r.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F,
    ]
    r = SplitMix64(1234567)
    assert [r.next_u64() for _ in range(2)] == [6457827717110365317, 3203168211198807973]


def test_splitmix_below_is_in_range_and_unbiased_enough():
    r = SplitMix64(42)
    draws = [r.below(3) for _ in range(3000)]
    counts = np.bincount(draws, minlength=3)
    assert counts.min() > 900
    with pytest.raises(ValueError):
        r.below(0)


def test_initial_profile():
    assert initial_profile(worked_example_game()) == (LOW, LOW)


def test_step_from_low_low():
    g = worked_example_game()
    assert improving_providers(g, (LOW, LOW)) == [(0, HIGH)]
    for mode in ("paper_step", "strict_best_response"):
        new, mover = step(g, (LOW, LOW), DynamicsConfig(mode=mode), SplitMix64(0))
        assert (new, mover) == ((HIGH, LOW), 0)
    assert step(g, (HIGH, LOW), DynamicsConfig(), SplitMix64(0)) is Converged


@pytest.mark.parametrize("mode", ["paper_step", "strict_best_response"])
@pytest.mark.parametrize("seed", [0, 1, 2**64 - 1])
def test_worked_example_run(mode, seed):
    trace = run(worked_example_game(), DynamicsConfig(mode=mode, seed=seed))
    assert trace.converged and trace.iterations == 1
    assert trace.equilibrium == (HIGH, LOW)
    assert [s.mover for s in trace.steps] == [0, None]
    assert trace.final.inefficiency == pytest.approx(0.4375, abs=1e-9)
    assert trace.steps[0].inefficiency == 0.0


def test_start_at_equilibrium_gives_single_step():
    trace = run(worked_example_game(), DynamicsConfig(), start=(HIGH, HIGH))
    assert trace.converged and len(trace.steps) == 1 and trace.steps[0].mover is None


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        DynamicsConfig(max_iterations=0)
    with pytest.raises(InvalidArgumentError):
        DynamicsConfig(seed=-1)
    with pytest.raises(ValueError):
        DynamicsConfig(mode="simultaneous")


def _moving_game(rng):
    while True:
        g = random_strict_game(rng, n_min=2, n_max=3, k_max=4, v0=0.0, beta=25.0)
        t = run(g, DynamicsConfig(mode="strict_best_response"))
        if t.iterations >= 2:
            return g


def test_iteration_cap_reports_non_convergence():
    g = _moving_game(np.random.default_rng(1))
    trace = run(g, DynamicsConfig(max_iterations=1))
    assert len(trace.steps) == 2
    assert trace.steps[-1].mover is None
    assert not trace.converged and trace.equilibrium is None


def test_runs_are_deterministic_byte_for_byte():
    rng = np.random.default_rng(2)
    for _ in range(5):
        g = random_strict_game(rng, n_min=3, n_max=3, k_max=4, v0=0.0, beta=50.0)
        cfg = DynamicsConfig(seed=99)
        a, b = run(g, cfg), run(g, cfg)
        ja, jb = (serialize.dumps(serialize.trace_to_dict(g, t)) for t in (a, b))
        assert ja == jb


def _check_trace(g, trace, strict):
    for prev, cur in zip(trace.steps, trace.steps[1:]):
        i = prev.mover
        diff = [j for j in range(g.n) if prev.profile[j] != cur.profile[j]]
        assert diff == [i]
        gained = cur.utilities[i] > prev.utilities[i]
        if strict:
            assert gained
        if gained:
            assert cur.potential > prev.potential
    if trace.converged:
        assert is_nash(g, trace.equilibrium)


def test_strict_mode_converges_with_rising_potential():
    rng = np.random.default_rng(3)
    for trial in range(60):
        beta = [math.inf, 0.8, 15.0][trial % 3]
        g = random_strict_game(rng, n_min=2, n_max=3, k_max=4, v0=0.0, beta=beta)
        limit = math.prod(g.shape)
        trace = run(g, DynamicsConfig(mode="strict_best_response", seed=trial, max_iterations=limit))
        assert trace.converged
        _check_trace(g, trace, strict=True)


def test_paper_step_potential_rises_when_mover_gains():
    rng = np.random.default_rng(4)
    for trial in range(60):
        beta = [math.inf, 0.8, 15.0][trial % 3]
        g = random_strict_game(rng, n_min=2, n_max=3, k_max=4, v0=0.0, beta=beta)
        trace = run(g, DynamicsConfig(seed=trial, max_iterations=500))
        _check_trace(g, trace, strict=False)


def test_recorded_fields_match_direct_evaluation():
    g = _moving_game(np.random.default_rng(5))
    trace = run(g, DynamicsConfig(seed=3))
    for s in trace.steps:
        np.testing.assert_array_equal(s.utilities, utilities(g, s.profile))
        assert s.potential == potential(g, s.profile)
        assert s.inefficiency == pytest.approx(trace.max_welfare / s.welfare - 1, abs=0)
