from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matchbox import simulator as sim
from matchbox.expectations import expected_residue, first_return_distribution


@pytest.mark.parametrize(
    "state,big,after",
    [((2, 2, 2), True, (2, 2, 1)), ((2, 2, 2), False, (2, 2, 1)), ((2, 2, 1), False, (2, 2, 0)), ((2, 1, 1), True, (1, 1, 1))],
)
def test_step_examples(state, big, after):
    assert sim.step(state, big) == after


def test_step_resorts_unsorted_input():
    assert sim.step((1, 3, 3), True) == (3, 2, 1)


def test_step_errors():
    with pytest.raises(ValueError):
        sim.step((0, 0, 0), True)
    with pytest.raises(ValueError):
        sim.step((2, 1, 0), False)


def _first_max_step(state, big):
    boxes = sorted(state, reverse=True)
    j = 0 if big else boxes.index(boxes[-1])
    boxes[j] -= 1
    return tuple(sorted(boxes, reverse=True))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=2, max_size=6), st.booleans())
def test_tie_break_independence(boxes, big):
    assert sim.step(boxes, big) == _first_max_step(boxes, big)


def test_n1_cases():
    rng = np.random.default_rng(0)
    for k in (2, 3, 5):
        for _ in range(20):
            assert sim.run_residue(k, 1, 0.5, rng) == k - 1
            assert sim.run_first_return(k, 1, 0.5, rng) == 1


def test_k3_n2_support_by_draws():
    # the first draw is irrelevant at (2,2,2); then little ends at 4, big-little at 3, big-big at 2
    assert sim.run_residue(3, 2, 0.5, iter([0.1, 0.9])) == 4
    assert sim.run_residue(3, 2, 0.5, iter([0.9, 0.1, 0.9])) == 3
    assert sim.run_residue(3, 2, 0.5, iter([0.9, 0.1, 0.1, 0.5])) == 2


def test_residue_bounds_and_wedge():
    rng = np.random.default_rng(7)
    k, n = 4, 6
    for _ in range(300):
        state = (n,) * k
        while state[-1] > 0:
            assert state[0] - state[k - 2] <= 1
            state = sim.step(state, rng.random() < 0.4)
        assert k - 1 <= sum(state) <= (k - 1) * n


def test_batch_equals_scalar():
    k, n = 3, 7
    u = sim.block_uniforms(5, 0, 400, k, n)
    for target, runner in ((sim.RESIDUE, sim.run_residue), (sim.FIRST_RETURN, sim.run_first_return)):
        batch = sim.simulate_batch(k, n, 0.45, u, target)
        scalar = [runner(k, n, 0.45, iter(row)) for row in u]
        assert batch.tolist() == scalar


def test_determinism_and_prefix_stability():
    a = sim.estimate(3, 5, 0.5, 1000, 42)
    assert a == sim.estimate(3, 5, 0.5, 1000, 42)
    assert a != sim.estimate(3, 5, 0.5, 1000, 43)
    long = sim.sample(3, 5, 0.5, sim.BLOCK + 10, 42)
    assert long[:1000].tolist() == sim.sample(3, 5, 0.5, 1000, 42).tolist()


def test_single_trial():
    res = sim.estimate(3, 4, 0.5, 1, 3)
    assert res.stderr == 0 and res.samples == 1
    assert res.mean == float(sim.sample(3, 4, 0.5, 1, 3)[0])
    assert res.rng == sim.RNG_ALGORITHM


def test_bad_arguments():
    with pytest.raises(ValueError):
        sim.estimate(3, 4, 0.5, 0, 1)
    with pytest.raises(ValueError):
        sim.sample(3, 4, 0.5, 10, 1, "nonsense")


def test_small_mean_calibration():
    res = sim.estimate(3, 2, 0.5, 100_000, 11)
    assert abs(res.mean - 13 / 4) < 3 * res.stderr
    y = sim.sample(3, 2, 0.5, 100_000, 12, sim.FIRST_RETURN)
    share = (y == 1).mean()
    assert abs(share - 0.25) < 3 * np.sqrt(0.25 * 0.75 / len(y))


@pytest.mark.slow
def test_first_return_law_k3_n3():
    trials = 1_000_000
    y = sim.sample(3, 3, 0.5, trials, 2024, sim.FIRST_RETURN)
    law = first_return_distribution(3, 3, Fraction(1, 2)).probs
    for i, prob in enumerate(law, start=1):
        prob = float(prob)
        se = np.sqrt(prob * (1 - prob) / trials)
        assert abs((y == i).mean() - prob) < 4 * se


@pytest.mark.slow
def test_mean_calibration_n100():
    res = sim.estimate(3, 100, 0.5, 100_000, 1)
    exact = float(expected_residue(3, 100, Fraction(1, 2)))
    assert abs(res.mean - exact) < 3 * res.stderr
