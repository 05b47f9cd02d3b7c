import numpy as np
import pytest

from cvcluster import Schedule, Stage


def random_schedule(rng, max_modes=8, max_gates=12, r_high=2.0):
    """Random staged schedule for oracle and invariant tests.

    Stages are random partial matchings, capped at max_gates gates in
    total.  A schedule-wide squeezing budget drawn from [0, r_high] is
    split evenly across the stages, so no squeezing chain accumulates
    more than r_high and graph entries stay at most exp(2 * r_high);
    this keeps absolute comparison tolerances meaningful for every
    draw, not just typical ones.
    """
    n = int(rng.integers(2, max_modes + 1))
    budget = int(rng.integers(1, max_gates + 1))
    r_total = float(rng.uniform(0.0, r_high))
    stage_pairs = []
    while budget > 0 and len(stage_pairs) < 4:
        modes = rng.permutation(n) + 1
        want = int(rng.integers(1, n // 2 + 1))
        take = min(want, budget)
        stage_pairs.append(tuple(
            (int(modes[2 * k]), int(modes[2 * k + 1])) for k in range(take)
        ))
        budget -= take
    r = r_total / len(stage_pairs)
    return Schedule(n, tuple(Stage(pairs, r) for pairs in stage_pairs))


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
