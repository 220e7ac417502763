import itertools
import math
from collections import Counter

import numpy as np
import pytest

import wreathwalk._kernels as K
from wreathwalk.lattice import (
    Identity,
    Indicator,
    Power,
    Trajectory,
    dump_positions,
    functional_estimate,
    local_times,
    mean_and_stderr,
    origin_local_time,
    range_statistics,
    simulate_srw,
    survey,
)
from wreathwalk.rng import SEED_ENV, default_seed, trial_rng


def exact_range_mean(n):
    """E[R^(n)] by enumerating all 4^n paths."""
    steps = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    total = 0
    for path in itertools.product(steps, repeat=n):
        x = y = 0
        seen = {(0, 0)}
        for dx, dy in path:
            x += dx
            y += dy
            seen.add((x, y))
        total += len(seen)
    return total / 4**n


def test_trajectory_is_a_lattice_path():
    t = simulate_srw(1000, seed=3)
    assert t.positions.shape == (1001, 2)
    assert tuple(t.positions[0]) == (0, 0)
    steps = np.abs(np.diff(t.positions, axis=0)).sum(axis=1)
    assert np.all(steps == 1)


def test_trajectory_determinism():
    a = simulate_srw(500, 9, trial=4).positions
    b = simulate_srw(500, 9, trial=4).positions
    c = simulate_srw(500, 9, trial=5).positions
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_local_times_against_counter():
    t = simulate_srw(2000, 1)
    field = local_times(t)
    want = Counter(map(tuple, t.positions.tolist()))
    assert field.counts == dict(want)
    assert field.total == 2001
    assert field.range == len(want)


def test_kernel_counts_match_sort_fallback(monkeypatch):
    t = simulate_srw(5000, 2)
    xs, ys = t.positions[:, 0].copy(), t.positions[:, 1].copy()
    grid = K.local_time_counts(xs, ys)
    monkeypatch.setattr(K, "MAX_GRID_CELLS", 0)
    fallback = K.local_time_counts(xs, ys)
    assert np.array_equal(grid, fallback)
    # first-visit order: the origin comes first
    assert grid[0] == Counter(map(tuple, t.positions.tolist()))[(0, 0)]


def test_functionals():
    b = np.array([1.0, 4.0, 9.0])
    assert np.array_equal(Identity()(b), b)
    assert np.array_equal(Indicator()(np.array([0.0, 2.0])), [0.0, 1.0])
    assert np.allclose(Power(0.5)(b), [1.0, 2.0, 3.0])


def test_survey_values_match_direct_computation():
    n, trials, seed = 300, 20, 5
    s = survey(n, trials, seed, {"sqrt": Power(0.5)}, concave=("sqrt",))
    for i in range(trials):
        field = local_times(simulate_srw(n, seed, i))
        assert s.ranges[i] == field.range
        assert s.origin[i] == field.counts[(0, 0)]
        want = math.fsum(math.sqrt(c) for c in field.counts.values())
        assert s.functionals["sqrt"][i] == pytest.approx(want, rel=1e-12)
    assert s.conservation_failures == 0
    assert s.range_identity_failures == 0
    assert s.concavity_failures == {"sqrt": 0}


def test_survey_threads_identical():
    a = survey(400, 9, 11, {"id": Identity()})
    b = survey(400, 9, 11, {"id": Identity()}, threads=3)
    assert np.array_equal(a.ranges, b.ranges)
    assert np.array_equal(a.functionals["id"], b.functionals["id"])


@pytest.mark.parametrize("n", [2, 4, 6])
def test_range_mean_against_enumeration(n):
    want = exact_range_mean(n)
    r = range_statistics(n, 4000, 17)
    assert abs(r.mean - want) < 5 * r.stderr


def test_identity_functional_is_n_plus_one():
    est = functional_estimate(Identity(), 1000, 10, 3)
    assert est.mean == 1001.0 and est.stderr == 0.0
    assert est.row() == (1000, 10, 1001.0, 0.0, 3)


def test_range_statistics_fields():
    r = range_statistics(4096, 200, 1)
    assert r.spitzer_ok
    assert r.tail.q2 >= 0.9
    assert 1.5 < r.normalised_mean < 3.5


def test_origin_local_time():
    o = origin_local_time(4096, 400, 2)
    assert o.estimate.mean >= 1.0
    assert o.coverage >= 0.9
    assert 0.0 < o.ratio < 2.0


def test_mean_and_stderr():
    mean, se = mean_and_stderr([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert se == pytest.approx(math.sqrt(5.0 / 3.0 / 4.0))
    assert mean_and_stderr([7.0]) == (7.0, 0.0)


def test_dump_positions(tmp_path):
    path = tmp_path / "p.txt"
    dump_positions(simulate_srw(3, 0), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "(0,0)" and len(lines) == 4


def test_rng_streams(monkeypatch):
    a = trial_rng(1, 0).integers(0, 2**62, 4)
    b = trial_rng(1, 1).integers(0, 2**62, 4)
    assert not np.array_equal(a, b)
    monkeypatch.setenv(SEED_ENV, "77")
    assert default_seed() == 77


def test_one_step_walk():
    r = range_statistics(1, 50, 0)
    assert r.mean == 2.0 and r.variance == 0.0
    o = origin_local_time(1, 50, 0)
    assert o.estimate.mean == 1.0 and o.estimate.stderr == 0.0


def test_range_monotone_along_prefix():
    t = simulate_srw(3000, 8)
    ranges = [local_times(Trajectory(m, t.positions[: m + 1], t.seed)).range
              for m in range(0, 3001, 50)]
    assert all(a <= b for a, b in zip(ranges, ranges[1:]))


def test_negative_n():
    with pytest.raises(ValueError):
        simulate_srw(-1, 0)
