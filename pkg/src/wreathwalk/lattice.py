"""Simple random walk on Z^2: local times, range and concave functionals.

Visit counts include time 0, so the counts of an ``n``-step path sum to
``n + 1``.  Every Monte Carlo estimate here is a mean over independent
trials, trial ``i`` using :func:`wreathwalk.rng.trial_rng` ``(seed, i)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from ._kernels import local_time_counts, walk_positions
from .rng import trial_rng


class Identity:
    name = "identity"

    def __call__(self, b):
        return b


class Indicator:
    name = "indicator"

    def __call__(self, b):
        return (b > 0).astype(float)


class Power:
    def __init__(self, exponent: float):
        self.exponent = exponent
        self.name = f"power[{exponent:g}]"

    def __call__(self, b):
        return np.power(b, self.exponent)


@dataclass
class Trajectory:
    steps: int
    positions: np.ndarray  # (steps + 1, 2) int64
    seed: int
    trial: int = 0


@dataclass
class LocalTimeField:
    counts: dict
    n: int

    @property
    def range(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class EstimateReport:
    mean: float
    stderr: float
    trials: int
    master_seed: int
    n: int
    name: str = ""

    def row(self) -> tuple:
        return (self.n, self.trials, self.mean, self.stderr, self.master_seed)


ESTIMATE_COLUMNS = ("n", "trials", "mean", "stderr", "master_seed")


def _directions(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 4, size=n, dtype=np.uint8)


def simulate_srw(n: int, seed: int, trial: int = 0) -> Trajectory:
    """The path used by trial ``trial`` of any experiment seeded ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    xs, ys = walk_positions(_directions(trial_rng(seed, trial), n))
    return Trajectory(n, np.column_stack([xs, ys]), seed, trial)


def local_times(t: Trajectory) -> LocalTimeField:
    keys, counts = np.unique(t.positions, axis=0, return_counts=True)
    return LocalTimeField({(int(x), int(y)): int(c) for (x, y), c in zip(keys, counts)}, t.steps)


def dump_positions(t: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for x, y in t.positions:
            fh.write(f"({x},{y})\n")


def mean_and_stderr(values) -> tuple[float, float]:
    """Compensated mean and standard error, in the given order."""
    values = [float(v) for v in values]
    trials = len(values)
    mean = math.fsum(values) / trials
    if trials < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (trials - 1)
    return mean, math.sqrt(var / trials)


def sample_variance(values) -> float:
    values = [float(v) for v in values]
    if len(values) < 2:
        return 0.0
    mean = math.fsum(values) / len(values)
    return math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)


@dataclass
class Survey:
    """Per-trial statistics of ``trials`` independent ``n``-step walks.

    The exactness counters record trajectories where the visit counts did
    not sum to ``n + 1``, where the indicator functional differed from the
    range, or where a concave functional exceeded ``R f((n+1)/R)``.
    """

    n: int
    trials: int
    master_seed: int
    ranges: np.ndarray
    origin: np.ndarray
    functionals: dict = field(default_factory=dict)
    conservation_failures: int = 0
    range_identity_failures: int = 0
    concavity_failures: dict = field(default_factory=dict)

    def estimate(self, name: str) -> EstimateReport:
        mean, se = mean_and_stderr(self.functionals[name])
        return EstimateReport(mean, se, self.trials, self.master_seed, self.n, name)

    def range_statistics(self) -> "RangeStatistics":
        return _range_statistics(self.n, self.ranges)

    def origin_statistics(self) -> "OriginReport":
        return _origin_report(self.n, self.master_seed, self.origin)


def _survey_chunk(n, master_seed, trial_ids, functionals, concave):
    ranges = np.empty(len(trial_ids), dtype=np.int64)
    origin = np.empty(len(trial_ids), dtype=np.int64)
    values = {name: np.empty(len(trial_ids)) for name in functionals}
    bad_sum = bad_range = 0
    bad_concave = {name: 0 for name in concave}
    indicator = Indicator()
    for j, i in enumerate(trial_ids):
        xs, ys = walk_positions(_directions(trial_rng(master_seed, i), n))
        counts = local_time_counts(xs, ys)
        r = counts.shape[0]
        ranges[j] = r
        origin[j] = counts[0]
        if int(counts.sum()) != n + 1:
            bad_sum += 1
        b = counts.astype(float)
        if float(np.sum(indicator(b))) != float(r):
            bad_range += 1
        for name, f in functionals.items():
            values[name][j] = float(np.sum(f(b)))
        for name in concave:
            f = functionals[name]
            cap = r * float(f(np.array([(n + 1) / r]))[0])
            if values[name][j] > cap * (1.0 + 1e-12):
                bad_concave[name] += 1
    return ranges, origin, values, bad_sum, bad_range, bad_concave


def survey(
    n: int,
    trials: int,
    master_seed: int,
    functionals: Mapping[str, Callable] | None = None,
    concave: tuple = (),
    threads: int = 1,
) -> Survey:
    """Simulate ``trials`` walks once and collect every per-trial statistic.

    ``functionals`` maps names to vectorised ``f`` applied to the visit
    counts; the trial value is ``sum_z f(b_z)``.  Names in ``concave`` also
    get the per-trajectory Jensen check.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    functionals = dict(functionals or {})
    ids = list(range(trials))
    if threads > 1 and trials > 1:
        chunks = [ids[k::threads] for k in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_survey_chunk, [n] * threads, [master_seed] * threads,
                                  chunks, [functionals] * threads, [concave] * threads))
        order = np.argsort(np.concatenate([np.array(c, dtype=np.int64) for c in chunks]))
        ranges = np.concatenate([p[0] for p in parts])[order]
        origin = np.concatenate([p[1] for p in parts])[order]
        values = {k: np.concatenate([p[2][k] for p in parts])[order] for k in functionals}
        bad_sum = sum(p[3] for p in parts)
        bad_range = sum(p[4] for p in parts)
        bad_concave = {k: sum(p[5][k] for p in parts) for k in concave}
    else:
        ranges, origin, values, bad_sum, bad_range, bad_concave = _survey_chunk(
            n, master_seed, ids, functionals, concave)
    return Survey(n, trials, master_seed, ranges, origin, values, bad_sum, bad_range, bad_concave)


def functional_estimate(
    f: Callable, n: int, trials: int, master_seed: int, threads: int = 1
) -> EstimateReport:
    """Monte Carlo mean of ``sum_z f(b_z^(n))``."""
    name = getattr(f, "name", "f")
    s = survey(n, trials, master_seed, {name: f}, threads=threads)
    return s.estimate(name)


@dataclass
class TailReport:
    q1: float
    threshold: float
    q2: float


@dataclass
class RangeStatistics:
    n: int
    mean: float
    variance: float
    stderr: float
    tail: TailReport | None

    @property
    def spitzer_bound(self) -> float:
        return 6.0 * self.mean**2 + self.mean

    @property
    def spitzer_ok(self) -> bool:
        return self.variance <= self.spitzer_bound

    @property
    def normalised_mean(self) -> float:
        """``E[R] ln(n) / n``."""
        return self.mean * math.log(self.n) / self.n


def _range_statistics(n: int, ranges: np.ndarray) -> RangeStatistics:
    mean, se = mean_and_stderr(ranges)
    var = sample_variance(ranges)
    tail = None
    if n >= 2:
        q1 = 0.5 * mean * math.log(n) / n
        threshold = q1 * n / math.log(n)
        tail = TailReport(q1, threshold, float(np.mean(ranges >= threshold)))
    return RangeStatistics(n, mean, var, se, tail)


def range_statistics(n: int, trials: int, master_seed: int, threads: int = 1) -> RangeStatistics:
    """Mean, variance and lower-tail mass of the range ``R^(n)``."""
    return survey(n, trials, master_seed, threads=threads).range_statistics()


@dataclass
class OriginReport:
    estimate: EstimateReport
    ratio: float  # E[b_0] / ln n
    quantiles: dict
    k_fit: float
    coverage: float  # Pr[b_0 >= k_fit ln n]


def _origin_report(n: int, master_seed: int, origin: np.ndarray) -> OriginReport:
    mean, se = mean_and_stderr(origin)
    est = EstimateReport(mean, se, len(origin), master_seed, n, "origin_local_time")
    if n < 2:
        return OriginReport(est, math.nan, {}, math.nan, 1.0)
    scaled = origin / math.log(n)
    quantiles = {q: float(np.quantile(scaled, q)) for q in (0.05, 0.1, 0.5, 0.9)}
    k_fit = quantiles[0.1]
    coverage = float(np.mean(origin >= k_fit * math.log(n)))
    return OriginReport(est, mean / math.log(n), quantiles, k_fit, coverage)


def origin_local_time(n: int, trials: int, master_seed: int, threads: int = 1) -> OriginReport:
    """Visits to the origin up to time ``n``: mean, ``/ln n`` quantiles and
    the coverage of the fitted lower constant ``K`` (the 10% quantile)."""
    return survey(n, trials, master_seed, threads=threads).origin_statistics()
