"""Drift and entropy of random walks on wreath towers.

Small ``n`` is handled exactly: the ``n``-step law is pushed forward one
generator at a time with integer path weights, so masses, symmetry and
the drift are exact rationals.  Large ``n`` goes through Monte Carlo
brackets on the word length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._kernels import lamplighter_endpoint, nn_tour_length
from .errors import EscapeError, ResourceError
from .groups import (
    Ball,
    Element,
    GeneratorSet,
    GroupSpec,
    bfs_ball,
    build_generators,
    decorated_generator,
    encode,
    identity,
    invert,
    make_element,
    multiply,
    unit_steps,
    word_length_bracket,
)
from .lattice import EstimateReport, mean_and_stderr, survey
from .rng import trial_rng

DEFAULT_SUPPORT_CAP = 5_000_000


@dataclass
class Distribution:
    """Law of the walk after ``n`` steps.

    ``weights[g]`` counts step sequences ending at ``g`` (each step
    weighted by its multiplicity); the probability is
    ``weights[g] / total``.
    """

    spec: GroupSpec
    n: int
    weights: dict
    total: int

    @property
    def mass(self) -> dict:
        return {encode(g): w / self.total for g, w in self.weights.items()}

    def probability(self, g: Element) -> Fraction:
        return Fraction(self.weights.get(g, 0), self.total)

    def __len__(self):
        return len(self.weights)


def point_mass(spec: GroupSpec) -> Distribution:
    return Distribution(spec, 0, {identity(spec): 1}, 1)


def convolve(d: Distribution, g: GeneratorSet, cap: int = DEFAULT_SUPPORT_CAP) -> Distribution:
    """One more step: push every atom forward along each generator."""
    if d.spec != g.spec:
        raise ValueError(f"distribution on {d.spec} but generators on {g.spec}")
    out: dict = {}
    pairs = list(zip(g.elements, g.multiplicities))
    for y, w in d.weights.items():
        for s, m in pairs:
            z = multiply(y, s)
            out[z] = out.get(z, 0) + w * m
        if len(out) > cap:
            raise ResourceError(f"support of step {d.n + 1}", len(out), cap)
    return Distribution(d.spec, d.n + 1, out, d.total * g.total_multiplicity)


def entropy_of(d: Distribution) -> float:
    """Shannon entropy in nats."""
    total = d.total
    return 0.0 - math.fsum((w / total) * math.log(w / total) for w in d.weights.values())


def _lengths(d: Distribution, ball: Ball):
    lengths = ball.lengths
    for g, w in d.weights.items():
        l = lengths.get(g)
        if l is None:
            raise EscapeError(encode(g))
        yield w, l


def drift_exact(d: Distribution, ball: Ball, power: int = 1) -> Fraction:
    """``E l(g)^power`` as an exact rational."""
    return Fraction(sum(w * l**power for w, l in _lengths(d, ball)), d.total)


def drift_of(d: Distribution, ball: Ball) -> float:
    return float(drift_exact(d, ball))


def is_inverse_symmetric(d: Distribution) -> bool:
    return all(d.weights.get(invert(g)) == w for g, w in d.weights.items())


@dataclass
class ExactSeries:
    """Exact ``H(n)``, ``L(n)``, ``E l^2`` and ``v(n)`` for ``n <= n_max``."""

    spec: GroupSpec
    n: list
    entropy: list
    drift: list  # Fractions
    second_moment: list  # Fractions
    growth: list
    support: list
    mass_error: list
    symmetric: list


def exact_series(
    spec: GroupSpec,
    n_max: int,
    cap: int = DEFAULT_SUPPORT_CAP,
    semantics: str = "elements",
) -> ExactSeries:
    gens = build_generators(spec, semantics)
    ball = bfs_ball(spec, n_max, cap, gens)
    d = point_mass(spec)
    out = ExactSeries(spec, [], [], [], [], ball.counts[: n_max + 1], [], [], [])
    for n in range(n_max + 1):
        if n:
            d = convolve(d, gens, cap)
        out.n.append(n)
        out.entropy.append(entropy_of(d))
        out.drift.append(drift_exact(d, ball))
        out.second_moment.append(drift_exact(d, ball, 2))
        out.support.append(len(d))
        out.mass_error.append(abs(math.fsum(w / d.total for w in d.weights.values()) - 1.0))
        out.symmetric.append(is_inverse_symmetric(d))
    return out


# -- Monte Carlo drift ---------------------------------------------------------

@dataclass
class DriftBracket:
    n: int
    lower_mean: float
    lower_se: float
    upper_mean: float
    upper_se: float
    trials: int
    seed: int

    def row(self) -> tuple:
        return (self.n, self.lower_mean, self.lower_se, self.upper_mean,
                self.upper_se, self.trials, self.seed)

    def contains(self, value: float, sigmas: float = 5.0) -> bool:
        return (self.lower_mean - sigmas * self.lower_se <= value
                <= self.upper_mean + sigmas * self.upper_se)


DRIFT_COLUMNS = ("n", "lower", "lower_se", "upper", "upper_se", "trials", "seed")


def decoration_values(spec: GroupSpec, semantics: str = "elements") -> np.ndarray:
    """Lamp increments ``p`` in ``(a^e)^p``, for a depth-one tower.

    Element semantics keeps one representative per residue so that the
    triple ``(p, step, q)`` is uniform over distinct generators.
    """
    m = spec.inner.leaf
    raw = [-1, 0, 1]
    if semantics == "words":
        return np.array(raw, dtype=np.int64)
    seen, vals = set(), []
    for p in raw:
        key = p % m if m else p
        if key not in seen:
            seen.add(key)
            vals.append(p)
    return np.array(vals, dtype=np.int64)


def sample_steps(spec: GroupSpec, n: int, rng: np.random.Generator, semantics: str = "elements"):
    """Random ``(direction, before, after)`` arrays for a depth-one tower."""
    vals = decoration_values(spec, semantics)
    dirs = rng.integers(0, 2 * spec.dim, size=n, dtype=np.uint8)
    before = vals[rng.integers(0, len(vals), size=n)]
    after = vals[rng.integers(0, len(vals), size=n)]
    return dirs, before, after


def steps_to_element(spec: GroupSpec, dirs, before, after) -> Element:
    """Reference product of the sampled generators, one multiply per step."""
    steps = unit_steps(spec.dim)
    g = identity(spec)
    for d, p, q in zip(dirs, before, after):
        g = multiply(g, decorated_generator(spec, int(p), steps[int(d)], int(q)))
    return g


def endpoint_from_steps(spec: GroupSpec, dirs, before, after) -> Element:
    """Same element as :func:`steps_to_element`, via the compiled kernel."""
    bx, by, xs, ys, vs = lamplighter_endpoint(dirs, before, after, spec.inner.leaf)
    if spec.dim == 2:
        return make_element(spec, (bx, by), {(int(x), int(y)): int(v) for x, y, v in zip(xs, ys, vs)})
    return make_element(spec, (bx,), {(int(x),): int(v) for x, v in zip(xs, vs)})


def _fast_bracket(spec: GroupSpec, dirs, before, after) -> tuple[float, float]:
    bx, by, xs, ys, vs = lamplighter_endpoint(dirs, before, after, spec.inner.leaf)
    m = spec.inner.leaf
    if m:
        c = np.minimum(vs % m, m - vs % m)
    else:
        c = np.abs(vs)
    total = float(c.sum())
    tour = nn_tour_length(xs, ys, bx, by)
    return 0.5 * total, 2.0 * (total + tour)


def drift_mc_bracket(
    spec: GroupSpec,
    n: int,
    trials: int,
    seed: int,
    semantics: str = "elements",
    gens: GeneratorSet | None = None,
) -> DriftBracket:
    """Monte Carlo means of the word-length bracket at the ``n``-step endpoint."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lows, ups = [], []
    fast = spec.depth == 1
    if not fast:
        gens = gens or build_generators(spec, semantics)
        probs = np.array(gens.weights)
    for i in range(trials):
        rng = trial_rng(seed, i)
        if fast:
            lo, up = _fast_bracket(spec, *sample_steps(spec, n, rng, semantics))
        else:
            idx = rng.choice(len(gens.elements), size=n, p=probs)
            g = identity(spec)
            for j in idx:
                g = multiply(g, gens.elements[j])
            lo, up = word_length_bracket(g)
        lows.append(lo)
        ups.append(up)
    lm, ls = mean_and_stderr(lows)
    um, us = mean_and_stderr(ups)
    return DriftBracket(n, lm, ls, um, us, trials, seed)


def compose_drift(
    inner_drift: Callable, n: int, trials: int, seed: int, threads: int = 1
) -> EstimateReport:
    """Monte Carlo ``E sum_z inner_drift(b_z^(n))`` over planar walks, the
    local-time functional that the wreath drift reduces to."""
    name = getattr(inner_drift, "name", "inner_drift")
    return survey(n, trials, seed, {name: inner_drift}, threads=threads).estimate(name)


# -- entropy bounds --------------------------------------------------------------

@dataclass
class EntropyRow:
    n: int
    H: float
    L: float
    El2: float
    v: int
    lnv: float
    slack_growth: float  # ln v(n) - H(n)
    slack_upper: float  # (v_hat L + ln n + C_upper) - H
    slack_lower: float  # H - (C_lower El2/n - ln n)
    slack_sqrt: float  # K sqrt(n(ln v + ln n)) - L

    def as_tuple(self) -> tuple:
        return (self.n, self.H, self.L, self.El2, self.v, self.lnv, self.slack_growth,
                self.slack_upper, self.slack_lower, self.slack_sqrt)


ENTROPY_COLUMNS = ("n", "H", "L", "El2", "v", "lnv", "slack_growth", "slack_upper",
                   "slack_lower", "slack_sqrt")


@dataclass
class EntropyBoundsReport:
    """Exact checks of the constant-free growth bound and fitted constants.

    ``c_upper`` is the smallest ``C`` with ``H <= v_hat L + ln n + C``;
    ``c_lower`` the largest ``C`` with ``H >= C E[l^2]/n - ln n``;
    ``k_sqrt`` the smallest ``K`` with ``L <= K sqrt(n (ln v + ln n))``.
    """

    spec: GroupSpec
    rows: list
    v_hat: float
    c_upper: float
    c_lower: float
    k_sqrt: float
    growth_bound_ok: bool
    entropy_monotone: bool
    drift_subadditive: bool
    mass_conserved: bool
    symmetric: bool
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.growth_bound_ok and self.entropy_monotone and self.drift_subadditive
                and self.mass_conserved and self.symmetric)


def is_subadditive(values: Sequence) -> bool:
    """``values[a+b] <= values[a] + values[b]`` for every computed pair."""
    top = len(values) - 1
    return all(values[a + b] <= values[a] + values[b]
               for a in range(top + 1) for b in range(top + 1 - a))


def bounds_from_series(s: ExactSeries) -> EntropyBoundsReport:
    ns = s.n
    H = s.entropy
    L = [float(x) for x in s.drift]
    El2 = [float(x) for x in s.second_moment]
    lnv = [math.log(v) for v in s.growth]
    v_hat = max(lnv[n] / n for n in ns if n)
    pos = [n for n in ns if n]
    c_upper = max(H[n] - v_hat * L[n] - math.log(n) for n in pos)
    c_lower = min((H[n] + math.log(n)) * n / El2[n] for n in pos)
    k_sqrt = max(L[n] / math.sqrt(n * (lnv[n] + math.log(n))) for n in pos)
    rows = []
    for n in ns:
        if n:
            su = v_hat * L[n] + math.log(n) + c_upper - H[n]
            sl = H[n] - (c_lower * El2[n] / n - math.log(n))
            sk = k_sqrt * math.sqrt(n * (lnv[n] + math.log(n))) - L[n]
        else:
            su = sl = sk = math.nan
        rows.append(EntropyRow(n, H[n], L[n], El2[n], s.growth[n], lnv[n],
                               lnv[n] - H[n], su, sl, sk))
    return EntropyBoundsReport(
        spec=s.spec,
        rows=rows,
        v_hat=v_hat,
        c_upper=c_upper,
        c_lower=c_lower,
        k_sqrt=k_sqrt,
        growth_bound_ok=all(H[n] <= lnv[n] for n in ns),
        entropy_monotone=all(H[n] <= H[n + 1] for n in ns[:-1]),
        drift_subadditive=is_subadditive(s.drift),
        mass_conserved=all(e <= 1e-12 for e in s.mass_error),
        symmetric=all(s.symmetric),
    )


def entropy_bounds_check(
    specs: Sequence[GroupSpec], n_max: int, cap: int = DEFAULT_SUPPORT_CAP
) -> list[EntropyBoundsReport]:
    return [bounds_from_series(exact_series(spec, n_max, cap)) for spec in specs]


def finite_n_proxies(report: EntropyBoundsReport) -> dict:
    """``H(n)/n``, ``ln v(n)/n`` and ``L(n)/n`` at the largest computed ``n``."""
    last = report.rows[-1]
    n = last.n
    return {"h_hat": last.H / n, "v_hat": last.lnv / n, "l_hat": last.L / n}
