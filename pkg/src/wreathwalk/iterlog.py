"""Iterated-logarithm functions and their concavity checks.

Arguments such as ``exp(exp(8))`` overflow a double, so large values are
held as :class:`TowerReal`, a height-``depth`` exponential tower over a
double ``top``.  Every quantity the checks need is a short product of
iterated logs, which is evaluated as a sum of logs.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

LOG_MAX = math.log(sys.float_info.max)
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, order=True)
class TowerReal:
    """Positive real ``exp(exp(...exp(top)))`` with ``depth`` exponentials.

    Normalised so that ``depth`` is minimal: a nonzero depth means the
    value does not fit in a double, which makes ``(depth, top)`` ordering
    agree with the ordering of the represented reals.
    """

    depth: int
    top: float

    def __post_init__(self):
        depth, top = int(self.depth), float(self.top)
        if depth < 0 or not math.isfinite(top):
            raise ValueError(f"invalid tower ({self.depth}, {self.top})")
        while depth > 0 and top <= LOG_MAX:
            top = math.exp(top)
            depth -= 1
        if depth == 0 and top <= 0.0:
            raise ValueError(f"TowerReal must be positive, got {top!r}")
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "top", top)

    @classmethod
    def from_float(cls, x: float) -> "TowerReal":
        return cls(0, x)

    @classmethod
    def exp_of(cls, log_value: float) -> "TowerReal":
        """The tower whose natural log is ``log_value``."""
        return cls(1, log_value)

    @property
    def fits_float(self) -> bool:
        return self.depth == 0

    def __float__(self) -> float:
        return self.top if self.depth == 0 else math.inf

    def log(self) -> "TowerReal":
        """Natural log, which must itself be positive."""
        if self.depth > 0:
            return TowerReal(self.depth - 1, self.top)
        if self.top <= 1.0:
            raise DomainError(f"log of {self.top!r} is not positive")
        return TowerReal(0, math.log(self.top))

    def ln(self) -> float:
        """Natural log as a double (``inf`` when it overflows)."""
        if self.depth == 0:
            return math.log(self.top)
        if self.depth == 1:
            return self.top
        return math.inf

    def exp(self) -> "TowerReal":
        return TowerReal(self.depth + 1, self.top)

    def times_exp(self, s: float) -> "TowerReal":
        """``self * exp(s)``; exact to double precision at every depth."""
        if self.depth == 0:
            if abs(s) < LOG_MAX:
                v = self.top * math.exp(s)
                if math.isfinite(v) and v > 0.0:
                    return TowerReal(0, v)
            return TowerReal(1, math.log(self.top) + s)
        if self.depth == 1:
            return TowerReal(1, self.top + s)
        # ln(self) >= exp(709), so adding s leaves every double digit unchanged.
        return self

    def scale(self, c: float) -> "TowerReal":
        return self.times_exp(math.log(c))

    def to_text(self) -> str:
        if self.depth == 0:
            return repr(self.top)
        return f"exp^{self.depth}({self.top!r})"

    @classmethod
    def from_text(cls, text: str) -> "TowerReal":
        text = text.strip()
        if text.startswith("exp^"):
            head, _, rest = text[4:].partition("(")
            return cls(int(head), float(rest.rstrip(")")))
        return cls(0, float(text))


def as_tower(x: "TowerReal | float") -> TowerReal:
    return x if isinstance(x, TowerReal) else TowerReal(0, float(x))


def tower_sum(values: Sequence["TowerReal | float"]) -> TowerReal:
    """Sum of positive reals, any of which may be tower-sized."""
    towers = [as_tower(v) for v in values]
    if not towers:
        raise ValueError("empty sum")
    big = max(towers)
    if big.depth == 0:
        return TowerReal(0, math.fsum(t.top for t in towers))
    if big.depth >= 2:
        return big
    logs = [t.ln() for t in towers]
    peak = max(logs)
    return TowerReal(1, peak + math.log(math.fsum(math.exp(v - peak) for v in logs)))


@dataclass(frozen=True)
class IterLogParams:
    k: int
    alpha: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")


def iterated_log_tower(k: int, x: "TowerReal | float") -> TowerReal:
    """ln applied ``k`` times, kept as a tower; every stage must be positive."""
    t = as_tower(x)
    for _ in range(k):
        t = t.log()
    return t


def iterated_log(k: int, x: "TowerReal | float") -> float:
    """ln applied ``k`` times, as a double.

    >>> iterated_log(2, TowerReal(2, 64.0))
    64.0
    """
    t = iterated_log_tower(k, x)
    if t.depth:
        raise OverflowError(f"ln^({k}) of {as_tower(x).to_text()} exceeds double range")
    return t.top


def _log_chain(x: TowerReal, levels: int) -> list:
    """``[x, ln x, ln ln x, ...]`` up to ``levels`` logs; ``None`` once undefined."""
    chain: list = [x]
    for _ in range(levels):
        prev = chain[-1]
        if prev is None:
            chain.append(None)
            continue
        try:
            chain.append(prev.log())
        except DomainError:
            chain.append(None)
    return chain


def _log_increments(chain: list, delta: float, levels: int) -> list[float]:
    """Additive change of ``ln^(i)`` when ``x`` is multiplied by ``1 + delta``.

    Entry ``i`` is ``ln^(i)(x(1+delta)) - ln^(i)(x)`` for ``i = 1..levels``.
    """
    out = [0.0, math.log1p(delta)]
    for i in range(1, levels):
        base = chain[i]
        out.append(math.log1p(out[i] / float(base)))
    return out


def threshold_T(p: IterLogParams) -> TowerReal:
    """``exp`` applied ``k`` times to ``(4k)^(1/alpha)``."""
    return TowerReal(p.k, (4.0 * p.k) ** (1.0 / p.alpha))


def l_tilde(p: IterLogParams, x: "TowerReal | float") -> TowerReal:
    """``x / (ln^(k) x)^alpha`` evaluated in log space."""
    x = as_tower(x)
    ln_m = iterated_log_tower(p.k, x).ln()
    if math.isinf(ln_m):
        # x is at least k+2 exponentials high; the divisor is invisible in x's top.
        return x
    return x.times_exp(-p.alpha * ln_m)


class LTilde:
    """Function handle for ``x / (ln^(k) x)^alpha``."""

    def __init__(self, params: IterLogParams):
        self.params = params
        self.name = f"Ltilde[{params.k},{params.alpha:g}]"

    def __call__(self, x):
        k, a = self.params.k, self.params.alpha
        if np.ndim(x):
            arr = np.asarray(x, dtype=float)
            m = arr
            with np.errstate(invalid="ignore", divide="ignore"):
                for _ in range(k):
                    m = np.log(m)
                return arr / m**a
        return float(x) / iterated_log(k, x) ** a

    def evaluate(self, x: "TowerReal | float") -> TowerReal:
        return l_tilde(self.params, x)

    def log_ratio(self, x: TowerReal, delta: float) -> float:
        """``ln f(x(1+delta)) - ln f(x)`` without forming either value."""
        k = self.params.k
        chain = _log_chain(x, k + 1)
        if chain[k + 1] is None:
            raise DomainError(f"{x.to_text()} outside the domain of ln^({k + 1})")
        inc = _log_increments(chain, delta, k + 1)
        return math.log1p(delta) - self.params.alpha * inc[k + 1]


class ConcaveExtension:
    """Concave, increasing extension of ``LTilde`` to ``[0, inf)``.

    Linear ``beta * x`` up to the last crossing ``z`` with ``LTilde`` and
    equal to ``LTilde`` beyond it, where ``beta = LTilde(T) / (2T)``.
    """

    def __init__(self, params: IterLogParams):
        self.params = params
        self.name = f"L[{params.k},{params.alpha:g}]"
        k, a = params.k, params.alpha
        t = threshold_T(params)
        ln_m_at_t = math.log(iterated_log(k, t))
        # ln(LTilde(T)/T) = -alpha ln m(T)
        self.beta = 0.5 * math.exp(-a * ln_m_at_t)
        # LTilde(x)/x = (ln^(k) x)^-alpha, so the crossing solves ln^(k) z = beta^(-1/alpha).
        self.knot_log = self.beta ** (-1.0 / a)
        self.knot = TowerReal(k, self.knot_log)
        self._knot_float = float(self.knot)
        self._ltilde = LTilde(params)

    def __call__(self, x):
        if np.ndim(x):
            arr = np.asarray(x, dtype=float)
            out = self.beta * arr
            hi = arr > self._knot_float
            if np.any(hi):
                out[hi] = self._ltilde(arr[hi])
            return out
        x = float(x)
        if x <= self._knot_float:
            return self.beta * x
        return self._ltilde(x)

    def evaluate(self, x: "TowerReal | float") -> TowerReal:
        x = as_tower(x)
        if x <= self.knot:
            return x.times_exp(math.log(self.beta))
        return l_tilde(self.params, x)

    def knot_by_bisection(self, iterations: int = 200) -> TowerReal:
        """Largest crossing of ``beta*x`` and ``LTilde`` found by bisection."""
        a = self.params.alpha
        lo = (4.0 * self.params.k) ** (1.0 / a)
        hi = 2.0 * lo
        while hi ** (-a) >= self.beta:
            hi *= 2.0
        # (ln^(k) x)^-alpha >= beta exactly on the lower side of the crossing.
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            if mid ** (-a) >= self.beta:
                lo = mid
            else:
                hi = mid
        return TowerReal(self.params.k, lo)

    def tangency(self) -> tuple[float, float]:
        """Slope of ``LTilde`` at the knot, and ``beta``."""
        k, a = self.params.k, self.params.alpha
        chain = _log_chain(self.knot, k + 1)
        log_prod = math.fsum(float(c.ln()) for c in chain[1 : k + 1])
        return self.beta * (1.0 - a * math.exp(-log_prod)), self.beta

    def _log_correction(self, ln_k: float, ln_k1: float | None) -> float:
        # ln f(y) - ln y
        if ln_k is None or ln_k <= self.knot_log:
            return math.log(self.beta)
        return -self.params.alpha * ln_k1

    def log_ratio(self, x: TowerReal, delta: float) -> float:
        k = self.params.k
        chain = _log_chain(x, k + 1)
        if chain[k] is None or chain[k + 1] is None:
            # far below the knot: the linear piece
            return math.log1p(delta)
        inc = _log_increments(chain, delta, k + 1)
        lk, lk1 = float(chain[k]), float(chain[k + 1])
        lk_y = lk + inc[k]
        if (lk <= self.knot_log) == (lk_y <= self.knot_log):
            if lk <= self.knot_log:
                return math.log1p(delta)
            return math.log1p(delta) - self.params.alpha * inc[k + 1]
        before = self._log_correction(lk, lk1)
        after = self._log_correction(lk_y, lk1 + inc[k + 1])
        return math.log1p(delta) + after - before


def concave_extension(p: IterLogParams) -> ConcaveExtension:
    return ConcaveExtension(p)


@dataclass
class Violation:
    x: str
    second_difference: float
    threshold: float


@dataclass
class ConcavityReport:
    name: str
    points: int
    tol: float
    violations: list[Violation] = field(default_factory=list)
    indistinguishable: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def rows(self) -> list[tuple]:
        out = [
            (v.x, "second_difference", v.second_difference, v.threshold,
             v.threshold - v.second_difference, False)
            for v in self.violations
        ]
        out.append((f"{self.points} points", "concavity_summary", len(self.violations),
                    0, self.indistinguishable, self.passed))
        return out


def _scan_step(lo: float, hi: float, points: int) -> float:
    ratio = (hi / lo) ** (1.0 / max(points - 1, 1))
    return min(0.5 * (ratio - 1.0), 0.05)


def concavity_scan(
    f: Callable,
    lo: "TowerReal | float",
    hi: "TowerReal | float",
    points: int,
    tol: float = DEFAULT_TOL,
    extra: Sequence[float] = (),
) -> ConcavityReport:
    """Second-difference concavity check of ``f`` on a geometric grid.

    Each grid point ``x`` is tested with ``h = delta * x``.  Arguments past
    double range are handled through ``f.log_ratio``, which gives the
    relative second difference without forming ``f``.
    """
    if points < 3:
        raise ValueError("need at least 3 points")
    lo_t, hi_t = (None if (not isinstance(lo, TowerReal) and lo <= 0) else as_tower(lo)), as_tower(hi)
    name = getattr(f, "name", getattr(f, "__name__", "f"))
    report = ConcavityReport(name=name, points=points, tol=tol)
    if hi_t.depth == 0 and (lo_t is None or lo_t.depth == 0):
        lo_f = 1e-298 if lo_t is None else lo_t.top
        hi_f = hi_t.top
        if not lo_f < hi_f:
            raise ValueError("empty scan interval")
        delta = _scan_step(lo_f, hi_f, points)
        xs = np.geomspace(lo_f / (1.0 - delta), hi_f / (1.0 + delta), points)
        inside = [e for e in extra if lo_f / (1.0 - delta) < e < hi_f / (1.0 + delta)]
        if inside:
            xs = np.sort(np.concatenate([xs, inside]))
        report.points = len(xs)
        h = delta * xs
        try:
            # Non-finite differences fail the `d <= t` test below, so overflow is reported there.
            with np.errstate(over="ignore", invalid="ignore"):
                mid = np.asarray(f(xs), dtype=float)
                d2 = np.asarray(f(xs - h), dtype=float) - 2.0 * mid + np.asarray(f(xs + h), dtype=float)
        except TypeError:
            mid = np.array([f(float(x)) for x in xs])
            d2 = np.array([f(float(x - hh)) - 2.0 * f(float(x)) + f(float(x + hh))
                           for x, hh in zip(xs, h)])
        thr = tol * np.abs(mid)
        for x, d, t in zip(xs, d2, thr):
            if not d <= t:
                report.violations.append(Violation(repr(float(x)), float(d), float(t)))
            elif d > 0.0:
                report.indistinguishable += 1
        return report

    if not hasattr(f, "log_ratio"):
        raise TypeError(f"{name} cannot be evaluated beyond double range")
    if lo_t is None:
        raise ValueError("tower-range scans need a positive lower end")
    level = hi_t.depth
    u_lo = iterated_log(level, lo_t)
    u_hi = hi_t.top
    delta = 1e-2
    us = np.geomspace(u_lo, u_hi, points) if u_lo > 0 else np.linspace(u_lo, u_hi, points)
    for u in us[1:-1]:
        x = TowerReal(level, float(u))
        d = math.expm1(f.log_ratio(x, delta)) + math.expm1(f.log_ratio(x, -delta))
        if not d <= tol:
            report.violations.append(Violation(x.to_text(), d, tol))
        elif d > 0.0:
            report.indistinguishable += 1
    report.points = points - 2
    return report


@dataclass
class InequalityRow:
    x: str
    check: str
    lhs: str
    rhs: str
    slack: str
    passed: bool

    def as_tuple(self) -> tuple:
        return (self.x, self.check, self.lhs, self.rhs, self.slack, self.passed)


@dataclass
class AppendixReport:
    params: IterLogParams
    rows: list[InequalityRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def appendix_inequality_check(p: IterLogParams, x: "TowerReal | float") -> AppendixReport:
    """Closed-form check of the two inequalities behind concavity of ``LTilde``.

    With ``u_i = ln^(i) x`` and ``m = u_k^alpha``:

    * ``first``: ``2x m'^2 < m m' / 2``, i.e. ``ln(4 x m'/m) < 0`` where
      ``ln(4 x m'/m) = ln(4 alpha) - (u_2 + ... + u_{k+1})``;
    * ``second``: ``-m'' x <= 1.5 m'``;
    * ``r_bound``: ``x r' <= 1.5 r`` for ``r = alpha / m'``;
    * ``concavity``: their sum form ``2x m'/m - x m''/m' <= 2``.
    """
    x = as_tower(x)
    k, a = p.k, p.alpha
    if x < threshold_T(p):
        raise DomainError(f"{x.to_text()} lies below the threshold {threshold_T(p).to_text()}")
    chain = _log_chain(x, k + 1)
    u = chain  # u[i] = ln^(i) x
    xt = x.to_text()

    pos = tower_sum([u[i] for i in range(2, k + 2)])
    c = math.log(4.0 * a)
    if pos.depth == 0:
        slack1 = pos.top - c
        slack_text, lhs_text = repr(slack1), repr(-slack1)
        ok1 = slack1 > 0.0
    else:
        slack_text, lhs_text = pos.to_text(), "-" + pos.to_text()
        ok1 = True
    rows = [InequalityRow(xt, "first", lhs_text, "0.0", slack_text, ok1)]

    # 1/P_i with P_i = u_1 ... u_i, computed as exp(-(u_2 + ... + u_{i+1})).
    log_u = [None, None] + [float(u[i]) for i in range(2, k + 2)]
    inv_p = [None]
    acc = []
    for i in range(1, k + 1):
        acc.append(log_u[i + 1])
        inv_p.append(math.exp(-math.fsum(acc)) if all(map(math.isfinite, acc)) else 0.0)

    # -x m''/m' from m'' = alpha(alpha-1)u^(alpha-2)u'^2 + alpha u^(alpha-1) u''
    x_du_over_u = inv_p[k]
    minus_x_d2u_over_du = 1.0 + math.fsum(inv_p[1:k])
    second = (1.0 - a) * x_du_over_u + minus_x_d2u_over_du
    rows.append(InequalityRow(xt, "second", repr(second), "1.5", repr(1.5 - second), second <= 1.5))

    # x r'/r for r = x u_1 ... u_{k-1} u_k^(1-alpha), term by term
    r_terms = [1.0] + [inv_p[i] for i in range(1, k)] + [(1.0 - a) * inv_p[k]]
    r_ratio = math.fsum(r_terms)
    rows.append(InequalityRow(xt, "r_bound", repr(r_ratio), "1.5", repr(1.5 - r_ratio), r_ratio <= 1.5))

    total = 2.0 * a * inv_p[k] + second
    rows.append(InequalityRow(xt, "concavity", repr(total), "2.0", repr(2.0 - total), total <= 2.0))
    return AppendixReport(p, rows)


def m_derivatives(p: IterLogParams, x: float) -> tuple[float, float, float]:
    """``(m, m', m'')`` for double-range ``x``, from the closed forms."""
    k, a = p.k, p.alpha
    logs = [x]
    for _ in range(k):
        logs.append(math.log(logs[-1]))
    u = logs[k]
    prod = math.prod(logs[:k])  # x * u_1 * ... * u_{k-1}
    du = 1.0 / prod
    # d/dx ln(prod) = sum_{i<k} 1/(x u_1 ... u_i)
    dlog_prod = math.fsum(1.0 / math.prod(logs[: i + 1]) for i in range(k))
    d2u = -du * dlog_prod
    m = u**a
    dm = a * u ** (a - 1.0) * du
    d2m = a * (a - 1.0) * u ** (a - 2.0) * du**2 + a * u ** (a - 1.0) * d2u
    return m, dm, d2m


def tower_samples(p: IterLogParams, count: int) -> list[TowerReal]:
    """Deterministic spread of points at or above the threshold, up to towers
    two exponentials taller than the threshold itself."""
    c = (4.0 * p.k) ** (1.0 / p.alpha) * (1.0 + 1e-12)
    per = max(count // 3, 1)
    out = [TowerReal(p.k, float(s)) for s in np.geomspace(c, 1e300, per)]
    out += [TowerReal(p.k + 1, float(s)) for s in np.geomspace(math.log(c), 1e300, per)]
    out += [TowerReal(p.k + 2, float(s)) for s in np.geomspace(1.0, 1e300, count - 2 * per)]
    t = threshold_T(p)
    return [max(x, t) for x in out]


@dataclass
class ReciprocalReport:
    k: int
    alpha: float
    points: int
    concavity_violations: list[Violation] = field(default_factory=list)
    undefined: int = 0
    hprime_below_one: int = 0
    g_hprime_not_above_two: int = 0
    indistinguishable: int = 0

    @property
    def passed(self) -> bool:
        return not (self.concavity_violations or self.undefined
                    or self.hprime_below_one or self.g_hprime_not_above_two)


def reciprocal_iterlog(k: int, alpha: float, ln_n: float, ln_x: float) -> float:
    """``1 / (ln^(k)(n/x))^alpha`` from ``ln n`` and ``ln x``; NaN off-domain."""
    w = ln_n - ln_x
    for _ in range(k - 1):
        if w <= 0.0:
            return math.nan
        w = math.log(w)
    if w <= 0.0:
        return math.nan
    return w ** (-alpha)


def reciprocal_iterlog_concavity(
    k: int,
    alpha: float,
    n: "TowerReal | float",
    lo: "TowerReal | float",
    hi: "TowerReal | float",
    points: int,
    tol: float = DEFAULT_TOL,
) -> ReciprocalReport:
    """Concavity scan of ``x -> 1/(ln^(k)(n/x))^alpha`` plus the closed-form
    check ``h'(x) >= 1`` and ``g h' > 2`` for ``h = x ln(n/x) ... ln^(k-1)(n/x)``."""
    p = IterLogParams(k, alpha)
    ln_n = as_tower(n).ln()
    ln_lo, ln_hi = as_tower(lo).ln(), as_tower(hi).ln()
    ln_t = threshold_T(p).ln()
    if not all(map(math.isfinite, (ln_n, ln_lo, ln_hi))):
        raise OverflowError("n, lo and hi need double-range logarithms")
    if ln_n < ln_t + ln_lo:
        raise DomainError("empty domain: n < T * lo")
    if not ln_lo < ln_hi:
        raise ValueError("empty scan interval")
    if points < 3:
        raise ValueError("need at least 3 points")
    ratio_log = (ln_hi - ln_lo) / (points - 1)
    delta = min(0.5 * math.expm1(min(ratio_log, 1.0)), 1e-2)
    up, down = math.log1p(delta), math.log1p(-delta)
    if max(math.ulp(ln_n), math.ulp(ln_lo), math.ulp(ln_hi)) > 1e-6 * delta:
        raise OverflowError("ln n is too large to resolve steps of ln x in double precision")
    grid = np.linspace(ln_lo - down, ln_hi - up, points)
    report = ReciprocalReport(k, alpha, points)
    for lx in grid:
        lx = float(lx)
        mid = reciprocal_iterlog(k, alpha, ln_n, lx)
        d2 = (reciprocal_iterlog(k, alpha, ln_n, lx + down) - 2.0 * mid
              + reciprocal_iterlog(k, alpha, ln_n, lx + up))
        if math.isnan(d2):
            report.undefined += 1
            continue
        thr = tol * abs(mid)
        if d2 > thr:
            report.concavity_violations.append(Violation(repr(lx), d2, thr))
        elif d2 > 0.0:
            report.indistinguishable += 1
        w = [ln_n - lx]
        for _ in range(k - 1):
            w.append(math.log(w[-1]))
        prefix, correction = 1.0, 0.0
        for wi in w[:-1]:
            prefix *= wi
            correction += 1.0 / prefix
        hprime = math.prod(w[:-1]) * (1.0 - correction)
        if hprime < 1.0:
            report.hprime_below_one += 1
        if not w[-1] * hprime > 2.0:
            report.g_hprime_not_above_two += 1
    return report


def composition_ratio(k: int, alpha: float, n: float) -> float:
    """``(n/ln n) LTilde_k(ln n) / LTilde_{k+1}(n)``, evaluated in log space."""
    p, q = IterLogParams(k, alpha), IterLogParams(k + 1, alpha)
    ln_n = math.log(n)
    lhs = math.log(n) - math.log(ln_n) + l_tilde(p, ln_n).ln()
    rhs = l_tilde(q, n).ln()
    return math.exp(lhs - rhs)
