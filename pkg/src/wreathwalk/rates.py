"""Asymptotic-rate catalog and ratio-band fitting."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

DEFAULT_CATALOG = (
    "n",
    "sqrt(n)",
    "n/ln n",
    "n/ln ln n",
    "n^(3/4)",
    "n/sqrt(ln n)",
    "n/(ln^(2) n)^0.5",
    "n^(1-2^-3)",
)

BASE_CASE_CATALOG = ("n", "sqrt(n)", "n/ln n", "n/ln ln n", "n^(3/4)")


def _iterlog(k: int, n: np.ndarray) -> np.ndarray:
    out = np.asarray(n, dtype=float)
    for _ in range(k):
        out = np.log(out)
    return out


def _fixed(name: str) -> Callable | None:
    return {
        "n": lambda n: n,
        "sqrt(n)": np.sqrt,
        "n/ln n": lambda n: n / np.log(n),
        "n/ln ln n": lambda n: n / np.log(np.log(n)),
        "n/sqrt(ln n)": lambda n: n / np.sqrt(np.log(n)),
    }.get(name)


def rate_function(name: str) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised rate for a catalog name.

    Besides the fixed names, accepts ``n^(p)`` (``p`` a decimal or
    fraction), ``n^(1-2^-k)`` and ``n/(ln^(k) n)^a`` with ``a`` a decimal,
    a fraction or ``2^-i``.
    """
    f = _fixed(name)
    if f is not None:
        return f
    m = re.fullmatch(r"n\^\(1-2\^-(\d+)\)", name)
    if m:
        e = 1.0 - 2.0 ** -int(m.group(1))
        return lambda n: np.power(n, e)
    m = re.fullmatch(r"n\^\(([0-9./]+)\)", name)
    if m:
        e = float(Fraction(m.group(1)))
        return lambda n: np.power(n, e)
    m = re.fullmatch(r"n/\(ln\^\((\d+)\) n\)\^(2\^-\d+|[0-9./]+)", name)
    if m:
        k, text = int(m.group(1)), m.group(2)
        a = 2.0 ** -int(text[3:]) if text.startswith("2^-") else float(Fraction(text))
        return lambda n: n / _iterlog(k, n) ** a
    raise ValueError(f"unknown rate {name!r}")


@dataclass
class AsymptoticsReport:
    """Fit of one catalog rate to a series.

    ``slope`` is the log-log slope of the series itself and
    ``residual_slope`` that of ``value / rate``; the band is the range of
    ``value / rate`` over the grid.
    """

    rate: str
    band_min: float
    band_max: float
    slope: float
    residual_slope: float
    h_hat: float | None = None
    v_hat: float | None = None
    l_hat: float | None = None

    @property
    def band_ratio(self) -> float:
        return self.band_max / self.band_min

    def row(self) -> tuple:
        return (self.rate, self.band_min, self.band_max, self.slope,
                self.band_ratio, self.residual_slope)


RATE_COLUMNS = ("rate_name", "band_min", "band_max", "slope", "band_ratio", "residual_slope")


def loglog_slope(n: np.ndarray, values: np.ndarray) -> float:
    return float(np.polyfit(np.log(n), np.log(values), 1)[0])


def rate_fit(
    series: Sequence[tuple[float, float]],
    catalog: Sequence[str] = DEFAULT_CATALOG,
    proxies: dict | None = None,
) -> list[AsymptoticsReport]:
    """Rank catalog rates by how tightly ``value / rate`` stays banded."""
    if len(series) < 3:
        raise ValueError("rate_fit needs at least 3 points")
    n = np.array([float(a) for a, _ in series])
    v = np.array([float(b) for _, b in series])
    if np.any(np.diff(n) <= 0):
        raise ValueError("n must be strictly increasing")
    if np.any(v <= 0):
        raise ValueError("values must be positive")
    slope = loglog_slope(n, v)
    proxies = proxies or {}
    reports = []
    for name in catalog:
        ratio = v / rate_function(name)(n)
        reports.append(AsymptoticsReport(
            name, float(ratio.min()), float(ratio.max()), slope,
            loglog_slope(n, ratio), **proxies))
    # Python's sort is stable, so ties keep catalog order.
    reports.sort(key=lambda r: r.band_ratio)
    return reports
