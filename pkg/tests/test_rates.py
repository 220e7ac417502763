import math

import numpy as np
import pytest

from wreathwalk.rates import (
    BASE_CASE_CATALOG,
    DEFAULT_CATALOG,
    loglog_slope,
    rate_fit,
    rate_function,
)

NS = [2.0**k for k in range(10, 21, 2)]


@pytest.mark.parametrize("name,fn", [
    ("n", lambda n: n),
    ("sqrt(n)", math.sqrt),
    ("n/ln n", lambda n: n / math.log(n)),
    ("n/ln ln n", lambda n: n / math.log(math.log(n))),
    ("n^(3/4)", lambda n: n**0.75),
    ("n^(0.25)", lambda n: n**0.25),
    ("n^(1-2^-3)", lambda n: n ** (7 / 8)),
    ("n/(ln^(2) n)^0.5", lambda n: n / math.sqrt(math.log(math.log(n)))),
    ("n/(ln^(3) n)^2^-2", lambda n: n / math.log(math.log(math.log(n))) ** 0.25),
    ("n/(ln^(1) n)^1/3", lambda n: n / math.log(n) ** (1 / 3)),
])
def test_rate_functions(name, fn):
    got = rate_function(name)(np.array(NS))
    assert np.allclose(got, [fn(n) for n in NS], rtol=1e-14)


def test_unknown_rate():
    with pytest.raises(ValueError):
        rate_function("n log n")


@pytest.mark.parametrize("name", BASE_CASE_CATALOG)
def test_synthetic_series_ranked_first(name):
    f = rate_function(name)
    series = [(n, 2.5 * float(f(np.array(n)))) for n in NS]
    reports = rate_fit(series, BASE_CASE_CATALOG)
    assert reports[0].rate == name
    assert reports[0].band_ratio == pytest.approx(1.0, abs=1e-12)
    assert reports[0].band_min == pytest.approx(2.5)


def test_noisy_n_over_log_n():
    rng = np.random.default_rng(0)
    series = [(n, n / math.log(n) * (1 + 0.01 * rng.standard_normal())) for n in NS]
    assert rate_fit(series, BASE_CASE_CATALOG)[0].rate == "n/ln n"


def test_report_fields():
    series = [(n, n**0.5) for n in NS]
    r = rate_fit(series, ["sqrt(n)", "n"], proxies={"h_hat": 0.1})
    assert r[0].slope == pytest.approx(0.5)
    assert r[0].residual_slope == pytest.approx(0.0, abs=1e-12)
    assert r[1].residual_slope == pytest.approx(-0.5)
    assert r[0].h_hat == 0.1
    assert r[0].row()[:3] == ("sqrt(n)", pytest.approx(1.0), pytest.approx(1.0))


def test_stable_ties():
    series = [(n, n) for n in NS]
    reports = rate_fit(series, ["n", "n^(1)"])
    assert [r.rate for r in reports] == ["n", "n^(1)"]


def test_bad_series():
    with pytest.raises(ValueError):
        rate_fit([(1, 1), (2, 2)])
    with pytest.raises(ValueError):
        rate_fit([(4, 1), (2, 2), (8, 3)])
    with pytest.raises(ValueError):
        rate_fit([(2, 1), (4, 0), (8, 3)])


def test_loglog_slope():
    n = np.array(NS)
    assert loglog_slope(n, 3 * n**1.25) == pytest.approx(1.25)


def test_default_catalog_parses():
    for name in DEFAULT_CATALOG:
        rate_function(name)
