import math
from fractions import Fraction

import pytest

from naive_lamplighter import naive_exact_series
from wreathwalk.errors import EscapeError, ResourceError
from wreathwalk.estimators import (
    bounds_from_series,
    compose_drift,
    convolve,
    drift_exact,
    drift_mc_bracket,
    drift_of,
    endpoint_from_steps,
    entropy_bounds_check,
    entropy_of,
    exact_series,
    finite_n_proxies,
    is_inverse_symmetric,
    is_subadditive,
    point_mass,
    sample_steps,
    steps_to_element,
)
from wreathwalk.groups import GroupSpec, bfs_ball, build_generators
from wreathwalk.iterlog import IterLogParams, concave_extension
from wreathwalk.rng import trial_rng

Z2C2 = GroupSpec.parse("Z2 wr C2")
ZC2 = GroupSpec.parse("Z wr C2")


@pytest.mark.parametrize("spec,dim,m,n_max", [(Z2C2, 2, 2, 3), (ZC2, 1, 2, 5), (GroupSpec((2,), 3), 2, 3, 2)])
def test_exact_series_against_naive_oracle(spec, dim, m, n_max):
    s = exact_series(spec, n_max)
    for n, (h, drift, support) in enumerate(naive_exact_series(dim, m, n_max)):
        assert s.drift[n] == drift
        assert s.entropy[n] == pytest.approx(h, rel=1e-12, abs=1e-15)
        assert s.support[n] == support


def test_exact_series_small_values():
    s = exact_series(Z2C2, 3)
    assert s.drift[:3] == [0, 1, Fraction(15, 8)]
    assert s.support == [1, 16, 90, 464]
    assert s.entropy[0] == 0.0 and not math.copysign(1.0, s.entropy[0]) < 0
    assert s.entropy[1] == pytest.approx(math.log(16))
    assert all(s.symmetric) and max(s.mass_error) <= 1e-12


def test_words_semantics_weights():
    gens = build_generators(GroupSpec.parse("Z2 wr C3"), "words")
    d = convolve(point_mass(gens.spec), gens)
    assert d.total == gens.total_multiplicity == 36
    assert is_inverse_symmetric(d)


def test_convolve_cap_and_escape():
    gens = build_generators(Z2C2)
    d = convolve(convolve(point_mass(Z2C2), gens), gens)
    with pytest.raises(ResourceError):
        convolve(d, gens, cap=100)
    with pytest.raises(EscapeError):
        drift_of(d, bfs_ball(Z2C2, 1))
    assert drift_of(d, bfs_ball(Z2C2, 2)) == 1.875
    assert drift_exact(d, bfs_ball(Z2C2, 2), 2) > 1.875**2


def test_entropy_of_point_mass():
    assert entropy_of(point_mass(Z2C2)) == 0.0


def test_subadditive():
    assert is_subadditive([0, 1, 1.8, 2.5])
    assert not is_subadditive([0, 1, 2.5])


@pytest.mark.parametrize("spec", [Z2C2, ZC2, GroupSpec.parse("Z2 wr Z"), GroupSpec.parse("Z wr C3")])
@pytest.mark.parametrize("semantics", ["elements", "words"])
def test_fast_endpoint_matches_reference(spec, semantics):
    for i in range(20):
        steps = sample_steps(spec, 60, trial_rng(4, i), semantics)
        assert endpoint_from_steps(spec, *steps) == steps_to_element(spec, *steps)


def test_element_semantics_uniform_over_generators():
    # every (p, step, q) triple is a distinct generator
    gens = build_generators(Z2C2)
    dirs, before, after = sample_steps(Z2C2, 32000, trial_rng(0, 0))
    keys = set(zip(dirs.tolist(), before.tolist(), after.tolist()))
    assert len(keys) == len(gens)


def test_mc_bracket_contains_exact_drift():
    s = exact_series(Z2C2, 4)
    for n in range(1, 5):
        b = drift_mc_bracket(Z2C2, n, 2000, 3)
        assert b.lower_mean <= b.upper_mean
        assert b.contains(float(s.drift[n]))


def test_mc_bracket_generic_path():
    spec = GroupSpec.parse("Z2 wr Z2 wr C2")
    b = drift_mc_bracket(spec, 20, 30, 1)
    assert 0 < b.lower_mean <= b.upper_mean
    assert b.row()[0] == 20


def test_mc_bracket_deterministic():
    a = drift_mc_bracket(Z2C2, 500, 20, 9).row()
    assert a == drift_mc_bracket(Z2C2, 500, 20, 9).row()


def test_compose_drift_linear_regime():
    # For k=1, alpha=1 the knot is e^8, so local times below 2980 see beta*b = b/8.
    f = concave_extension(IterLogParams(1, 1.0))
    est = compose_drift(f, 4096, 10, 0)
    assert est.mean == pytest.approx(4097 / 8, rel=1e-14)


def test_entropy_bounds_small():
    reps = entropy_bounds_check([Z2C2, ZC2], 3)
    assert all(r.passed for r in reps)
    r = reps[0]
    assert all(row.slack_growth >= 0 for row in r.rows)
    assert all(row.slack_upper >= -1e-12 for row in r.rows[1:])
    assert all(row.slack_lower >= -1e-12 for row in r.rows[1:])
    proxies = finite_n_proxies(r)
    assert proxies["h_hat"] <= proxies["v_hat"]


def test_bounds_flags_broken_series():
    s = exact_series(ZC2, 3)
    s.entropy[2] = s.entropy[3] + 1.0
    assert not bounds_from_series(s).entropy_monotone
