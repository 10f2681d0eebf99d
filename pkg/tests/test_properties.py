import numpy as np
import pytest

from cwrev.profiles import PiecewiseTrigProfile, SineSeriesProfile, validate
from cwrev.properties import (
    MAX_TERMS,
    PropertyOutcome,
    random_piecewise_profile,
    random_sine_profile,
    run_all,
    run_bijection_checks,
    run_variational_checks,
    run_wirtinger,
)


def _strip_time(o: PropertyOutcome):
    return (o.property_id, o.samples, o.worst_residual, o.violations, tuple(_strip_time(c) for c in o.children))


@pytest.mark.parametrize("runner", [run_wirtinger, run_bijection_checks, run_variational_checks])
def test_runners_pass_and_are_deterministic(runner):
    a = runner(60, 5)
    b = runner(60, 5)
    assert a.passed, a
    assert _strip_time(a) == _strip_time(b)
    assert a == b  # elapsed time is excluded from equality


def test_different_seeds_differ():
    assert run_wirtinger(20, 1).worst_residual != run_wirtinger(20, 2).worst_residual


@pytest.mark.parametrize("runner", [run_wirtinger, run_bijection_checks, run_variational_checks])
def test_runners_reject_zero_samples(runner):
    with pytest.raises(ValueError):
        runner(0, 0)


def test_variational_children():
    out = run_variational_checks(100, 0)
    ids = [c.property_id for c in out.children]
    assert ids == ["ratio_monotonicity", "quadratic_expansion", "merge_monotonicity", "slope_signs", "global_bound"]
    assert out.violations == sum(c.violations for c in out.children)
    assert out.samples == sum(c.samples for c in out.children)


def test_wirtinger_residual_is_nonpositive():
    out = run_wirtinger(200, 3)
    assert out.worst_residual <= 1e-12


def test_random_profiles_are_valid():
    rng = np.random.default_rng(0)
    for _ in range(100):
        s = random_sine_profile(rng)
        assert isinstance(s, SineSeriesProfile) and 1 <= len(s.coefficients) <= MAX_TERMS
        p = random_piecewise_profile(rng)
        assert isinstance(p, PiecewiseTrigProfile) and validate(p).ok


def test_run_all_and_serialization():
    outcomes = run_all(30, 11)
    assert [o.property_id for o in outcomes] == ["wirtinger", "bijection", "variational"]
    d = outcomes[2].to_dict()
    assert set(d) == {"property_id", "samples", "worst_residual", "violations", "elapsed", "children"}
    assert len(d["children"]) == 5
