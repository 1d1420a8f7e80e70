import numpy as np
import pytest

from ttcgame import (
    ComputeLevel,
    InvalidArgumentError,
    ProviderProfile,
    TieWarning,
    ValidationMode,
    max_user_value,
    profit,
    user_value,
    validate_profile,
    welfare_contribution,
    welfare_optimal_level,
)
from helpers import worked_example_game


@pytest.fixture
def p1():
    return worked_example_game().providers[0]


@pytest.fixture
def p2():
    return worked_example_game().providers[1]


def test_user_value_worked_example(p1, p2):
    assert user_value(p1, 0) == 1.0875
    assert user_value(p1, "High") == 0.55
    assert user_value(p2, "Low") == 0.375
    assert user_value(p2, ComputeLevel(1, "High")) == -10.6


def test_zero_value_when_quality_equals_price():
    p = ProviderProfile("x", [0.7], [0.7], [0.1])
    assert user_value(p, 0) == 0.0


def test_welfare_contribution_worked_example(p1, p2):
    assert welfare_contribution(p1, "Low") == 1.15
    assert welfare_contribution(p1, "High") == 0.8
    assert welfare_contribution(p2, "Low") == 0.5
    assert profit(p1, "High") == 0.25


def test_unknown_level_rejected(p1):
    with pytest.raises(InvalidArgumentError):
        user_value(p1, 2)
    with pytest.raises(InvalidArgumentError):
        welfare_contribution(p1, "Medium")
    with pytest.raises(InvalidArgumentError):
        user_value(p1, ComputeLevel(0, "High"))


def test_max_user_value(p1, p2):
    lv, v = max_user_value(p1)
    assert (lv.label, v) == ("Low", 1.0875)
    lv, v = max_user_value(p2)
    assert (lv.label, v) == ("Low", 0.375)
    single = ProviderProfile("s", [2.0], [1.0], [0.5])
    assert max_user_value(single) == (ComputeLevel(0, "0"), 1.0)


def test_welfare_optimal_level(p1, p2):
    assert welfare_optimal_level(p1)[0].label == "Low"
    assert welfare_optimal_level(p1)[1] == 1.15
    assert welfare_optimal_level(p2) == (ComputeLevel(0, "Low"), 0.5)


def test_welfare_tie_goes_to_lowest_and_warns():
    p = ProviderProfile("flat", [1.0, 2.0, 3.0], [0.5, 1.75, 3.0], [0.25, 1.25, 2.25])
    with pytest.warns(TieWarning):
        lv, w = welfare_optimal_level(p)
    assert lv.ordinal == 0 and w == 0.75


def test_empty_profile_rejected():
    p = ProviderProfile("empty", [], [], [])
    with pytest.raises(InvalidArgumentError):
        max_user_value(p)
    with pytest.raises(InvalidArgumentError):
        welfare_optimal_level(p)


def test_profile_construction_checks():
    with pytest.raises(InvalidArgumentError):
        ProviderProfile("x", [1, 2], [0.5], [0.1, 0.2])
    with pytest.raises(InvalidArgumentError):
        ProviderProfile("x", [1, np.inf], [0.5, 0.6], [0.1, 0.2])
    with pytest.raises(InvalidArgumentError):
        ProviderProfile("x", [1], [0.5], [0.1], levels=(ComputeLevel(1, "a"),))


def test_profile_arrays_are_immutable(p1):
    with pytest.raises(ValueError):
        p1.quality[0] = 5.0


def test_identities_within_rounding(p1, p2):
    for p in (p1, p2):
        np.testing.assert_allclose(p.values + p.price, p.quality, rtol=0, atol=1e-12)
        np.testing.assert_allclose(p.welfare + p.cost, p.quality, rtol=0, atol=1e-12)


def test_validate_worked_example_provider_clean(p1):
    assert validate_profile(p1, ValidationMode.STRICT) == []


def test_zero_profit_is_error_in_both_modes():
    p = ProviderProfile("z", [1.0, 2.0], [0.5, 0.8], [0.5, 0.6])
    for mode in ValidationMode:
        codes = {(f.severity, f.code) for f in validate_profile(p, mode)}
        assert ("error", "nonpositive_profit") in codes


def test_nonpositive_cost_is_error():
    p = ProviderProfile("z", [1.0], [0.5], [0.0])
    assert validate_profile(p, "lenient")[0].code == "nonpositive_cost"


def test_decreasing_quality_mode_semantics():
    p = ProviderProfile("d", [2.0, 1.0], [0.5, 0.8], [0.4, 0.6])
    strict = validate_profile(p, "strict")
    lenient = validate_profile(p, "lenient")
    assert [f.severity for f in strict] == ["error"]
    assert [f.severity for f in lenient] == ["warning"]
    assert lenient[0].code == "quality_decreasing"


def test_flat_profit_flagged():
    p = ProviderProfile("f", [1.0, 2.0], [0.5, 0.7], [0.4, 0.6])
    assert [f.code for f in validate_profile(p)] == ["profit_not_increasing"]


def test_levels_default_labels():
    p = ProviderProfile("x", [1.0, 2.0], [0.5, 0.8], [0.4, 0.6])
    assert [str(lv) for lv in p.levels] == ["0", "1"]
    assert p.ordinal("1") == 1
