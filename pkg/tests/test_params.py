import json
import math

import pytest

from seasirs.exceptions import DomainError, PreconditionError, ValidationError
from seasirs.models import (
    PARAM_FIELDS,
    ModelParams,
    State,
    require_positive_denominators,
    require_valid,
    validate,
)

from .common import P_STAR, p_star


def degenerate_params(**changes):
    values = dict.fromkeys(PARAM_FIELDS, 0.0)
    values.update(theta=0.5, omega=1.0, N=1.0)
    values.update(changes)
    return ModelParams(**values)


def test_validate_pstar():
    result = validate(p_star())
    assert result.ok
    assert result.violations == []
    assert result.warnings == []


def test_validate_all_zero_rates():
    result = validate(degenerate_params())
    assert result.ok
    assert "degenerate: no transmission" in result.warnings


@pytest.mark.parametrize(
    "changes,violation",
    [
        ({"mu": 1.5}, "mu ∉ [0,1]"),
        ({"alpha": -0.1}, "alpha ∉ [0,1]"),
        ({"theta": 0.0}, "theta ∉ (0,1)"),
        ({"theta": 1.0}, "theta ∉ (0,1)"),
        ({"omega": 0.0}, "omega ∉ (0,∞)"),
        ({"N": -1.0}, "N ∉ (0,∞)"),
        ({"d": -0.01}, "d ∉ [0,∞)"),
        ({"beta2": -1.0}, "beta2 ∉ [0,∞)"),
        ({"sigma": math.nan}, "sigma is not finite"),
        ({"r_a": math.inf}, "r_a is not finite"),
    ],
)
def test_validate_violations(changes, violation):
    result = validate(p_star().replace(**changes))
    assert not result.ok
    assert violation in result.violations
    with pytest.raises(ValidationError):
        result.raise_for_violations()
    with pytest.raises(ValidationError):
        require_valid(p_star().replace(**changes))


def test_validate_lists_every_violation():
    result = validate(p_star().replace(mu=2.0, theta=0.0, N=0.0))
    assert result.violated_fields() == ["mu", "theta", "N"]


def test_validate_beta2_below_beta1_warns():
    result = validate(p_star(beta1=0.004, beta2=0.001))
    assert result.ok
    assert any("beta2 < beta1" in w for w in result.warnings)


def test_validate_degenerate_denominator_warns():
    params = degenerate_params(beta1=1.0, beta2=1.0)
    result = validate(params)
    assert result.ok
    assert "degenerate: d + sigma = 0" in result.warnings
    with pytest.raises(PreconditionError):
        require_positive_denominators(params)


def test_season_lengths():
    params = p_star(theta=0.25, omega=4.0)
    assert params.low_season_length == 3.0
    assert params.high_season_length == 1.0
    assert params.kappa == pytest.approx(0.12)


def test_beta_requires_autonomous():
    assert p_star().beta == 0.004
    assert p_star(beta2=0.006).is_autonomous is False
    with pytest.raises(PreconditionError):
        p_star(beta2=0.006).beta


def test_with_beta():
    params = p_star(beta2=0.006).with_beta(0.002)
    assert params.beta1 == params.beta2 == 0.002
    assert params.mu == P_STAR["mu"]


def test_params_json():
    params = p_star(beta2=0.006)
    assert ModelParams.from_json(params.to_json()) == params
    assert json.loads(params.to_json())["beta2"] == 0.006


@pytest.mark.parametrize(
    "changes",
    [{"gamma": 0.1}, {"beta1": "0.1"}, {"beta1": True}],
)
def test_params_from_dict_rejects(changes):
    data = p_star().to_dict()
    data.update(changes)
    with pytest.raises(ValidationError):
        ModelParams.from_dict(data)


def test_params_from_dict_missing_field():
    data = p_star().to_dict()
    del data["omega"]
    with pytest.raises(ValidationError) as excinfo:
        ModelParams.from_dict(data)
    assert "omega" in str(excinfo.value)


def test_state_domain():
    assert State(100.0, 0.0, 0.0).in_domain(100.0)
    assert State(50.0, 25.0, 25.0).in_domain(100.0)
    assert not State(50.0, 30.0, 25.0).in_domain(100.0)
    assert not State(-1e-3, 0.0, 0.0).in_domain(100.0)
    assert State(-1e-9, 0.0, 0.0).in_domain(100.0, tol=1e-8)
    assert not State(math.nan, 0.0, 0.0).in_domain(100.0)
    with pytest.raises(DomainError):
        State(101.0, 0.0, 0.0).require_in_domain(100.0)


def test_state_helpers():
    state = State(50.0, 10.0, 5.0)
    assert state.recovered(100.0) == 35.0
    assert state.infectives == 15.0
    assert state.distance(State(49.0, 12.0, 5.0)) == 3.0
    assert State.from_array(state.as_array()) == state
    assert State.from_dict(state.to_dict()) == state


@pytest.mark.parametrize(
    "data",
    [
        {"S": 1.0, "I_a": 0.0},
        {"S": 1.0, "I_a": 0.0, "I_s": 0.0, "R": 0.0},
        {"S": "1", "I_a": 0.0, "I_s": 0.0},
    ],
)
def test_state_from_dict_rejects(data):
    with pytest.raises(ValidationError):
        State.from_dict(data)


def test_state_from_array_length():
    with pytest.raises(ValidationError):
        State.from_array([1.0, 2.0])
