"""This module contains the epidemiological parameter model and its
validation."""

import dataclasses
import json
import logging
import math
from typing import Any, Dict, List

from seasirs.exceptions import PreconditionError, ValidationError

LOGGER = logging.getLogger(__name__)

PARAM_FIELDS = (
    "d",
    "alpha",
    "sigma",
    "mu",
    "r_a",
    "r_s",
    "beta1",
    "beta2",
    "theta",
    "omega",
    "N",
)


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """The epidemiological and seasonal constants of the model.

    :param d: Birth and death rate
    :param alpha: Contact reduction of symptomatic infectives
    :param sigma: Rate of immunity loss
    :param mu: Fraction of new infections that stay asymptomatic
    :param r_a: Recovery rate of asymptomatic infectives
    :param r_s: Recovery rate of symptomatic infectives
    :param beta1: Transmission rate in the low season
    :param beta2: Transmission rate in the high season
    :param theta: Share of the high season in one period
    :param omega: Length of the period
    :param N: Total population size
    """

    d: float
    alpha: float
    sigma: float
    mu: float
    r_a: float
    r_s: float
    beta1: float
    beta2: float
    theta: float
    omega: float
    N: float

    @property
    def low_season_length(self) -> float:
        return (1.0 - self.theta) * self.omega

    @property
    def high_season_length(self) -> float:
        return self.theta * self.omega

    @property
    def is_autonomous(self) -> bool:
        """Whether both seasons share the same transmission rate."""
        return self.beta1 == self.beta2

    @property
    def beta(self) -> float:
        """The common transmission rate of the non-seasonal model.

        :return: β₁ (which equals β₂)
        """
        if not self.is_autonomous:
            raise PreconditionError(
                "Non-seasonal formula requires beta1 == beta2, got {!r} != {!r}".format(
                    self.beta1, self.beta2
                )
            )
        return self.beta1

    @property
    def kappa(self) -> float:
        """The slowest decay rate of the infective compartments."""
        return self.d + min(self.r_a, self.r_s)

    def replace(self, **changes: float) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def with_beta(self, beta: float) -> "ModelParams":
        """Return a non-seasonal copy with β₁ = β₂ = beta."""
        return dataclasses.replace(self, beta1=beta, beta2=beta)

    def to_dict(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in PARAM_FIELDS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelParams":
        """Build the parameter set from a dictionary.

        Unknown and missing keys are rejected, so that a misspelt parameter
        never silently falls back to a default.

        :param data: The parameter dictionary
        :return: The parameter model
        """
        unknown = sorted(set(data) - set(PARAM_FIELDS))
        if unknown:
            raise ValidationError(
                "Unknown parameter key(s): {}".format(", ".join(unknown))
            )
        missing = [name for name in PARAM_FIELDS if name not in data]
        if missing:
            raise ValidationError(
                "Missing parameter field(s): {}".format(", ".join(missing))
            )
        values = {}
        for name in PARAM_FIELDS:
            value = data[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(
                    "Parameter {} must be a number, got {!r}".format(name, value)
                )
            values[name] = float(value)
        return cls(**values)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))


@dataclasses.dataclass(frozen=True)
class ValidationResult:
    """The outcome of a parameter validation.

    :param violations: Human-readable descriptions of violated constraints
    :param warnings: Accepted but noteworthy parameter choices
    """

    violations: List[str] = dataclasses.field(default_factory=list)
    warnings: List[str] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def violated_fields(self) -> List[str]:
        """The parameter names mentioned by the violations."""
        return [v.split(" ", 1)[0] for v in self.violations]

    def raise_for_violations(self) -> None:
        if self.violations:
            raise ValidationError("; ".join(self.violations))


def validate(params: ModelParams) -> ValidationResult:
    """Check a parameter set against the model's admissible ranges.

    This is a total function: it never raises, but lists every violated
    constraint. Degenerate denominators (d + σ, d + r_a or d + r_s equal to
    zero) and β₂ < β₁ are reported as warnings; the operations whose formulas
    need the denominators reject such parameters themselves.

    :param params: The parameter set to check
    :return: The validation result
    """
    violations = []
    warnings = []

    for name in PARAM_FIELDS:
        value = getattr(params, name)
        if not math.isfinite(value):
            violations.append("{} is not finite".format(name))
    if violations:
        return ValidationResult(violations=violations)

    for name in ("d", "sigma", "r_a", "r_s", "beta1", "beta2"):
        if getattr(params, name) < 0:
            violations.append("{} ∉ [0,∞)".format(name))
    for name in ("mu", "alpha"):
        if not 0.0 <= getattr(params, name) <= 1.0:
            violations.append("{} ∉ [0,1]".format(name))
    if not 0.0 < params.theta < 1.0:
        violations.append("theta ∉ (0,1)")
    for name in ("omega", "N"):
        if not getattr(params, name) > 0:
            violations.append("{} ∉ (0,∞)".format(name))

    if params.beta1 == 0 and params.beta2 == 0:
        warnings.append("degenerate: no transmission")
    for label, value in (
        ("d + sigma", params.d + params.sigma),
        ("d + r_a", params.d + params.r_a),
        ("d + r_s", params.d + params.r_s),
    ):
        if value == 0:
            warnings.append("degenerate: {} = 0".format(label))
    if params.beta2 < params.beta1:
        warnings.append("beta2 < beta1: the high season transmits less")

    for warning in warnings:
        LOGGER.debug("Parameter warning: %s", warning)
    return ValidationResult(violations=violations, warnings=warnings)


def require_valid(params: ModelParams) -> ModelParams:
    """Raise a :code:`ValidationError` unless the parameters are valid.

    :param params: The parameter set
    :return: The very same parameter set
    """
    validate(params).raise_for_violations()
    return params


def require_positive_denominators(params: ModelParams) -> None:
    """Reject parameters for which d + σ, d + r_a or d + r_s vanishes.

    :param params: The parameter set
    """
    if params.d + params.sigma <= 0:
        raise PreconditionError("d + sigma must be positive")
    if params.d + params.r_a <= 0:
        raise PreconditionError("d + r_a must be positive")
    if params.d + params.r_s <= 0:
        raise PreconditionError("d + r_s must be positive")
