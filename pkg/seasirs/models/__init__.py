"""This package contains the parameter, state and season domain models."""

from seasirs.models.params import (
    PARAM_FIELDS,
    ModelParams,
    ValidationResult,
    require_positive_denominators,
    require_valid,
    validate,
)
from seasirs.models.state import Season, SeasonLabel, State
