"""Top-level package for seasirs."""

__version__ = "0.1.0"

from seasirs.exceptions import (
    ConfigError,
    NumericalError,
    PreconditionError,
    SeasirsBaseException,
    ValidationError,
)
from seasirs.models import ModelParams, State, validate
from seasirs.config import ScenarioConfig, parse_config, render_config

from seasirs.api.client import Client
