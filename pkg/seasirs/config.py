"""This module contains the scenario configuration and its JSON codec.

A scenario is a JSON document of the form

.. code-block:: json

    {
        "params": {"d": 0.02, "alpha": 0.3, "sigma": 0.05, "mu": 0.4,
                   "r_a": 0.1, "r_s": 0.2, "beta1": 0.004, "beta2": 0.004,
                   "theta": 0.5, "omega": 1.0, "N": 100.0},
        "initial_points": [{"S": 90.0, "I_a": 5.0, "I_s": 5.0}],
        "flow_settings": {"abs_tol": 1e-10, "rel_tol": 1e-10, "max_step": null},
        "seed": 0,
        "output": {"format": "csv", "path": null}
    }

Only :code:`params` is required. Unknown keys are rejected at every level.
"""

import dataclasses
import json
import logging
from typing import Any, Dict, List, Optional, Tuple

from seasirs.dynamics.flow import DOMAIN_TOL, FlowSettings
from seasirs.exceptions import ConfigError, ValidationError
from seasirs.models.params import PARAM_FIELDS, ModelParams, validate
from seasirs.models.state import STATE_FIELDS, State

LOGGER = logging.getLogger(__name__)

CONFIG_KEYS = ("params", "initial_points", "flow_settings", "seed", "output")
OUTPUT_FORMATS = ("text", "csv")


@dataclasses.dataclass(frozen=True)
class OutputSpec:
    """Where and how command results are written.

    :param format: :code:`text` for structured JSON text, :code:`csv` for tables;
        each command picks its own default if omitted
    :param path: The output file; standard output if omitted
    """

    format: Optional[str] = None
    path: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"format": self.format, "path": self.path}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OutputSpec":
        _reject_unknown(data, ("format", "path"), "output")
        fmt = data.get("format")
        if fmt is not None and fmt not in OUTPUT_FORMATS:
            raise ConfigError(
                "output.format must be one of {}, got {!r}".format(
                    ", ".join(OUTPUT_FORMATS), fmt
                ),
                fields=["output.format"],
            )
        path = data.get("path")
        if path is not None and not isinstance(path, str):
            raise ConfigError("output.path must be a string", fields=["output.path"])
        return cls(format=fmt, path=path)


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario: parameters plus everything a command needs.

    :param params: The model parameters
    :param initial_points: Initial points in D₀
    :param flow_settings: The integrator settings
    :param seed: The seed of all random sampling
    :param output: The output format and destination
    """

    params: ModelParams
    initial_points: Tuple[State, ...] = ()
    flow_settings: FlowSettings = FlowSettings()
    seed: int = 0
    output: OutputSpec = OutputSpec()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "initial_points": [p.to_dict() for p in self.initial_points],
            "flow_settings": self.flow_settings.to_dict(),
            "seed": self.seed,
            "output": self.output.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioConfig":
        """Decode and validate a scenario dictionary.

        :param data: The decoded JSON document
        :return: The scenario configuration
        """
        if not isinstance(data, dict):
            raise ConfigError("A scenario must be a JSON object")
        _reject_unknown(data, CONFIG_KEYS, "")
        if "params" not in data:
            raise ConfigError("Missing section: params", fields=["params"])
        params = _parse_params(data["params"])
        settings = _parse_flow_settings(data.get("flow_settings", {}), params)
        points = _parse_points(data.get("initial_points", []), params)
        seed = data.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise ConfigError(
                "seed must be a non-negative integer, got {!r}".format(seed),
                fields=["seed"],
            )
        output = OutputSpec.from_dict(_section(data.get("output", {}), "output"))
        return cls(
            params=params,
            initial_points=points,
            flow_settings=settings,
            seed=seed,
            output=output,
        )


def _reject_unknown(data: Dict[str, Any], allowed: Tuple[str, ...], prefix: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        names = [prefix + "." + key if prefix else key for key in unknown]
        raise ConfigError("Unknown key(s): {}".format(", ".join(names)), fields=names)


def _section(value: Any, name: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError("{} must be a JSON object".format(name), fields=[name])
    return value


def _parse_params(value: Any) -> ModelParams:
    data = _section(value, "params")
    _reject_unknown(data, PARAM_FIELDS, "params")
    missing = [name for name in PARAM_FIELDS if name not in data]
    if missing:
        raise ConfigError(
            "Missing parameter field(s): {}".format(", ".join(missing)), fields=missing
        )
    try:
        params = ModelParams.from_dict(data)
    except ValidationError as exc:
        bad = [
            name
            for name in PARAM_FIELDS
            if isinstance(data[name], bool) or not isinstance(data[name], (int, float))
        ]
        raise ConfigError(str(exc), fields=bad) from exc
    result = validate(params)
    if not result.ok:
        raise ConfigError(
            "Invalid parameters: {}".format("; ".join(result.violations)),
            fields=result.violated_fields(),
        )
    for warning in result.warnings:
        LOGGER.warning("Parameter warning: %s", warning)
    return params


def _parse_flow_settings(value: Any, params: ModelParams) -> FlowSettings:
    data = _section(value, "flow_settings")
    _reject_unknown(data, ("abs_tol", "rel_tol", "max_step"), "flow_settings")
    try:
        return FlowSettings.from_dict(data).validate(params)
    except ValidationError as exc:
        raise ConfigError(
            "Invalid flow settings: {}".format(exc),
            fields=["flow_settings." + key for key in sorted(data)],
        ) from exc


def _parse_points(value: Any, params: ModelParams) -> Tuple[State, ...]:
    if not isinstance(value, list):
        raise ConfigError("initial_points must be a JSON array", fields=["initial_points"])
    points: List[State] = []
    for index, item in enumerate(value):
        field = "initial_points[{}]".format(index)
        data = _section(item, field)
        _reject_unknown(data, STATE_FIELDS, field)
        try:
            point = State.from_dict(data).require_in_domain(
                params.N, DOMAIN_TOL * params.N
            )
        except ValidationError as exc:
            raise ConfigError(str(exc), fields=[field]) from exc
        points.append(point)
    return tuple(points)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario configuration.

    :param text: The JSON document
    :return: The scenario configuration
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "Malformed configuration: {} (line {}, column {})".format(
                exc.msg, exc.lineno, exc.colno
            ),
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    return ScenarioConfig.from_dict(data)


def render_config(config: ScenarioConfig) -> str:
    """Render a scenario so that :code:`parse_config` restores it exactly."""
    return json.dumps(config.to_dict(), indent=2)


def load_config(path: str) -> ScenarioConfig:
    LOGGER.debug("Loading configuration from %s", path)
    with open(path, "r") as handle:
        return parse_config(handle.read())
