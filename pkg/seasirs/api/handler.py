"""This module contains the command handler implementation."""

import csv
import io
import json
import logging
from typing import Any, Dict, List, Type

from seasirs.analysis.sampling import default_rng
from seasirs.analysis.sweep import SweepTable, threshold_sweep
from seasirs.analysis.verify import run_checks
from seasirs.config import ScenarioConfig
from seasirs.dynamics.equilibria import classify
from seasirs.dynamics.flow import FlowSettings, Trajectory, solve
from seasirs.dynamics.reproduction import monodromy_report
from seasirs.exceptions import ValidationError
from seasirs.middleware.base import BaseMiddleware

LOGGER = logging.getLogger(__name__)

COMMANDS = ("r0", "simulate", "equilibria", "verify", "sweep")
TRAJECTORY_HEADER = ("t", "S", "Ia", "Is", "R", "season")


def _json_default(value: Any) -> Any:
    # numpy scalars and booleans
    if hasattr(value, "item"):
        return value.item()
    raise TypeError("Cannot serialize {!r}".format(value))


class CommandHandler:
    """Handle the low-level command execution.

    The command handler takes care of assembling command requests,
    registering and executing request/response middlewares, dispatching
    each request to its computation and rendering the resulting report
    domain models.
    """

    def __init__(self, middlewares: List[Type[BaseMiddleware]] = None):
        """Instantiate a new command handler.

        :param middlewares: A list of custom middlewares to include
        """
        self.middlewares = middlewares if middlewares is not None else []

    def execute_request_middlewares(self, req: Dict) -> Dict:
        """Sequentially execute the registered request middlewares.

        Each middleware gets the command dictionary as generated by
        :code:`assemble_request` and returns it, possibly updated. The order
        in which middlewares are registered can matter, even though it is
        recommended that middlewares are kept associative in nature.

        :param req: The command request dictionary
        :return: The updated request dictionary, ready to be dispatched
        """
        for mw in self.middlewares:
            LOGGER.debug("Executing request middleware: %s", mw)
            req = mw.process_request(req)
        return req

    def execute_response_middlewares(self, resp: Any) -> Any:
        """Sequentially execute the registered response middlewares.

        :param resp: The report domain model, or a list of them
        :return: The updated response, ready to be passed on to the user
        """
        for mw in self.middlewares:
            LOGGER.debug("Executing response middleware: %s", mw)
            resp = mw.process_response(resp)
        return resp

    def assemble_request(
        self, command: str, config: ScenarioConfig, options: Dict[str, Any] = None
    ) -> Dict:
        """Assemble a command request that is later dispatched.

        The request is a plain dictionary holding the command name, the
        scenario, the command's options and the sampling seed. An explicit
        :code:`seed` option ends up in the seed field; otherwise the seed is
        left for the middlewares to fill in.

        Before the request is returned, all registered middlewares are applied to it.

        :param command: One of r0, simulate, equilibria, verify and sweep
        :param config: The scenario configuration
        :param options: The command's options
        :return: The request with all middlewares applied
        """
        if command not in COMMANDS:
            raise ValidationError(
                "Unknown command {!r}, expected one of {}".format(
                    command, ", ".join(COMMANDS)
                )
            )
        options = dict(options or {})
        base_request = {
            "command": command,
            "config": config,
            "options": options,
            "seed": options.pop("seed", None),
        }
        LOGGER.debug("Assembled %s request", command)
        return self.execute_request_middlewares(base_request)

    @staticmethod
    def dispatch(req: Dict) -> Any:
        """Run the computation a request asks for.

        :param req: The assembled request dictionary
        :return: The report domain model, or a list of them
        """
        command, config, options = req["command"], req["config"], req["options"]
        params = config.params
        LOGGER.debug("Dispatching %s with options %s", command, options)
        if command == "r0":
            return monodromy_report(
                params,
                operator_oracle=options.get("operator_oracle", False),
                grid_n=options.get("grid_n", 2048),
                truncation_A=options.get("truncation_A"),
            )
        if command == "simulate":
            p0 = options.get("p0")
            if p0 is None:
                if not config.initial_points:
                    raise ValidationError("simulate needs an initial point")
                p0 = config.initial_points[0]
            return solve(
                params,
                p0,
                options["t_end"],
                config.flow_settings,
                options.get("stride"),
            )
        if command == "equilibria":
            return classify(params)
        if command == "verify":
            # the checks bring their own long-horizon settings
            settings = (
                None if config.flow_settings == FlowSettings() else config.flow_settings
            )
            return run_checks(
                params,
                ids=options.get("ids"),
                sample_count=options.get("sample_count"),
                rng=default_rng(req["seed"]),
                settings=settings,
                initial_points=list(config.initial_points) or None,
            )
        return threshold_sweep(params, options["axis"], options.get("grid", []))

    def execute(
        self, command: str, config: ScenarioConfig, options: Dict[str, Any] = None
    ) -> Any:
        """Assemble a request, dispatch it and post-process the report.

        :param command: The command name
        :param config: The scenario configuration
        :param options: The command's options
        :return: The report with all response middlewares applied
        """
        req = self.assemble_request(command, config, options)
        return self.execute_response_middlewares(self.dispatch(req))

    @staticmethod
    def render(resp: Any, fmt: str = "text", N: float = None) -> str:
        """Render a report as CSV or structured text.

        Trajectories and sweep tables have a CSV form; every other report is
        always rendered as structured JSON text. Floats are written as their
        shortest round-trip decimal.

        :param resp: The report domain model, or a list of them
        :param fmt: :code:`csv` or :code:`text`
        :param N: The population size, needed for the trajectory's R column
        :return: The rendered output
        """
        if fmt == "csv" and isinstance(resp, (Trajectory, SweepTable)):
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            if isinstance(resp, Trajectory):
                if N is None:
                    raise ValidationError("Rendering a trajectory needs N")
                writer.writerow(TRAJECTORY_HEADER)
                writer.writerows(resp.to_rows(N))
            else:
                writer.writerow(resp.header)
                writer.writerows(resp.to_rows())
            return buffer.getvalue()
        if isinstance(resp, list):
            data = [report.to_dict() for report in resp]
        else:
            data = resp.to_dict()
        return json.dumps(data, indent=2, default=_json_default) + "\n"
