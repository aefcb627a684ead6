"""This module contains the main Client implementation."""

import logging
from typing import Any, List, Optional, Sequence, Type

from seasirs.analysis.sweep import SweepTable
from seasirs.analysis.verify import VerdictReport
from seasirs.api.handler import CommandHandler
from seasirs.config import ScenarioConfig
from seasirs.dynamics.equilibria import EquilibriumReport
from seasirs.dynamics.flow import StateLike, Trajectory
from seasirs.dynamics.reproduction import MonodromyReport
from seasirs.middleware import BaseMiddleware, SeedMiddleware, ToolNameMiddleware

LOGGER = logging.getLogger(__name__)


class Client:
    """The main class for running commands on a scenario.

    The client holds a scenario configuration and exposes one method per
    command. Every call assembles a command request, runs it through the
    middlewares, dispatches it and returns the report domain model.

    A user can inject custom middlewares. There are two required internal ones:

        1. :code:`ToolNameMiddleware` Stamps the tool name and version into every report
        2. :code:`SeedMiddleware` Fills in the sampling seed and records it in every report

    If any of these middleware instances are missing in the user-defined list,
    the Client constructor will automatically add them with their default or
    parameter-defined values.
    """

    def __init__(
        self,
        config: ScenarioConfig,
        middlewares: List[Type[BaseMiddleware]] = None,
        handler: CommandHandler = None,
        seed: Optional[int] = None,
    ):
        """Instantiate a new client.

        :param config: The scenario configuration
        :param middlewares: A list of custom middlewares to include
        :param handler: Use a custom command handler instance
        :param seed: A sampling seed overriding the scenario's
        """
        self.config = config

        if not middlewares:
            # initialize without custom middlewares
            middlewares = [ToolNameMiddleware(), SeedMiddleware(seed)]
        else:
            # add tool name and seed middleware
            type_list = [type(m) for m in middlewares]
            if ToolNameMiddleware not in type_list:
                middlewares.append(ToolNameMiddleware())
            if SeedMiddleware not in type_list:
                middlewares.append(SeedMiddleware(seed))

        self.handler = handler or CommandHandler(middlewares=middlewares)

    def _assemble_dispatch(self, command: str, **options: Any) -> Any:
        """Assemble the request, dispatch it and post-process the report.

        :param command: The command name
        :param options: The command's options; None values are dropped
        :return: The report domain model
        """
        options = {k: v for k, v in options.items() if v is not None}
        LOGGER.debug("Running command %s", command)
        return self.handler.execute(command, self.config, options)

    def r0(
        self,
        operator_oracle: bool = False,
        grid_n: int = 2048,
        truncation_A: Optional[float] = None,
    ) -> MonodromyReport:
        """Compute the threshold quantities of the scenario.

        :param operator_oracle: Also run the next-infection operator oracle
        :param grid_n: Grid size of the oracle
        :param truncation_A: Age truncation of the oracle
        :return: The monodromy report
        """
        return self._assemble_dispatch(
            "r0",
            operator_oracle=operator_oracle,
            grid_n=grid_n,
            truncation_A=truncation_A,
        )

    def simulate(
        self, t_end: float, stride: Optional[float] = None, p0: StateLike = None
    ) -> Trajectory:
        """Integrate the scenario from p0, or from its first initial point.

        :param t_end: The horizon
        :param stride: Optional sampling stride
        :param p0: The initial point
        :return: The trajectory
        """
        return self._assemble_dispatch("simulate", t_end=t_end, stride=stride, p0=p0)

    def equilibria(self) -> List[EquilibriumReport]:
        return self._assemble_dispatch("equilibria")

    def verify(
        self,
        ids: Optional[Sequence[str]] = None,
        sample_count: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> List[VerdictReport]:
        """Run verification checks on the scenario.

        :param ids: Check identifiers; all applicable checks if omitted
        :param sample_count: Overrides each check's default sample count
        :param seed: The sampling seed of this call
        :return: The verdicts
        """
        return self._assemble_dispatch(
            "verify",
            ids=list(ids) if ids else None,
            sample_count=sample_count,
            seed=seed,
        )

    def sweep(self, axis: str, grid: Sequence[float]) -> SweepTable:
        """Sweep one parameter and tabulate ρ(Φ_{F−V}(ω)) and R₀.

        :param axis: One of theta, beta2, mu and alpha
        :param grid: The values of the swept parameter
        :return: The sweep table
        """
        return self._assemble_dispatch("sweep", axis=axis, grid=list(grid))
