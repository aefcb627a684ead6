"""This module contains a middleware to fill the sampling :code:`seed`
field."""

import logging
from typing import Any, Dict, Optional

from seasirs.middleware.base import BaseMiddleware, annotate

LOGGER = logging.getLogger("SeedMiddleware")


class SeedMiddleware(BaseMiddleware):
    """This middleware fills the request's sampling seed when it is absent and
    records the seed that was used in every report.

    An explicit seed given to the middleware wins over the scenario's seed;
    a seed already present in the request wins over both.
    """

    def __init__(self, seed: Optional[int] = None):
        LOGGER.debug("Initializing with seed=%s", seed)
        self.seed = seed
        self.used: Optional[int] = None

    def process_request(self, req: Dict) -> Dict:
        """Fill the :code:`seed` field if the request does not carry one.

        :param req: The command request dictionary
        :return: The request dictionary with the :code:`seed` field filled in
        """
        if req.get("seed") is None:
            req["seed"] = self.seed if self.seed is not None else req["config"].seed
            LOGGER.debug("Adding seed=%s", req["seed"])
        self.used = req["seed"]
        return req

    def process_response(self, resp: Any) -> Any:
        """Record the seed of the last processed request in the report metadata.

        :param resp: The report domain model, or a list of them
        :return: The very same response, annotated
        """
        return annotate(resp, "seed", self.used)
