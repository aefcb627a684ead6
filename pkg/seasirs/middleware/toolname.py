"""This module contains a middleware to fill the :code:`tool` field."""

import logging
from typing import Any, Dict

from seasirs.middleware.base import BaseMiddleware, annotate

LOGGER = logging.getLogger("ToolNameMiddleware")


class ToolNameMiddleware(BaseMiddleware):
    """This middleware stamps the producing tool and its version into the
    request and into the metadata of every report."""

    def __init__(self, name: str = None):
        if name is None:
            from seasirs import __version__

            name = "seasirs/{}".format(__version__)
        LOGGER.debug("Initializing with name %s", name)
        self.name = name

    def process_request(self, req: Dict) -> Dict:
        """Add the :code:`tool` field to the request.

        :param req: The command request dictionary
        :return: The request dictionary with the :code:`tool` field filled in
        """
        LOGGER.debug("Adding name %s to request", self.name)
        req["tool"] = self.name
        return req

    def process_response(self, resp: Any) -> Any:
        """Record the tool name in the report metadata.

        :param resp: The report domain model, or a list of them
        :return: The very same response, annotated
        """
        LOGGER.debug("Adding name %s to report", self.name)
        return annotate(resp, "tool", self.name)
