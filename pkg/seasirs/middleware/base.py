"""This module contains the abstract base middleware class."""

import abc
from typing import Any, Dict


class BaseMiddleware(abc.ABC):
    """Abstract middleware class that can be used by developers to build their
    own.

    A middleware is expected to expose two methods: :code:`process_request` and
    :code:`process_response`. Each is expected to return an updated version of
    its input of the same type. Requests are the command dictionaries assembled
    by :code:`CommandHandler.assemble_request`, responses are the report domain
    models the command produced (or lists of them).

    Middlewares run in registration order, so they should not depend on each
    other's output.
    """

    @abc.abstractmethod
    def process_request(self, req: Dict) -> Dict:
        """Abstract method for a request processor.

        :param req: The command request dictionary
        """
        pass

    @abc.abstractmethod
    def process_response(self, resp: Any) -> Any:
        """Abstract method for a response processor.

        :param resp: The report domain model, or a list of them
        """
        pass


def annotate(resp: Any, key: str, value: Any) -> Any:
    """Set a metadata entry on a report or on every report of a list.

    :param resp: The report domain model, or a list of them
    :param key: The metadata key
    :param value: The metadata value
    :return: The very same response
    """
    for report in resp if isinstance(resp, list) else [resp]:
        report.meta[key] = value
    return resp
