"""This package contains the command handler and Client implementations."""

from seasirs.api.client import Client
from seasirs.api.handler import CommandHandler
