"""Exception types and search-size caps shared across the package."""

from __future__ import annotations

import os

DEFAULT_ORDER_CAP = 20160
DEFAULT_NODE_CAP = 256
DEFAULT_ISO_CAP = 16

CAP_ENV_VAR = "QFG_CAP"


class QfgError(Exception):
    """Base class for errors raised by this package."""


class CapExceededError(QfgError):
    """An exhaustive search or closure would exceed its configured size cap."""


class ParseError(QfgError, ValueError):
    """An input file or string does not follow the documented grammar."""


def graph_cap(explicit: int | None, default: int) -> int:
    """Resolve a graph-search cap: explicit argument, then ``$QFG_CAP``, then default."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(CAP_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"{CAP_ENV_VAR} must be an integer, got {env!r}") from None
    return default
