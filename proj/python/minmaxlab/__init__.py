"""Minimax risk under power losses in the Gaussian location model."""

import json

from ._core import *  # noqa: F401,F403
from ._core import Error, __version__  # noqa: F401


def as_dict(result):
    """Versioned JSON document of a result object, as a plain dict."""
    return json.loads(result.to_json())
