"""Heat-trace asymptotics of the Navier-Lame operator."""

from ._nlspec import *  # noqa: F401,F403
from ._nlspec import Error, __version__  # noqa: F401
