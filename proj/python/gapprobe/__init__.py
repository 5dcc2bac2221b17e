"""Python bindings for the gapprobe numerical toolkit."""

from ._gapprobe import *  # noqa: F401,F403
from ._gapprobe import __version__  # noqa: F401
