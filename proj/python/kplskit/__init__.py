"""Kernel partial least squares regression toolkit.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from kplskit._core import *  # noqa: F401,F403
from kplskit._core import __version__  # noqa: F401
