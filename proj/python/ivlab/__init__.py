"""Intrinsic volumes, super-convolutive limits and intrinsic entropy curves.

Thin wrapper around the compiled ``ivlab._core`` extension. Reports come back
as plain dicts; intrinsic volume sequences are stored as natural logs.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
