"""Velocity-model identification and sliding-mode navigation toolkit.

The compiled core carries the whole API; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from . import _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
