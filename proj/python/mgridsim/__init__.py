"""DC microgrid simulator with decentralized CBF safety-filter controllers."""

from mgridsim._core import *  # noqa: F401,F403
from mgridsim import _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
