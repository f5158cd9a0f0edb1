from ._holegaf import *  # noqa: F401,F403
from ._holegaf import HolegafError, Model

__all__ = [name for name in dir() if not name.startswith("_")]
