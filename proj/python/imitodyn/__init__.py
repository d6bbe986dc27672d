"""Stochastic imitation dynamics on potential population games."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
