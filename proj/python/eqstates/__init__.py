"""Numerical checks for equilibrium states of non-uniformly expanding circle maps."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
