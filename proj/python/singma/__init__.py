"""Singular Monge-Ampere barriers, a 2-D wide-stencil solver and boundary exponent analysis."""

from ._singma import *  # noqa: F401,F403
from ._singma import __doc__  # noqa: F401
