"""Constrained gradient descent optimizers and benchmark functions."""

from ._core import *  # noqa: F401,F403
from ._core import CapabilityError, InputError, NumericError  # noqa: F401

__version__ = "0.1.0"
