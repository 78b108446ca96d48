"""Python bindings for the jumpcurve short-rate library."""

from ._core import *  # noqa: F401,F403
