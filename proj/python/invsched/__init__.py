"""Python bindings for the invsched C++ library."""

from ._invsched import *  # noqa: F401,F403
from ._invsched import __doc__  # noqa: F401

__version__ = "0.1.0"
