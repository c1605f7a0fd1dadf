"""Verifiable secret sharing with control parts appended to every share."""

from ._kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
