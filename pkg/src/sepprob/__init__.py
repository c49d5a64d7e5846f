"""Separability functions and probabilities of two-qubit and qubit-qutrit states."""
from .errors import (CheckpointError, NumericalError, QuadratureError, SepprobError,
                     ValidationError)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "CheckpointError", "NumericalError", "QuadratureError",
           "SepprobError", "ValidationError", "__version__"]
