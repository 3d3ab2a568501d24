"""Koszul modules, resonance diagnostics and Chen ranks over exact fields."""

__version__ = "0.1.0"

from .errors import (AmbientMismatch, FlatTooSmall, InvalidMultinet, KoszulKitError,
                     MalformedInput, PreconditionViolated, QTooSmall, RetriesExhausted,
                     RouteDisagreement)
from .exactalg import Field, Matrix, SubspaceBasis
from .koszul import KoszulProblem, dim_Wq, hilbert_function

__all__ = ["__version__", "AmbientMismatch", "FlatTooSmall", "InvalidMultinet", "KoszulKitError",
           "MalformedInput", "PreconditionViolated", "QTooSmall", "RetriesExhausted",
           "RouteDisagreement", "Field", "Matrix", "SubspaceBasis", "KoszulProblem", "dim_Wq",
           "hilbert_function"]
