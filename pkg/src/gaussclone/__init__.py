"""Gaussian simulation of optimal coherent-state cloning machines."""

from .analysis import INF, ParameterError
from .cloners import CloneParams, CloneReport, known_phase_clone, symmetric_clone
from .gaussian import GaussianState, SymplecticOp, coherent_state

__all__ = [
    "INF",
    "CloneParams",
    "CloneReport",
    "GaussianState",
    "ParameterError",
    "SymplecticOp",
    "coherent_state",
    "known_phase_clone",
    "symmetric_clone",
]
