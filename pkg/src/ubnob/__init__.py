"""Equally separated non-orthogonal bases, their bi-orthogonal duals and
optimal state tomography in prime dimension."""

from .bases import BasisFamily, SeparationParams, build_family, separation_params
from .checks import full_report
from .errors import ConstructionError, DomainError, InapplicableError, NoSolutionError
from .tomography import born_probabilities, noise_sweep, reconstruct

__all__ = [
    "BasisFamily",
    "ConstructionError",
    "DomainError",
    "InapplicableError",
    "NoSolutionError",
    "SeparationParams",
    "born_probabilities",
    "build_family",
    "full_report",
    "noise_sweep",
    "reconstruct",
    "separation_params",
]
