"""Secrecy capacity of the Gaussian MIMO wiretap channel with a multi-antenna
eavesdropper: saddle-point solver, optimality certificates, spectral
zero-capacity test, and large-array scaling laws."""

__version__ = "0.1.0"

from .asymptotics import (
    AspectRatios,
    DomainError,
    PhasePoint,
    f1_limit,
    monte_carlo_gsv,
    optimal_allocation,
    phase_csv_rows,
    phase_diagram,
    zero_boundary,
    zero_region,
)
from .certify import Certificate, SingularEliminationWarning, certify
from .channel import ChannelPair, read_channel_file, sample_gaussian_pair, write_channel_file
from .saddle import SaddleResult, SolveStatus, SolverConfig, duality_gap, solve
from .spectral import GsvReport, largest_generalized_sv, zero_capacity_test

__all__ = [
    "AspectRatios",
    "Certificate",
    "ChannelPair",
    "DomainError",
    "GsvReport",
    "PhasePoint",
    "SaddleResult",
    "SingularEliminationWarning",
    "SolveStatus",
    "SolverConfig",
    "certify",
    "duality_gap",
    "f1_limit",
    "largest_generalized_sv",
    "monte_carlo_gsv",
    "optimal_allocation",
    "phase_csv_rows",
    "phase_diagram",
    "read_channel_file",
    "sample_gaussian_pair",
    "solve",
    "write_channel_file",
    "zero_boundary",
    "zero_region",
]
