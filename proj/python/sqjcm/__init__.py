"""Squeezed-field Jaynes-Cummings dynamics and atom-field mutual entropy."""

from ._sqjcm import (
    DemResult,
    PhotonDistribution,
    TruncationError,
    __version__,
    dem,
    hermite,
    log_factorial,
    moments,
    photon_distribution,
    revival_time,
    run_cli,
    sweep,
    transition,
)

__all__ = [
    "DemResult",
    "PhotonDistribution",
    "TruncationError",
    "__version__",
    "dem",
    "hermite",
    "log_factorial",
    "moments",
    "photon_distribution",
    "revival_time",
    "run_cli",
    "sweep",
    "transition",
]
