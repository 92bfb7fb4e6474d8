"""Embedded shot-based statevector simulator."""

from .errors import (
    BadDistribution,
    ControlEqualsTarget,
    IndexOutOfRange,
    NoMeasurements,
    ShotsOutOfRange,
    SimError,
    TooManyQubits,
)
from .runner import DEFAULT_MAX_QUBITS, MAX_SHOTS, format_key, outcome_distribution, run
from .sampling import make_rng, order_counts, sample_counts
from .statevector import Statevector, u_matrix

__all__ = [
    "Statevector",
    "u_matrix",
    "run",
    "outcome_distribution",
    "sample_counts",
    "order_counts",
    "make_rng",
    "format_key",
    "DEFAULT_MAX_QUBITS",
    "MAX_SHOTS",
    "SimError",
    "IndexOutOfRange",
    "ControlEqualsTarget",
    "TooManyQubits",
    "ShotsOutOfRange",
    "NoMeasurements",
    "BadDistribution",
]
