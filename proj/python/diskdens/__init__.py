"""Local densities of non-interacting fermions in a two-dimensional disk billiard."""

from ._core import *  # noqa: F401,F403
from ._core import (
    Channel,
    CriticalStartError,
    DivergentAmplitude,
    DomainError,
    GhostUnavailable,
    OpenShellError,
    OverlapError,
    QuantumSystem,
    SemiclassicalDensity,
    TruncationConfig,
)

__version__ = "0.1.0"
