"""Thermal squeezed states on a truncated Fock space."""

from .errors import (
    BudgetWarning,
    ConvergenceError,
    InsufficientBudgetError,
    KrausValidationError,
    TruncationError,
)
from .fock import DEFAULT_DIM, ToleranceConfig
from .group import GroupElement, SqueezeParams, compose, from_squeeze_params, inverse, to_unitary
from .kraus import KrausSet, apply_channel, canonical_set, thermal_kraus
from .snr import SnrOptimum, optimal_params, optimal_sigma
from .states import ThermalParams, free_thermal, thermal_squeezed

__version__ = "0.1.0"
