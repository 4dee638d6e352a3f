"""Collective-spin squeezing dynamics, quantum Fisher information and
speed-limit exponents for long-range interacting spin systems."""

__version__ = "0.1.0"

from .collective import CollectiveOperator, DickeState, build_collective, coherent_state, expectation
from .dynamics import Propagator, SpectralForm, diagonalize, evolve, evolve_series
from .errors import InvalidArgument, ResourceLimitError, SearchWindowExhausted
from .protocols import OptimalResult, ProtocolSpec, TrajectoryRecord, find_optimal, qfi_trajectory
from .qfi import MixedState, TransverseCovariance, cramer_rao, optimal_qfi, qfi_mixed, qfi_pure
from .bounds import RegimeQuery, bound_exponent, protocol_exponent, saturation_table
from .fitting import FitResult, ScalingModel, fit_amplitude

__all__ = [
    "CollectiveOperator", "DickeState", "build_collective", "coherent_state", "expectation",
    "Propagator", "SpectralForm", "diagonalize", "evolve", "evolve_series",
    "InvalidArgument", "ResourceLimitError", "SearchWindowExhausted",
    "OptimalResult", "ProtocolSpec", "TrajectoryRecord", "find_optimal", "qfi_trajectory",
    "MixedState", "TransverseCovariance", "cramer_rao", "optimal_qfi", "qfi_mixed", "qfi_pure",
    "RegimeQuery", "bound_exponent", "protocol_exponent", "saturation_table",
    "FitResult", "ScalingModel", "fit_amplitude",
]
