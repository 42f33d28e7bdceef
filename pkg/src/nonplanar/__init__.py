"""Vehicle dynamics and predictive control on nonplanar road surfaces."""

from .errors import (
    DomainError,
    InfeasibleQp,
    NonDifferentiablePoint,
    NonOrthogonalError,
    NonplanarError,
    ParseError,
    RegularityError,
    SimulationDiverged,
)
from .geom import FundamentalForms, ParametricPose, SurfaceJet
from .vehicle import ControlInput, VehicleParams, VehicleState

__version__ = "0.1.0"

__all__ = [
    "ControlInput",
    "DomainError",
    "FundamentalForms",
    "InfeasibleQp",
    "NonDifferentiablePoint",
    "NonOrthogonalError",
    "NonplanarError",
    "ParametricPose",
    "ParseError",
    "RegularityError",
    "SimulationDiverged",
    "SurfaceJet",
    "VehicleParams",
    "VehicleState",
    "__version__",
]
