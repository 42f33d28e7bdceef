"""Exception types shared across the package."""


class NonplanarError(Exception):
    """Base class for all package errors."""


class RegularityError(NonplanarError):
    """Surface chart is degenerate at the queried point (dependent tangents)."""


class NonOrthogonalError(NonplanarError):
    """Chart tangents are not orthogonal and the caller required them to be."""


class DomainError(NonplanarError):
    """Query point lies outside the declared parameter domain."""


class ParseError(NonplanarError):
    """Road or scenario file could not be parsed / validated."""


class NonDifferentiablePoint(NonplanarError):
    """Forward-mode differentiation hit a primitive singularity (e.g. 1/0)."""


class InfeasibleQp(NonplanarError):
    """QP equality system is inconsistent or no feasible point was found."""


class SimulationDiverged(NonplanarError):
    """Simulated state left the road domain or became non-finite."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step
