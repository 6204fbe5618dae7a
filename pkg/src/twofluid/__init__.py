"""Two-phase and bi-fluid isentropic flow models: pressure laws, symmetrization,
shock and vortex-sheet conditions, and a finite-volume validation solver."""
from .eos import (
    BiFluid,
    ModelKind,
    TwoPhaseLiquidFraction,
    TwoPhasePolytropic,
    TwoPhaseSonic,
    make_law,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    NoBracketError,
    PositivityError,
    RarefactionBranchError,
    TwoFluidError,
)
from .state import ConservativeState, PrimitiveState

__version__ = "0.1.0"

__all__ = [
    "BiFluid", "ModelKind", "TwoPhaseLiquidFraction", "TwoPhasePolytropic",
    "TwoPhaseSonic", "make_law", "ConfigurationError", "ConvergenceError",
    "DomainError", "NoBracketError", "PositivityError", "RarefactionBranchError",
    "TwoFluidError", "ConservativeState", "PrimitiveState", "__version__",
]
