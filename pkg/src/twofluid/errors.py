"""Exception hierarchy shared by all modules."""


class TwoFluidError(Exception):
    """Base class for every error raised by the package."""


class DomainError(TwoFluidError, ValueError):
    """A state or argument lies outside the admissible region.

    ``report`` carries the :class:`~twofluid.eos.DomainReport` when the
    failure came from mass/density validation, otherwise ``None``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoBracketError(DomainError):
    """Target pressure cannot be attained on the admissible density range."""


class ConvergenceError(TwoFluidError, RuntimeError):
    """An iterative solver hit its iteration cap."""


class RarefactionBranchError(DomainError):
    """No shock connects the requested pair of states."""


class ConfigurationError(TwoFluidError, ValueError):
    """Invalid problem setup or configuration input."""


class PositivityError(DomainError):
    """A finite-volume update produced an inadmissible cell state."""

    def __init__(self, message, cell=None, report=None):
        super().__init__(message, report)
        self.cell = cell
