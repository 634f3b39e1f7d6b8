"""Exception hierarchy shared by all modules.

Numerical failures derive from ``NumericalError`` so that the command line
front end can map them onto a single exit status.
"""


class MaslovStabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MaslovStabError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ConfigError(MaslovStabError):
    """Invalid run configuration; ``line`` points into the source document."""

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class NumericalError(MaslovStabError):
    """Base for failures of a numerical procedure."""


class IntegrationError(NumericalError):
    """ODE integration failed; carries the spectral parameters involved."""

    def __init__(self, message, lam=None, s=None):
        self.lam = lam
        self.s = s
        ctx = ""
        if lam is not None or s is not None:
            ctx = f" at (lambda={lam!r}, s={s!r})"
        super().__init__(message + ctx)


class NoWaveError(NumericalError):
    """No standing wave exists on the requested branch."""


class ContinuationError(NumericalError):
    """A parameter continuation step could not find a nearby wave."""


class NotACrossingError(NumericalError):
    """The point handed to a crossing-form routine has trivial kernel."""


class PreconditionError(NumericalError):
    """A documented precondition of the operation is violated."""


class FredholmError(NumericalError):
    """Right-hand side not orthogonal to the kernel of a singular operator."""


class NongenericTangencyError(NumericalError):
    """Double kernel whose tangency condition vanishes."""


class ContradictionError(NumericalError):
    """A computed quantity contradicts the stated hypotheses."""


class NondegeneracyError(NumericalError):
    """A matrix required to be nondegenerate is (numerically) singular."""


class ConsistencyError(NumericalError):
    """Two independent computations of the same quantity disagree."""


class UnresolvedCornerError(NumericalError):
    """The corner contribution could not be decided.

    ``interval`` holds the set of admissible values of the corner term and
    ``bound`` the corresponding interval for the eigenvalue lower bound.
    """

    def __init__(self, message, interval=(-1, 1), bound=None):
        self.interval = tuple(interval)
        self.bound = bound
        super().__init__(message)


class DegenerateCrossingWarning(UserWarning):
    """Second-order form degenerate; higher-order analysis would be needed."""


class BoundaryDegeneracyWarning(UserWarning):
    """A conjugate point sits at the right endpoint s = 1."""
