"""Exception hierarchy shared by every sftflow module.

Each class maps to one rejected contract; library code never raises bare
ValueError for domain failures, so callers (and the service layer) can key
on the class name.
"""


class SftFlowError(Exception):
    """Base class for all sftflow errors."""


class NonBinaryEntry(SftFlowError):
    """Transition matrix has an entry outside {0, 1}."""


class StrandedSymbol(SftFlowError):
    """A symbol has no outgoing or no incoming transition."""


class SymbolOutOfRange(SftFlowError):
    """A word uses a symbol >= k or negative."""


class NotIrreducible(SftFlowError):
    """Operation requires a strongly connected transition graph."""


class NoConvergence(SftFlowError):
    """Iterative solver exhausted its budget."""


class NotStochastic(SftFlowError):
    """Probability vector or matrix rows fail non-negativity / sum-to-one."""


class NotStationary(SftFlowError):
    """p is not a stationary vector of P."""


class SupportViolation(SftFlowError):
    """Chain puts transition mass on a pair the ambient shift forbids."""


class NotErgodic(SftFlowError):
    """Operation requires an ergodic chain."""


class ParameterOutOfRange(SftFlowError):
    """Numeric argument outside its legal interval."""


class TargetOutOfRange(SftFlowError):
    """Requested entropy outside the attainable open interval."""


class BracketNotFound(SftFlowError):
    """Grid scan found no sign change; internal failure for valid inputs."""


class BracketFailure(SftFlowError):
    """Endpoint entropies failed to straddle the target after retries."""


class DimensionMismatch(SftFlowError):
    """Objects built over different shifts or with incompatible sizes."""


class NotAdmissible(SftFlowError):
    """Word violates the transition matrix (or is too short to recode)."""


class InconsistentOverlap(SftFlowError):
    """Adjacent blocks of a recoded word do not overlap correctly."""


class WindowTooWide(SftFlowError):
    """Roof window does not fit into the block being used."""


class PhaseOutOfRange(SftFlowError):
    """Chain phase outside [0, l_i) for its symbol."""


class RoofTableError(SftFlowError):
    """Roof table has a bad key set or a non-positive value."""


class InsufficientData(SftFlowError):
    """Trajectory too short for the requested estimate."""


class ParseError(SftFlowError):
    """Input file is malformed."""
