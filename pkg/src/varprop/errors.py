"""Exception hierarchy for varprop.

Exit-code mapping used by the CLI: usage errors are handled by argparse,
DataError subclasses map to exit code 2, UnsupportedAnalysisError
subclasses to exit code 3.
"""


class VarpropError(Exception):
    """Base class for all varprop errors."""


class DataError(VarpropError):
    """Bad input data: malformed files, invalid networks, bad arguments."""


class NetworkFormatError(DataError):
    """Network or evidence document is syntactically or structurally invalid."""


class SimplexError(DataError):
    """A probability vector is off the simplex beyond tolerance."""


class ZeroProbabilityEvidenceError(DataError):
    """Evidence has probability zero in the network being queried."""

    def __init__(self, message, trial=None):
        super().__init__(message)
        self.trial = trial


class ConvergenceError(VarpropError):
    """An iterative numeric routine failed to converge within its cap."""


class PlanningCapError(VarpropError):
    """A sample-size planner exceeded its search cap."""


class UnsupportedAnalysisError(VarpropError):
    """The requested analysis is outside the supported structural class."""


class UnsupportedEvidenceError(UnsupportedAnalysisError):
    """Evidence configuration not handled by downward propagation."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class CutsetError(UnsupportedAnalysisError):
    """Invalid loop cutset (non-root member, or loops remain)."""


class OracleError(VarpropError):
    """Brute-force enumeration is not applicable or too large."""
