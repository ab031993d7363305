"""
Exception hierarchy for random-cc

All library errors derive from RCCError so callers (and the CLI) can map them to
exit codes without catching unrelated failures.
"""

from typing import Optional


class RCCError(Exception):
    """Base class for every error raised by random_cc"""


class InvalidInputError(RCCError, ValueError):
    """Parameters outside the accepted range"""


class EdgeListParseError(InvalidInputError):
    """Malformed line in an edge-list document"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ValidationError(RCCError, ValueError):
    """A structure violates one of its invariants"""


class DisconnectedGraphError(ValidationError):
    """The operation needs a connected 1-skeleton"""


class DomainError(RCCError, ValueError):
    """A closed-form quantity is undefined for the given arguments"""


class ContractViolation(RCCError, ValueError):
    """The caller broke a precondition of the called operation"""


class BudgetExceededError(RCCError, RuntimeError):
    """An exact oracle refused to run past its configured budget"""


class NoEligibleLengthsError(RCCError, ValueError):
    """ExpectedCells sampling found no cycle length above the threshold"""

    def __init__(self, message: str = "no length exceeded occurrence threshold"):
        super().__init__(message)
