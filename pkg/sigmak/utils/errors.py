"""Exceptions raised by the sigmak library."""

from typing import Optional, Tuple


class SigmaKError(Exception):
    pass


class DomainError(SigmaKError, ValueError):
    """Input outside the domain of an operation (non-finite values, crossing a null point, ...)."""


class SingularLocusError(DomainError):
    """The right-hand side was evaluated on the singular locus |xi_t| = 1."""


class NoThresholdError(DomainError):
    """No critical value h* exists for the given sign and dimension pair."""


class ContractError(SigmaKError, ValueError):
    """A precondition of an operation was violated by the caller."""


class BranchUndefinedError(ContractError):
    """The branch sign(1 - xi_t^2) is undefined because |xi_t| = 1."""


class InadmissibleError(SigmaKError, ValueError):
    """The combination of (h, branch, parity) is not realized by any radial solution."""

    def __init__(self, constraint: str, detail: Optional[str] = None) -> None:
        self.constraint = constraint
        self.detail = detail
        super().__init__(constraint if detail is None else f"{constraint} ({detail})")


class DegenerateCoefficientError(InadmissibleError):
    pass


class IntegrationError(SigmaKError, RuntimeError):
    """The integrator could not advance; `last_state` is the last accepted (t, xi, xi_t)."""

    def __init__(self, message: str, last_state: Optional[Tuple[float, float, float]] = None) -> None:
        self.last_state = last_state
        super().__init__(message if last_state is None else f"{message}; last state (t, xi, xi_t) = {last_state}")
