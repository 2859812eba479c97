"""Exception hierarchy shared by all parapos modules."""

from __future__ import annotations


class ParaposError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ParaposError, ValueError):
    """A precondition on user-supplied input was violated."""


class NonphysicalFrequencyError(InvalidInputError):
    """Complex frequency with Re(Omega) <= 0 cannot be mapped to observables."""


class SingularInputError(InvalidInputError):
    """Evaluation requested exactly at a singular point (Omega = 0 or r = 0)."""


class DegenerateExponentError(InvalidInputError):
    """Secondary Frobenius branch requested where both indicial exponents clash."""


class InvalidSeedError(InvalidInputError):
    """Series seed requested outside the convergence disk."""


class NearSingularityError(ParaposError):
    """ODE right-hand side evaluated too close to r = 0 or the zero of lambda."""


class ContourViolationError(ParaposError):
    """Adaptive step size underflowed, e.g. because the contour grazes a singularity."""


class PrecisionExhaustedError(ParaposError):
    """Requested tolerance unreachable with the stored number of series terms."""


class ConvergenceError(ParaposError):
    """An iterative solver failed to converge.

    Carries the iterate trace (list of (iterate, |residual|) pairs) and, when
    the solver produced one, a best-effort report object.
    """

    def __init__(self, message: str, trace=None, report=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []
        self.report = report
