"""
Conformal Flow Exceptions
Error hierarchy shared by geometry classes, solvers, diagnostics and the runner

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Optional

import numpy as np


class CRFlowError(Exception):
    """Base class for every error raised by the flow laboratory."""


class InvalidGrid(CRFlowError, ValueError):
    """Grid parameters violate rho_min < rho_max, n_nodes >= 16 or m >= 3."""


class InvalidMetric(CRFlowError, ValueError):
    """Metric data is nonpositive, non-finite or has the wrong shape."""


class ConstraintViolation(CRFlowError, ValueError):
    """Initial metric does not satisfy s[g0] = s0."""


class IncompatibleReference(CRFlowError, ValueError):
    """Reference metric lives on a different grid or reduction class."""


class UnsupportedGeometry(CRFlowError, ValueError):
    """Operation is not defined for the given geometry class."""


class NumericalBreakdown(CRFlowError, ArithmeticError):
    """Non-finite values appeared in a computation."""


class NonInvertibleOperator(CRFlowError, ArithmeticError):
    """The pressure operator (m-1)Δ + s0 could not be inverted."""


class OutOfDomain(CRFlowError):
    """A gauge characteristic left the computational interval."""

    def __init__(self, message: str, time: Optional[float] = None):
        super().__init__(message)
        self.time = time


class InsufficientDecay(CRFlowError):
    """The mass ladder did not stabilize under extrapolation."""


class ConfigError(CRFlowError, ValueError):
    """
    Scenario document failed validation.

    Carries the dotted field path and, for syntax errors, the line number.
    """

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None):
        context = []
        if field:
            context.append(f"field '{field}'")
        if line is not None:
            context.append(f"line {line}")
        full = f"{message} ({', '.join(context)})" if context else message
        super().__init__(full)
        self.message = message
        self.field = field
        self.line = line


def ensure_finite(values, what: str):
    """Raise NumericalBreakdown if values contain NaN or inf."""
    if not np.all(np.isfinite(values)):
        raise NumericalBreakdown(f"Non-finite values in {what}")
    return values
