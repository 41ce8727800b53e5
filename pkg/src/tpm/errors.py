"""Exception types shared across the package.

Validation-style errors (bad inputs, unmet preconditions) map to CLI exit
code 1; numeric failures (an algorithm could not produce a trustworthy
answer) map to exit code 2.
"""


class TpmError(Exception):
    """Base class for all package errors."""


# -- validation / precondition errors -----------------------------------------

class InvalidArgs(TpmError):
    pass


class DimensionMismatch(TpmError):
    pass


class EmptyDecomposition(TpmError):
    pass


class CapExceeded(TpmError):
    pass


class NotUnitNorm(TpmError):
    pass


class NotEquiangular(TpmError):
    pass


class NotSymmetric(TpmError):
    pass


class NotETF(TpmError):
    pass


class OddOrder(TpmError):
    pass


class ZeroEigenvalue(TpmError):
    pass


class NotAnEigenvector(TpmError):
    pass


class PreconditionFailed(TpmError):
    pass


# -- numeric failures ----------------------------------------------------------

class ZeroImage(TpmError):
    """The power-map image vanished (the point lies in the base locus)."""


class NoConvergence(TpmError):
    """An iterative solver stopped without meeting its accuracy target."""


class DegenerateForm(TpmError):
    """The eigenvector equations vanish identically (infinitely many solutions)."""


class MultiplicityMismatch(TpmError):
    """Root multiplicities do not add up to the expected algebraic count."""


#: Errors that indicate a numeric failure rather than bad input.
NUMERIC_ERRORS = (ZeroImage, NoConvergence, DegenerateForm, MultiplicityMismatch)
