"""Exception hierarchy.

Every numerical failure raised by the toolkit derives from ``JacobiError``;
the CLI turns these into a ``{"kind", "detail"}`` JSON object and exit code 1.
"""


class JacobiError(Exception):
    @property
    def kind(self) -> str:
        return type(self).__name__


class LengthMismatch(JacobiError, ValueError):
    pass


class NonPositiveOffDiagonal(JacobiError, ValueError):
    pass


class IndexOutOfRange(JacobiError, IndexError):
    pass


class ConvergenceFailure(JacobiError, ArithmeticError):
    pass


class PoleEvaluation(JacobiError, ZeroDivisionError):
    pass


class InvalidData(JacobiError, ValueError):
    pass


class DegenerateMeasure(InvalidData):
    pass


class BadSelection(JacobiError, ValueError):
    pass


class DegenerateSplit(JacobiError, ValueError):
    """A pole of -1/G is shared by both truncated blocks and no residue split was given."""


class PreconditionViolated(JacobiError, ValueError):
    pass


class UnsupportedModification(JacobiError, ValueError):
    pass


class NonPositiveTheta(JacobiError, ValueError):
    pass


class ThetaOne(JacobiError, ValueError):
    """theta == 1 makes gamma = theta^2 h / (1 - theta^2) undefined."""


class NoSolution(JacobiError, ValueError):
    pass


class UnsupportedCase(JacobiError, ValueError):
    pass
