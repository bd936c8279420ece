"""Exception hierarchy shared across the package."""


class CKError(Exception):
    """Base class for all package errors."""


class PoleError(CKError, ArithmeticError):
    """A κ-tangent (or a quotient by a κ-cosine) was evaluated at a pole."""


class ChartError(CKError, ValueError):
    """A point lies outside the domain of a coordinate chart."""


class ChartMismatch(CKError, ValueError):
    """Objects expressed in different charts were combined."""


class DomainError(CKError, ValueError):
    """An operation is undefined for the given parameters."""


class TableInvalid(CKError, ValueError):
    """A structure table is not antisymmetric or has the wrong shape."""


class SingularSolve(CKError, ArithmeticError):
    """A pointwise linear system is rank deficient."""


class NotKilling(CKError, ValueError):
    """A field is not Killing for the compatible metric."""


class NotRegular(CKError, ValueError):
    """The Reeb flow of this space has no smooth leaf space."""


class UnsupportedKappa(CKError, ValueError):
    """The κ-triple is outside the supported normalized set."""


class StepFailure(CKError, RuntimeError):
    """The adaptive integrator could not make progress."""


class ParseError(CKError, ValueError):
    """A coefficient expression could not be parsed.

    ``offset`` is the byte offset of the failure and ``expected`` the set of
    tokens that would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}; expected one of {sorted(expected)}")
        self.offset = offset
        self.expected = frozenset(expected)


class UnknownSystem(CKError, KeyError):
    pass


class KappaRequired(CKError, ValueError):
    pass


class UnknownCoefficient(CKError, KeyError):
    pass


class NotLiouville(CKError, ValueError):
    pass
