from django.core.exceptions import ValidationError




class StructuralError(ValueError):

    """
    Raised when objects do not fit together: dimension mismatches, degrees outside a
    complex, cochains addressing coordinates that do not exist.
    """




class ChainComplexError(StructuralError):

    """
    Raised when a differential fails d∘d = 0. Carries the degree where it failed.
    """

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree




class PreconditionError(ValidationError):

    """
    A well-formed input that violates the precondition of an operation
    (not a cocycle, not closed, not a group cocycle ...).
    """




class ResourceLimitExceeded(RuntimeError):

    """
    Raised before assembling a space whose dimension exceeds DELIGNE['MAX_DIMENSION'].
    """

    def __init__(self, message, dimension=None):
        super().__init__(message)
        self.dimension = dimension
