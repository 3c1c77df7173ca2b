"""Exception hierarchy shared by all modules."""


class GrussLabError(Exception):
    """Base class for all library errors."""


class InvalidInputError(GrussLabError, ValueError):
    """Input contains non-finite entries or is otherwise malformed."""


class ShapeError(GrussLabError, ValueError):
    """Operands have incompatible shapes."""


class SymmetryError(ShapeError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class DomainError(GrussLabError, ValueError):
    """An operation was applied outside its mathematical domain.

    ``min_eig`` carries the offending eigenvalue when the failure is a
    positivity failure; ``mode`` names which precondition failed.
    """

    def __init__(self, message, *, min_eig=None, mode=None, defect=None):
        super().__init__(message)
        self.min_eig = min_eig
        self.mode = mode
        self.defect = defect


class NoKrausFormError(DomainError):
    """The map is not completely positive, so it has no Kraus form."""


class PreconditionError(DomainError):
    """A theorem's hypotheses do not hold for the supplied instance."""


class ConfigError(GrussLabError, ValueError):
    """Invalid gauge string, check configuration, or CLI option."""
