"""Exception types shared across the package."""


class SzegolabError(Exception):
    """Base class for all errors raised by szegolab."""


class DomainError(SzegolabError):
    """An argument lies outside the mathematical domain of an operation."""


class AccuracyError(SzegolabError):
    """A quadrature or iterative scheme failed to reach its accuracy target.

    Carries a human-readable diagnostic in ``args[0]``.
    """


class RankError(SzegolabError):
    """A matrix that must be of full rank is (numerically) singular."""


class ContractViolation(SzegolabError):
    """An input violates a structural precondition (e.g. not Hermitian)."""


class UnsupportedClassError(SzegolabError):
    """Closed forms requested for a submanifold class that has none."""
