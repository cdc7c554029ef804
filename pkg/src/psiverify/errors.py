"""Exception types shared across psiverify modules."""


class PsiverifyError(Exception):
    """Base class for all psiverify errors."""


class DomainError(PsiverifyError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(PsiverifyError):
    """An index or bound falls outside what a table or scan can answer."""


class CapabilityError(PsiverifyError):
    """The request exceeds a configured limit (e.g. factorization bound)."""


class ResourceError(PsiverifyError):
    """The request would exceed the configured memory budget."""


class UnknownClaimError(PsiverifyError):
    """A claim identifier is not present in the verification registry."""
