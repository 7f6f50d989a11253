"""Exception types raised across the package."""


class RegoverError(Exception):
    """Base class for all errors raised by regover."""


class NonUnitConstantTerm(RegoverError, ValueError):
    pass


class EmptyExtraction(RegoverError, ValueError):
    pass


class UnknownIdentity(RegoverError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown identity"


class InapplicableClass(RegoverError, ValueError):
    pass


class NotInvertible(RegoverError, ValueError):
    pass


class BadPrime(RegoverError, ValueError):
    pass


class InadmissibleR(RegoverError, ValueError):
    pass


class TruncationTooSmall(RegoverError, ValueError):
    pass


class CertificateError(RegoverError):
    """Raised when a Radu certificate cannot be completed.

    The partially filled certificate, if any, is attached as ``certificate``.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class CosetLemmaInapplicable(CertificateError):
    pass


class DeltaStarFailed(CertificateError):
    pass


class PositivityFailed(CertificateError):
    pass


class SpecMismatch(CertificateError):
    pass
