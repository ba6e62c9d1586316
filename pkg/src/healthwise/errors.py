"""Domain error vocabulary.

Every error the server can surface on the wire is a subclass of
HealthwiseError; its ``code`` attribute is the machine token carried in
Fault envelopes and in the JSON error shape. The vocabulary is closed:
anything else escaping a handler is reported as InternalError.
"""


class HealthwiseError(Exception):
    """Base class for all domain errors."""

    code = "InternalError"

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message or self.code


# barcode symbology family
class NonDigitInput(HealthwiseError):
    code = "NonDigitInput"


class UnsupportedLength(HealthwiseError):
    code = "UnsupportedLength"


class InvalidCheckDigit(HealthwiseError):
    code = "InvalidCheckDigit"


class InvalidNumberSystem(HealthwiseError):
    code = "InvalidNumberSystem"


class NotCompressible(HealthwiseError):
    code = "NotCompressible"


class UnsupportedSymbology(HealthwiseError):
    code = "UnsupportedSymbology"


class FlatScanline(HealthwiseError):
    code = "FlatScanline"


class NoGuardFound(HealthwiseError):
    code = "NoGuardFound"


class AmbiguousDigit(HealthwiseError):
    code = "AmbiguousDigit"


class ParityPatternUnknown(HealthwiseError):
    code = "ParityPatternUnknown"


class MalformedImage(HealthwiseError):
    code = "MalformedImage"


# energy / requirement table
class NoTableRow(HealthwiseError):
    code = "NoTableRow"


# catalog
class ProductNotFound(HealthwiseError):
    code = "ProductNotFound"


class InvalidKey(HealthwiseError):
    code = "InvalidKey"


class InvariantViolation(HealthwiseError):
    code = "InvariantViolation"


class NonPositiveQuantity(HealthwiseError):
    code = "NonPositiveQuantity"


# exercise chart
class EmptyChart(HealthwiseError):
    code = "EmptyChart"


# wire protocol
class MalformedXml(HealthwiseError):
    code = "MalformedXml"


class UnknownOperation(HealthwiseError):
    code = "UnknownOperation"


class MissingField(HealthwiseError):
    code = "MissingField"


# server / stores
class NoSuchUser(HealthwiseError):
    code = "NoSuchUser"


class ValidationError(HealthwiseError):
    code = "ValidationError"


class StorageFailure(HealthwiseError):
    code = "StorageFailure"


class InternalError(HealthwiseError):
    code = "InternalError"


def fault_code(exc: BaseException) -> str:
    """Map any exception to its wire fault token."""
    if isinstance(exc, HealthwiseError):
        return exc.code
    return "InternalError"


def all_error_classes() -> list[type]:
    """Every concrete error class, for the closed-vocabulary check."""
    return HealthwiseError.__subclasses__()
