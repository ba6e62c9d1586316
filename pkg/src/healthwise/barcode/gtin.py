"""Article number validation and canonicalization.

Every supported symbology (EAN-13, EAN-8, UPC-A, UPC-E) normalizes to a
canonical 13-digit form by left zero-padding, so downstream stores have a
single key space. Zero-padding preserves the check digit because the
weighting is anchored at the rightmost digit.
"""

from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidCheckDigit, NonDigitInput, UnsupportedLength


class Symbology(str, Enum):
    EAN13 = "EAN13"
    EAN8 = "EAN8"
    UPCA = "UPCA"
    UPCE = "UPCE"


@dataclass(frozen=True)
class Gtin:
    """A validated article number.

    Attributes:
        digits13: canonical zero-padded 13-digit form, check digit verified
        symbology: symbology the code was entered or scanned as
        original: the digits as entered/scanned (8, 12 or 13 digits)
    """

    digits13: str
    symbology: Symbology
    original: str


_BODY_LENGTHS = (7, 11, 12)  # EAN-8, UPC-A, EAN-13 bodies


def compute_check_digit(body: str) -> int:
    """Check digit for a code body (the code without its final digit).

    Digits are weighted 3,1,3,1,... starting from the rightmost body digit;
    the check digit makes the total weighted sum a multiple of 10.

    Raises:
        NonDigitInput: body contains a non-digit character
        UnsupportedLength: body length is not 7, 11 or 12
    """
    if len(body) not in _BODY_LENGTHS:
        raise UnsupportedLength(
            f"code body must be {_BODY_LENGTHS} digits long, got {len(body)}"
        )
    if not body.isdigit():
        raise NonDigitInput(f"code body must be decimal digits, got {body!r}")
    total = 0
    weight = 3
    for char in reversed(body):
        total += int(char) * weight
        weight = 4 - weight  # alternate 3,1,3,1,...
    return (10 - total % 10) % 10


_SYMBOLOGY_BY_LENGTH = {
    8: Symbology.EAN8,
    12: Symbology.UPCA,
    13: Symbology.EAN13,
}


def validate_code(text: str) -> Gtin:
    """Validate user-entered or scanned digits and return the canonical Gtin.

    Surrounding whitespace is trimmed; length classifies the symbology
    (8 -> EAN-8, 12 -> UPC-A, 13 -> EAN-13); the final digit must match the
    computed check digit.

    Raises:
        NonDigitInput, UnsupportedLength, InvalidCheckDigit
    """
    code = text.strip()
    symbology = _SYMBOLOGY_BY_LENGTH.get(len(code))
    if symbology is None:
        raise UnsupportedLength(
            f"barcode must be 8, 12 or 13 digits, got {len(code)}"
        )
    if not code.isdigit():
        raise NonDigitInput(f"barcode must be decimal digits, got {text!r}")
    expected = compute_check_digit(code[:-1])
    if int(code[-1]) != expected:
        raise InvalidCheckDigit(
            f"check digit of {code} should be {expected}, got {code[-1]}"
        )
    return Gtin(digits13=code.zfill(13), symbology=symbology, original=code)
