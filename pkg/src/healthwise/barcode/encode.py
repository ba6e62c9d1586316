"""Module-level encoder for EAN-13 and EAN-8 symbols.

The encoder exists as the decoder's round-trip oracle and as the fixture
generator; it emits one int per module (1 = bar, 0 = space) with no quiet
zones attached.
"""

from ..errors import UnsupportedSymbology
from .gtin import Gtin, Symbology
from .patterns import (
    CENTER_GUARD,
    END_GUARD,
    G_CODES,
    L_CODES,
    PARITY_PATTERNS,
    R_CODES,
    START_GUARD,
)

EAN13_MODULES = 95
EAN8_MODULES = 67


def encode(gtin: Gtin, symbology: Symbology | None = None) -> list[int]:
    """Encode a Gtin as a module sequence.

    EAN-13 yields 95 modules (guard, six L/G digits, center, six R digits,
    guard); EAN-8 yields 67 (guard, four L, center, four R, guard). The
    symbology defaults to the Gtin's own; only EAN13 and EAN8 have symbol
    geometries here.

    Raises:
        UnsupportedSymbology: symbology is not EAN13 or EAN8, or an EAN8
            render is requested for a code wider than 8 digits
    """
    symbology = symbology or gtin.symbology
    if symbology == Symbology.EAN13:
        return _encode_ean13(gtin.digits13)
    if symbology == Symbology.EAN8:
        if gtin.digits13[:5] != "00000":
            raise UnsupportedSymbology(
                f"{gtin.digits13} does not fit the 8-digit symbol"
            )
        return _encode_ean8(gtin.digits13[5:])
    raise UnsupportedSymbology(f"no symbol geometry for {symbology.value}")


def _encode_ean13(digits: str) -> list[int]:
    parity = PARITY_PATTERNS[digits[0]]
    bits = START_GUARD
    for letter, digit in zip(parity, digits[1:7]):
        table = L_CODES if letter == "L" else G_CODES
        bits += table[digit]
    bits += CENTER_GUARD
    for digit in digits[7:13]:
        bits += R_CODES[digit]
    bits += END_GUARD
    return [int(b) for b in bits]


def _encode_ean8(digits: str) -> list[int]:
    bits = START_GUARD
    for digit in digits[:4]:
        bits += L_CODES[digit]
    bits += CENTER_GUARD
    for digit in digits[4:8]:
        bits += R_CODES[digit]
    bits += END_GUARD
    return [int(b) for b in bits]
