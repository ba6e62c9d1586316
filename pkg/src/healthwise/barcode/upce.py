"""UPC-E zero-suppression: expansion to UPC-A and the inverse compression.

A UPC-E code is N d1..d6 C (number system, six data digits, check digit).
The last data digit selects the expansion shape; the check digit is shared
with the expanded UPC-A. Compression applies the first matching suppression
rule, which makes it deterministic; a UPC-E code is *canonical* exactly when
compressing its expansion reproduces it.
"""

from ..errors import (
    InvalidCheckDigit,
    InvalidNumberSystem,
    NonDigitInput,
    NotCompressible,
    UnsupportedLength,
)
from .gtin import compute_check_digit


def expand_upce(code8: str) -> str:
    """Expand an 8-digit UPC-E to its 12-digit UPC-A form.

    Raises:
        NonDigitInput, UnsupportedLength: not 8 decimal digits
        InvalidNumberSystem: first digit not 0 or 1
        InvalidCheckDigit: trailing digit inconsistent with the expansion
    """
    if not code8.isdigit():
        raise NonDigitInput(f"UPC-E must be decimal digits, got {code8!r}")
    if len(code8) != 8:
        raise UnsupportedLength(f"UPC-E must be 8 digits, got {len(code8)}")
    system = code8[0]
    if system not in ("0", "1"):
        raise InvalidNumberSystem(f"UPC-E number system must be 0 or 1, got {system}")

    d1, d2, d3, d4, d5, d6 = code8[1:7]
    if d6 in ("0", "1", "2"):
        body = system + d1 + d2 + d6 + "0000" + d3 + d4 + d5
    elif d6 == "3":
        body = system + d1 + d2 + d3 + "00000" + d4 + d5
    elif d6 == "4":
        body = system + d1 + d2 + d3 + d4 + "00000" + d5
    else:
        body = system + d1 + d2 + d3 + d4 + d5 + "0000" + d6

    check = compute_check_digit(body)
    if int(code8[7]) != check:
        raise InvalidCheckDigit(
            f"UPC-E check digit should be {check}, got {code8[7]}"
        )
    return body + str(check)


def compress_to_upce(code12: str) -> str:
    """Compress a 12-digit UPC-A to UPC-E where a suppressed form exists.

    Rules are tried in order (manufacturer ends 000/100/200, then 00, then 0,
    then item 5-9), so the result is deterministic and expanding it restores
    the input.

    Raises:
        NonDigitInput, UnsupportedLength, InvalidNumberSystem, InvalidCheckDigit
        NotCompressible: no suppression pattern matches
    """
    if not code12.isdigit():
        raise NonDigitInput(f"UPC-A must be decimal digits, got {code12!r}")
    if len(code12) != 12:
        raise UnsupportedLength(f"UPC-A must be 12 digits, got {len(code12)}")
    system = code12[0]
    if system not in ("0", "1"):
        raise InvalidNumberSystem(f"UPC-A number system must be 0 or 1, got {system}")
    check = compute_check_digit(code12[:-1])
    if int(code12[-1]) != check:
        raise InvalidCheckDigit(
            f"check digit of {code12} should be {check}, got {code12[-1]}"
        )

    mfr = code12[1:6]
    item = code12[6:11]
    if mfr[2] in ("0", "1", "2") and mfr[3:] == "00" and item[:2] == "00":
        data = mfr[:2] + item[2:] + mfr[2]
    elif mfr[3:] == "00" and item[:3] == "000":
        data = mfr[:3] + item[3:] + "3"
    elif mfr[4] == "0" and item[:4] == "0000":
        data = mfr[:4] + item[4] + "4"
    elif item[:4] == "0000" and item[4] in "56789":
        data = mfr + item[4]
    else:
        raise NotCompressible(f"{code12} has no UPC-E form")
    return system + data + code12[-1]
