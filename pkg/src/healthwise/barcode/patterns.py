"""Module patterns for the EAN symbology family.

Three 7-module encodings exist per digit: L and G on the left half of a
symbol, R on the right half. The L/G choice across the six left digits of
an EAN-13 encodes the leading (13th) digit. All tables are embedded
constants; round-trip tests guard the transcription.
"""

START_GUARD = "101"
CENTER_GUARD = "01010"
END_GUARD = "101"

L_CODES = {
    "0": "0001101", "1": "0011001", "2": "0010011", "3": "0111101",
    "4": "0100011", "5": "0110001", "6": "0101111", "7": "0111011",
    "8": "0110111", "9": "0001011",
}

G_CODES = {
    "0": "0100111", "1": "0110011", "2": "0011011", "3": "0100001",
    "4": "0011101", "5": "0111001", "6": "0000101", "7": "0010001",
    "8": "0001001", "9": "0010111",
}

R_CODES = {
    "0": "1110010", "1": "1100110", "2": "1101100", "3": "1000010",
    "4": "1011100", "5": "1001110", "6": "1010000", "7": "1000100",
    "8": "1001000", "9": "1110100",
}

# First digit of an EAN-13 -> L/G pattern of the six left-half digits.
PARITY_PATTERNS = {
    "0": "LLLLLL", "1": "LLGLGG", "2": "LLGGLG", "3": "LLGGGL",
    "4": "LGLLGG", "5": "LGGLLG", "6": "LGGGLL", "7": "LGLGLG",
    "8": "LGLGGL", "9": "LGGLGL",
}

FIRST_DIGIT_BY_PARITY = {pattern: digit for digit, pattern in PARITY_PATTERNS.items()}


def _profile(bits: str) -> tuple[int, ...]:
    """Run-length profile of a 7-module digit pattern (always 4 runs)."""
    runs = []
    count = 1
    for prev, cur in zip(bits, bits[1:]):
        if cur == prev:
            count += 1
        else:
            runs.append(count)
            count = 1
    runs.append(count)
    return tuple(runs)


# Run-length profiles, used by the decoder. L and R share profiles (R is the
# bitwise complement of L); G profiles are the reversals.
L_PROFILES = {digit: _profile(bits) for digit, bits in L_CODES.items()}
G_PROFILES = {digit: _profile(bits) for digit, bits in G_CODES.items()}
R_PROFILES = {digit: _profile(bits) for digit, bits in R_CODES.items()}
