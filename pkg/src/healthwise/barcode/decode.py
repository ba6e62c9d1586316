"""Run-length decoder for EAN-13 and EAN-8 symbols.

The decoder normalizes each 4-run digit group to its 7-module window and
classifies it by minimum L1 distance against the pattern profiles, so it is
invariant under uniform scaling. The check digit is the final arbiter: a
corrupted symbol either fails a structural check here or is rejected there.
"""

from ..errors import (
    AmbiguousDigit,
    HealthwiseError,
    InvalidCheckDigit,
    NoGuardFound,
    ParityPatternUnknown,
)
from .gtin import Gtin, Symbology, validate_code
from .patterns import FIRST_DIGIT_BY_PARITY, G_PROFILES, L_PROFILES, R_PROFILES
from .pgm import parse_pgm
from .scanline import ModuleRuns, Scanline, binarize, run_lengths

# Runs per full symbol: guards (3+5+3) plus 4 runs per digit.
EAN13_RUNS = 59
EAN8_RUNS = 43

# Quiet zone before the start guard, in estimated modules. The standard
# asks for 11; 7 lets tightly cropped fixtures decode.
MIN_QUIET_MODULES = 7

# Guard runs must stay near 1 module of the reference estimate (the guard
# triple itself at the start, the whole-symbol span once geometry is known);
# the band tolerates one pixel of jitter at 4 px/module but rejects doubled
# runs.
GUARD_RUN_RATIO = (0.55, 1.45)

# A digit group further than this (L1, module units) from every pattern is
# treated as unreadable rather than guessed at.
MAX_DIGIT_DISTANCE = 1.6

_TIE_EPS = 1e-9


def decode_runs(module_runs: ModuleRuns, prefer_upc: bool = False) -> Gtin:
    """Decode a bar/space run sequence into a validated Gtin.

    Start-guard candidates are scanned left to right; the first one that
    yields a structurally sound, checksum-valid symbol wins. EAN-13 and
    EAN-8 geometries are distinguished by their run count and total span.
    With ``prefer_upc``, a decoded EAN-13 with leading zero is reported as
    the 12-digit UPC-A it carries.

    Raises:
        NoGuardFound, AmbiguousDigit, ParityPatternUnknown, InvalidCheckDigit
    """
    runs = module_runs.runs
    if not runs or any(r <= 0 for r in runs):
        raise NoGuardFound("empty or non-positive run sequence")

    first_error: HealthwiseError | None = None
    for start in range(len(runs) - 2):
        if not module_runs.is_bar(start):
            continue
        module = _guard_candidate(runs, start)
        if module is None:
            continue
        try:
            digits = _decode_symbol(runs, start, module)
            return _to_gtin(digits, prefer_upc)
        except HealthwiseError as exc:
            if first_error is None:
                first_error = exc

    raise first_error or NoGuardFound("no start guard located")


def decode_image(data: bytes, prefer_upc: bool = False) -> Gtin:
    """Decode a binary PGM photograph of a symbol.

    The middle row is tried first, then the rows at 25% and 75% height.

    Raises:
        MalformedImage, plus any decode error from the last attempted row
    """
    image = parse_pgm(data)
    tried = []
    for y in (image.height // 2, image.height // 4, (3 * image.height) // 4):
        if y not in tried:
            tried.append(y)
    last_error: HealthwiseError | None = None
    for y in tried:
        try:
            bits = binarize(Scanline(tuple(image.rows[y])))
            return decode_runs(run_lengths(bits), prefer_upc)
        except HealthwiseError as exc:
            last_error = exc
    assert last_error is not None
    raise last_error


def _guard_candidate(runs: tuple[int, ...], start: int) -> float | None:
    """Module width if a 1:1:1 guard with a quiet zone starts here."""
    guard = runs[start : start + 3]
    module = sum(guard) / 3
    lo, hi = GUARD_RUN_RATIO
    if not all(lo <= r / module <= hi for r in guard):
        return None
    # A preceding space must be wide enough to be a quiet zone; a symbol
    # cropped flush at the sequence start is accepted.  One module of slack
    # keeps jittered guards (which inflate the estimate) from disqualifying
    # a genuine quiet zone.
    if start > 0 and runs[start - 1] < (MIN_QUIET_MODULES - 1) * module:
        return None
    return module


def _decode_symbol(runs: tuple[int, ...], start: int, module: float) -> str:
    remaining = len(runs) - start
    geometries = []
    if remaining >= EAN13_RUNS:
        span = sum(runs[start : start + EAN13_RUNS])
        geometries.append((abs(span / (95 * module) - 1), 13))
    if remaining >= EAN8_RUNS:
        span = sum(runs[start : start + EAN8_RUNS])
        geometries.append((abs(span / (67 * module) - 1), 8))
    if not geometries:
        raise NoGuardFound("too few runs after start guard for any symbol")

    first_error: HealthwiseError | None = None
    for _, width in sorted(geometries):
        try:
            if width == 13:
                return _read_ean13(runs, start)
            return _read_ean8(runs, start)
        except HealthwiseError as exc:
            if first_error is None:
                first_error = exc
    assert first_error is not None
    raise first_error


def _read_ean13(runs: tuple[int, ...], start: int) -> str:
    module = sum(runs[start : start + EAN13_RUNS]) / 95
    _require_guard(runs[start + 27 : start + 32], module, "center guard")
    _require_guard(runs[start + 56 : start + 59], module, "end guard")

    letters = []
    left = []
    for k in range(6):
        group = runs[start + 3 + 4 * k : start + 7 + 4 * k]
        digit, letter = _classify(group, (("L", L_PROFILES), ("G", G_PROFILES)))
        left.append(digit)
        letters.append(letter)
    parity = "".join(letters)
    first = FIRST_DIGIT_BY_PARITY.get(parity)
    if first is None:
        raise ParityPatternUnknown(f"left-half parity {parity} matches no first digit")

    right = [
        _classify(runs[start + 32 + 4 * k : start + 36 + 4 * k], (("R", R_PROFILES),))[0]
        for k in range(6)
    ]
    return first + "".join(left) + "".join(right)


def _read_ean8(runs: tuple[int, ...], start: int) -> str:
    module = sum(runs[start : start + EAN8_RUNS]) / 67
    _require_guard(runs[start + 19 : start + 24], module, "center guard")
    _require_guard(runs[start + 40 : start + 43], module, "end guard")

    left = [
        _classify(runs[start + 3 + 4 * k : start + 7 + 4 * k], (("L", L_PROFILES),))[0]
        for k in range(4)
    ]
    right = [
        _classify(runs[start + 24 + 4 * k : start + 28 + 4 * k], (("R", R_PROFILES),))[0]
        for k in range(4)
    ]
    return "".join(left) + "".join(right)


def _require_guard(guard: tuple[int, ...], module: float, what: str) -> None:
    lo, hi = GUARD_RUN_RATIO
    if not all(lo <= r / module <= hi for r in guard):
        raise NoGuardFound(f"{what} runs {guard} are not unit modules")


def _classify(
    group: tuple[int, ...],
    tables: tuple[tuple[str, dict[str, tuple[int, ...]]], ...],
) -> tuple[str, str]:
    """Nearest digit pattern for a 4-run group, as (digit, table letter)."""
    unit = sum(group) / 7
    norm = [r / unit for r in group]
    best = second = float("inf")
    best_hit = None
    for letter, profiles in tables:
        for digit, profile in profiles.items():
            dist = sum(abs(n - p) for n, p in zip(norm, profile))
            if dist < best:
                best, second = dist, best
                best_hit = (digit, letter)
            elif dist < second:
                second = dist
    if best_hit is None or best > MAX_DIGIT_DISTANCE:
        raise AmbiguousDigit(f"runs {group} match no digit pattern")
    if second - best < _TIE_EPS:
        raise AmbiguousDigit(f"runs {group} tie between two digit patterns")
    return best_hit


def _to_gtin(digits: str, prefer_upc: bool) -> Gtin:
    gtin = validate_code(digits)  # raises InvalidCheckDigit on bad symbols
    if prefer_upc and len(digits) == 13 and digits[0] == "0":
        return Gtin(
            digits13=gtin.digits13, symbology=Symbology.UPCA, original=digits[1:]
        )
    return gtin
