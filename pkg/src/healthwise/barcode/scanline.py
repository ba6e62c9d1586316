"""Scanline binarization and run-length extraction."""

from dataclasses import dataclass, field

from ..errors import FlatScanline

# Minimum width for a full EAN-13 symbol at one sample per module.
MIN_SCANLINE_WIDTH = 95

# Scanlines whose luminance span is below this decode as FlatScanline
# rather than amplifying sensor noise into bars.
CONTRAST_FLOOR = 32


@dataclass(frozen=True)
class Scanline:
    """One row of luminance samples (0 = black .. 255 = white)."""

    samples: tuple[int, ...]
    width: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "width", len(self.samples))


@dataclass(frozen=True)
class ModuleRuns:
    """Alternating bar/space run lengths extracted from a bit sequence."""

    runs: tuple[int, ...]
    first_is_bar: bool

    def is_bar(self, index: int) -> bool:
        return (index % 2 == 0) == self.first_is_bar


def binarize(scanline: Scanline) -> list[int]:
    """Threshold a scanline at the midpoint of its luminance range.

    Samples darker than the midpoint become 1 (bar), the rest 0 (space).

    Raises:
        FlatScanline: luminance span below the contrast floor
    """
    lo = min(scanline.samples)
    hi = max(scanline.samples)
    if hi - lo < CONTRAST_FLOOR:
        raise FlatScanline(f"contrast {hi - lo} below floor {CONTRAST_FLOOR}")
    threshold = (lo + hi) / 2
    return [1 if sample < threshold else 0 for sample in scanline.samples]


def run_lengths(bits: list[int]) -> ModuleRuns:
    """Run-length encode a bit sequence into ModuleRuns."""
    if not bits:
        return ModuleRuns(runs=(), first_is_bar=False)
    runs = []
    count = 1
    for prev, cur in zip(bits, bits[1:]):
        if cur == prev:
            count += 1
        else:
            runs.append(count)
            count = 1
    runs.append(count)
    return ModuleRuns(runs=tuple(runs), first_is_bar=bits[0] == 1)
