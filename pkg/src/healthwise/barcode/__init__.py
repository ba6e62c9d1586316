"""EAN/UPC symbology family: validation, conversion, encoding and optical decoding."""

from .gtin import Gtin, Symbology, compute_check_digit, validate_code
from .upce import compress_to_upce, expand_upce
from .encode import encode
from .scanline import ModuleRuns, Scanline, binarize, run_lengths
from .decode import decode_image, decode_runs
from .pgm import parse_pgm, render_symbol_pgm, write_pgm

__all__ = [
    "Gtin",
    "Symbology",
    "compute_check_digit",
    "validate_code",
    "expand_upce",
    "compress_to_upce",
    "encode",
    "Scanline",
    "ModuleRuns",
    "binarize",
    "run_lengths",
    "decode_runs",
    "decode_image",
    "parse_pgm",
    "write_pgm",
    "render_symbol_pgm",
]
