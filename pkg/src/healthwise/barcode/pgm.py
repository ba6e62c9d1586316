"""Binary PGM ("P5") reading and synthetic symbol rendering.

Only maxval-255 P5 documents are accepted; anything else is MalformedImage.
The renderer produces the fixtures the decoder tests and the scan CLI use.
"""

import random
from dataclasses import dataclass

from ..errors import MalformedImage
from .scanline import MIN_SCANLINE_WIDTH

BLACK = 0
WHITE = 255

# White margin rendered either side of a symbol, in modules. The decoder
# requires at least 7.
QUIET_ZONE_MODULES = 8


@dataclass(frozen=True)
class PgmImage:
    width: int
    height: int
    rows: tuple[bytes, ...]


def parse_pgm(data: bytes) -> PgmImage:
    """Parse a binary PGM document.

    Raises:
        MalformedImage: wrong magic, bad header, maxval other than 255,
            truncated pixel data, or width below the decodable minimum
    """
    if not data.startswith(b"P5"):
        raise MalformedImage("not a binary PGM (P5) document")
    try:
        width, height, maxval, offset = _parse_header(data)
    except (ValueError, IndexError) as exc:
        raise MalformedImage(f"bad PGM header: {exc}") from exc
    if maxval != 255:
        raise MalformedImage(f"PGM maxval must be 255, got {maxval}")
    if width <= 0 or height <= 0:
        raise MalformedImage(f"bad PGM dimensions {width}x{height}")
    if len(data) - offset < width * height:
        raise MalformedImage("PGM pixel data truncated")
    if width < MIN_SCANLINE_WIDTH:
        raise MalformedImage(
            f"image width {width} below decodable minimum {MIN_SCANLINE_WIDTH}"
        )
    rows = tuple(
        data[offset + y * width : offset + (y + 1) * width] for y in range(height)
    )
    return PgmImage(width=width, height=height, rows=rows)


def _parse_header(data: bytes) -> tuple[int, int, int, int]:
    """Tokenize the ASCII header: magic, width, height, maxval.

    Comments (# to end of line) are allowed between tokens. Returns the
    three numbers plus the offset of the first pixel byte.
    """
    pos = 2  # past the magic
    values = []
    while len(values) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] not in (0x0A, 0x0D):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if pos == start:
            raise ValueError("header ended early")
        values.append(int(data[start:pos]))
    pos += 1  # single whitespace byte after maxval
    return values[0], values[1], values[2], pos


def write_pgm(width: int, height: int, rows: list[bytes]) -> bytes:
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + b"".join(rows)


def render_symbol_pgm(
    bits: list[int],
    scale: int = 3,
    height: int = 40,
    quiet_modules: int = QUIET_ZONE_MODULES,
    jitter_rng: random.Random | None = None,
) -> bytes:
    """Render an encoded symbol as a synthetic PGM photo.

    Each module becomes ``scale`` pixels; a white quiet zone flanks the
    symbol. With ``jitter_rng`` every bar/space run is stretched or shrunk
    by one pixel at random, imitating imperfect focus.
    """
    row = bytearray()
    row += bytes([WHITE]) * (quiet_modules * scale)
    for length, value in _runs_of(bits):
        px = length * scale
        if jitter_rng is not None:
            px = max(1, px + jitter_rng.choice((-1, 0, 1)))
        row += bytes([BLACK if value == 1 else WHITE]) * px
    row += bytes([WHITE]) * (quiet_modules * scale)
    line = bytes(row)
    return write_pgm(len(line), height, [line] * height)


def _runs_of(bits: list[int]):
    count = 1
    for prev, cur in zip(bits, bits[1:]):
        if cur == prev:
            count += 1
        else:
            yield count, prev
            count = 1
    yield count, bits[-1]
