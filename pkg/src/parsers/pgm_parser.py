"""
PGM Parser for grayscale frames and masks

Frames and masks are stored as binary PGM (P5) images.

Format:
- "P5" magic
- whitespace, width, whitespace, height, whitespace, maxval
- exactly one whitespace byte
- width * height bytes of pixel data, row-major

Comment lines ("# ...") may appear anywhere in the header. Only
maxval 255 (one byte per pixel) is accepted.
"""

from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from ..constants.formats import PGM_MAGIC, PGM_MAXVAL
from ..errors import ClipLoadError


class PgmParser:
    """
    Parser for binary PGM files.

    Usage:
        parser = PgmParser("path/to/frame_00000.pgm")
        parser.parse()
        pixels = parser.pixels      # (H, W) uint8
    """

    WHITESPACE = b' \t\r\n'

    def __init__(self, filepath: str | Path):
        self.filepath = Path(filepath)
        self.width: int = 0
        self.height: int = 0
        self.maxval: int = 0
        self.pixels: Optional[np.ndarray] = None
        self._data: bytes = b''
        self._parsed = False

    def parse(self) -> None:
        """Parse the PGM file."""
        try:
            with open(self.filepath, 'rb') as f:
                self._data = f.read()
        except OSError as e:
            raise ClipLoadError(f"cannot read {self.filepath}: {e}") from e

        tokens, offset = self._read_header_tokens(4)
        if tokens[0] != PGM_MAGIC:
            raise ClipLoadError(f"{self.filepath}: not a binary PGM (magic {tokens[0]!r})")
        try:
            self.width, self.height, self.maxval = (int(t) for t in tokens[1:])
        except ValueError:
            raise ClipLoadError(f"{self.filepath}: malformed PGM header")

        if self.maxval != PGM_MAXVAL:
            raise ClipLoadError(
                f"{self.filepath}: PGM maxval must be {PGM_MAXVAL}, got {self.maxval}"
            )
        if self.width <= 0 or self.height <= 0:
            raise ClipLoadError(f"{self.filepath}: invalid size {self.width}x{self.height}")

        expected = self.width * self.height
        payload = self._data[offset:offset + expected]
        if len(payload) != expected:
            raise ClipLoadError(
                f"{self.filepath}: truncated pixel data ({len(payload)} of {expected} bytes)"
            )

        self.pixels = np.frombuffer(payload, dtype=np.uint8).reshape(self.height, self.width).copy()
        self._parsed = True

    def _read_header_tokens(self, count: int) -> Tuple[List[bytes], int]:
        """Read `count` header tokens; return them and the pixel data offset."""
        tokens: List[bytes] = []
        pos = 0
        data = self._data
        while len(tokens) < count:
            if pos >= len(data):
                raise ClipLoadError(f"{self.filepath}: truncated PGM header")
            ch = data[pos:pos + 1]
            if ch == b'#':
                end = data.find(b'\n', pos)
                pos = len(data) if end < 0 else end + 1
                continue
            if ch in self.WHITESPACE:
                pos += 1
                continue
            start = pos
            while pos < len(data) and data[pos:pos + 1] not in self.WHITESPACE and data[pos:pos + 1] != b'#':
                pos += 1
            tokens.append(data[start:pos])
        # single whitespace byte separates the header from pixel data
        return tokens, pos + 1

    def get_pixels(self) -> np.ndarray:
        if not self._parsed:
            self.parse()
        return self.pixels


def read_pgm(filepath: str | Path) -> np.ndarray:
    """Read a P5 PGM file into an (H, W) uint8 array."""
    parser = PgmParser(filepath)
    parser.parse()
    return parser.pixels


def encode_pgm(pixels: np.ndarray) -> bytes:
    """Encode an (H, W) uint8 array as P5 PGM bytes."""
    if pixels.ndim != 2:
        raise ValueError(f"PGM needs a 2-D array, got shape {pixels.shape}")
    if pixels.dtype != np.uint8:
        raise ValueError(f"PGM needs uint8 pixels, got {pixels.dtype}")
    height, width = pixels.shape
    header = b"%s\n%d %d\n%d\n" % (PGM_MAGIC, width, height, PGM_MAXVAL)
    return header + np.ascontiguousarray(pixels).tobytes()


def write_pgm(filepath: str | Path, pixels: np.ndarray) -> Path:
    """Write an (H, W) uint8 array as a P5 PGM file."""
    filepath = Path(filepath)
    with open(filepath, 'wb') as f:
        f.write(encode_pgm(pixels))
    return filepath
