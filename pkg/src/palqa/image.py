"""Grayscale image container, binary PGM I/O, 8x8 block handling, and PSNR.

Images are 8-bit single-channel rasters stored row-major. All functions
treat images as immutable values; nothing here mutates its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

BLOCK_SIDE = 8


class GrayImage:
    """Width x height 8-bit grayscale raster.

    ``pixels`` is a (height, width) uint8 array. Equality is pixel-exact.
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels: np.ndarray):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be 2-D and non-empty, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if np.any(arr < 0) or np.any(arr > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        self.pixels = arr

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __repr__(self) -> str:
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True)
class PixelBlock:
    """One 8x8 tile of samples with its (block-row, block-col) grid origin."""

    samples: np.ndarray  # (8, 8) uint8
    origin: tuple[int, int]

    def __post_init__(self):
        if self.samples.shape != (BLOCK_SIDE, BLOCK_SIDE):
            raise ValueError(f"block must be 8x8, got {self.samples.shape}")


def _read_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comment lines, then collect one token.
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise FormatError("truncated PGM header")
    return data[start:pos], pos


def read_pgm(data: bytes) -> GrayImage:
    """Parse a binary (P5) PGM with maxval 255.

    Header whitespace and ``#`` comments are tolerated; the payload must be
    exactly width*height raw bytes.
    """
    magic, pos = _read_header_token(data, 0)
    if magic != b"P5":
        raise FormatError(f"bad PGM magic {magic!r}, expected b'P5'")
    fields = []
    for _ in range(3):
        token, pos = _read_header_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError as exc:
            raise FormatError(f"non-numeric PGM header field {token!r}") from exc
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError(f"nonpositive PGM dimensions {width}x{height}")
    if maxval != 255:
        raise FormatError(f"unsupported PGM maxval {maxval}, expected 255")
    pos += 1  # single whitespace byte after maxval
    payload = data[pos : pos + width * height]
    if len(payload) != width * height:
        raise FormatError("truncated PGM payload")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels.copy())


def write_pgm(img: GrayImage) -> bytes:
    """Serialize to the canonical form ``P5\\n<w> <h>\\n255\\n`` + raw samples."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def pad_to_blocks(img: GrayImage, side: int = BLOCK_SIDE) -> GrayImage:
    """Round dimensions up to multiples of ``side`` by edge replication."""
    if side < 1:
        raise ValueError("block side must be >= 1")
    pad_h = (-img.height) % side
    pad_w = (-img.width) % side
    if pad_h == 0 and pad_w == 0:
        return img
    return GrayImage(np.pad(img.pixels, ((0, pad_h), (0, pad_w)), mode="edge"))


def crop(img: GrayImage, width: int, height: int) -> GrayImage:
    """Take the top-left ``width`` x ``height`` region."""
    if width > img.width or height > img.height:
        raise ValueError("crop region exceeds image bounds")
    return GrayImage(img.pixels[:height, :width].copy())


def partition(img: GrayImage) -> list[PixelBlock]:
    """Split into 8x8 blocks, raster-ordered over the block grid."""
    if img.width % BLOCK_SIDE or img.height % BLOCK_SIDE:
        raise ValueError(
            f"dimensions {img.width}x{img.height} are not multiples of {BLOCK_SIDE}"
        )
    blocks = []
    for brow in range(img.height // BLOCK_SIDE):
        for bcol in range(img.width // BLOCK_SIDE):
            tile = img.pixels[
                brow * BLOCK_SIDE : (brow + 1) * BLOCK_SIDE,
                bcol * BLOCK_SIDE : (bcol + 1) * BLOCK_SIDE,
            ]
            blocks.append(PixelBlock(tile.copy(), (brow, bcol)))
    return blocks


def merge(blocks: list[PixelBlock], dims: tuple[int, int]) -> GrayImage:
    """Reassemble blocks into an image of ``dims`` = (width, height).

    Every grid cell must be covered exactly once.
    """
    width, height = dims
    if width % BLOCK_SIDE or height % BLOCK_SIDE:
        raise ValueError(f"merge dimensions {width}x{height} are not block-aligned")
    grid_h = height // BLOCK_SIDE
    grid_w = width // BLOCK_SIDE
    if len(blocks) != grid_h * grid_w:
        raise ValueError(f"expected {grid_h * grid_w} blocks, got {len(blocks)}")
    out = np.zeros((height, width), dtype=np.uint8)
    seen = set()
    for block in blocks:
        brow, bcol = block.origin
        if not (0 <= brow < grid_h and 0 <= bcol < grid_w):
            raise ValueError(f"block origin {block.origin} outside {grid_w}x{grid_h} grid")
        if block.origin in seen:
            raise ValueError(f"duplicate block origin {block.origin}")
        seen.add(block.origin)
        out[
            brow * BLOCK_SIDE : (brow + 1) * BLOCK_SIDE,
            bcol * BLOCK_SIDE : (bcol + 1) * BLOCK_SIDE,
        ] = block.samples
    return GrayImage(out)


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio, 10*log10(255^2 / MSE), in dB.

    Identical images return ``math.inf``.
    """
    if a.pixels.shape != b.pixels.shape:
        raise ValueError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    diff = a.pixels.astype(np.float64) - b.pixels.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)
