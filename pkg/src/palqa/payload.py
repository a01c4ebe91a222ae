"""Bit-exact serialization of the compressed stream.

Wire layout (all multi-byte integers big-endian, bits packed MSB-first):

====== ======================== =========================================
offset field                    meaning
====== ======================== =========================================
0-3    magic ``PALQ``
4      version                  u8, currently 1
5      block_size               u8, always 8
6-7    width                    u16, original image width
8-9    height                   u16, original image height
10-11  Q                        u16, quantization factor
12-15  coeff_count              u32
16-19  ones_count               u32
====== ======================== =========================================

The body holds ``coeff_count`` records of (block index, y, x_high, sign,
magnitude) = (ceil(log2 nblocks), 4, 3, 1, 8) bits -- the block field is
omitted entirely for single-block images -- followed by ``ones_count``
LSB-plane indices of ceil(log2 max(coeff_count, 2)) bits each, then zero
padding to a byte boundary. Sign bit 1 means negative. Field widths mirror
the qubit registers, so payload bits correspond one-to-one with circuit
connections where possible.
"""

from __future__ import annotations

import struct

from .errors import FormatError
from .lsbswap import OnesList, join, regenerate
from .transform import SparseCoeff

MAGIC = b"PALQ"
VERSION = 1
BLOCK_SIZE = 8
HEADER_LEN = 20
_HEADER_FMT = ">4sBBHHHII"


class _BitWriter:
    def __init__(self):
        self._bytes = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, width: int) -> None:
        if width == 0:
            return
        if value < 0 or value >= (1 << width):
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nbits += width
        while self._nbits >= 8:
            self._nbits -= 8
            self._bytes.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def getvalue(self) -> bytes:
        out = bytearray(self._bytes)
        if self._nbits:
            out.append((self._acc << (8 - self._nbits)) & 0xFF)
        return bytes(out)


class _BitReader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def read(self, width: int) -> int:
        if width == 0:
            return 0
        end = self._pos + width
        if end > len(self._data) * 8:
            raise FormatError("truncated payload body")
        value = 0
        pos = self._pos
        while pos < end:
            byte = self._data[pos >> 3]
            take = min(8 - (pos & 7), end - pos)
            shift = 8 - (pos & 7) - take
            value = (value << take) | ((byte >> shift) & ((1 << take) - 1))
            pos += take
        self._pos = end
        return value

    @property
    def bit_position(self) -> int:
        return self._pos


def _grid(width: int, height: int) -> tuple[int, int]:
    return (width + 7) // 8, (height + 7) // 8


def _block_bits(nblocks: int) -> int:
    return (nblocks - 1).bit_length() if nblocks > 1 else 0


def _ones_index_bits(coeff_count: int) -> int:
    return (max(coeff_count, 2) - 1).bit_length()


def body_bit_count(coeff_count: int, ones_count: int, dims: tuple[int, int]) -> int:
    """Exact body size in bits, before byte padding."""
    grid_w, grid_h = _grid(*dims)
    record = _block_bits(grid_w * grid_h) + 4 + 3 + 1 + 8
    return coeff_count * record + ones_count * _ones_index_bits(coeff_count)


def serialize(
    coeffs: list[SparseCoeff],
    x_high: list[int],
    ones: OnesList,
    dims: tuple[int, int],
    q: int,
) -> bytes:
    width, height = dims
    if not (1 <= width <= 0xFFFF and 1 <= height <= 0xFFFF):
        raise ValueError(f"dimensions {width}x{height} outside the u16 range")
    if not (1 <= q <= 0xFFFF):
        raise ValueError(f"quantization factor {q} outside the u16 range")
    if len(coeffs) >= 1 << 32:
        raise ValueError("coefficient count overflows u32")
    if len(x_high) != len(coeffs) or ones.total != len(coeffs):
        raise ValueError(
            f"inconsistent lengths: {len(coeffs)} coefficients, "
            f"{len(x_high)} x_high, ones total {ones.total}"
        )
    grid_w, grid_h = _grid(width, height)
    nblocks = grid_w * grid_h
    block_bits = _block_bits(nblocks)
    index_bits = _ones_index_bits(len(coeffs))

    header = struct.pack(
        _HEADER_FMT, MAGIC, VERSION, BLOCK_SIZE, width, height, q,
        len(coeffs), len(ones.indices),
    )
    writer = _BitWriter()
    for coeff, xh in zip(coeffs, x_high):
        if coeff.block_index >= nblocks:
            raise ValueError(f"block index {coeff.block_index} outside {nblocks}-block grid")
        if not (0 <= xh <= 3):
            raise ValueError(f"x_high {xh} outside [0, 3]")
        writer.write(coeff.block_index, block_bits)
        writer.write(coeff.y, 4)
        writer.write(xh, 3)
        writer.write(1 if coeff.sign < 0 else 0, 1)
        writer.write(coeff.magnitude, 8)
    for index in ones.indices:
        writer.write(index, index_bits)
    return header + writer.getvalue()


def deserialize(
    data: bytes,
) -> tuple[list[SparseCoeff], list[int], OnesList, tuple[int, int], int]:
    """Exact inverse of :func:`serialize`.

    The returned coefficients carry full X positions, rebuilt by
    regenerating the LSB plane from the ones-list and joining it under the
    transmitted high bits.
    """
    if len(data) < HEADER_LEN:
        raise FormatError("truncated payload header")
    magic, version, block_size, width, height, q, coeff_count, ones_count = (
        struct.unpack(_HEADER_FMT, data[:HEADER_LEN])
    )
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if block_size != BLOCK_SIZE:
        raise FormatError(f"unsupported block size {block_size}")
    if width < 1 or height < 1:
        raise FormatError(f"nonpositive dimensions {width}x{height}")
    if q < 1:
        raise FormatError(f"invalid quantization factor {q}")
    if ones_count > coeff_count:
        raise FormatError(f"{ones_count} ones exceed {coeff_count} coefficients")

    expected = HEADER_LEN + (body_bit_count(coeff_count, ones_count, (width, height)) + 7) // 8
    if len(data) < expected:
        raise FormatError("truncated payload body")
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after payload")

    grid_w, grid_h = _grid(width, height)
    nblocks = grid_w * grid_h
    block_bits = _block_bits(nblocks)
    index_bits = _ones_index_bits(coeff_count)
    reader = _BitReader(data[HEADER_LEN:])

    records = []
    for i in range(coeff_count):
        block_index = reader.read(block_bits)
        y = reader.read(4)
        xh = reader.read(3)
        sign = -1 if reader.read(1) else 1
        magnitude = reader.read(8)
        if block_index >= nblocks:
            raise FormatError(f"record {i}: block index {block_index} out of range")
        if y >= 8:
            raise FormatError(f"record {i}: y position {y} out of range")
        if xh >= 4:
            raise FormatError(f"record {i}: x_high {xh} out of range")
        if magnitude < 1:
            raise FormatError(f"record {i}: zero magnitude")
        records.append((block_index, y, xh, sign, magnitude))

    indices = []
    for i in range(ones_count):
        index = reader.read(index_bits)
        if index >= coeff_count:
            raise FormatError(f"ones index {index} out of range")
        if indices and index <= indices[-1]:
            raise FormatError("ones indices not strictly increasing")
        indices.append(index)

    ones = OnesList(total=coeff_count, indices=tuple(indices))
    x_high = [r[2] for r in records]
    xs = join(x_high, regenerate(ones))
    coeffs = [
        SparseCoeff(block_index=r[0], x=x, y=r[1], sign=r[3], magnitude=r[4])
        for r, x in zip(records, xs)
    ]
    return coeffs, x_high, ones, (width, height), q


def bpp(data: bytes, dims: tuple[int, int]) -> float:
    """Payload bits per original pixel."""
    width, height = dims
    if width < 1 or height < 1:
        raise ValueError("dimensions must be >= 1")
    return 8.0 * len(data) / (width * height)
