"""X-position LSB swap coding.

The least-significant bit of every nonzero coefficient's X position forms
the swap/trash plane, ordered canonically (block raster, then y, then x).
Only the positions of 1 bits travel to the decoder, which regenerates the
full plane and concatenates it back under the high bits. Round-tripping is
lossless: an all-zero plane is just the empty-indices case.

Planes can reach one bit per nonzero coefficient of a large image, so both
types are numpy-backed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .transform import SparseCoeff


@dataclass(frozen=True, eq=False)
class LsbPlane:
    """One bit per coefficient in canonical order: bit = x mod 2."""

    bits: np.ndarray  # uint8, values 0/1

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=np.uint8).reshape(-1)
        if arr.size and arr.max() > 1:
            raise ValueError("plane bits must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    def __len__(self) -> int:
        return int(self.bits.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LsbPlane):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))


@dataclass(frozen=True, eq=False)
class OnesList:
    """Coefficient count plus the strictly increasing indices of 1 bits."""

    total: int
    indices: np.ndarray  # int64, strictly increasing, within [0, total)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.total:
                raise ValueError("ones index outside [0, total)")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("ones indices must be strictly increasing")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OnesList):
            return NotImplemented
        return self.total == other.total and bool(
            np.array_equal(self.indices, other.indices)
        )


def split_lsb(coeffs: list[SparseCoeff]) -> tuple[list[int], LsbPlane]:
    """Split each coefficient's x into (x >> 1, x & 1)."""
    x_high = [c.x >> 1 for c in coeffs]
    plane = LsbPlane(np.fromiter((c.x & 1 for c in coeffs), dtype=np.uint8,
                                 count=len(coeffs)))
    return x_high, plane


def encode_ones(plane: LsbPlane) -> OnesList:
    return OnesList(total=len(plane), indices=np.flatnonzero(plane.bits))


def regenerate(ones: OnesList) -> LsbPlane:
    """Rebuild the plane: all zeros of length ``total``, with 1s at ``indices``."""
    bits = np.zeros(ones.total, dtype=np.uint8)
    bits[ones.indices] = 1
    return LsbPlane(bits)


def join(x_high, plane: LsbPlane) -> list[int]:
    """Recombine: x = (x_high << 1) | bit."""
    high = np.asarray(x_high, dtype=np.int64).reshape(-1)
    if high.size != len(plane):
        raise ValueError(f"length mismatch: {high.size} vs {len(plane)}")
    if high.size and (high.min() < 0 or high.max() >= 4):
        raise ValueError("x_high values must lie in [0, 3]")
    return ((high << 1) | plane.bits).tolist()
