"""8x8 orthonormal 2-D DCT-II with level shift, flat scalar quantization,
and sparse nonzero-coefficient extraction.

Conventions (JPEG-style): samples are level-shifted by -128 before the
forward transform; the basis is orthonormal, so the DC of a constant block
``c`` is ``8*(c-128)`` and Parseval holds exactly. Quantization divides by a
single integer factor and rounds half away from zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BLOCK_SIDE = 8
LEVEL_SHIFT = 128
MAX_MAGNITUDE = 255  # eight value qubits


def _dct_matrix() -> np.ndarray:
    # C[u, x] = alpha(u) * cos((2x+1) u pi / 16), alpha(0)=sqrt(1/8), else 1/2.
    u = np.arange(BLOCK_SIDE).reshape(-1, 1)
    x = np.arange(BLOCK_SIDE).reshape(1, -1)
    mat = np.cos((2 * x + 1) * u * np.pi / (2 * BLOCK_SIDE))
    mat *= np.sqrt(2.0 / BLOCK_SIDE)
    mat[0, :] /= np.sqrt(2.0)
    return mat


_DCT = _dct_matrix()


def dct2(samples: np.ndarray) -> np.ndarray:
    """Forward 2-D DCT-II of an 8x8 sample block (level shift applied here).

    Returns an (8, 8) float array indexed [u, v] = (row frequency, column
    frequency).
    """
    block = np.asarray(samples, dtype=np.float64)
    if block.shape != (BLOCK_SIDE, BLOCK_SIDE):
        raise ValueError(f"expected 8x8 block, got {block.shape}")
    return _DCT @ (block - LEVEL_SHIFT) @ _DCT.T


def idct2(coeffs: np.ndarray) -> np.ndarray:
    """Inverse transform, +128 level shift, round to nearest, clamp to [0, 255].

    Returns an (8, 8) uint8 block.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    if c.shape != (BLOCK_SIDE, BLOCK_SIDE):
        raise ValueError(f"expected 8x8 coefficients, got {c.shape}")
    samples = _DCT.T @ c @ _DCT + LEVEL_SHIFT
    return np.clip(np.rint(samples), 0, 255).astype(np.uint8)


def quantize(coeffs: np.ndarray, q: int) -> np.ndarray:
    """Elementwise round-half-away-from-zero(c / q) as an int array."""
    if q < 1:
        raise ValueError(f"quantization factor must be >= 1, got {q}")
    c = np.asarray(coeffs, dtype=np.float64)
    return (np.sign(c) * np.floor(np.abs(c) / q + 0.5)).astype(np.int32)


def dequantize(quant: np.ndarray, q: int) -> np.ndarray:
    """Elementwise q * quant as floats."""
    return np.asarray(quant, dtype=np.float64) * q


@dataclass(frozen=True)
class SparseCoeff:
    """One nonzero quantized coefficient: block raster index, within-block
    (x, y), sign in {+1, -1}, and magnitude in [1, 255]."""

    block_index: int
    x: int
    y: int
    sign: int
    magnitude: int

    def __post_init__(self):
        if not (0 <= self.x < BLOCK_SIDE and 0 <= self.y < BLOCK_SIDE):
            raise ValueError(f"position ({self.x}, {self.y}) outside 8x8 block")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +/-1, got {self.sign}")
        if not (1 <= self.magnitude <= MAX_MAGNITUDE):
            raise ValueError(f"magnitude {self.magnitude} outside [1, 255]")

    @property
    def value(self) -> int:
        return self.sign * self.magnitude


def extract_sparse(blocks: list[np.ndarray]) -> tuple[list[SparseCoeff], int]:
    """Collect all nonzero entries of raster-ordered quantized blocks.

    Output is in canonical order: block index ascending, then y, then x.
    Magnitudes are capped at 255; the second return value counts how many
    entries were saturated by that cap (a diagnostic, not an error).
    """
    coeffs = []
    saturated = 0
    for index, block in enumerate(blocks):
        arr = np.asarray(block)
        ys, xs = np.nonzero(arr)  # row-major: y ascending, then x
        for y, x in zip(ys.tolist(), xs.tolist()):
            value = int(arr[y, x])
            magnitude = abs(value)
            if magnitude > MAX_MAGNITUDE:
                magnitude = MAX_MAGNITUDE
                saturated += 1
            coeffs.append(
                SparseCoeff(
                    block_index=index,
                    x=x,
                    y=y,
                    sign=1 if value > 0 else -1,
                    magnitude=magnitude,
                )
            )
    return coeffs, saturated


def scatter_sparse(coeffs: list[SparseCoeff], n_blocks: int) -> list[np.ndarray]:
    """Inverse of :func:`extract_sparse` (exact when nothing saturated)."""
    blocks = [np.zeros((BLOCK_SIDE, BLOCK_SIDE), dtype=np.int32) for _ in range(n_blocks)]
    for c in coeffs:
        if c.block_index >= n_blocks:
            raise ValueError(f"block index {c.block_index} >= block count {n_blocks}")
        blocks[c.block_index][c.y, c.x] = c.value
    return blocks
