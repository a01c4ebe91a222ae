"""Deterministic synthetic test images: gradients, checkerboards, and a
band-limited natural-style texture. Used by the test corpus and handy for
CLI experiments when no PGM is at hand."""

from __future__ import annotations

import numpy as np

from .image import GrayImage


def gradient(width: int = 64, height: int = 64) -> GrayImage:
    """Smooth diagonal ramp."""
    x = np.arange(width).reshape(1, -1)
    y = np.arange(height).reshape(-1, 1)
    ramp = (x / max(width - 1, 1) + y / max(height - 1, 1)) / 2.0
    return GrayImage(np.round(ramp * 255).astype(np.uint8))


def checkerboard(width: int = 64, height: int = 64, tile: int = 8) -> GrayImage:
    x = np.arange(width).reshape(1, -1) // tile
    y = np.arange(height).reshape(-1, 1) // tile
    return GrayImage(np.where((x + y) % 2 == 0, 64, 192).astype(np.uint8))


def natural(side: int = 256, seed: int = 7) -> GrayImage:
    """Natural-style texture: a few incommensurate sinusoids, a gentle
    illumination ramp, and low-amplitude smoothed noise."""
    rng = np.random.default_rng(seed)
    x = np.arange(side).reshape(1, -1).astype(np.float64)
    y = np.arange(side).reshape(-1, 1).astype(np.float64)
    field = (
        128.0
        + 48.0 * np.sin(2 * np.pi * x / 37.0 + 1.3) * np.cos(2 * np.pi * y / 53.0)
        + 26.0 * np.sin(2 * np.pi * (x + y) / 91.0)
        + 18.0 * np.cos(2 * np.pi * (2 * x - y) / 29.0 + 0.4)
        + 20.0 * (x + y) / (2 * side)
    )
    noise = rng.normal(0.0, 6.0, size=(side, side))
    # 3x3 box smoothing keeps the noise from looking synthetic-flat.
    kernel = np.ones((3, 3)) / 9.0
    padded = np.pad(noise, 1, mode="edge")
    smooth = sum(
        padded[i : i + side, j : j + side] * kernel[i, j]
        for i in range(3)
        for j in range(3)
    )
    return GrayImage(np.clip(np.round(field + smooth), 0, 255).astype(np.uint8))


def textured_gradient(width: int = 64, height: int = 64) -> GrayImage:
    """Diagonal ramp with a sinusoidal texture riding on it."""
    base = gradient(width, height).pixels.astype(np.float64)
    x = np.arange(width).reshape(1, -1)
    y = np.arange(height).reshape(-1, 1)
    texture = 20.0 * np.sin(x / 3.1) * np.cos(y / 4.7)
    return GrayImage(np.clip(np.round(base + texture), 0, 255).astype(np.uint8))


def rd_corpus() -> list[tuple[str, GrayImage]]:
    """The bundled rate-distortion corpus: textured, natural-style content
    whose RD curves fall monotonically across the standard factor sweep."""
    return [
        ("natural64", natural(64)),
        ("natural128", natural(128)),
        ("natural256", natural(256)),
        ("checker5", checkerboard(64, 64, tile=5)),
        ("textured_gradient", textured_gradient(64, 64)),
    ]


def random_image(width: int, height: int, rng: np.random.Generator) -> GrayImage:
    """Uniform random pixels; harsh content for round-trip style tests."""
    return GrayImage(rng.integers(0, 256, size=(height, width), dtype=np.uint8))
