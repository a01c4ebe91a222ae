"""Gate-budget rate model and baseline rate estimators.

The budget counts the connections a transmitter must describe to rebuild
the state-preparation circuit:

* ``q_ones``   - one per set magnitude bit (the aux-controlled value NOTs);
* ``b_state``  - position connections: 7 per coefficient (4 Y + 3 X high)
  plus one X-LSB connection per odd-X coefficient, the ones-list being the
  only LSB information sent. A literal variant that multiplies the ones
  count per coefficient is kept behind ``ones_per_coefficient`` for comparison;
* ``b_sign``   - one sign per coefficient (or per negative coefficient
  behind ``sign_negative_only``);
* ``b_aux``    - aux connect + reset, two per coefficient;
* ``b_gpp``    - block addressing: grid-index bits for each block that
  holds at least one nonzero coefficient.

``gpp`` divides the total by the original pixel count.

The zero-discarded full-image baseline has no state-connection sharing:
every set magnitude bit pays the full global position pattern, which is
what makes its rate collapse against the block-wise approach.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .lsbswap import OnesList
from .transform import SparseCoeff

X_POSITION_BITS = 4
Y_POSITION_BITS = 4


@dataclass(frozen=True)
class GateBudget:
    q_ones: int
    b_state: int
    b_sign: int
    b_aux: int
    b_gpp: int
    pixels: int

    @property
    def b_total(self) -> int:
        return self.q_ones + self.b_state + self.b_sign + self.b_aux + self.b_gpp


@dataclass(frozen=True)
class RDPoint:
    """One rate-distortion sample for the CSV report."""

    method: str
    q: int
    gpp: float
    bpp: float
    psnr_db: float
    q_ones: int
    b_state: int
    b_sign: int
    b_aux: int
    b_gpp: int
    b_total: int
    tc_nz: int
    saturated: int


RD_CSV_HEADER = "method,Q,gpp,bpp,psnr_db,q_ones,b_state,b_sign,b_aux,b_gpp,b_total,tc_nz,saturated"


def popcount(value: int) -> int:
    return int(value).bit_count()


def count_q_ones(coeffs: list[SparseCoeff]) -> int:
    return sum(popcount(c.magnitude) for c in coeffs)


def count_b_state(
    coeffs: list[SparseCoeff],
    ones: OnesList,
    ones_per_coefficient: bool = False,
) -> int:
    tc = len(coeffs)
    n_ones = len(ones.indices)
    per_coeff = X_POSITION_BITS + Y_POSITION_BITS - 1
    if ones_per_coefficient:
        return tc * (per_coeff + n_ones)
    return tc * per_coeff + n_ones


def count_b_total(
    coeffs: list[SparseCoeff],
    ones: OnesList,
    grid_dims: tuple[int, int],
    pixels: int,
    ones_per_coefficient: bool = False,
    sign_negative_only: bool = False,
) -> GateBudget:
    """Full transmit budget for the block-wise method.

    ``grid_dims`` is the (columns, rows) block grid of the padded image;
    ``pixels`` is the original pixel count used by :func:`gpp`.
    """
    grid_w, grid_h = grid_dims
    tc = len(coeffs)
    if sign_negative_only:
        b_sign = sum(1 for c in coeffs if c.sign < 0)
    else:
        b_sign = tc
    nz_blocks = len({c.block_index for c in coeffs})
    addr_bits = math.ceil(math.log2(grid_w)) + math.ceil(math.log2(grid_h))
    return GateBudget(
        q_ones=count_q_ones(coeffs),
        b_state=count_b_state(coeffs, ones, ones_per_coefficient),
        b_sign=b_sign,
        b_aux=2 * tc,
        b_gpp=nz_blocks * addr_bits,
        pixels=pixels,
    )


def gpp(budget: GateBudget) -> float:
    if budget.pixels < 1:
        raise ValueError("pixel count must be >= 1")
    return budget.b_total / budget.pixels


def nzneqr_budget(
    coeffs: list[SparseCoeff], dims: tuple[int, int], pixels: int | None = None
) -> GateBudget:
    """Budget for the full-image zero-discarded baseline.

    Positions are global, ceil(log2(dim)) + 1 bits per axis, and every set
    magnitude bit carries the whole pattern; one sign and one aux
    connection per coefficient; no block addressing.
    """
    width, height = dims
    x_bits = (max(1, math.ceil(math.log2(width))) if width > 1 else 1) + 1
    y_bits = (max(1, math.ceil(math.log2(height))) if height > 1 else 1) + 1
    q_ones = count_q_ones(coeffs)
    tc = len(coeffs)
    return GateBudget(
        q_ones=q_ones,
        b_state=q_ones * (x_bits + y_bits),
        b_sign=tc,
        b_aux=tc,
        b_gpp=0,
        pixels=pixels if pixels is not None else width * height,
    )


_ZIGZAG = sorted(
    ((u, v) for u in range(8) for v in range(8)),
    key=lambda p: (p[0] + p[1], p[0] if (p[0] + p[1]) % 2 else p[1]),
)


def _size_category(value: int) -> int:
    return int(abs(value)).bit_length()


def _huffman_lengths(freqs: dict) -> dict:
    """Optimal prefix-code lengths; a one-symbol alphabet still costs a bit."""
    if not freqs:
        return {}
    if len(freqs) == 1:
        return {symbol: 1 for symbol in freqs}
    heap = [(freq, i, [symbol]) for i, (symbol, freq) in enumerate(sorted(freqs.items()))]
    heapq.heapify(heap)
    lengths = {symbol: 0 for symbol in freqs}
    counter = len(heap)
    while len(heap) > 1:
        fa, _, syms_a = heapq.heappop(heap)
        fb, _, syms_b = heapq.heappop(heap)
        for s in syms_a + syms_b:
            lengths[s] += 1
        heapq.heappush(heap, (fa + fb, counter, syms_a + syms_b))
        counter += 1
    return lengths


def jpeg_like_symbols(blocks: list[np.ndarray]) -> tuple[dict, dict, int]:
    """(DC size-category freqs, AC run/size freqs, amplitude bit count) for a
    zigzag run-length symbolization of raster-ordered quantized blocks.

    DC terms are difference-coded block to block and emit nothing when the
    difference is zero, so an all-zero image reduces to one end-of-block
    symbol per block.
    """
    dc_freqs: dict = {}
    ac_freqs: dict = {}
    size_bits = 0
    prev_dc = 0
    for block in blocks:
        arr = np.asarray(block)
        dc = int(arr[0, 0])
        diff = dc - prev_dc
        prev_dc = dc
        if diff != 0:
            cat = _size_category(diff)
            dc_freqs[cat] = dc_freqs.get(cat, 0) + 1
            size_bits += cat
        run = 0
        for u, v in _ZIGZAG[1:]:
            value = int(arr[u, v])
            if value == 0:
                run += 1
                continue
            while run > 15:
                ac_freqs[(15, 0)] = ac_freqs.get((15, 0), 0) + 1
                run -= 16
            cat = _size_category(value)
            ac_freqs[(run, cat)] = ac_freqs.get((run, cat), 0) + 1
            size_bits += cat
            run = 0
        if run > 0:
            ac_freqs[(0, 0)] = ac_freqs.get((0, 0), 0) + 1
    return dc_freqs, ac_freqs, size_bits


def jpeg_like_bits(blocks: list[np.ndarray]) -> int:
    """Deterministic bit estimate: per-image Huffman code lengths over the
    DC and AC symbol streams plus the raw amplitude bits."""
    dc_freqs, ac_freqs, size_bits = jpeg_like_symbols(blocks)
    total = size_bits
    for freqs in (dc_freqs, ac_freqs):
        lengths = _huffman_lengths(freqs)
        total += sum(freqs[s] * lengths[s] for s in freqs)
    return total


def _format_rate(value: float) -> str:
    return format(value, ".10g")


def rd_csv(points: list[RDPoint]) -> str:
    """Render RD points as CSV, rows sorted by (method, Q)."""
    lines = [RD_CSV_HEADER]
    for p in sorted(points, key=lambda p: (p.method, p.q)):
        lines.append(
            ",".join(
                [
                    p.method,
                    str(p.q),
                    _format_rate(p.gpp),
                    _format_rate(p.bpp),
                    _format_rate(p.psnr_db),
                    str(p.q_ones),
                    str(p.b_state),
                    str(p.b_sign),
                    str(p.b_aux),
                    str(p.b_gpp),
                    str(p.b_total),
                    str(p.tc_nz),
                    str(p.saturated),
                ]
            )
        )
    return "\n".join(lines) + "\n"
