"""End-to-end encode/decode orchestration and rate-distortion sweeps.

Encode: pad -> partition -> DCT -> quantize -> sparse extraction -> X-LSB
split -> ones-list -> payload, with the transmit budget computed alongside.

Decode consumes the serialized payload only; the circuit builders and the
simulator form a separate verification path, not the production path. The
payload decoder regenerates the LSB plane and rejoins full X positions, so
the "adder" stage here is a sparse scatter into zeroed coefficient blocks
followed by dequantization, inverse DCT, merge, and crop. The quantum
stages add no distortion: decode(encode(img, Q)) is pixel-identical to the
classical pad/DCT/quantize/dequantize/IDCT/merge/crop reference whenever no
magnitude saturated (guaranteed for Q >= 8 with 8-bit input).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import circuit as circuit_mod
from . import costmodel, lsbswap, payload as payload_mod, transform
from .costmodel import GateBudget, RDPoint
from .image import GrayImage, PixelBlock, crop, merge, pad_to_blocks, partition, psnr

RD_METHODS = ("palqa", "nzneqr", "jpeg_like")


@dataclass(frozen=True)
class EncodeResult:
    payload: bytes
    budget: GateBudget
    tc_nz: int
    ones_count: int
    saturated: int
    circuit_summary: dict[str, int] | None = None

    @property
    def gpp(self) -> float:
        return costmodel.gpp(self.budget)


def quantized_blocks(img: GrayImage, q: int) -> tuple[list[np.ndarray], tuple[int, int]]:
    """Quantized coefficient blocks of the padded image, raster order.

    Returns (blocks, padded (width, height)).
    """
    padded = pad_to_blocks(img)
    blocks = [
        transform.quantize(transform.dct2(b.samples), q) for b in partition(padded)
    ]
    return blocks, (padded.width, padded.height)


def _per_block(coeffs: list[transform.SparseCoeff]) -> dict[int, list[transform.SparseCoeff]]:
    groups: dict[int, list[transform.SparseCoeff]] = {}
    for c in coeffs:
        groups.setdefault(c.block_index, []).append(c)
    return groups


def encode(
    img: GrayImage,
    q: int,
    ones_per_coefficient: bool = False,
    sign_negative_only: bool = False,
    with_circuits: bool = False,
) -> EncodeResult:
    if q < 1:
        raise ValueError(f"quantization factor must be >= 1, got {q}")
    blocks, (pw, ph) = quantized_blocks(img, q)
    coeffs, saturated = transform.extract_sparse(blocks)
    x_high, plane = lsbswap.split_lsb(coeffs)
    ones = lsbswap.encode_ones(plane)
    data = payload_mod.serialize(coeffs, x_high, ones, (img.width, img.height), q)
    budget = costmodel.count_b_total(
        coeffs,
        ones,
        grid_dims=(pw // 8, ph // 8),
        pixels=img.width * img.height,
        ones_per_coefficient=ones_per_coefficient,
        sign_negative_only=sign_negative_only,
    )
    summary = None
    if with_circuits:
        summary = {}
        n_blocks = (pw // 8) * (ph // 8)
        groups = _per_block(coeffs)
        for index in range(n_blocks):
            group = groups.get(index, [])
            xh, pl = lsbswap.split_lsb(group)
            c = circuit_mod.build_palqa(group, xh, lsbswap.encode_ones(pl))
            for kind, count in c.gate_counts().items():
                summary[kind] = summary.get(kind, 0) + count
    return EncodeResult(
        payload=data,
        budget=budget,
        tc_nz=len(coeffs),
        ones_count=len(ones.indices),
        saturated=saturated,
        circuit_summary=summary,
    )


def decode(data: bytes) -> GrayImage:
    coeffs, _x_high, _ones, (width, height), q = payload_mod.deserialize(data)
    pw = (width + 7) // 8 * 8
    ph = (height + 7) // 8 * 8
    grid_w = pw // 8
    quant = transform.scatter_sparse(coeffs, grid_w * (ph // 8))
    blocks = []
    for index, qblock in enumerate(quant):
        samples = transform.idct2(transform.dequantize(qblock, q))
        blocks.append(PixelBlock(samples, (index // grid_w, index % grid_w)))
    return crop(merge(blocks, (pw, ph)), width, height)


def classical_reference(img: GrayImage, q: int) -> GrayImage:
    """The plain lossy pipeline with no circuit, payload, or LSB stages."""
    padded = pad_to_blocks(img)
    grid_w = padded.width // 8
    blocks = []
    for index, block in enumerate(partition(padded)):
        coeffs = transform.dct2(block.samples)
        restored = transform.dequantize(transform.quantize(coeffs, q), q)
        blocks.append(
            PixelBlock(transform.idct2(restored), (index // grid_w, index % grid_w))
        )
    merged = merge(blocks, (padded.width, padded.height))
    return crop(merged, img.width, img.height)


def rd_sweep(
    img: GrayImage,
    qs: list[int],
    methods: tuple[str, ...] = RD_METHODS,
    ones_per_coefficient: bool = False,
    sign_negative_only: bool = False,
) -> list[RDPoint]:
    """One RD point per (method, Q).

    The block-wise method and the full-image baseline share the exact same
    lossy stage, so their PSNR columns are identical floats per Q. The
    entropy-coded baseline reports its bit count on both rate axes (the
    rate model equates transmitted connections with bits); the full-image
    baseline likewise mirrors its gate rate into the bpp column, having no
    serialized stream of its own.
    """
    if not qs:
        raise ValueError("need at least one quantization factor")
    unknown = set(methods) - set(RD_METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {sorted(unknown)}")
    points = []
    pixels = img.width * img.height
    for q in qs:
        result = encode(
            img, q, ones_per_coefficient=ones_per_coefficient, sign_negative_only=sign_negative_only
        )
        reconstructed = decode(result.payload)
        distortion = psnr(img, reconstructed)
        blocks, (pw, ph) = quantized_blocks(img, q)
        coeffs, _ = transform.extract_sparse(blocks)
        if "palqa" in methods:
            b = result.budget
            points.append(
                RDPoint(
                    method="palqa",
                    q=q,
                    gpp=costmodel.gpp(b),
                    bpp=payload_mod.bpp(result.payload, (img.width, img.height)),
                    psnr_db=distortion,
                    q_ones=b.q_ones,
                    b_state=b.b_state,
                    b_sign=b.b_sign,
                    b_aux=b.b_aux,
                    b_gpp=b.b_gpp,
                    b_total=b.b_total,
                    tc_nz=result.tc_nz,
                    saturated=result.saturated,
                )
            )
        if "nzneqr" in methods:
            b = costmodel.nzneqr_budget(coeffs, (pw, ph), pixels=pixels)
            rate = costmodel.gpp(b)
            points.append(
                RDPoint(
                    method="nzneqr",
                    q=q,
                    gpp=rate,
                    bpp=rate,
                    psnr_db=distortion,
                    q_ones=b.q_ones,
                    b_state=b.b_state,
                    b_sign=b.b_sign,
                    b_aux=b.b_aux,
                    b_gpp=b.b_gpp,
                    b_total=b.b_total,
                    tc_nz=result.tc_nz,
                    saturated=result.saturated,
                )
            )
        if "jpeg_like" in methods:
            bits = costmodel.jpeg_like_bits(blocks)
            rate = bits / pixels
            points.append(
                RDPoint(
                    method="jpeg_like",
                    q=q,
                    gpp=rate,
                    bpp=rate,
                    psnr_db=distortion,
                    q_ones=0,
                    b_state=0,
                    b_sign=0,
                    b_aux=0,
                    b_gpp=0,
                    b_total=0,
                    tc_nz=result.tc_nz,
                    saturated=0,
                )
            )
    points.sort(key=lambda p: (p.method, p.q))
    return points
