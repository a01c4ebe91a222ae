"""Block-DCT quantum image compression with NEQR-family circuit synthesis,
LSB position-qubit swap coding, a gate-budget rate model, and statevector
verification."""

from .circuit import (
    Circuit,
    Control,
    Gate,
    QubitLayout,
    build_frqi,
    build_neqr,
    build_nzneqr,
    build_palqa,
    build_zscneqr,
    export_text,
    gates_touching,
    parse_text,
)
from .codec import EncodeResult, classical_reference, decode, encode, rd_sweep
from .costmodel import GateBudget, RDPoint, gpp, jpeg_like_bits, nzneqr_budget, rd_csv
from .errors import FormatError, SimulationError
from .image import GrayImage, PixelBlock, pad_to_blocks, partition, merge, psnr, read_pgm, write_pgm
from .lsbswap import LsbPlane, OnesList, encode_ones, join, regenerate, split_lsb
from .payload import bpp, deserialize, serialize
from .simulator import DecodedEntry, StateVector, decode_state, dump_state, reconstruct_block, simulate
from .transform import SparseCoeff, dct2, dequantize, extract_sparse, idct2, quantize

__version__ = "0.1.0"

__all__ = [
    "Circuit", "Control", "Gate", "QubitLayout",
    "build_frqi", "build_neqr", "build_nzneqr", "build_palqa", "build_zscneqr",
    "export_text", "parse_text", "gates_touching",
    "EncodeResult", "classical_reference", "decode", "encode", "rd_sweep",
    "GateBudget", "RDPoint", "gpp", "jpeg_like_bits", "nzneqr_budget", "rd_csv",
    "FormatError", "SimulationError",
    "GrayImage", "PixelBlock", "pad_to_blocks", "partition", "merge", "psnr",
    "read_pgm", "write_pgm",
    "LsbPlane", "OnesList", "encode_ones", "join", "regenerate", "split_lsb",
    "bpp", "deserialize", "serialize",
    "DecodedEntry", "StateVector", "decode_state", "dump_state",
    "reconstruct_block", "simulate",
    "SparseCoeff", "dct2", "dequantize", "extract_sparse", "idct2", "quantize",
]
