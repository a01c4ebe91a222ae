"""Command-line entry point.

One binary, subcommand style. Outputs are machine-readable (key=value
lines, CSV) so downstream plotting is a pure consumer. Exit codes:
0 success, 1 usage, 2 format/corruption/I-O, 3 internal invariant or
verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import circuit as circuit_mod
from . import codec, costmodel, lsbswap, payload as payload_mod, simulator, transform
from .errors import FormatError, SimulationError
from .image import read_pgm, write_pgm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="palqa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="compress a PGM into a payload")
    enc.add_argument("input", help="input PGM (binary P5)")
    enc.add_argument("-q", type=int, required=True, help="quantization factor")
    enc.add_argument("-o", "--output", required=True, help="payload output path")
    enc.add_argument("--ones-per-coefficient", action="store_true",
                     help="use the literal per-coefficient ones term in the state budget")
    enc.add_argument("--sign-negative-only", action="store_true",
                     help="charge sign connections only for negative coefficients")
    enc.add_argument("--with-circuits", action="store_true",
                     help="also build per-block circuits and report gate counts")

    dec = sub.add_parser("decode", help="reconstruct a PGM from a payload")
    dec.add_argument("input", help="payload path")
    dec.add_argument("-o", "--output", required=True, help="PGM output path")

    sweep = sub.add_parser("rd-sweep", help="rate-distortion sweep to CSV")
    sweep.add_argument("input", help="input PGM")
    sweep.add_argument("-q", default="8,16,32,60,90,120",
                       help="comma-separated quantization factors")
    sweep.add_argument("--methods", default=",".join(codec.RD_METHODS),
                       help="comma-separated subset of palqa,nzneqr,jpeg_like")
    sweep.add_argument("--csv", help="CSV output path (default: stdout)")
    sweep.add_argument("--ones-per-coefficient", action="store_true")
    sweep.add_argument("--sign-negative-only", action="store_true")

    exp = sub.add_parser("export-circuit", help="write one block's circuit as text")
    exp.add_argument("input", help="input PGM")
    exp.add_argument("-q", type=int, required=True)
    exp.add_argument("--block", type=int, default=0, help="raster block index")
    exp.add_argument("-o", "--output", required=True, help="circuit text output path")
    exp.add_argument("--builder", choices=("palqa", "zscneqr"), default="palqa")

    ver = sub.add_parser("verify", help="simulate one block's circuits and check decoding")
    ver.add_argument("input", help="input PGM")
    ver.add_argument("-q", type=int, required=True)
    ver.add_argument("--block", type=int, default=0)
    ver.add_argument("--tamper", action="store_true",
                     help="inject one extra NOT as a negative control")
    return parser


def _load_image(path: str):
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def _format_rate(value: float) -> str:
    return format(value, "g")


def cmd_encode(args) -> int:
    img = _load_image(args.input)
    result = codec.encode(
        img,
        args.q,
        ones_per_coefficient=args.ones_per_coefficient,
        sign_negative_only=args.sign_negative_only,
        with_circuits=args.with_circuits,
    )
    with open(args.output, "wb") as fh:
        fh.write(result.payload)
    b = result.budget
    print(f"q_ones={b.q_ones}")
    print(f"b_state={b.b_state}")
    print(f"b_sign={b.b_sign}")
    print(f"b_aux={b.b_aux}")
    print(f"b_gpp={b.b_gpp}")
    print(f"b_total={b.b_total}")
    print(f"tc_nz={result.tc_nz}")
    print(f"ones={result.ones_count}")
    print(f"saturated={result.saturated}")
    print(f"gpp={_format_rate(result.gpp)}")
    print(f"bpp={_format_rate(payload_mod.bpp(result.payload, (img.width, img.height)))}")
    if result.circuit_summary is not None:
        for kind in sorted(result.circuit_summary):
            print(f"gates_{kind}={result.circuit_summary[kind]}")
    if result.saturated:
        print(
            f"warning: {result.saturated} coefficient magnitudes saturated at 255; "
            "reconstruction deviates from the pure quantization reference",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_decode(args) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    img = codec.decode(data)
    with open(args.output, "wb") as fh:
        fh.write(write_pgm(img))
    return EXIT_OK


def cmd_rd_sweep(args) -> int:
    img = _load_image(args.input)
    try:
        qs = [int(tok) for tok in args.q.split(",") if tok.strip()]
    except ValueError:
        print(f"palqa: error: bad -q list {args.q!r}", file=sys.stderr)
        return EXIT_USAGE
    methods = tuple(tok.strip() for tok in args.methods.split(",") if tok.strip())
    if not qs or any(q < 1 for q in qs):
        print("palqa: error: quantization factors must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if set(methods) - set(codec.RD_METHODS):
        print(f"palqa: error: unknown methods in {args.methods!r}", file=sys.stderr)
        return EXIT_USAGE
    points = codec.rd_sweep(
        img, qs, methods,
        ones_per_coefficient=args.ones_per_coefficient,
        sign_negative_only=args.sign_negative_only,
    )
    text = costmodel.rd_csv(points)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    saturated = max((p.saturated for p in points), default=0)
    if saturated:
        print(f"warning: {saturated} saturated magnitudes at the widest point",
              file=sys.stderr)
    return EXIT_OK


def _block_circuits(args):
    img = _load_image(args.input)
    blocks, _dims = codec.quantized_blocks(img, args.q)
    if not (0 <= args.block < len(blocks)):
        raise IndexError(f"block index {args.block} outside 0..{len(blocks) - 1}")
    coeffs, _ = transform.extract_sparse([blocks[args.block]])
    x_high, plane = lsbswap.split_lsb(coeffs)
    ones = lsbswap.encode_ones(plane)
    zsc = circuit_mod.build_zscneqr(coeffs)
    pal = circuit_mod.build_palqa(coeffs, x_high, ones)
    return blocks[args.block], coeffs, zsc, pal


def cmd_export_circuit(args) -> int:
    try:
        _block, coeffs, zsc, pal = _block_circuits(args)
    except IndexError as exc:
        print(f"palqa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    chosen = pal if args.builder == "palqa" else zsc
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(circuit_mod.export_text(chosen))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        qblock, coeffs, zsc, pal = _block_circuits(args)
    except IndexError as exc:
        print(f"palqa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.tamper:
        pal = circuit_mod.Circuit(
            pal.n_qubits,
            pal.gates + (circuit_mod.Gate("x", 0),),
            label=pal.label + "+tamper",
            layout=pal.layout,
        )
    signs = [c.sign for c in sorted(coeffs, key=lambda c: (c.y, c.x))]
    layout = circuit_mod.QubitLayout.block_default()
    ok = True
    blocks = {}
    for name, circ in (("zscneqr", zsc), ("palqa", pal)):
        try:
            entries = simulator.decode_state(simulator.simulate(circ), layout)
            print(f"amplitude-uniformity {name}: PASS ({len(entries)} entries)")
        except SimulationError as exc:
            print(f"amplitude-uniformity {name}: FAIL ({exc})")
            ok = False
            continue
        try:
            rebuilt = simulator.reconstruct_block(entries, layout, signs)
        except ValueError as exc:
            print(f"reconstruction {name}: FAIL ({exc})")
            ok = False
            continue
        blocks[name] = rebuilt
        if np.array_equal(rebuilt, qblock):
            print(f"reconstruction {name}: PASS")
        else:
            print(f"reconstruction {name}: FAIL (mismatch with quantized block)")
            ok = False
    if len(blocks) == 2:
        if np.array_equal(blocks["zscneqr"], blocks["palqa"]):
            print("decode-equivalence: PASS")
        else:
            print("decode-equivalence: FAIL")
            ok = False
    print(f"verify: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_INTERNAL


_COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "rd-sweep": cmd_rd_sweep,
    "export-circuit": cmd_export_circuit,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except FormatError as exc:
        print(f"palqa: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"palqa: i/o error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except SimulationError as exc:
        print(f"palqa: simulation error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"palqa: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
