"""Gate-level IR and state-preparation builders for the NEQR circuit family.

Qubit conventions (basis index bit k = qubit k everywhere):

* value register: qubits ``0 .. value_bits-1``, qubit 0 = magnitude LSB;
* auxiliary connection qubit (when present) directly above the values;
* X-position register above that, lowest qubit = X LSB (the swap/trash
  qubit in the block layout, qubit 9);
* Y-position register on top.

Only the meaningful low position bits per axis receive Hadamards; the spare
top qubit of each axis is carried in the register but held at |0>.

Anti-controls are first-class: a negative control fires on |0> and is
rendered ``!q<i>`` in the text format. A negative control pins a qubit that
is already |0>, so it does not count as a connection to that qubit; the
``gates_touching`` census below counts targets and positive controls only.

Block-layout builders attach each coefficient through the auxiliary qubit:
one multi-controlled NOT carrying the position pattern flips the aux, each
set magnitude bit costs a single aux-controlled NOT, and a reset returns
the aux to |0> for the next coefficient.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import FormatError
from .lsbswap import OnesList
from .transform import SparseCoeff

GATE_KINDS = ("h", "x", "ry", "reset")


@dataclass(frozen=True)
class Control:
    qubit: int
    positive: bool = True


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[Control, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        ctrl_qubits = [c.qubit for c in self.controls]
        if len(set(ctrl_qubits)) != len(ctrl_qubits):
            raise ValueError("control qubits must be distinct")
        if self.target in ctrl_qubits:
            raise ValueError(f"target q{self.target} also appears as a control")
        if self.kind == "reset" and self.controls:
            raise ValueError("reset takes no controls")
        if self.kind == "ry":
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("ry requires a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")


@dataclass(frozen=True)
class QubitLayout:
    """Register widths and index ranges for one circuit family."""

    value_bits: int
    has_aux: bool
    x_bits: int
    y_bits: int
    hadamard_x: int
    hadamard_y: int

    def __post_init__(self):
        if self.hadamard_x > self.x_bits or self.hadamard_y > self.y_bits:
            raise ValueError("cannot superpose more qubits than a register holds")

    @property
    def aux(self) -> int | None:
        return self.value_bits if self.has_aux else None

    @property
    def x_start(self) -> int:
        return self.value_bits + (1 if self.has_aux else 0)

    @property
    def y_start(self) -> int:
        return self.x_start + self.x_bits

    @property
    def total(self) -> int:
        return self.y_start + self.y_bits

    @classmethod
    def block_default(cls) -> "QubitLayout":
        """17 qubits: 8 value, 1 aux, 4+4 position, 3+3 superposed."""
        return cls(value_bits=8, has_aux=True, x_bits=4, y_bits=4,
                   hadamard_x=3, hadamard_y=3)

    @classmethod
    def for_image(cls, width: int, height: int) -> "QubitLayout":
        """Full-image layout: ceil(log2(dim)) + 1 qubits per axis."""
        if width < 1 or height < 1:
            raise ValueError("image dimensions must be positive")
        hx = max(1, math.ceil(math.log2(width))) if width > 1 else 1
        hy = max(1, math.ceil(math.log2(height))) if height > 1 else 1
        return cls(value_bits=8, has_aux=True, x_bits=hx + 1, y_bits=hy + 1,
                   hadamard_x=hx, hadamard_y=hy)

    @classmethod
    def for_square(cls, k: int) -> "QubitLayout":
        """Plain 2^k x 2^k pixel layout: 8 value qubits, no aux."""
        return cls(value_bits=8, has_aux=False, x_bits=k, y_bits=k,
                   hadamard_x=k, hadamard_y=k)

    @classmethod
    def frqi(cls) -> "QubitLayout":
        """One color qubit plus a 2x2 position register."""
        return cls(value_bits=1, has_aux=False, x_bits=1, y_bits=1,
                   hadamard_x=1, hadamard_y=1)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    label: str = field(default="", compare=False)
    layout: QubitLayout | None = field(default=None, compare=False)

    def __post_init__(self):
        for g in self.gates:
            qubits = [g.target] + [c.qubit for c in g.controls]
            if any(q < 0 or q >= self.n_qubits for q in qubits):
                raise ValueError(f"gate {g} uses qubits outside 0..{self.n_qubits - 1}")

    def gate_counts(self) -> dict[str, int]:
        """Gate tally keyed by the text-format mnemonic."""
        counts: dict[str, int] = {}
        for g in self.gates:
            m = _mnemonic(g)
            counts[m] = counts.get(m, 0) + 1
        return counts


def gates_touching(circuit: Circuit, qubit: int) -> int:
    """Number of gates with a connection to ``qubit``: a target or a
    positive control. Anti-controls and the qubit's own Hadamard in the
    initial superposition layer are not connections."""
    count = 0
    for g in circuit.gates:
        if g.kind == "h" and g.target == qubit:
            continue
        if g.target == qubit or any(c.qubit == qubit and c.positive for c in g.controls):
            count += 1
    return count


def _pattern(value: int, start: int, width: int) -> list[Control]:
    return [Control(start + b, bool((value >> b) & 1)) for b in range(width)]


def _hadamard_layer(layout: QubitLayout) -> list[Gate]:
    gates = [Gate("h", layout.x_start + i) for i in range(layout.hadamard_x)]
    gates += [Gate("h", layout.y_start + i) for i in range(layout.hadamard_y)]
    return gates


def _sorted_controls(controls: list[Control]) -> tuple[Control, ...]:
    return tuple(sorted(controls, key=lambda c: c.qubit))


def build_frqi(angles: list[float]) -> Circuit:
    """2x2 rotation-encoded image: Hadamards on both position qubits, then
    one doubly-controlled RY(2*theta_p) on the color qubit per position."""
    if len(angles) != 4:
        raise ValueError(f"expected 4 angles for a 2x2 image, got {len(angles)}")
    if any(a < 0 or a > math.pi / 2 for a in angles):
        raise ValueError("angles must lie in [0, pi/2]")
    layout = QubitLayout.frqi()
    gates = _hadamard_layer(layout)
    for p, theta in enumerate(angles):
        controls = _sorted_controls(
            _pattern(p & 1, layout.x_start, 1) + _pattern(p >> 1, layout.y_start, 1)
        )
        gates.append(Gate("ry", 0, controls, angle=2.0 * theta))
    return Circuit(layout.total, tuple(gates), label="frqi", layout=layout)


def build_neqr(pixels) -> Circuit:
    """Bit-plane encoding of a square 2^k x 2^k 8-bit image (k <= 3): one
    multi-controlled NOT per set value bit, controls spelling the position."""
    import numpy as np

    arr = np.asarray(pixels)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"image must be square, got shape {arr.shape}")
    side = arr.shape[0]
    k = side.bit_length() - 1
    if side != 1 << k or k > 3:
        raise ValueError(f"side must be a power of two <= 8, got {side}")
    layout = QubitLayout.for_square(k)
    gates = _hadamard_layer(layout)
    for y in range(side):
        for x in range(side):
            value = int(arr[y, x])
            controls = _sorted_controls(
                _pattern(x, layout.x_start, k) + _pattern(y, layout.y_start, k)
            )
            for b in range(8):
                if (value >> b) & 1:
                    gates.append(Gate("x", b, controls))
    return Circuit(layout.total, tuple(gates), label="neqr", layout=layout)


def build_nzneqr(coeffs: list[SparseCoeff], dims: tuple[int, int]) -> Circuit:
    """Zero-discarded encoding over full-image positions. Per coefficient:
    an aux connection gate, then one position-controlled NOT per set
    magnitude bit. No reset; positions are global (block offset + local)."""
    width, height = dims
    if width % 8 or height % 8:
        raise ValueError(f"image dimensions {width}x{height} must be block-aligned")
    layout = QubitLayout.for_image(width, height)
    grid_w = width // 8
    gates = _hadamard_layer(layout)
    for c in coeffs:
        gx = (c.block_index % grid_w) * 8 + c.x
        gy = (c.block_index // grid_w) * 8 + c.y
        if gx >= width or gy >= height:
            raise ValueError(f"position ({gx}, {gy}) outside {width}x{height}")
        controls = _sorted_controls(
            _pattern(gx, layout.x_start, layout.x_bits)
            + _pattern(gy, layout.y_start, layout.y_bits)
        )
        gates.append(Gate("x", layout.aux, controls))
        for b in range(8):
            if (c.magnitude >> b) & 1:
                gates.append(Gate("x", b, controls))
    return Circuit(layout.total, tuple(gates), label="nzneqr", layout=layout)


def _require_single_block(coeffs: list[SparseCoeff]):
    if len({c.block_index for c in coeffs}) > 1:
        raise ValueError("block builders take coefficients of a single block")


def _block_connection(coeffs, lsb_bits, layout, label):
    """Shared emission for the block-layout state-connection builders:
    connect aux on the position pattern, write value bits through the aux,
    reset the aux."""
    gates = _hadamard_layer(layout)
    for c, lsb in zip(coeffs, lsb_bits):
        controls = _sorted_controls(
            [Control(layout.x_start, bool(lsb))]
            + _pattern(c.x >> 1, layout.x_start + 1, layout.x_bits - 1)
            + _pattern(c.y, layout.y_start, layout.y_bits)
        )
        gates.append(Gate("x", layout.aux, controls))
        aux_ctrl = (Control(layout.aux, True),)
        for b in range(8):
            if (c.magnitude >> b) & 1:
                gates.append(Gate("x", b, aux_ctrl))
        gates.append(Gate("reset", layout.aux))
    return Circuit(layout.total, tuple(gates), label=label, layout=layout)


def build_zscneqr(coeffs: list[SparseCoeff], side: int = 8) -> Circuit:
    """Single-block state-connection circuit over quantized coefficients."""
    if side != 8:
        raise ValueError("only 8x8 blocks are supported")
    _require_single_block(coeffs)
    layout = QubitLayout.block_default()
    return _block_connection(coeffs, [c.x & 1 for c in coeffs], layout, "zscneqr")


def build_palqa(
    coeffs: list[SparseCoeff],
    x_high: list[int],
    ones: OnesList,
    side: int = 8,
) -> Circuit:
    """Single-block circuit rebuilt from the transmitted form: X high bits
    plus the regenerated LSB ones-list. The X-LSB qubit gains a positive
    connection only for coefficients listed in ``ones`` (odd X); even-X
    coefficients leave it pinned at |0> by an anti-control.
    """
    if side != 8:
        raise ValueError("only 8x8 blocks are supported")
    if len(x_high) != len(coeffs) or ones.total != len(coeffs):
        raise ValueError(
            f"inconsistent lengths: {len(coeffs)} coefficients, "
            f"{len(x_high)} x_high, ones total {ones.total}"
        )
    _require_single_block(coeffs)
    one_set = set(ones.indices)
    for i, c in enumerate(coeffs):
        if c.x >> 1 != x_high[i] or (c.x & 1) != (1 if i in one_set else 0):
            raise ValueError(f"coefficient {i} inconsistent with x_high/ones inputs")
    layout = QubitLayout.block_default()
    lsb_bits = [1 if i in one_set else 0 for i in range(len(coeffs))]
    return _block_connection(coeffs, lsb_bits, layout, "palqa")


def _mnemonic(gate: Gate) -> str:
    if not gate.controls:
        return gate.kind
    if gate.kind == "x":
        return "cx" if len(gate.controls) == 1 else "mcx"
    return "c" + gate.kind


def _format_angle(angle: float) -> str:
    return format(angle, ".12g")


def export_text(circuit: Circuit) -> str:
    """Deterministic line-oriented form: ``qubits <N>`` then one gate per
    line, e.g. ``h q9``, ``ry(1.5708) q0``, ``mcx [q9,!q10] q8``."""
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        name = _mnemonic(g)
        if g.kind == "ry":
            name = f"{name[:-2]}ry({_format_angle(g.angle)})"
        parts = [name]
        if g.controls:
            ctrls = ",".join(
                ("" if c.positive else "!") + f"q{c.qubit}" for c in g.controls
            )
            parts.append(f"[{ctrls}]")
        parts.append(f"q{g.target}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


_GATE_RE = re.compile(
    r"^(?P<name>c?h|c?x|mcx|c?ry|reset)"
    r"(?:\((?P<angle>[^)]+)\))?"
    r"(?:\s+\[(?P<ctrls>[^\]]+)\])?"
    r"\s+q(?P<target>\d+)$"
)


def parse_text(text: str) -> Circuit:
    """Inverse of :func:`export_text`. Lines starting with ``#`` and blank
    lines are ignored. Raises :class:`FormatError` on malformed input."""
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty circuit text")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "qubits":
        raise FormatError(f"expected 'qubits <N>' header, got {lines[0]!r}")
    try:
        n_qubits = int(head[1])
    except ValueError as exc:
        raise FormatError(f"bad qubit count {head[1]!r}") from exc
    if n_qubits < 1:
        raise FormatError(f"qubit count must be positive, got {n_qubits}")

    gates = []
    for line in lines[1:]:
        m = _GATE_RE.match(line)
        if not m:
            raise FormatError(f"unparseable gate line {line!r}")
        name = m.group("name")
        if name == "mcx":
            kind = "x"
        elif name.startswith("c"):
            kind = name[1:]
        else:
            kind = name
        controls = []
        if m.group("ctrls"):
            for token in m.group("ctrls").split(","):
                token = token.strip()
                positive = not token.startswith("!")
                token = token.lstrip("!")
                if not token.startswith("q"):
                    raise FormatError(f"bad control token {token!r} in {line!r}")
                try:
                    controls.append(Control(int(token[1:]), positive))
                except ValueError as exc:
                    raise FormatError(f"bad control token {token!r}") from exc
        if name in ("cx", "ch", "cry", "mcx") and not controls:
            raise FormatError(f"controlled gate without controls: {line!r}")
        angle = None
        if m.group("angle") is not None:
            if kind != "ry":
                raise FormatError(f"angle on non-rotation gate: {line!r}")
            try:
                angle = float(m.group("angle"))
            except ValueError as exc:
                raise FormatError(f"bad angle in {line!r}") from exc
        elif kind == "ry":
            raise FormatError(f"rotation gate without angle: {line!r}")
        try:
            gates.append(Gate(kind, int(m.group("target")), tuple(controls), angle))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    try:
        return Circuit(n_qubits, tuple(gates))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
