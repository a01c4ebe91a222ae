"""Dense statevector simulator for the circuit IR, plus state decoding and
the measurement-free block-reconstruction oracle.

Basis convention: bit k of a basis index is qubit k (qubit 0 is the least
significant index bit). Controls gate the 2x2 action onto the subspace
matching the control pattern; a negative control matches |0>.

Reset semantics: RESET relabels the target bit to 0. It is legal only when
that relabeling collides with nothing, i.e. for every other-qubit
configuration at most one of the target's two branches carries amplitude.
The block builders satisfy this by construction (the aux qubit is |1> only
on the branch being written, whose target slot is empty), so simulation
stays deterministic and norm-preserving; anything else raises.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, Control, Gate, QubitLayout
from .errors import SimulationError

DEFAULT_QUBIT_CAP = 24
DECODE_THRESHOLD = 1e-9
UNIFORMITY_TOL = 1e-10
RESET_TOL = 1e-10


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray  # complex128, length 2**n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DecodedEntry:
    """One nonzero basis state, sliced into (value, x, y) per the layout."""

    value: int
    x: int
    y: int
    amplitude: complex


def _qubit_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("PALQA_MAX_QUBITS")
    return int(env) if env else DEFAULT_QUBIT_CAP


@lru_cache(maxsize=4096)
def _pair_indices(
    n: int, target: int, controls: tuple[Control, ...]
) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the (target=0, target=1) subspace pair selected by the
    controls. Cost is 2**(free qubits), so heavily controlled gates touch
    only a sliver of the state. Cached: value-bit gates and connect gates
    repeat their signatures across a circuit."""
    base = 0
    fixed = {target}
    for c in controls:
        fixed.add(c.qubit)
        if c.positive:
            base |= 1 << c.qubit
    free = [q for q in range(n) if q not in fixed]
    k = np.arange(1 << len(free), dtype=np.int64)
    idx = np.full(k.shape, base, dtype=np.int64)
    for j, q in enumerate(free):
        idx |= ((k >> j) & 1) << q
    return idx, idx | (1 << target)


_SQRT1_2 = 1.0 / math.sqrt(2.0)


@lru_cache(maxsize=1024)
def _control_subspace(n: int, controls: tuple[Control, ...]) -> np.ndarray:
    """All basis indices matching the control pattern (targets free)."""
    base = 0
    fixed = set()
    for c in controls:
        fixed.add(c.qubit)
        if c.positive:
            base |= 1 << c.qubit
    free = [q for q in range(n) if q not in fixed]
    k = np.arange(1 << len(free), dtype=np.int64)
    idx = np.full(k.shape, base, dtype=np.int64)
    for j, q in enumerate(free):
        idx |= ((k >> j) & 1) << q
    return idx


def _apply_x_run(state: np.ndarray, n: int, controls: tuple[Control, ...], mask: int) -> None:
    """A run of NOTs sharing one control signature is an index XOR on the
    matching subspace."""
    if mask == 0:
        return
    idx = _control_subspace(n, controls)
    state[idx] = state[idx ^ mask]


def _apply(state: np.ndarray, n: int, gate: Gate) -> None:
    if gate.kind == "reset":
        _apply_reset(state, n, gate.target)
        return
    if not gate.controls:
        _apply_single(state, n, gate)
        return
    if len(gate.controls) == 1:
        _apply_one_control(state, n, gate)
        return
    i0, i1 = _pair_indices(n, gate.target, gate.controls)
    a0 = state[i0]
    a1 = state[i1]
    if gate.kind == "x":
        state[i0] = a1
        state[i1] = a0
    elif gate.kind == "h":
        state[i0] = (a0 + a1) * _SQRT1_2
        state[i1] = (a0 - a1) * _SQRT1_2
    elif gate.kind == "ry":
        half = gate.angle / 2.0
        c, s = math.cos(half), math.sin(half)
        state[i0] = c * a0 - s * a1
        state[i1] = s * a0 + c * a1
    else:  # pragma: no cover - Gate validation forbids other kinds
        raise SimulationError(f"unsupported gate kind {gate.kind!r}")


def _target_view(state: np.ndarray, n: int, target: int) -> np.ndarray:
    # Axis 1 of the view is the target bit; axes 0/2 are the higher/lower bits.
    return state.reshape(1 << (n - target - 1), 2, 1 << target)


def _apply_single(state: np.ndarray, n: int, gate: Gate) -> None:
    view = _target_view(state, n, gate.target)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    if gate.kind == "x":
        view[:, 0, :] = a1
        view[:, 1, :] = a0
    elif gate.kind == "h":
        view[:, 0, :] = (a0 + a1) * _SQRT1_2
        view[:, 1, :] = (a0 - a1) * _SQRT1_2
    else:  # ry
        half = gate.angle / 2.0
        c, s = math.cos(half), math.sin(half)
        view[:, 0, :] = c * a0 - s * a1
        view[:, 1, :] = s * a0 + c * a1


def _apply_one_control(state: np.ndarray, n: int, gate: Gate) -> None:
    ctrl = gate.controls[0]
    cv = 1 if ctrl.positive else 0
    hi, lo = max(ctrl.qubit, gate.target), min(ctrl.qubit, gate.target)
    view = state.reshape(
        1 << (n - hi - 1), 2, 1 << (hi - lo - 1), 2, 1 << lo
    )
    if ctrl.qubit == hi:
        a0 = view[:, cv, :, 0, :]
        a1 = view[:, cv, :, 1, :]
    else:
        a0 = view[:, 0, :, cv, :]
        a1 = view[:, 1, :, cv, :]
    t0 = a0.copy()
    if gate.kind == "x":
        a0[:] = a1
        a1[:] = t0
    elif gate.kind == "h":
        a0[:] = (t0 + a1) * _SQRT1_2
        a1[:] = (t0 - a1) * _SQRT1_2
    else:  # ry
        half = gate.angle / 2.0
        c, s = math.cos(half), math.sin(half)
        a0[:] = c * t0 - s * a1
        a1[:] = s * t0 + c * a1


def _apply_reset(state: np.ndarray, n: int, target: int) -> None:
    view = _target_view(state, n, target)
    a0 = view[:, 0, :]
    a1 = view[:, 1, :]
    hot = np.abs(a1) > RESET_TOL
    if hot.any():
        if np.any(np.abs(a0[hot]) > RESET_TOL):
            raise SimulationError(
                f"nondeterministic reset on qubit {target}: both branches populated"
            )
        a0[hot] += a1[hot]
    a1[:] = 0.0


def simulate(circuit: Circuit, cap: int | None = None) -> StateVector:
    """Evolve |0...0> through the circuit's gates in order.

    ``cap`` bounds the qubit count (default 24, or the PALQA_MAX_QUBITS
    environment variable).
    """
    limit = _qubit_cap(cap)
    if circuit.n_qubits > limit:
        raise SimulationError(
            f"{circuit.n_qubits} qubits exceeds the simulator cap of {limit}"
        )
    n = circuit.n_qubits
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    gates = circuit.gates
    i = 0
    while i < len(gates):
        gate = gates[i]
        if gate.kind == "x":
            j = i + 1
            mask = 1 << gate.target
            while (
                j < len(gates)
                and gates[j].kind == "x"
                and gates[j].controls == gate.controls
            ):
                mask ^= 1 << gates[j].target
                j += 1
            if j > i + 1:
                _apply_x_run(state, n, gate.controls, mask)
                i = j
                continue
        _apply(state, n, gate)
        i += 1
    return StateVector(n, state)


def decode_state(
    sv: StateVector, layout: QubitLayout, check_uniform: bool = True
) -> list[DecodedEntry]:
    """Slice every basis state above the decode threshold into
    (value, x, y) fields per the layout, sorted by basis index.

    Builder outputs place all support on one amplitude magnitude; with
    ``check_uniform`` the entries are required to agree within 1e-10.
    """
    amps = sv.amplitudes
    nz = np.flatnonzero(np.abs(amps) > DECODE_THRESHOLD)
    if check_uniform and nz.size:
        mags = np.abs(amps[nz])
        if float(mags.max() - mags.min()) > UNIFORMITY_TOL:
            raise SimulationError(
                f"nonuniform amplitudes: spread {float(mags.max() - mags.min()):g}"
            )
    value_mask = (1 << layout.value_bits) - 1
    x_mask = (1 << layout.x_bits) - 1
    y_mask = (1 << layout.y_bits) - 1
    entries = []
    for idx in nz.tolist():
        entries.append(
            DecodedEntry(
                value=idx & value_mask,
                x=(idx >> layout.x_start) & x_mask,
                y=(idx >> layout.y_start) & y_mask,
                amplitude=complex(amps[idx]),
            )
        )
    return entries


def reconstruct_block(
    entries: list[DecodedEntry], layout: QubitLayout, signs: list[int]
) -> np.ndarray:
    """Scatter decoded (value, x, y) entries into an 8x8 integer block.

    ``signs`` is the classical sign side-channel, one entry per nonzero
    coefficient in canonical (y, x) order. Unlisted positions are zero.
    """
    block = np.zeros((8, 8), dtype=np.int32)
    nonzero = sorted(
        (e for e in entries if e.value != 0), key=lambda e: (e.y, e.x)
    )
    if len(nonzero) != len(signs):
        raise ValueError(
            f"{len(nonzero)} nonzero entries but {len(signs)} signs supplied"
        )
    seen = set()
    for entry, sign in zip(nonzero, signs):
        if entry.x >= 8 or entry.y >= 8:
            raise ValueError(f"decoded position ({entry.x}, {entry.y}) outside block")
        if (entry.y, entry.x) in seen:
            raise ValueError(f"duplicate decoded position ({entry.x}, {entry.y})")
        seen.add((entry.y, entry.x))
        block[entry.y, entry.x] = sign * entry.value
    return block


def dump_state(sv: StateVector, threshold: float = DECODE_THRESHOLD) -> str:
    """Text dump: one ``<bits> <re> <im>`` line per surviving amplitude,
    qubit 0 rightmost, sorted by basis index."""
    lines = []
    for idx in np.flatnonzero(np.abs(sv.amplitudes) > threshold).tolist():
        amp = sv.amplitudes[idx]
        lines.append(
            f"{idx:0{sv.n_qubits}b} {format(amp.real, '.12g')} {format(amp.imag, '.12g')}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
