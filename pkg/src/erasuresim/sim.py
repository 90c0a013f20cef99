"""Pauli-frame simulation of a multi-round memory experiment.

The heavy lifting happens in :mod:`kernels`; this module provides the
typed single-shot API: forced-fault tapes for deterministic replay,
shot records with detectors/flags/residual frame, and small pure
functions (Clifford conjugation, detector extraction) used directly by
tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .circuit import CompiledCircuit, compile_circuit
from .lattice import CodeLayout, GateKind
from .noise import NoiseParams, PauliModel, SpatialResolution


class FlagKind(IntEnum):
    GATE = kernels.FLAG_GATE
    MEASUREMENT = kernels.FLAG_MEASUREMENT
    WINDOW_END = kernels.FLAG_WINDOW_END


@dataclass(frozen=True)
class ErasureFlag:
    """A heralded (possible) leakage event.

    ``qubit`` is the resolved qubit for spatially perfect gate flags and
    for measurement/window-end flags; -1 when the flag names only the
    gate.  The true origin is simulator-side diagnostics the decoder
    never sees.
    """

    kind: FlagKind
    round: int
    gate_index: int
    qubit: int
    origin_round: int = -1
    origin_gate_index: int = -1


@dataclass
class PauliFrame:
    x_bits: np.ndarray
    z_bits: np.ndarray
    leaked: np.ndarray


@dataclass
class ShotRecord:
    detectors_x: np.ndarray          # (n_x_stabilizers, rounds+1)
    detectors_z: np.ndarray
    flags: List[ErasureFlag]
    residual: PauliFrame             # frame after the final readout
    measurement_flips: np.ndarray    # (n_anc, rounds+1), last col = final readout
    x_readout_flip: bool             # logical X readout flipped by residual
    z_readout_flip: bool
    failed_x: Optional[bool] = None  # set by the decoding pipeline
    failed_z: Optional[bool] = None

    def trace(self) -> str:
        lines = []
        for f in self.flags:
            lines.append(f"flag {f.kind.name} r={f.round} gate={f.gate_index} "
                         f"qubit={f.qubit} origin=({f.origin_round},{f.origin_gate_index})")
        for name, det in (("X", self.detectors_x), ("Z", self.detectors_z)):
            for b, r in zip(*np.nonzero(det)):
                lines.append(f"detector {name} stab={b} layer={r}")
        lines.append(f"readout flips: X_L={int(self.x_readout_flip)} "
                     f"Z_L={int(self.z_readout_flip)}")
        return "\n".join(lines) + "\n"


@dataclass
class ForcedTape:
    """Deterministic fault schedule for replay tests.

    Entries of -1 mean "draw randomly"; ``kind`` entries are 0 none,
    1 two-qubit Pauli (index in ``pauli``), 2 leak.
    """

    kind: np.ndarray
    pauli: np.ndarray
    leak_anc: np.ndarray
    ontime: np.ndarray
    induced: np.ndarray
    el_anc: np.ndarray
    el_data: np.ndarray
    meas: np.ndarray
    el_end: np.ndarray

    @classmethod
    def empty(cls, circuit: CompiledCircuit) -> "ForcedTape":
        n = circuit.rounds * circuit.n_gates
        return cls(
            kind=np.zeros(n, dtype=np.int8),
            pauli=np.zeros(n, dtype=np.int8),
            leak_anc=np.zeros(n, dtype=np.int8),
            ontime=np.ones(n, dtype=np.int8),
            induced=np.full(n, -1, dtype=np.int8),
            el_anc=np.full(n, -1, dtype=np.int8),
            el_data=np.full(n, -1, dtype=np.int8),
            meas=np.full(circuit.n_anc * circuit.rounds, -1, dtype=np.int8),
            el_end=np.full(circuit.n_qubits, -1, dtype=np.int8),
        )

    def as_tuple(self):
        return (self.kind, self.pauli, self.leak_anc, self.ontime,
                self.induced, self.el_anc, self.el_data, self.meas,
                self.el_end)


def empty_tape_tuple():
    """1-element dummy tape for kernels running in sampling mode."""
    z = np.zeros(1, dtype=np.int8)
    return (z, z, z, z, z, z, z, z, z)


def circuit_tuple(cc: CompiledCircuit):
    return (cc.rounds, cc.n_gates, cc.n_qubits, cc.n_anc, cc.g_anc, cc.g_data,
            cc.g_iscx, cc.anc_row, cc.row_anc, cc.row_isx, cc.sup_ptr,
            cc.sup_dat, cc.is_lx, cc.is_lz, cc.is_data)


def params_tuple(params: NoiseParams):
    return (params.p, params.erasure_fraction, params.temporal_resolution,
            params.spatial is SpatialResolution.IMPERFECT,
            params.pauli_model is PauliModel.TAILORED)


def propagate_clifford(gate_kind: GateKind, frame: PauliFrame, control: int,
                       target: int) -> PauliFrame:
    """Conjugate a Pauli frame through one two-qubit Clifford.

    CX: X_c -> X_c X_t, Z_t -> Z_c Z_t.  CZ: X_c -> X_c Z_t,
    X_t -> Z_c X_t.  Returns a new frame.
    """
    fx = frame.x_bits.copy()
    fz = frame.z_bits.copy()
    if gate_kind is GateKind.CX:
        fx[target] ^= fx[control]
        fz[control] ^= fz[target]
    else:
        xc, xt = fx[control], fx[target]
        fz[target] ^= xc
        fz[control] ^= xt
    return PauliFrame(fx, fz, frame.leaked.copy())


def extract_detectors(measurement_flips: np.ndarray, layout: CodeLayout,
                      rounds: int) -> Tuple[np.ndarray, np.ndarray]:
    """Detector bits per basis from the outcome-flip tape.

    detector(a, r) = m(a, r) xor m(a, r-1), with m(a, -1) = 0 and the
    final column of ``measurement_flips`` holding the noiseless data
    readout's reconstruction of each stabilizer.
    """
    cc = compile_circuit(layout, rounds)
    if measurement_flips.shape != (cc.n_anc, rounds + 1):
        raise ValueError("measurement tape shape mismatch")
    det = measurement_flips.copy()
    det[:, 1:] ^= measurement_flips[:, :-1]
    return det[cc.row_isx == 1], det[cc.row_isx == 0]


_CC_CACHE = {}


def get_circuit(layout: CodeLayout, rounds: int) -> CompiledCircuit:
    key = (layout.geometry, layout.distance, rounds)
    cc = _CC_CACHE.get(key)
    if cc is None:
        cc = compile_circuit(layout, rounds)
        _CC_CACHE[key] = cc
    return cc


def run_shot(layout: CodeLayout, params: NoiseParams, rounds: int, seed: int,
             tape: Optional[ForcedTape] = None) -> ShotRecord:
    """Simulate one shot and return its full record.

    With a ``tape``, fault draws are forced (remaining -1 entries fall
    back to the seeded RNG)."""
    cc = get_circuit(layout, rounds)
    circ = circuit_tuple(cc)
    p, re_, eta, imperfect, tailored = params_tuple(params)
    forced = tape is not None
    tp = tape.as_tuple() if forced else empty_tape_tuple()

    R, G = cc.rounds, cc.n_gates
    fx = np.zeros(cc.n_qubits, dtype=np.uint8)
    fz = np.zeros(cc.n_qubits, dtype=np.uint8)
    leaked = np.zeros(cc.n_qubits, dtype=np.uint8)
    oleak_r = np.zeros(cc.n_qubits, dtype=np.int32)
    oleak_j = np.zeros(cc.n_qubits, dtype=np.int32)
    mflip = np.zeros((cc.n_anc, R + 1), dtype=np.uint8)
    flags = np.zeros((2 * R * G + cc.n_anc * R + cc.n_qubits, 6), dtype=np.int32)

    nf, xl, zl = kernels.seeded_sim_shot(
        circ, p, re_, eta, imperfect, tailored, forced, tp,
        fx, fz, leaked, oleak_r, oleak_j, mflip, flags,
        np.int64(seed) if seed is not None else np.int64(-1))

    det_x, det_z = extract_detectors(mflip, layout, rounds)
    flag_list = [
        ErasureFlag(FlagKind(int(flags[i, 0])), int(flags[i, 1]),
                    int(flags[i, 2]), int(flags[i, 3]), int(flags[i, 4]),
                    int(flags[i, 5]))
        for i in range(nf)
    ]
    residual = PauliFrame(fx.copy(), fz.copy(), leaked.copy())
    return ShotRecord(
        detectors_x=det_x, detectors_z=det_z, flags=flag_list,
        residual=residual, measurement_flips=mflip,
        x_readout_flip=bool(xl), z_readout_flip=bool(zl))
