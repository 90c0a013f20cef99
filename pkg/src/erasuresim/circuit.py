"""Flat-array compilation of a layout's measurement cycle.

The simulator kernels, the decoding-graph builder, and the flag
reweighting tables all consume the same compiled view of one round of
the schedule: gate arrays sorted by (slot, ancilla), per-qubit slot
tables, ancilla measurement rows, and static predecessor/last-gate
lookups.  Rounds are identical tiles, so a single-round compilation plus
the round count describes the whole memory experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .lattice import CodeLayout, GateKind


@dataclass
class CompiledCircuit:
    layout: CodeLayout
    rounds: int
    n_qubits: int = 0
    n_anc: int = 0
    n_gates: int = 0                       # gates per round
    g_anc: np.ndarray = None               # (G,) ancilla qubit id
    g_data: np.ndarray = None              # (G,) data qubit id
    g_iscx: np.ndarray = None              # (G,) 1 for CX, 0 for CZ
    g_slot: np.ndarray = None              # (G,) slot 1..4
    anc_row: np.ndarray = None             # (nq,) measurement row or -1
    row_anc: np.ndarray = None             # (n_anc,) qubit id per row
    row_isx: np.ndarray = None             # (n_anc,) 1 if X-type stabilizer
    sup_ptr: np.ndarray = None             # (n_anc+1,) CSR into sup_dat
    sup_dat: np.ndarray = None             # support data ids per row
    is_lx: np.ndarray = None               # (nq,) logical_x_support mask
    is_lz: np.ndarray = None               # (nq,) logical_z_support mask
    is_data: np.ndarray = None             # (nq,)
    qslot_gate: np.ndarray = None          # (nq, 4) in-round gate index or -1
    pred_anc_j: np.ndarray = None          # (G,) ancilla's previous gate this round, -1
    pred_data_j: np.ndarray = None         # (G,) data qubit's previous gate index, -1
    pred_data_dr: np.ndarray = None        # (G,) 0 same round, 1 previous round
    last_gate_anc: np.ndarray = None       # (n_anc,) row -> last in-round gate index
    last_gate_data: np.ndarray = None      # (nq,) data qubit -> last in-round gate index
    q_index: Dict[int, int] = field(default_factory=dict)

    @property
    def events_per_window(self) -> int:
        return self.rounds * self.n_gates


def compile_circuit(layout: CodeLayout, rounds: int) -> CompiledCircuit:
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    nq = layout.n_qubits
    cc = CompiledCircuit(layout=layout, rounds=rounds, n_qubits=nq)

    one_round = []
    for anc in sorted(layout.stabilizer_supports):
        iscx = 1 if layout.gate_kind_of(anc) is GateKind.CX else 0
        for slot, dq in layout.stabilizer_supports[anc]:
            one_round.append((slot, anc, dq, iscx))
    one_round.sort()
    G = len(one_round)
    cc.n_gates = G
    cc.g_slot = np.array([e[0] for e in one_round], dtype=np.int8)
    cc.g_anc = np.array([e[1] for e in one_round], dtype=np.int32)
    cc.g_data = np.array([e[2] for e in one_round], dtype=np.int32)
    cc.g_iscx = np.array([e[3] for e in one_round], dtype=np.uint8)

    ancillas = sorted(layout.stabilizer_supports)
    cc.n_anc = len(ancillas)
    cc.anc_row = np.full(nq, -1, dtype=np.int32)
    cc.row_anc = np.array(ancillas, dtype=np.int32)
    cc.row_isx = np.zeros(cc.n_anc, dtype=np.uint8)
    sup_ptr = [0]
    sup_dat = []
    for i, anc in enumerate(ancillas):
        cc.anc_row[anc] = i
        cc.row_isx[i] = 1 if layout.is_x_ancilla(anc) else 0
        for _slot, dq in layout.stabilizer_supports[anc]:
            sup_dat.append(dq)
        sup_ptr.append(len(sup_dat))
    cc.sup_ptr = np.array(sup_ptr, dtype=np.int32)
    cc.sup_dat = np.array(sup_dat, dtype=np.int32)

    cc.is_lx = np.zeros(nq, dtype=np.uint8)
    cc.is_lz = np.zeros(nq, dtype=np.uint8)
    for q in layout.logical_x_support:
        cc.is_lx[q] = 1
    for q in layout.logical_z_support:
        cc.is_lz[q] = 1
    cc.is_data = np.zeros(nq, dtype=np.uint8)
    for q in layout.data_qubits:
        cc.is_data[q] = 1

    # Per-qubit slot table; the schedule guarantees at most one gate per
    # qubit per slot.
    cc.qslot_gate = np.full((nq, 4), -1, dtype=np.int32)
    for j in range(G):
        s = cc.g_slot[j] - 1
        for q in (cc.g_anc[j], cc.g_data[j]):
            if cc.qslot_gate[q, s] != -1:
                raise ValueError(f"schedule conflict: qubit {q} used twice in slot {s + 1}")
            cc.qslot_gate[q, s] = j

    # Predecessor gates.  Ancillas are freshly prepared each round, so
    # their predecessor never crosses the round boundary; data qubits
    # wrap into the previous round.
    cc.pred_anc_j = np.full(G, -1, dtype=np.int32)
    cc.pred_data_j = np.full(G, -1, dtype=np.int32)
    cc.pred_data_dr = np.zeros(G, dtype=np.int8)
    last_seen = {}
    for j in range(G):
        a, dq = int(cc.g_anc[j]), int(cc.g_data[j])
        if a in last_seen:
            cc.pred_anc_j[j] = last_seen[a]
        if dq in last_seen:
            cc.pred_data_j[j] = last_seen[dq]
        last_seen[a] = j
        last_seen[dq] = j
    cc.last_gate_anc = np.full(cc.n_anc, -1, dtype=np.int32)
    cc.last_gate_data = np.full(nq, -1, dtype=np.int32)
    for j in range(G):
        cc.last_gate_anc[cc.anc_row[cc.g_anc[j]]] = j
        cc.last_gate_data[cc.g_data[j]] = j
    # Data qubit with no same-round predecessor at its first gate: wraps
    # to its last gate of the previous round.
    for j in range(G):
        dq = int(cc.g_data[j])
        if cc.pred_data_j[j] == -1:
            cc.pred_data_j[j] = cc.last_gate_data[dq]
            cc.pred_data_dr[j] = 1
    return cc
