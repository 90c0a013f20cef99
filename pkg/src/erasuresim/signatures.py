"""Detector signatures of single Pauli components.

A fault is located by (qubit, round, position, pauli) where position t
means "inserted after the slot-t gates of that round" (t = 0 means at
the start of the round, t = 4 means just before that round's ancilla
measurements).  The special location (round == window rounds, t == 0)
sits after the last measurement round, immediately before the noiseless
final data readout.

The signature records, for each stabilizer basis, the set of detectors
the fault flips and whether it flips that basis's logical readout:

* X basis: detectors built from X-type stabilizer outcomes; logical bit
  is the parity of the residual Z component on logical_x_support
  (whether the logical X readout is flipped).
* Z basis: Z-type stabilizer detectors; logical bit is the parity of
  the residual X component on logical_z_support.

Rounds are identical tiles, so a signature inserted at round r <=
rounds - 4 equals the round-0 signature shifted by r; only late rounds
need direct propagation.  Signatures are cached on that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .circuit import CompiledCircuit

# Pauli component index: 0 I, 1 X, 2 Y, 3 Z
_XBIT = (0, 1, 1, 0)
_ZBIT = (0, 0, 1, 1)

_REF_ROUNDS = 4  # tiles needed before boundary effects can matter


@dataclass(frozen=True)
class Signature:
    """Detector hits (per basis) and logical flips of one fault."""

    hits_x: Tuple[Tuple[int, int], ...]  # (ancilla row, detector round)
    hits_z: Tuple[Tuple[int, int], ...]
    log_x: int
    log_z: int

    def shifted(self, dr: int) -> "Signature":
        if dr == 0:
            return self
        return Signature(
            tuple((a, r + dr) for a, r in self.hits_x),
            tuple((a, r + dr) for a, r in self.hits_z),
            self.log_x,
            self.log_z,
        )


class SignatureCalculator:
    def __init__(self, circuit: CompiledCircuit):
        self.cc = circuit
        self._bulk: Dict[Tuple[int, int, int], Signature] = {}
        self._exact: Dict[Tuple[int, int, int, int], Signature] = {}

    def signature(self, qubit: int, round_: int, pos: int, pauli: int) -> Signature:
        cc = self.cc
        if pauli == 0:
            return Signature((), (), 0, 0)
        if round_ <= cc.rounds - _REF_ROUNDS:
            key = (qubit, pos, pauli)
            sig = self._bulk.get(key)
            if sig is None:
                sig = self._propagate(qubit, 0, pos, pauli, _REF_ROUNDS)
                self._bulk[key] = sig
            return sig.shifted(round_)
        key4 = (qubit, round_, pos, pauli)
        sig = self._exact.get(key4)
        if sig is None:
            sig = self._propagate(qubit, round_, pos, pauli, cc.rounds)
            self._exact[key4] = sig
        return sig

    def _propagate(self, qubit: int, r0: int, pos: int, pauli: int, rounds: int) -> Signature:
        """Propagate a Pauli inserted at (qubit, r0, pos) through the
        remaining ideal circuit and difference the measurement flips
        into detector hits."""
        cc = self.cc
        fx: Dict[int, int] = {}
        fz: Dict[int, int] = {}
        if _XBIT[pauli]:
            fx[qubit] = 1
        if _ZBIT[pauli]:
            fz[qubit] = 1
        # mflips[(ancilla row, measured round)] = 1 for flipped outcomes
        mflips: Dict[Tuple[int, int], int] = {}

        for r in range(r0, rounds):
            start_slot = pos + 1 if r == r0 else 1
            for s in range(start_slot, 5):
                dirty = [q for q in set(fx) | set(fz) if (fx.get(q, 0) or fz.get(q, 0))]
                done = set()
                for q in dirty:
                    j = int(cc.qslot_gate[q, s - 1])
                    if j == -1 or j in done:
                        continue
                    done.add(j)
                    a = int(cc.g_anc[j])
                    dq = int(cc.g_data[j])
                    if cc.g_iscx[j]:
                        # CX (control = ancilla): X_c -> X_c X_t, Z_t -> Z_c Z_t
                        if fx.get(a, 0):
                            fx[dq] = fx.get(dq, 0) ^ 1
                        if fz.get(dq, 0):
                            fz[a] = fz.get(a, 0) ^ 1
                    else:
                        # CZ: X_c -> X_c Z_t, X_t -> Z_c X_t
                        if fx.get(a, 0):
                            fz[dq] = fz.get(dq, 0) ^ 1
                        if fx.get(dq, 0):
                            fz[a] = fz.get(a, 0) ^ 1
            # X-basis ancilla measurement: flipped by residual Z; ancilla
            # frames are discarded afterwards.
            for q in list(set(fx) | set(fz)):
                row = cc.anc_row[q]
                if row == -1:
                    continue
                if fz.pop(q, 0):
                    mflips[(int(row), r)] = mflips.get((int(row), r), 0) ^ 1
                fx.pop(q, None)

        # Noiseless final data readout closes the last detector layer.
        for row in range(cc.n_anc):
            acc = 0
            comp = fz if cc.row_isx[row] else fx
            for k in range(cc.sup_ptr[row], cc.sup_ptr[row + 1]):
                acc ^= comp.get(int(cc.sup_dat[k]), 0)
            if acc:
                mflips[(row, rounds)] = mflips.get((row, rounds), 0) ^ 1

        # Detector (row, r) fires iff flip(row, r) != flip(row, r-1),
        # for r in 0..rounds (flip(row, -1) = 0 by preparation).
        hits_x, hits_z = [], []
        by_row: Dict[int, set] = {}
        for (row, r), v in mflips.items():
            if v:
                by_row.setdefault(row, set()).add(r)
        for row, flipped in by_row.items():
            target = hits_x if cc.row_isx[row] else hits_z
            for r in range(0, rounds + 1):
                a = 1 if r in flipped else 0
                b = 1 if (r - 1) in flipped else 0
                if a ^ b:
                    target.append((row, r))

        log_x = 0
        for q, v in fz.items():
            if v and cc.is_lx[q]:
                log_x ^= 1
        log_z = 0
        for q, v in fx.items():
            if v and cc.is_lz[q]:
                log_z ^= 1
        return Signature(tuple(sorted(hits_x)), tuple(sorted(hits_z)), log_x, log_z)
