"""Surface-code geometries, gate schedules, and logical operators.

Builds unrotated and rotated memory patches on an integer grid, assigns
the per-round two-qubit gate schedule, and exposes the logical-operator
supports.  The slot assignment is the load-bearing detail: it decides
which pairs of qubits a delayed-detection leakage event can corrupt, and
therefore whether the effective distance along each logical operator
survives.  The concrete order used here (east, north, south, west for
every ancilla) is validated by the schedule-calibration tests rather
than being a contract by itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple


class Geometry(Enum):
    UNROTATED = "unrotated"
    ROTATED = "rotated"


class GateKind(Enum):
    CX = "cx"
    CZ = "cz"


# Slot order for the four neighbors of an ancilla, unrotated code.
# Key: (dr, dc) offset from the ancilla; value: slot in 1..4.
_UNROTATED_SLOTS = {(0, 1): 1, (-1, 0): 2, (1, 0): 3, (0, -1): 4}

# Rotated code: X ancillas sweep NW, NE, SW, SE; Z ancillas NW, SW, NE, SE.
_ROTATED_SLOTS_X = {(-1, -1): 1, (-1, 1): 2, (1, -1): 3, (1, 1): 4}
_ROTATED_SLOTS_Z = {(-1, -1): 1, (1, -1): 2, (-1, 1): 3, (1, 1): 4}


@dataclass(frozen=True)
class GateEvent:
    """One two-qubit gate in the measurement cycle.

    The ancilla is always the control; X-type ancillas couple through CX,
    Z-type through CZ.
    """

    round: int
    slot: int
    gate_kind: GateKind
    ancilla: int
    data: int


@dataclass(frozen=True)
class CodeLayout:
    """Immutable qubit/stabilizer geometry for one memory patch.

    ``stabilizer_supports`` maps each ancilla to an ordered tuple of
    (slot, data qubit) pairs; boundary stabilizers skip their missing
    slots without renumbering, so slot always equals the gate time step.
    """

    geometry: Geometry
    distance: int
    n_qubits: int
    data_qubits: Tuple[int, ...]
    x_ancillas: Tuple[int, ...]
    z_ancillas: Tuple[int, ...]
    stabilizer_supports: Dict[int, Tuple[Tuple[int, int], ...]]
    logical_x_support: frozenset
    logical_z_support: frozenset
    coords: Dict[int, Tuple[int, int]]

    @property
    def ancillas(self) -> Tuple[int, ...]:
        return self.x_ancillas + self.z_ancillas

    def is_x_ancilla(self, q: int) -> bool:
        return q in self._x_set

    @property
    def _x_set(self):
        # cached lazily; frozen dataclass so stash on __dict__ via object.__setattr__
        s = self.__dict__.get("_x_set_cache")
        if s is None:
            s = frozenset(self.x_ancillas)
            object.__setattr__(self, "_x_set_cache", s)
        return s

    def gate_kind_of(self, ancilla: int) -> GateKind:
        return GateKind.CX if self.is_x_ancilla(ancilla) else GateKind.CZ

    def dump(self) -> str:
        """Line-oriented text dump, one stabilizer per line, for golden tests."""
        lines = []
        for anc in sorted(self.stabilizer_supports):
            kind = "X" if self.is_x_ancilla(anc) else "Z"
            parts = " ".join(f"{slot}:{dq}" for slot, dq in self.stabilizer_supports[anc])
            lines.append(f"{kind} {anc} {parts}")
        return "\n".join(lines) + "\n"


def _check_distance(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be an odd integer >= 3, got {d}")


def _build_unrotated(d: int) -> CodeLayout:
    w = 2 * d - 1

    def idx(r, c):
        return r * w + c

    data, x_anc, z_anc = [], [], []
    coords = {}
    for r in range(w):
        for c in range(w):
            q = idx(r, c)
            coords[q] = (r, c)
            if (r + c) % 2 == 0:
                data.append(q)
            elif r % 2 == 1:
                x_anc.append(q)  # odd row, even column
            else:
                z_anc.append(q)  # even row, odd column

    supports = {}
    for anc in x_anc + z_anc:
        r, c = coords[anc]
        entries = []
        for (dr, dc), slot in _UNROTATED_SLOTS.items():
            rr, cc = r + dr, c + dc
            if 0 <= rr < w and 0 <= cc < w:
                entries.append((slot, idx(rr, cc)))
        entries.sort()
        supports[anc] = tuple(entries)

    logical_x = frozenset(idx(0, c) for c in range(0, w, 2))         # top row
    logical_z = frozenset(idx(r, 0) for r in range(0, w, 2))         # left column

    return CodeLayout(
        geometry=Geometry.UNROTATED,
        distance=d,
        n_qubits=w * w,
        data_qubits=tuple(data),
        x_ancillas=tuple(x_anc),
        z_ancillas=tuple(z_anc),
        stabilizer_supports=supports,
        logical_x_support=logical_x,
        logical_z_support=logical_z,
        coords=coords,
    )


def _build_rotated(d: int) -> CodeLayout:
    # Data qubits at even coordinates (2i, 2j); plaquette centers at odd
    # coordinates.  Centers with (r+c) % 4 == 0 are X type, the rest Z type.
    # Weight-2 stabilizers survive only on the boundary matching their type:
    # X on top/bottom, Z on left/right.
    def data_idx(i, j):
        return i * d + j

    coords = {data_idx(i, j): (2 * i, 2 * j) for i in range(d) for j in range(d)}
    data = tuple(sorted(coords))

    centers = []
    for r in range(-1, 2 * d, 2):
        for c in range(-1, 2 * d, 2):
            nbrs = [
                (r + dr, c + dc)
                for dr in (-1, 1)
                for dc in (-1, 1)
                if 0 <= r + dr <= 2 * d - 2 and 0 <= c + dc <= 2 * d - 2
            ]
            is_x = (r + c) % 4 == 0
            if len(nbrs) == 4:
                centers.append((r, c, is_x))
            elif len(nbrs) == 2:
                on_row_edge = r in (-1, 2 * d - 1)
                if (on_row_edge and is_x) or (not on_row_edge and not is_x):
                    centers.append((r, c, is_x))

    x_anc, z_anc = [], []
    supports = {}
    next_id = d * d
    for r, c, is_x in sorted(centers):
        anc = next_id
        next_id += 1
        coords[anc] = (r, c)
        (x_anc if is_x else z_anc).append(anc)
        slot_map = _ROTATED_SLOTS_X if is_x else _ROTATED_SLOTS_Z
        entries = []
        for (dr, dc), slot in slot_map.items():
            rr, cc = r + dr, c + dc
            if 0 <= rr <= 2 * d - 2 and 0 <= cc <= 2 * d - 2:
                entries.append((slot, data_idx(rr // 2, cc // 2)))
        entries.sort()
        supports[anc] = tuple(entries)

    logical_x = frozenset(data_idx(i, 0) for i in range(d))   # left column
    logical_z = frozenset(data_idx(0, j) for j in range(d))   # top row

    return CodeLayout(
        geometry=Geometry.ROTATED,
        distance=d,
        n_qubits=next_id,
        data_qubits=data,
        x_ancillas=tuple(x_anc),
        z_ancillas=tuple(z_anc),
        stabilizer_supports=supports,
        logical_x_support=logical_x,
        logical_z_support=logical_z,
        coords=coords,
    )


def build_layout(geometry: Geometry, d: int) -> CodeLayout:
    """Construct the memory-patch layout for the given geometry and distance."""
    _check_distance(d)
    if geometry is Geometry.UNROTATED:
        return _build_unrotated(d)
    return _build_rotated(d)


def schedule(layout: CodeLayout, rounds: int) -> List[GateEvent]:
    """Expand the per-round schedule into an ordered list of gate events.

    Events are sorted by (round, slot, ancilla id), which makes the
    predecessor gate of any qubit well defined.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    one_round = []
    for anc in sorted(layout.stabilizer_supports):
        kind = layout.gate_kind_of(anc)
        for slot, dq in layout.stabilizer_supports[anc]:
            one_round.append((slot, anc, dq, kind))
    one_round.sort()
    events = []
    for r in range(rounds):
        for slot, anc, dq, kind in one_round:
            events.append(GateEvent(round=r, slot=slot, gate_kind=kind, ancilla=anc, data=dq))
    return events


def logical_frame_action(frame, layout: CodeLayout) -> Tuple[bool, bool]:
    """Anticommutation parity of a residual Pauli frame with each logical.

    ``frame`` maps data qubit -> (x_bit, z_bit).  The X_L readout is
    flipped by the frame's Z component on the X_L support, and Z_L by the
    X component on the Z_L support.
    """
    x_l = sum(frame.get(q, (0, 0))[1] for q in layout.logical_x_support) % 2
    z_l = sum(frame.get(q, (0, 0))[0] for q in layout.logical_z_support) % 2
    return bool(x_l), bool(z_l)
