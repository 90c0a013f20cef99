"""Geometry, schedule, and schedule-calibration tests for the lattice module."""

import pytest

from erasuresim.lattice import (
    CodeLayout,
    GateKind,
    Geometry,
    build_layout,
    logical_frame_action,
    schedule,
)


DISTANCES = [3, 5, 7, 9, 11, 13, 15]


def support_set(layout: CodeLayout, anc: int) -> frozenset:
    return frozenset(dq for _, dq in layout.stabilizer_supports[anc])


# ---------------------------------------------------------------------------
# Counting and structural invariants
# ---------------------------------------------------------------------------


def test_unrotated_d3_counts():
    layout = build_layout(Geometry.UNROTATED, 3)
    assert len(layout.data_qubits) == 13
    assert len(layout.x_ancillas) == 6
    assert len(layout.z_ancillas) == 6


def test_rotated_d3_counts():
    layout = build_layout(Geometry.ROTATED, 3)
    assert len(layout.data_qubits) == 9
    assert len(layout.x_ancillas) == 4
    assert len(layout.z_ancillas) == 4


@pytest.mark.parametrize("d", DISTANCES)
@pytest.mark.parametrize("geometry", [Geometry.UNROTATED, Geometry.ROTATED])
def test_counts_general(geometry, d):
    layout = build_layout(geometry, d)
    if geometry is Geometry.UNROTATED:
        assert len(layout.data_qubits) == d * d + (d - 1) * (d - 1)
        assert len(layout.x_ancillas) == d * (d - 1)
        assert len(layout.z_ancillas) == d * (d - 1)
    else:
        assert len(layout.data_qubits) == d * d
        assert len(layout.x_ancillas) == (d * d - 1) // 2
        assert len(layout.z_ancillas) == (d * d - 1) // 2
    assert layout.n_qubits == (
        len(layout.data_qubits) + len(layout.x_ancillas) + len(layout.z_ancillas)
    )


def test_rejects_bad_distance():
    for d in (1, 2, 4, 0, -3):
        with pytest.raises(ValueError):
            build_layout(Geometry.UNROTATED, d)


@pytest.mark.parametrize("d", DISTANCES)
@pytest.mark.parametrize("geometry", [Geometry.UNROTATED, Geometry.ROTATED])
def test_stabilizer_commutativity(geometry, d):
    layout = build_layout(geometry, d)
    z_sets = [support_set(layout, a) for a in layout.z_ancillas]
    for xa in layout.x_ancillas:
        xs = support_set(layout, xa)
        for zs in z_sets:
            assert len(xs & zs) % 2 == 0


@pytest.mark.parametrize("d", [3, 5, 7])
@pytest.mark.parametrize("geometry", [Geometry.UNROTATED, Geometry.ROTATED])
def test_logicals_commute_with_stabilizers(geometry, d):
    layout = build_layout(geometry, d)
    # Z_L (Z on logical_z_support) must commute with every X stabilizer;
    # X_L with every Z stabilizer.  Overlap parity must be even.
    for xa in layout.x_ancillas:
        assert len(support_set(layout, xa) & layout.logical_z_support) % 2 == 0
    for za in layout.z_ancillas:
        assert len(support_set(layout, za) & layout.logical_x_support) % 2 == 0
    # The two logicals anticommute with each other: odd overlap.
    assert len(layout.logical_x_support & layout.logical_z_support) % 2 == 1


@pytest.mark.parametrize("d", [3, 5])
@pytest.mark.parametrize("geometry", [Geometry.UNROTATED, Geometry.ROTATED])
def test_slots_distinct_per_stabilizer(geometry, d):
    layout = build_layout(geometry, d)
    for anc, entries in layout.stabilizer_supports.items():
        slots = [s for s, _ in entries]
        qubits = [q for _, q in entries]
        assert len(set(slots)) == len(slots)
        assert len(set(qubits)) == len(qubits)
        assert all(1 <= s <= 4 for s in slots)


def test_weight4_stabilizers_hit_4_distinct_qubits():
    layout = build_layout(Geometry.UNROTATED, 3)
    weight4 = [a for a in layout.ancillas if len(layout.stabilizer_supports[a]) == 4]
    assert weight4  # bulk stabilizers exist at d=3
    for anc in weight4:
        assert len(support_set(layout, anc)) == 4


# ---------------------------------------------------------------------------
# Schedule
# ---------------------------------------------------------------------------


def test_schedule_event_count_1_round_unrotated_d3():
    layout = build_layout(Geometry.UNROTATED, 3)
    events = schedule(layout, 1)
    expected = sum(len(v) for v in layout.stabilizer_supports.values())
    assert len(events) == expected
    # Weight-2 boundary stabilizers emit exactly 2 events.
    for anc, entries in layout.stabilizer_supports.items():
        if len(entries) == 2:
            assert sum(1 for e in events if e.ancilla == anc) == 2


def test_schedule_sorted_and_slot_conflict_free():
    layout = build_layout(Geometry.UNROTATED, 5)
    events = schedule(layout, 2)
    keys = [(e.round, e.slot) for e in events]
    assert keys == sorted(keys)
    from collections import Counter

    per_slot = Counter()
    for e in events:
        per_slot[(e.round, e.slot, e.ancilla)] += 1
        per_slot[(e.round, e.slot, e.data)] += 1
    assert max(per_slot.values()) == 1


def test_schedule_rounds_tile_identically():
    layout = build_layout(Geometry.ROTATED, 3)
    events = schedule(layout, 2)
    r0 = [(e.slot, e.ancilla, e.data, e.gate_kind) for e in events if e.round == 0]
    r1 = [(e.slot, e.ancilla, e.data, e.gate_kind) for e in events if e.round == 1]
    assert r0 == r1


def test_gate_kinds_by_ancilla_type():
    layout = build_layout(Geometry.UNROTATED, 3)
    for e in schedule(layout, 1):
        expected = GateKind.CX if layout.is_x_ancilla(e.ancilla) else GateKind.CZ
        assert e.gate_kind is expected


def test_schedule_rejects_zero_rounds():
    layout = build_layout(Geometry.UNROTATED, 3)
    with pytest.raises(ValueError):
        schedule(layout, 0)


# ---------------------------------------------------------------------------
# logical_frame_action
# ---------------------------------------------------------------------------


def test_logical_frame_identity():
    layout = build_layout(Geometry.UNROTATED, 3)
    assert logical_frame_action({}, layout) == (False, False)


def test_logical_frame_single_z_on_x_support():
    layout = build_layout(Geometry.UNROTATED, 3)
    q = min(layout.logical_x_support)
    assert logical_frame_action({q: (0, 1)}, layout) == (True, False)


def test_logical_frame_full_zl():
    layout = build_layout(Geometry.UNROTATED, 3)
    frame = {q: (0, 1) for q in layout.logical_z_support}
    # Z_L flips the X_L readout parity and commutes with every X stabilizer.
    x_flip, z_flip = logical_frame_action(frame, layout)
    assert x_flip and not z_flip
    for xa in layout.x_ancillas:
        assert len(support_set(layout, xa) & layout.logical_z_support) % 2 == 0


def test_dump_golden_unrotated_d3():
    layout = build_layout(Geometry.UNROTATED, 3)
    lines = layout.dump().strip().split("\n")
    assert len(lines) == 12
    # Spot-check one bulk X stabilizer: ancilla 10 at grid (2,0) is a Z type
    # ancilla?  Use format properties instead of a brittle literal: each line
    # is "<T> <anc> slot:dq ...".
    for line in lines:
        parts = line.split()
        assert parts[0] in ("X", "Z")
        anc = int(parts[1])
        entries = [tuple(map(int, p.split(":"))) for p in parts[2:]]
        assert entries == sorted(entries)
        assert layout.stabilizer_supports[anc] == tuple(entries)
    # Dump is deterministic.
    assert layout.dump() == build_layout(Geometry.UNROTATED, 3).dump()


# ---------------------------------------------------------------------------
# Schedule calibration: delayed-detection error patterns from single leaks.
#
# A leaked ancilla induces a Pauli on its slot-k data partner at the leak
# gate; if detection is delayed one step, the slot-(k+1) partner is hit by
# the induced Pauli and the reset channel (uniform over I,X,Y,Z).  The pair
# of affected data qubits is therefore (partner at slot k, partner at the
# next occupied slot).  A pair can contribute half of a logical operator
# only if both qubits lie on that logical's support and the first qubit can
# carry the logical's Pauli type via the induced channel (the second always
# can, through the reset channel).  Data-qubit leaks touch a single data
# qubit and cannot form such a pair.
# ---------------------------------------------------------------------------


def delayed_pairs(layout: CodeLayout):
    """Yield (ancilla, first partner, second partner) for every consecutive
    occupied slot pair of every ancilla."""
    for anc, entries in layout.stabilizer_supports.items():
        for (s1, q1), (s2, q2) in zip(entries, entries[1:]):
            assert s1 < s2
            yield anc, q1, q2


def induced_types(layout: CodeLayout, anc: int, tailored: bool):
    """Pauli types the induced channel can place on a data partner."""
    if not tailored:
        return {"X", "Y", "Z"}
    # Ancilla is always the control.  Leaked CX control -> {I,X}; leaked CZ
    # control -> {I,Z}.
    return {"X"} if layout.is_x_ancilla(anc) else {"Z"}


def violating_pairs(layout: CodeLayout, support, pauli: str, tailored: bool):
    """Pairs able to place `pauli` errors on two distinct qubits of `support`."""
    out = []
    for anc, q1, q2 in delayed_pairs(layout):
        if q1 != q2 and q1 in support and q2 in support:
            if pauli in induced_types(layout, anc, tailored):
                out.append((anc, q1, q2))
    return out


def test_calibration_unrotated_general_z_support_reduced():
    # General model, spatially imperfect, delayed detection: at least one
    # single-leak pattern places two Z errors on the Z logical support.
    layout = build_layout(Geometry.UNROTATED, 3)
    hits = violating_pairs(layout, layout.logical_z_support, "Z", tailored=False)
    assert hits, "expected the schedule to expose a distance-reducing hook"


def test_calibration_unrotated_x_support_preserved():
    # No single leak places two X errors on the X logical support.
    for d in (3, 5):
        layout = build_layout(Geometry.UNROTATED, d)
        assert not violating_pairs(layout, layout.logical_x_support, "X", tailored=False)


def test_calibration_unrotated_tailored_z_support_preserved():
    for d in (3, 5):
        layout = build_layout(Geometry.UNROTATED, d)
        assert not violating_pairs(layout, layout.logical_z_support, "Z", tailored=True)


def test_calibration_rotated_tailored_both_supports_preserved():
    for d in (3, 5):
        layout = build_layout(Geometry.ROTATED, d)
        assert not violating_pairs(layout, layout.logical_x_support, "X", tailored=True)
        assert not violating_pairs(layout, layout.logical_z_support, "Z", tailored=True)
