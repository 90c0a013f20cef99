"""Closed-form hardware-accounting calculators."""

import pytest

from erasuresim.hardware import (
    ERASURE_CELL_DUAL_RAIL,
    ERASURE_CELL_SHARED,
    PAULI_CELL,
    DeviceTimes,
    UnitCell,
    accounting_table,
    builtin_eta,
    distance_gain,
    savings_percent,
    transmon_savings,
)


def test_builtin_eta_reference_point():
    eta = builtin_eta(DeviceTimes(t1_us=30.0, t_phi_us=25.0, kappa_per_us=0.001))
    assert eta == pytest.approx(0.9867, abs=0.0005)


def test_builtin_eta_limits():
    assert builtin_eta(DeviceTimes(30.0, 25.0, 1e-12)) == pytest.approx(1.0, abs=1e-6)
    assert builtin_eta(DeviceTimes(1e12, 1e12, 0.5)) == pytest.approx(0.5, abs=1e-6)


def test_builtin_eta_rejects_nonpositive():
    with pytest.raises(ValueError):
        DeviceTimes(-1.0, 25.0, 0.001)
    with pytest.raises(ValueError):
        DeviceTimes(30.0, 0.0, 0.001)


def test_builtin_eta_monotone_in_kappa():
    """The computed finite-difference sign matches the symbolic derivative:
    eta decreases as kappa grows (for finite T1, T_phi)."""
    for t1, tphi in [(30.0, 25.0), (100.0, 50.0), (10.0, 200.0)]:
        last = None
        for kappa in (0.0005, 0.001, 0.002, 0.01, 0.1):
            eta = builtin_eta(DeviceTimes(t1, tphi, kappa))
            assert 0.5 < eta < 1.0
            if last is not None:
                assert eta < last
            last = eta


def test_distance_gain_values():
    assert distance_gain(UnitCell(3, "a"), UnitCell(5, "b")) == pytest.approx(1.549, abs=0.001)
    assert distance_gain(UnitCell(1, "a"), UnitCell(3, "b")) == pytest.approx(1.155, abs=0.001)
    assert distance_gain(UnitCell(3, "a"), UnitCell(3.5, "b")) == pytest.approx(1.852, abs=0.001)
    assert distance_gain(UnitCell(2, "a"), UnitCell(2, "b")) == pytest.approx(2.0)


def test_distance_gain_algebraic_closure():
    for np_ in (1.0, 2.5, 3.0):
        for ne in (1.0, 3.5, 5.0):
            g = distance_gain(UnitCell(np_, "p"), UnitCell(ne, "e"))
            assert g * g * ne / np_ == pytest.approx(4.0, rel=1e-12)


def test_transmon_savings_values():
    assert transmon_savings(UnitCell(3, "a"), UnitCell(3.5, "b")) == pytest.approx(3.43, abs=0.005)
    assert transmon_savings(UnitCell(3, "a"), UnitCell(5, "b")) == pytest.approx(2.4, abs=0.005)
    assert transmon_savings(UnitCell(1, "a"), UnitCell(4, "b")) == pytest.approx(1.0)


def test_savings_percent_values():
    assert savings_percent(UnitCell(3, "a"), UnitCell(3.5, "b")) == pytest.approx(29.0, abs=0.5)
    assert savings_percent(UnitCell(3, "a"), UnitCell(5, "b")) == pytest.approx(41.0, abs=1.0)


def test_presets():
    assert PAULI_CELL.n == 3.0
    assert ERASURE_CELL_DUAL_RAIL.n == 5.0
    assert ERASURE_CELL_SHARED.n == 3.5


def test_unit_cell_rejects_nonpositive():
    with pytest.raises(ValueError):
        UnitCell(0.0, "bad")


def test_accounting_table_smoke():
    text = accounting_table(PAULI_CELL, [ERASURE_CELL_DUAL_RAIL, ERASURE_CELL_SHARED])
    assert ERASURE_CELL_DUAL_RAIL.label in text
    assert "1.55" in text or "1.549" in text
