"""Closed-form hardware trade-off calculators.

Relates device coherence numbers to the temporal resolution of a
built-in erasure check, and compares transmon budgets between a
conventional Pauli-noise architecture and erasure-qubit architectures
via unit-cell element counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DeviceTimes:
    """Transmon/cavity coherence parameters.

    t1_us: relaxation time of the leakage-hosting level (µs).
    t_phi_us: dephasing time (µs).
    kappa_per_us: cavity single-photon loss rate (µs^-1).
    """

    t1_us: float
    t_phi_us: float
    kappa_per_us: float

    def __post_init__(self):
        if self.t1_us <= 0 or self.t_phi_us <= 0 or self.kappa_per_us <= 0:
            raise ValueError("device times and rates must be positive")


@dataclass(frozen=True)
class UnitCell:
    """Transmon-like elements per tile-able unit cell (may be
    fractional when elements are shared between cells)."""

    n: float
    label: str = ""

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("unit cell element count must be positive")


# Architecture presets: elements per tile-able unit cell.
PAULI_CELL = UnitCell(3.0, "standard transmon surface code")
ERASURE_CELL_DUAL_RAIL = UnitCell(5.0, "dual-rail erasure qubits, dedicated check transmons")
ERASURE_CELL_SHARED = UnitCell(3.5, "dual-rail erasure qubits, shared check transmons")


def builtin_eta(times: DeviceTimes) -> float:
    """Temporal resolution of a built-in erasure check.

    eta = (kappa + 1/T1 + 1/Tphi) / (2*kappa + 1/T1 + 1/Tphi),
    in (1/2, 1): the probability the flag attaches to the gate where
    the leakage occurred rather than the preceding one.
    """
    s = 1.0 / times.t1_us + 1.0 / times.t_phi_us
    return (times.kappa_per_us + s) / (2.0 * times.kappa_per_us + s)


def _ratio(n_pauli: UnitCell, n_eras: UnitCell) -> float:
    return n_pauli.n / n_eras.n


def distance_gain(n_pauli: UnitCell, n_eras: UnitCell) -> float:
    """Effective-distance gain of an erasure architecture over a Pauli
    architecture at equal transmon count: 2*sqrt(n_pauli/n_eras).

    The factor 2 is the per-qubit distance gain of heralded erasures
    over unheralded Paulis; the square root converts the unit-cell
    overhead into a lattice-size penalty at fixed hardware budget.
    """
    return 2.0 * math.sqrt(_ratio(n_pauli, n_eras))


def transmon_savings(n_pauli: UnitCell, n_eras: UnitCell) -> float:
    """How many times fewer transmons the erasure architecture needs at
    equal effective distance: 4*(n_pauli/n_eras).  The reciprocal,
    expressed as a percentage, is the remaining hardware fraction."""
    return 4.0 * _ratio(n_pauli, n_eras)


def savings_percent(n_pauli: UnitCell, n_eras: UnitCell) -> float:
    """Transmons needed as a percentage of the Pauli architecture."""
    return 100.0 / transmon_savings(n_pauli, n_eras)


def accounting_table(n_pauli: UnitCell, cells) -> str:
    """Text table comparing erasure unit cells against a Pauli cell."""
    lines = [f"{'architecture':44s} {'cell':>5s} {'d_gain':>7s} "
             f"{'savings':>8s} {'transmons':>10s}"]
    for cell in cells:
        lines.append(
            f"{cell.label:44s} {cell.n:5.2f} "
            f"{distance_gain(n_pauli, cell):7.3f} "
            f"{transmon_savings(n_pauli, cell):8.2f} "
            f"{savings_percent(n_pauli, cell):9.0f}%")
    return "\n".join(lines) + "\n"
