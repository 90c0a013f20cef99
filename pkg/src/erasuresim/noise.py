"""Noise parameters and the leakage/Pauli fault distributions.

Each two-qubit gate fails with total probability ``p``, split into a
leakage branch (probability ``R_e * p``, one of the two gate qubits
leaks) and a two-qubit Pauli branch (probability ``(1 - R_e) * p``,
uniform over the 15 non-identity two-qubit Paulis).  A leaked qubit
induces a Pauli on its partner according to the general model (uniform
single-qubit depolarizing) or the tailored model (gate- and
role-dependent two-element set).  Erasure flags attach to the leak's own
gate with probability ``eta`` and to the leaked qubit's next gate
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from .lattice import GateKind

# Single-qubit Paulis as (x_bit, z_bit) symplectic pairs, indexed I, X, Y, Z.
PAULI_BITS: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 0), (1, 1), (0, 1))
PAULI_NAMES = "IXYZ"

# The 15 two-qubit Pauli faults (control index, target index), identity excluded.
TWO_QUBIT_PAULIS: Tuple[Tuple[int, int], ...] = tuple(
    (a, b) for a in range(4) for b in range(4) if (a, b) != (0, 0)
)


class SpatialResolution(Enum):
    PERFECT = "perfect"
    IMPERFECT = "imperfect"


class PauliModel(Enum):
    GENERAL = "general"
    TAILORED = "tailored"


class LeakedRole(Enum):
    CONTROL = "control"
    TARGET = "target"


@dataclass(frozen=True)
class NoiseParams:
    """Per-gate error model: p, erasure fraction, and check resolutions."""

    p: float
    erasure_fraction: float = 1.0
    temporal_resolution: float = 1.0
    spatial: SpatialResolution = SpatialResolution.IMPERFECT
    pauli_model: PauliModel = PauliModel.GENERAL
    # Optional halving of the weak-edge probabilities for spatially
    # imperfect checks (the per-candidate ambiguity split); off by default.
    halve_imperfect_weak: bool = False

    def __post_init__(self):
        for name in ("p", "erasure_fraction", "temporal_resolution"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def p_leak(self) -> float:
        return self.erasure_fraction * self.p

    @property
    def p_pauli(self) -> float:
        return (1.0 - self.erasure_fraction) * self.p


def leakage_induced_pauli(
    model: PauliModel, gate_kind: GateKind, leaked_role: LeakedRole
) -> Tuple[float, float, float, float]:
    """Distribution over (I, X, Y, Z) induced on the partner of a leaked qubit.

    General: uniform.  Tailored: a leaked control induces {I, Z} under CZ
    and {I, X} under CX; a leaked target induces {I, Z} regardless of the
    gate kind.
    """
    if model is PauliModel.GENERAL:
        return (0.25, 0.25, 0.25, 0.25)
    if leaked_role is LeakedRole.CONTROL and gate_kind is GateKind.CX:
        return (0.5, 0.5, 0.0, 0.0)
    return (0.5, 0.0, 0.0, 0.5)


def tailored_partner_pauli(gate_kind: GateKind, leaked_role: LeakedRole) -> int:
    """Index (1=X, 3=Z) of the sole non-identity tailored partner Pauli."""
    if leaked_role is LeakedRole.CONTROL and gate_kind is GateKind.CX:
        return 1
    return 3
