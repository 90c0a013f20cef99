"""End-to-end acceptance tests.

These reproduce the headline physics numbers at desk scale: thresholds
from finite-size-scaling fits over small sweeps, and effective error
distances from sub-threshold power-law fits at >= 1e7 shots per point.
They are Monte Carlo heavy (roughly two hours total on one core); all
expensive results are cached per session so criteria can share fits.

Tolerances are desk-scale: threshold values +-0.4 (or +-0.35) absolute
in percent, effective distances +-0.3 (one looser case +-0.35).
"""

import math
import zlib

import numpy as np
import pytest

from erasuresim.estimate import (
    estimate_logical_rate,
    fit_effective_distance,
    fit_threshold,
)
from erasuresim.lattice import Geometry, build_layout
from erasuresim.noise import NoiseParams, PauliModel, SpatialResolution

GENERAL = PauliModel.GENERAL
TAILORED = PauliModel.TAILORED
PERFECT = SpatialResolution.PERFECT
IMPERFECT = SpatialResolution.IMPERFECT

_layouts = {}
_cache = {}


def layout(d, geometry=Geometry.UNROTATED):
    key = (geometry, d)
    if key not in _layouts:
        _layouts[key] = build_layout(geometry, d)
    return _layouts[key]


def _seed(*parts):
    """Stable per-cell seed derived from the cell identity.

    Uses crc32 rather than hash(): string hashing is randomized per
    process, which would re-roll every Monte Carlo cell on each run.
    """
    return zlib.crc32(repr(parts).encode())


def sweep(model, spatial, eta, re_, ds, p_values, shots):
    """Logical rates over a (d, p) grid in basis X, rounds = d."""
    points = []
    for d in ds:
        for p in p_values:
            params = NoiseParams(p=float(p), erasure_fraction=re_,
                                 temporal_resolution=eta, spatial=spatial,
                                 pauli_model=model)
            seed = _seed("sweep", model.value, spatial.value,
                         round(eta, 6), round(re_, 6), d, round(float(p), 9))
            points.append(estimate_logical_rate(layout(d), params, d,
                                                shots, seed))
    return points


def threshold(model, spatial, eta, re_, p_lo, p_hi,
              ds=(5, 7, 9), n_p=9, shots=15000):
    key = ("p_th", model.value, spatial.value, eta, re_, p_lo, p_hi, ds,
           n_p, shots)
    if key not in _cache:
        points = sweep(model, spatial, eta, re_, ds,
                       np.linspace(p_lo, p_hi, n_p), shots)
        _cache[key] = fit_threshold(points)
    return _cache[key]


def effective_distance(model, spatial, eta, re_=1.0, d=3,
                       p_values=(0.001, 0.0015, 0.002, 0.003),
                       shots=10_000_000, geometry=Geometry.UNROTATED):
    key = ("d_eff", geometry, model.value, spatial.value, eta, re_, d,
           p_values, shots)
    if key not in _cache:
        points = []
        for p in p_values:
            params = NoiseParams(p=float(p), erasure_fraction=re_,
                                 temporal_resolution=eta, spatial=spatial,
                                 pauli_model=model)
            seed = _seed("deff", geometry.value, model.value, spatial.value,
                         round(eta, 6), round(re_, 6), d, round(float(p), 9))
            points.append(estimate_logical_rate(layout(d, geometry), params,
                                                d, shots, seed))
        _cache[key] = fit_effective_distance(points)
    return _cache[key]


# ---------------------------------------------------------------------------
# 1. Pauli-only threshold
# ---------------------------------------------------------------------------


def test_pauli_only_threshold():
    fit = threshold(GENERAL, IMPERFECT, eta=1.0, re_=0.0,
                    p_lo=0.006, p_hi=0.014, ds=(5, 7, 9, 11), n_p=11,
                    shots=50000)
    assert fit.converged
    assert 0.0085 <= fit.p_th <= 0.0115, fit.report()


# ---------------------------------------------------------------------------
# 2. Perfect-erasure convergence at eta = 1
# ---------------------------------------------------------------------------


def _eta1_fit(model, spatial):
    return threshold(model, spatial, eta=1.0, re_=1.0,
                     p_lo=0.040, p_hi=0.062)


def test_eta1_threshold_value():
    fit = _eta1_fit(GENERAL, IMPERFECT)
    assert fit.converged
    assert fit.p_th == pytest.approx(0.0509, abs=0.004), fit.report()


@pytest.mark.parametrize("other", [(GENERAL, PERFECT), (TAILORED, IMPERFECT)])
def test_eta1_models_indistinguishable(other):
    ref = _eta1_fit(GENERAL, IMPERFECT)
    alt = _eta1_fit(*other)
    assert alt.converged
    # 2-sigma overlap; floor each sigma at 5e-4 so that the comparison
    # is not dominated by an optimistic curve-fit covariance estimate.
    sa = max(ref.p_th_stderr, 5e-4)
    sb = max(alt.p_th_stderr, 5e-4)
    assert abs(ref.p_th - alt.p_th) <= 2.0 * math.hypot(sa, sb), (
        ref.report() + alt.report())


# ---------------------------------------------------------------------------
# 3. eta = 0 threshold ordering and values
# ---------------------------------------------------------------------------

ETA0_CASES = [
    (GENERAL, IMPERFECT, 0.0259, 0.020, 0.034),
    (GENERAL, PERFECT, 0.0296, 0.022, 0.037),
    (TAILORED, IMPERFECT, 0.0349, 0.027, 0.042),
    (TAILORED, PERFECT, 0.0487, 0.040, 0.057),
]


@pytest.mark.parametrize("model,spatial,target,p_lo,p_hi", ETA0_CASES,
                         ids=["gen-imp", "gen-perf", "tail-imp", "tail-perf"])
def test_eta0_threshold_values(model, spatial, target, p_lo, p_hi):
    fit = threshold(model, spatial, eta=0.0, re_=1.0, p_lo=p_lo, p_hi=p_hi)
    assert fit.converged
    assert fit.p_th == pytest.approx(target, abs=0.0035), fit.report()


def test_eta0_threshold_strict_ordering():
    values = [threshold(model, spatial, eta=0.0, re_=1.0,
                        p_lo=p_lo, p_hi=p_hi).p_th
              for model, spatial, _, p_lo, p_hi in ETA0_CASES]
    assert values == sorted(values)
    assert len(set(values)) == 4


# ---------------------------------------------------------------------------
# 4. Effective distance at d = 3, R_e = 1
# ---------------------------------------------------------------------------

# Cells whose logical rate is small throughout the window (eta=1 and the
# tailored/perfect combinations; p_L ~ p^3 with a small prefactor) use a
# higher-p part of the window and 4e7 shots per point so every point
# carries O(10^2) failures.  The remaining cells have large prefactors
# (p_L ~ p^2, or imperfect checks resetting both gate qubits) and keep
# 1e7 shots at the low end of the window.
LOW_P = (0.001, 0.0015, 0.002, 0.003)
HIGH_P = (0.0015, 0.002, 0.003, 0.0045)

DEFF_CASES = [
    (TAILORED, IMPERFECT, 0.0, 3.0, LOW_P, 20_000_000),
    (TAILORED, IMPERFECT, 0.5, 3.0, HIGH_P, 40_000_000),
    (TAILORED, IMPERFECT, 1.0, 3.0, HIGH_P, 40_000_000),
    (TAILORED, PERFECT, 0.0, 3.0, HIGH_P, 40_000_000),
    (TAILORED, PERFECT, 0.5, 3.0, HIGH_P, 40_000_000),
    (TAILORED, PERFECT, 1.0, 3.0, HIGH_P, 40_000_000),
    (GENERAL, IMPERFECT, 0.0, 2.0, LOW_P, 10_000_000),
    (GENERAL, PERFECT, 0.0, 2.0, LOW_P, 10_000_000),
    (GENERAL, IMPERFECT, 1.0, 3.0, HIGH_P, 40_000_000),
]


@pytest.mark.parametrize(
    "model,spatial,eta,target,p_values,shots", DEFF_CASES,
    ids=[f"{m.value}-{s.value}-eta{eta:g}" for m, s, eta, *_ in DEFF_CASES])
def test_effective_distance_d3(model, spatial, eta, target, p_values, shots):
    fit = effective_distance(model, spatial, eta, p_values=p_values,
                             shots=shots)
    assert fit.d_eff == pytest.approx(target, abs=0.3), fit.report()


# ---------------------------------------------------------------------------
# 5. High-but-imperfect checks spot check
# ---------------------------------------------------------------------------


def test_spot_check_effective_distance():
    fit = effective_distance(TAILORED, IMPERFECT, eta=0.986, re_=0.98)
    assert fit.d_eff == pytest.approx(2.38, abs=0.35), fit.report()


def test_spot_check_threshold():
    fit = threshold(TAILORED, IMPERFECT, eta=0.986, re_=0.98,
                    p_lo=0.034, p_hi=0.050)
    assert fit.converged
    assert fit.p_th == pytest.approx(0.0423, abs=0.004), fit.report()


# ---------------------------------------------------------------------------
# 6. Effective-distance size scaling
# ---------------------------------------------------------------------------


def test_size_scaling_d3():
    fit = effective_distance(GENERAL, IMPERFECT, eta=0.0)
    assert fit.d_eff == pytest.approx(2.0, abs=0.3), fit.report()


def test_size_scaling_d5():
    fit = effective_distance(GENERAL, IMPERFECT, eta=0.0, d=5,
                             p_values=(0.002, 0.003, 0.0045))
    assert fit.d_eff == pytest.approx(3.0, abs=0.3), fit.report()


# ---------------------------------------------------------------------------
# 7. Exact calculators
# ---------------------------------------------------------------------------


def test_exact_calculators():
    from erasuresim.hardware import (
        DeviceTimes,
        UnitCell,
        builtin_eta,
        distance_gain,
        savings_percent,
        transmon_savings,
    )

    eta = builtin_eta(DeviceTimes(t1_us=30.0, t_phi_us=25.0,
                                  kappa_per_us=0.001))
    assert eta == pytest.approx(0.9867, abs=0.0005)
    assert distance_gain(UnitCell(3), UnitCell(5)) == pytest.approx(1.549, rel=1e-3)
    assert distance_gain(UnitCell(1), UnitCell(3)) == pytest.approx(1.155, rel=1e-3)
    assert distance_gain(UnitCell(3), UnitCell(3.5)) == pytest.approx(1.852, rel=1e-3)
    assert transmon_savings(UnitCell(3), UnitCell(3.5)) == pytest.approx(3.43, rel=1e-3)
    assert savings_percent(UnitCell(3), UnitCell(3.5)) == pytest.approx(29.0, abs=1.0)
    assert transmon_savings(UnitCell(3), UnitCell(5)) == pytest.approx(2.4, rel=1e-3)
    assert savings_percent(UnitCell(3), UnitCell(5)) == pytest.approx(41.0, abs=1.0)


# ---------------------------------------------------------------------------
# 8. Property suite
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("model", [GENERAL, TAILORED], ids=lambda m: m.value)
@pytest.mark.parametrize("spatial", [PERFECT, IMPERFECT], ids=lambda s: s.value)
def test_8a_exhaustive_single_faults(model, spatial):
    from erasuresim.exhaustive import enumerate_single_faults

    params = NoiseParams(p=0.01, erasure_fraction=1.0,
                         temporal_resolution=0.5, spatial=spatial,
                         pauli_model=model)
    report = enumerate_single_faults(layout(3), params, rounds=3)
    assert report.n_cases > 1000
    assert report.n_failures == 0
    assert report.n_decode_errors == 0


def test_8b_correction_syndrome_consistency_1e6():
    params = NoiseParams(p=0.02, erasure_fraction=0.6,
                         temporal_resolution=0.7, spatial=IMPERFECT,
                         pauli_model=GENERAL)
    pt = estimate_logical_rate(layout(3), params, 3, 1_000_000, 2026)
    assert pt.decode_errors == 0


def test_8c_clifford_symplectic_oracle():
    from erasuresim.lattice import GateKind
    from test_sim import test_clifford_matches_symplectic_oracle as check

    for gate_kind in (GateKind.CX, GateKind.CZ):
        for pc in "IXYZ":
            for pt in "IXYZ":
                check(gate_kind, pc, pt)


def test_8d_eta1_overlay_equality():
    from test_dgraph import test_eta1_model_equivalence as check

    check()


def test_8e_schedule_calibration_properties():
    import test_lattice as tl

    tl.test_calibration_unrotated_general_z_support_reduced()
    tl.test_calibration_unrotated_x_support_preserved()
    tl.test_calibration_unrotated_tailored_z_support_preserved()
    tl.test_calibration_rotated_tailored_both_supports_preserved()


def test_8f_worker_count_determinism(tmp_path):
    from click.testing import CliRunner

    import yaml
    from erasuresim.cli import main

    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(yaml.safe_dump({
        "geometry": "unrotated", "d": [3, 5], "basis": ["X", "Z"],
        "model": "tailored", "spatial": "imperfect", "R_e": 0.9,
        "eta": 0.8, "p": [0.01, 0.02], "shots": 4000, "master_seed": 11,
    }))
    outputs = []
    for workers in (1, 8):
        out = tmp_path / f"w{workers}.csv"
        result = CliRunner().invoke(main, [
            "sweep", "--config", str(cfg), "--workers", str(workers),
            "--out", str(out)])
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
