"""Monte Carlo logical-failure-rate estimation and fits.

* ``estimate_logical_rate`` runs seeded shots through the simulator,
  flag overlay, and union-find decoder and aggregates failures.
* ``fit_threshold`` extracts the threshold from a (p, d) sweep via the
  quadratic finite-size-scaling ansatz
  p_L = A + B*x + C*x**2, x = (p - p_th) * d**(1/nu).
* ``fit_effective_distance`` extracts the sub-threshold scaling
  exponent d_eff from the slope of log p_L vs log p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import curve_fit

from .dgraph import get_graph_set
from .kernels import mc_run
from .lattice import CodeLayout
from .noise import NoiseParams
from .sim import circuit_tuple, empty_tape_tuple, get_circuit, params_tuple

CSV_COLUMNS = ["model", "spatial", "R_e", "eta", "d", "basis", "p", "rounds",
               "shots", "failures", "p_L", "stderr"]


class InsufficientDataError(ValueError):
    """Not enough usable points for the requested fit."""


@dataclass(frozen=True)
class RatePoint:
    params: NoiseParams
    d: int
    basis: str
    rounds: int
    shots: int
    failures: int
    decode_errors: int = 0

    @property
    def p(self) -> float:
        return self.params.p

    @property
    def p_L(self) -> float:
        return self.failures / self.shots

    @property
    def stderr(self) -> float:
        pl = self.p_L
        return math.sqrt(pl * (1.0 - pl) / self.shots)

    def csv_row(self) -> List[str]:
        pr = self.params
        return [pr.pauli_model.value, pr.spatial.value,
                f"{pr.erasure_fraction:g}", f"{pr.temporal_resolution:g}",
                str(self.d), self.basis, f"{pr.p:.10g}", str(self.rounds),
                str(self.shots), str(self.failures), f"{self.p_L:.10g}",
                f"{self.stderr:.10g}"]


@dataclass
class ThresholdFit:
    p_th: float
    nu: float
    A: float
    B: float
    C: float
    p_th_stderr: float
    covariance: np.ndarray
    chi2_per_dof: float
    converged: bool

    def report(self) -> str:
        lines = [f"p_th = {self.p_th:.6g}",
                 f"p_th_stderr = {self.p_th_stderr:.3g}",
                 f"nu = {self.nu:.4g}",
                 f"A = {self.A:.6g}", f"B = {self.B:.6g}", f"C = {self.C:.6g}",
                 f"chi2_per_dof = {self.chi2_per_dof:.4g}",
                 f"converged = {str(self.converged).lower()}"]
        return "\n".join(lines) + "\n"


@dataclass
class DistanceFit:
    d_eff: float
    intercept: float
    stderr: float
    n_points: int

    def report(self) -> str:
        return (f"d_eff = {self.d_eff:.6g}\n"
                f"d_eff_stderr = {self.stderr:.3g}\n"
                f"intercept = {self.intercept:.6g}\n"
                f"n_points = {self.n_points}\n")


def estimate_logical_rate(layout: CodeLayout, params: NoiseParams, rounds: int,
                          shots: int, seed: int, basis: str = "X") -> RatePoint:
    """Monte Carlo estimate of the logical failure rate in one basis.

    Basis "X" tracks the logical X readout (flipped by Z-type residual
    errors, decoded over X-stabilizer detectors); basis "Z" the logical
    Z readout.  Shots are seeded per index from ``seed`` and are
    scheduling-independent.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    d = layout.distance
    if params.p == 0.0:
        return RatePoint(params, d, basis, rounds, shots, 0)
    cc = get_circuit(layout, rounds)
    gs = get_graph_set(layout, rounds, params)
    graph = gs.graph(basis, params.p, params.erasure_fraction)
    p, re_, eta, imperfect, tailored = params_tuple(params)
    failures, bad = mc_run(circuit_tuple(cc), graph.as_tuple(),
                           graph.tables_tuple(), p, re_, eta, imperfect,
                           tailored, basis == "X", shots, np.uint64(seed),
                           empty_tape_tuple())
    return RatePoint(params, d, basis, rounds, shots, int(failures), int(bad))


def _crossing_seed(points: Sequence[RatePoint]) -> float:
    """Initial p_th guess: crossing of the two largest-d curves."""
    ds = sorted({pt.d for pt in points}, reverse=True)
    d1, d2 = ds[0], ds[1]
    c1 = sorted((pt.p, pt.p_L) for pt in points if pt.d == d1)
    c2 = sorted((pt.p, pt.p_L) for pt in points if pt.d == d2)
    common = sorted(set(p for p, _ in c1) & set(p for p, _ in c2))
    prev = None
    for p in common:
        y1 = dict(c1)[p]
        y2 = dict(c2)[p]
        if y1 == 0.0 and y2 == 0.0:
            continue  # deep sub-threshold, no crossing information
        diff = y1 - y2
        if prev is not None and prev[1] * diff <= 0 and (prev[1] != 0 or diff != 0):
            p0, d0 = prev
            if diff == d0:
                return p
            return p0 + (p - p0) * (0 - d0) / (diff - d0)
        prev = (p, diff)
    return float(np.median([pt.p for pt in points]))


def fit_threshold(points: Sequence[RatePoint]) -> ThresholdFit:
    """Quadratic finite-size-scaling fit over a (p, d) sweep."""
    points = [pt for pt in points if pt.shots > 0]
    ds = sorted({pt.d for pt in points})
    ps = sorted({pt.p for pt in points})
    if len(ds) < 2:
        raise InsufficientDataError("threshold fit needs >= 2 lattice sizes")
    if len(ps) < 4:
        raise InsufficientDataError("threshold fit needs >= 4 p values")

    xp = np.array([pt.p for pt in points])
    xd = np.array([float(pt.d) for pt in points])
    y = np.array([pt.p_L for pt in points])
    sig = np.array([max(pt.stderr, 1e-9) for pt in points])

    def model(X, p_th, nu, A, B, C):
        p, d = X
        x = (p - p_th) * d ** (1.0 / nu)
        return A + B * x + C * x * x

    p0 = [_crossing_seed(points), 1.0, float(np.mean(y)), 1.0, 1.0]
    p0[0] = min(max(p0[0], ps[0]), ps[-1])
    try:
        popt, pcov = curve_fit(
            model, (xp, xd), y, p0=p0, sigma=sig, absolute_sigma=True,
            bounds=([ps[0], 0.2, -1.0, -np.inf, -np.inf],
                    [ps[-1], 5.0, 1.0, np.inf, np.inf]),
            maxfev=20000)
    except (RuntimeError, ValueError):
        return ThresholdFit(float("nan"), float("nan"), float("nan"),
                            float("nan"), float("nan"), float("nan"),
                            np.full((5, 5), np.nan), float("nan"), False)
    resid = (model((xp, xd), *popt) - y) / sig
    dof = max(len(points) - 5, 1)
    return ThresholdFit(
        p_th=float(popt[0]), nu=float(popt[1]), A=float(popt[2]),
        B=float(popt[3]), C=float(popt[4]),
        p_th_stderr=float(np.sqrt(max(pcov[0, 0], 0.0))),
        covariance=pcov, chi2_per_dof=float(np.sum(resid ** 2) / dof),
        converged=bool(np.isfinite(pcov[0, 0])))


def fit_effective_distance(points: Sequence[RatePoint],
                           p_th: Optional[float] = None,
                           p_fraction: float = 0.1) -> DistanceFit:
    """OLS slope of log p_L vs log p over sub-threshold points.

    Points with zero observed failures are excluded; when ``p_th`` is
    given, only points with p <= p_fraction * p_th enter the fit.
    """
    usable = [pt for pt in points if pt.failures > 0]
    if p_th is not None:
        usable = [pt for pt in usable if pt.p <= p_fraction * p_th + 1e-15]
    if len(usable) < 3:
        raise InsufficientDataError(
            f"distance fit needs >= 3 nonzero sub-threshold points, have {len(usable)}")
    lx = np.array([math.log(pt.p) for pt in usable])
    ly = np.array([math.log(pt.p_L) for pt in usable])
    n = len(usable)
    mx, my = lx.mean(), ly.mean()
    sxx = float(np.sum((lx - mx) ** 2))
    slope = float(np.sum((lx - mx) * (ly - my)) / sxx)
    intercept = my - slope * mx
    resid = ly - (intercept + slope * lx)
    if n > 2:
        s2 = float(np.sum(resid ** 2) / (n - 2))
        stderr = math.sqrt(s2 / sxx)
    else:
        stderr = 0.0
    return DistanceFit(d_eff=slope, intercept=intercept, stderr=stderr,
                       n_points=n)


def synthesize_threshold_points(A: float, B: float, C: float, p_th: float,
                                nu: float, d_list: Iterable[int],
                                p_list: Iterable[float], shots: int,
                                seed: int) -> List[RatePoint]:
    """Generate binomially noised points from the scaling ansatz, for
    fit-recovery tests and the fit subcommand's self-check."""
    rng = np.random.default_rng(seed)
    out = []
    for d in d_list:
        for p in p_list:
            x = (p - p_th) * d ** (1.0 / nu)
            pl = min(max(A + B * x + C * x * x, 1e-9), 1.0)
            fails = int(rng.binomial(shots, pl))
            out.append(RatePoint(NoiseParams(p=p), int(d), "X", int(d),
                                 shots, fails))
    return out
