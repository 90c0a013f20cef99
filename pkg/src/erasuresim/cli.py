"""Command-line interface: sweeps, fits, hardware calculators, and the
exhaustive fault-enumeration oracle.

Exit codes: 0 success, 2 configuration error, 3 fit failure.  Progress
and logging go to stderr; data only to the output file (or stdout for
fit reports and tables).
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
import yaml

from . import __version__
from .estimate import (CSV_COLUMNS, InsufficientDataError, RatePoint,
                       estimate_logical_rate, fit_effective_distance,
                       fit_threshold)
from .exhaustive import enumerate_single_faults
from .hardware import (ERASURE_CELL_DUAL_RAIL, ERASURE_CELL_SHARED,
                       PAULI_CELL, DeviceTimes, UnitCell, accounting_table,
                       builtin_eta, distance_gain, savings_percent,
                       transmon_savings)
from .lattice import Geometry, build_layout
from .noise import NoiseParams, PauliModel, SpatialResolution

EXIT_CONFIG = 2
EXIT_FIT = 3

FULL_COLUMNS = CSV_COLUMNS + ["config_hash", "version"]


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    geometry: Geometry = Geometry.UNROTATED
    d: List[int] = field(default_factory=lambda: [3])
    rounds: Optional[int] = None          # default: d noisy rounds
    basis: List[str] = field(default_factory=lambda: ["X"])
    model: PauliModel = PauliModel.GENERAL
    spatial: SpatialResolution = SpatialResolution.IMPERFECT
    R_e: float = 1.0
    eta: float = 1.0
    p: List[float] = field(default_factory=list)
    shots: int = 10000
    master_seed: int = 1
    p_fraction: float = 0.1
    halve_imperfect_weak: bool = False
    out: Optional[str] = None

    def validate(self) -> None:
        if not self.p:
            raise ConfigError("config needs a non-empty p list")
        for p in self.p:
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"p={p} outside [0,1]")
        for name, v in (("R_e", self.R_e), ("eta", self.eta),
                        ("p_fraction", self.p_fraction)):
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name}={v} outside [0,1]")
        for d in self.d:
            if d < 3 or d % 2 == 0:
                raise ConfigError(f"d={d} must be odd and >= 3")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        for b in self.basis:
            if b not in ("X", "Z"):
                raise ConfigError(f"basis {b!r} must be X or Z")

    def noise_params(self, p: float) -> NoiseParams:
        return NoiseParams(p=p, erasure_fraction=self.R_e,
                           temporal_resolution=self.eta, spatial=self.spatial,
                           pauli_model=self.model,
                           halve_imperfect_weak=self.halve_imperfect_weak)

    def canonical(self) -> dict:
        return {
            "geometry": self.geometry.value, "d": list(self.d),
            "rounds": self.rounds, "basis": list(self.basis),
            "model": self.model.value, "spatial": self.spatial.value,
            "R_e": self.R_e, "eta": self.eta, "p": list(self.p),
            "shots": self.shots, "master_seed": self.master_seed,
            "p_fraction": self.p_fraction,
            "halve_imperfect_weak": self.halve_imperfect_weak,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def load_config(path: str) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except Exception as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    cfg = ExperimentConfig()
    converters = {
        "geometry": Geometry, "model": PauliModel,
        "spatial": SpatialResolution,
    }
    for key, value in raw.items():
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown config key {key!r}")
        if key in converters:
            try:
                value = converters[key](value)
            except ValueError:
                raise ConfigError(f"bad value {value!r} for {key}")
        setattr(cfg, key, value)
    if isinstance(cfg.d, int):
        cfg.d = [cfg.d]
    if isinstance(cfg.p, (int, float)):
        cfg.p = [float(cfg.p)]
    if isinstance(cfg.basis, str):
        cfg.basis = [cfg.basis]
    cfg.validate()
    return cfg


def _cell_seed(master_seed: int, cell_key: tuple) -> int:
    blob = json.dumps([master_seed, list(map(str, cell_key))]).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:7], "big")


def run_sweep(cfg: ExperimentConfig, out_path: str, log=None) -> List[RatePoint]:
    """Run all (d, basis, p) cells and write canonical-order CSV rows.

    Output depends only on (config, master_seed), not on worker count.
    """
    chash = cfg.config_hash()
    cells = sorted(
        (d, b, p) for d in cfg.d for b in cfg.basis for p in cfg.p)
    points = []
    wrote = 0
    fh = open(out_path, "w", newline="")
    try:
        writer = csv.writer(fh)
        writer.writerow(FULL_COLUMNS)
        for d, basis, p in cells:
            rounds = cfg.rounds if cfg.rounds is not None else d
            params = cfg.noise_params(p)
            key = (cfg.model.value, cfg.spatial.value, cfg.R_e, cfg.eta, d,
                   basis, p, rounds)
            seed = _cell_seed(cfg.master_seed, key)
            if log:
                log(f"cell d={d} basis={basis} p={p:g} shots={cfg.shots}")
            layout = build_layout(cfg.geometry, d)
            pt = estimate_logical_rate(layout, params, rounds, cfg.shots,
                                       seed, basis)
            points.append(pt)
            writer.writerow(pt.csv_row() + [chash, __version__])
            fh.flush()
            wrote += 1
    except BaseException:
        fh.write(f"# TRUNCATED after {wrote} of {len(cells)} cells\n")
        raise
    finally:
        fh.close()
    return points


def read_points(path: str) -> List[RatePoint]:
    points = []
    with open(path, newline="") as fh:
        reader = csv.reader(row for row in fh if not row.startswith("#"))
        header = next(reader, None)
        if header is None or header[:len(CSV_COLUMNS)] != CSV_COLUMNS:
            raise ConfigError(f"CSV schema mismatch in {path}")
        for row in reader:
            params = NoiseParams(
                p=float(row[6]), erasure_fraction=float(row[2]),
                temporal_resolution=float(row[3]),
                spatial=SpatialResolution(row[1]),
                pauli_model=PauliModel(row[0]))
            points.append(RatePoint(params, int(row[4]), row[5],
                                    int(row[7]), int(row[8]), int(row[9])))
    return points


def _apply_filters(points, model, spatial, re_, eta, basis, d):
    out = []
    for pt in points:
        pr = pt.params
        if model and pr.pauli_model.value != model:
            continue
        if spatial and pr.spatial.value != spatial:
            continue
        if re_ is not None and pr.erasure_fraction != re_:
            continue
        if eta is not None and pr.temporal_resolution != eta:
            continue
        if basis and pt.basis != basis:
            continue
        if d is not None and pt.d != d:
            continue
        out.append(pt)
    return out


def _log(msg: str) -> None:
    click.echo(msg, err=True)


_filter_options = [
    click.option("--model", type=click.Choice(["general", "tailored"]),
                 default=None, help="filter rows by Pauli model"),
    click.option("--spatial", type=click.Choice(["perfect", "imperfect"]),
                 default=None, help="filter rows by spatial resolution"),
    click.option("--r-e", "re_", type=float, default=None,
                 help="filter rows by erasure fraction"),
    click.option("--eta", type=float, default=None,
                 help="filter rows by temporal resolution"),
    click.option("--basis", type=click.Choice(["X", "Z"]), default=None,
                 help="filter rows by syndrome basis"),
]


def _add_options(opts):
    def wrap(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn
    return wrap


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Surface-code memory simulations under erasure noise with
    imperfect erasure checks."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="override master seed")
@click.option("--workers", type=int, default=None,
              help="shot-parallel worker threads")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default=None, help="output CSV (overrides config)")
def sweep(config_path, seed, workers, out_path):
    """Run a Monte Carlo sweep over (d, basis, p) cells."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        sys.exit(EXIT_CONFIG)
    if seed is not None:
        cfg.master_seed = seed
    out = out_path or cfg.out
    if not out:
        _log("config error: no output path (--out or config 'out')")
        sys.exit(EXIT_CONFIG)
    if workers is not None:
        if workers < 1:
            _log("config error: workers must be >= 1")
            sys.exit(EXIT_CONFIG)
        import numba
        # Shot results are seeded per shot index, so worker count never
        # changes the output; clamp to the threads actually available.
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
    run_sweep(cfg, out, log=_log)
    _log(f"wrote {out}")


@main.command("fit-threshold")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@_add_options(_filter_options)
def fit_threshold_cmd(csv_path, model, spatial, re_, eta, basis):
    """Fit the finite-size-scaling threshold from sweep CSV rows."""
    try:
        points = _apply_filters(read_points(csv_path), model, spatial, re_,
                                eta, basis, None)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        sys.exit(EXIT_CONFIG)
    try:
        fit = fit_threshold(points)
    except InsufficientDataError as exc:
        _log(f"fit failure: {exc}")
        sys.exit(EXIT_FIT)
    click.echo(fit.report(), nl=False)
    if not fit.converged:
        _log("fit failure: threshold fit did not converge")
        sys.exit(EXIT_FIT)


@main.command("fit-distance")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@_add_options(_filter_options)
@click.option("--d", type=int, default=None, help="lattice size to fit")
@click.option("--p-th", type=float, default=None,
              help="threshold for the sub-threshold cut")
@click.option("--p-fraction", type=float, default=0.1,
              help="keep points with p <= p_fraction * p_th")
def fit_distance_cmd(csv_path, model, spatial, re_, eta, basis, d, p_th,
                     p_fraction):
    """Fit the effective distance from sub-threshold CSV rows."""
    try:
        points = _apply_filters(read_points(csv_path), model, spatial, re_,
                                eta, basis, d)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        sys.exit(EXIT_CONFIG)
    try:
        fit = fit_effective_distance(points, p_th=p_th, p_fraction=p_fraction)
    except InsufficientDataError as exc:
        _log(f"fit failure: {exc}")
        sys.exit(EXIT_FIT)
    click.echo(fit.report(), nl=False)


@main.command()
@click.option("--t1", type=float, default=30.0, help="T1 in µs")
@click.option("--tphi", type=float, default=25.0, help="T_phi in µs")
@click.option("--kappa", type=float, default=None, help="cavity loss in µs^-1")
@click.option("--kappa-ms", type=float, default=1.0,
              help="cavity loss in ms^-1 (used unless --kappa is given)")
@click.option("--pauli-cell", type=float, default=PAULI_CELL.n,
              help="transmon elements per Pauli-architecture unit cell")
def hardware(t1, tphi, kappa, kappa_ms, pauli_cell):
    """Built-in-check temporal resolution and transmon accounting."""
    kappa_us = kappa if kappa is not None else kappa_ms / 1000.0
    try:
        times = DeviceTimes(t1, tphi, kappa_us)
        eta = builtin_eta(times)
        pcell = UnitCell(pauli_cell, "pauli reference")
    except ValueError as exc:
        _log(f"config error: {exc}")
        sys.exit(EXIT_CONFIG)
    click.echo(f"builtin_eta(T1={t1}us, Tphi={tphi}us, "
               f"kappa={kappa_us}us^-1) = {eta:.4f}")
    click.echo("")
    click.echo(accounting_table(
        pcell, [ERASURE_CELL_DUAL_RAIL, ERASURE_CELL_SHARED]), nl=False)


@main.command("enumerate-faults")
@click.option("--d", type=int, default=3)
@click.option("--geometry", type=click.Choice(["unrotated", "rotated"]),
              default="unrotated")
@click.option("--eta", type=float, default=0.5,
              help="temporal resolution (0<eta<1 exercises both timings)")
@click.option("--r-e", "re_", type=float, default=0.5)
@click.option("--p", type=float, default=0.01)
def enumerate_faults(d, geometry, eta, re_, p):
    """Exhaustively decode every single fault; reports failures."""
    layout = build_layout(Geometry(geometry), d)
    any_bad = False
    for model in PauliModel:
        for spatial in SpatialResolution:
            params = NoiseParams(p=p, erasure_fraction=re_,
                                 temporal_resolution=eta, spatial=spatial,
                                 pauli_model=model)
            res = enumerate_single_faults(layout, params)
            status = "ok" if res.ok else "FAIL"
            click.echo(f"{model.value:8s} {spatial.value:9s} "
                       f"cases={res.n_cases} failures={res.n_failures} "
                       f"decode_errors={res.n_decode_errors} {status}")
            for case in res.failing_cases:
                _log(f"  failing: {case}")
            any_bad |= not res.ok
    if any_bad:
        sys.exit(1)


if __name__ == "__main__":
    main()
