"""Batch driver: ``qreset <mode> --config path [--field value ...]``.

Every run writes ``<output_path>.csv`` (or ``.json`` for resonance scans) and
``<output_path>.meta.json`` with the config echo, version and run flags. CSV
bodies depend only on the config, never on wall-clock time.

Exit codes: 0 success (including non-converged time series), 1 numerical
abort, 2 config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .ensemble import EvolutionRecord, evolve_until
from .linalg import LinalgError, is_density, matrix_to_json
from .models import GateModel, generator_by_name
from .montecarlo import HistogramComparison, compare_with_exact
from .observables import OBSERVABLES, CorrelationSet
from .poisson import ResonanceReport, resonance_scan, steady_state_solve, weak_reset_limit
from .schedules import OutOfRange, Poisson, ScheduleParseError, parse_schedule

log = logging.getLogger("qreset")

MODES = ("sweep", "timeseries", "resonances", "weaklimit", "montecarlo")
EXIT_NUMERIC, EXIT_CONFIG, EXIT_IO = 1, 2, 3


class ConfigError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass


@dataclass
class RunConfig:
    mode: str = "sweep"
    model: str = "noninteracting"
    schedule: str = "poisson:r=0.5"
    theta: float = math.pi / 4
    theta_grid: tuple = (0.0, math.pi, 200)
    r_grid: tuple = (0.01, 0.99, 200, "linear")
    theta_range: tuple = (0.0, math.pi)
    eps: float = 1e-10
    max_steps: int = 10_000
    observables: list = field(default_factory=lambda: ["magnetization"])
    output_path: str = "qreset_out"
    seed: int = 0
    workers: int = 1
    horizon: int = 3
    samples: int = 1_000_000
    res_tol: float = 1e-9
    emit_states: bool = False

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - names)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def bad(name, why):
            raise ConfigError(f"field '{name}': {why}")

        if self.mode not in MODES:
            bad("mode", f"must be one of {MODES}, got {self.mode!r}")
        try:
            tg = (float(self.theta_grid[0]), float(self.theta_grid[1]), int(self.theta_grid[2]))
        except (TypeError, ValueError, IndexError):
            bad("theta_grid", "expected [min, max, count]")
        if tg[2] < 1:
            bad("theta_grid", "count must be >= 1")
        self.theta_grid = tg
        try:
            rg = list(self.r_grid) + ["linear"] * (4 - len(self.r_grid))
            rg = (float(rg[0]), float(rg[1]), int(rg[2]), str(rg[3]))
        except (TypeError, ValueError, IndexError):
            bad("r_grid", "expected [min, max, count, spacing]")
        if rg[2] < 1:
            bad("r_grid", "count must be >= 1")
        if rg[3] not in ("linear", "log"):
            bad("r_grid", f"spacing must be 'linear' or 'log', got {rg[3]!r}")
        if not (0 < rg[0] <= 1 and 0 < rg[1] <= 1):
            bad("r_grid", "reset probabilities must lie in (0, 1]")
        self.r_grid = rg
        try:
            self.theta_range = (float(self.theta_range[0]), float(self.theta_range[1]))
        except (TypeError, ValueError, IndexError):
            bad("theta_range", "expected [min, max]")
        if not self.eps > 0:
            bad("eps", "must be positive")
        if int(self.max_steps) < 1:
            bad("max_steps", "must be >= 1")
        if int(self.workers) < 1:
            bad("workers", "must be >= 1")
        if int(self.samples) < 1:
            bad("samples", "must be >= 1")
        if int(self.horizon) < 0:
            bad("horizon", "must be >= 0")
        if isinstance(self.observables, str):
            self.observables = [self.observables]
        for name in self.observables:
            if name not in OBSERVABLES:
                bad("observables", f"unknown observable {name!r}; known: {sorted(OBSERVABLES)}")
        try:
            parse_schedule(self.schedule)
        except ScheduleParseError as exc:
            bad("schedule", str(exc))

    def thetas(self) -> np.ndarray:
        lo, hi, n = self.theta_grid
        return np.linspace(lo, hi, n)

    def rates(self) -> np.ndarray:
        lo, hi, n, spacing = self.r_grid
        return np.geomspace(lo, hi, n) if spacing == "log" else np.linspace(lo, hi, n)

    def build_model(self, theta: float | None = None) -> GateModel:
        try:
            h = generator_by_name(self.model)
            return GateModel(h, self.theta if theta is None else theta)
        except FileNotFoundError:
            raise ConfigError(f"field 'model': no such model or matrix file {self.model!r}") from None
        except (LinalgError, KeyError, json.JSONDecodeError) as exc:
            raise ConfigError(f"field 'model': {exc}") from None


@dataclass
class SweepResult:
    rows: list
    metadata: dict

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["theta", "r", *CorrelationSet.FIELDS])
            for theta, r, cs in self.rows:
                w.writerow([_fmt(theta), _fmt(r), *(_fmt(v) for v in cs.values())])


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _checked(rho: np.ndarray, where: str) -> np.ndarray:
    if not is_density(rho, 1e-9):
        raise NumericalError(f"invalid density matrix at {where}")
    return rho


def _sweep_row(generator: np.ndarray, theta: float, rates: np.ndarray) -> list:
    model = GateModel(generator, theta)
    out = []
    for r in rates:
        rho = _checked(steady_state_solve(model, float(r)), f"theta={theta!r}, r={r!r}")
        out.append((float(theta), float(r), CorrelationSet.of(rho)))
    return out


def _metadata(cfg: RunConfig, **extra) -> dict:
    return {
        "config": dataclasses.asdict(cfg),
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        **extra,
    }


def _write_meta(cfg: RunConfig, meta: dict) -> None:
    with open(cfg.output_path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def _prepare_output(cfg: RunConfig) -> None:
    parent = os.path.dirname(cfg.output_path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def run_sweep(cfg: RunConfig, write: bool = True) -> SweepResult:
    """Poissonian steady-state correlations on the (theta, r) grid, theta outer."""
    if not isinstance(parse_schedule(cfg.schedule), Poisson):
        raise ConfigError("field 'schedule': sweep mode needs a Poissonian schedule")
    generator = cfg.build_model().generator
    thetas, rates = cfg.thetas(), cfg.rates()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_sweep_row, [generator] * len(thetas), thetas, [rates] * len(thetas)))
    else:
        chunks = [_sweep_row(generator, th, rates) for th in thetas]
    rows = [row for chunk in chunks for row in chunk]
    result = SweepResult(rows, _metadata(cfg, rows=len(rows)))
    if write:
        _prepare_output(cfg)
        result.to_csv(cfg.output_path + ".csv")
        _write_meta(cfg, result.metadata)
    return result


def run_timeseries(cfg: RunConfig, write: bool = True) -> EvolutionRecord:
    model = cfg.build_model()
    schedule = parse_schedule(cfg.schedule)
    record = evolve_until(model, schedule, cfg.eps, int(cfg.max_steps), cfg.observables)
    if write:
        _prepare_output(cfg)
        record.to_csv(cfg.output_path + ".csv")
        _write_meta(cfg, _metadata(
            cfg,
            converged=record.converged,
            steps_used=record.steps_used,
            final_delta_norm=float(record.delta_norms[-1]),
        ))
    return record


def run_resonances(cfg: RunConfig, write: bool = True) -> ResonanceReport:
    model = cfg.build_model()
    report = resonance_scan(model.spectrum, cfg.theta_range, cfg.res_tol)
    if write:
        payload = report.to_json()
        if cfg.emit_states:
            for entry in payload["resonances"]:
                rho = weak_reset_limit(model.with_theta(entry["theta"]), cfg.res_tol)
                entry["weak_reset_state"] = matrix_to_json(rho)
        _prepare_output(cfg)
        with open(cfg.output_path + ".json", "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        _write_meta(cfg, _metadata(cfg, resonance_count=len(report.resonances)))
    return report


def run_weaklimit(cfg: RunConfig, write: bool = True) -> SweepResult:
    """Weak-reset steady states over the theta grid (r column is 0)."""
    base = cfg.build_model()
    rows, states = [], []
    for th in cfg.thetas():
        rho = _checked(weak_reset_limit(base.with_theta(th), cfg.res_tol), f"theta={th!r}")
        rows.append((float(th), 0.0, CorrelationSet.of(rho)))
        states.append({"theta": float(th), "state": matrix_to_json(rho)})
    result = SweepResult(rows, _metadata(cfg, rows=len(rows)))
    if write:
        _prepare_output(cfg)
        result.to_csv(cfg.output_path + ".csv")
        if cfg.emit_states:
            with open(cfg.output_path + ".states.json", "w") as fh:
                json.dump(states, fh)
        _write_meta(cfg, result.metadata)
    return result


def run_montecarlo(cfg: RunConfig, write: bool = True) -> HistogramComparison:
    schedule = parse_schedule(cfg.schedule)
    table = compare_with_exact(schedule, int(cfg.horizon), int(cfg.samples), int(cfg.seed))
    if write:
        _prepare_output(cfg)
        table.to_csv(cfg.output_path + ".csv")
        _write_meta(cfg, _metadata(cfg, tv_distance=table.tv_distance))
    return table


RUNNERS = {
    "sweep": run_sweep,
    "timeseries": run_timeseries,
    "resonances": run_resonances,
    "weaklimit": run_weaklimit,
    "montecarlo": run_montecarlo,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qreset", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="JSON config file; flags below override its fields")
    p.add_argument("--model")
    p.add_argument("--schedule")
    p.add_argument("--theta", type=float)
    p.add_argument("--theta_grid", nargs=3, metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--r_grid", nargs="+", metavar="MIN MAX COUNT [SPACING]")
    p.add_argument("--theta_range", nargs=2, type=float, metavar=("MIN", "MAX"))
    p.add_argument("--eps", type=float)
    p.add_argument("--max_steps", type=int)
    p.add_argument("--observables", nargs="+")
    p.add_argument("--output_path")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--res_tol", type=float)
    p.add_argument("--emit_states", action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def load_config(path: str | None, overrides: dict) -> RunConfig:
    raw: dict = {}
    if path:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig.from_dict(raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    try:
        cfg = load_config(args.config, overrides)
        result = RUNNERS[cfg.mode](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutOfRange as exc:
        print(f"config error: field 'schedule': {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if isinstance(result, EvolutionRecord):
        print(f"converged={str(result.converged).lower()} steps_used={result.steps_used}")
    elif isinstance(result, HistogramComparison):
        print(f"tv_distance={result.tv_distance:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
