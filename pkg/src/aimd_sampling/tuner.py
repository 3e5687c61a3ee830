"""Grid search over controller thresholds under worst-case feasibility."""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernel
from .controller import INCREASE_STEP, K_MIN, TuningParams
from .energy import DEFAULT_PROFILE, SECONDS_PER_DAY, DeviceEnergyProfile
from .traces import HarvestTrace

REPORT_HEADER = ["beta1", "beta2", "gamma", "feasible", "J_total"]
GRID_DECIMALS = 9


class NoFeasibleParameters(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linear ranges; ``steps`` points per axis."""

    beta1_range: tuple[float, float] = (-1.0, 0.0)
    beta2_range: tuple[float, float] = (0.0, 1.0)
    gamma_range: tuple[float, float] = (0.5, 1.0)
    steps: tuple[int, int, int] = (21, 21, 11)

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ranges = (self.beta1_range, self.beta2_range, self.gamma_range)
        out = []
        for (lo, hi), n in zip(ranges, self.steps):
            if n < 1 or lo > hi:
                raise ValueError(f"empty grid axis {lo}..{hi} x {n}")
            out.append(np.round(np.linspace(lo, hi, n) if n > 1 else np.array([lo]), GRID_DECIMALS))
        return tuple(out)

    def points(self) -> list[tuple[float, float, float]]:
        b1s, b2s, gs = self.axes()
        return [(float(b1), float(b2), float(g))
                for b1, b2, g in itertools.product(b1s, b2s, gs)
                if b1 < b2 and 0.0 < g <= 1.0]


@dataclass(frozen=True)
class ParamEvaluation:
    params: TuningParams
    feasible: bool
    J_total: int
    J_per_trace: tuple[int, ...]


@dataclass(frozen=True)
class GridResult:
    best: TuningParams
    J: int
    report: list[ParamEvaluation]


def _pack(traces):
    if not traces:
        raise ValueError("need at least one trace")
    lengths = [len(t) for t in traces]
    offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    harvest = np.ascontiguousarray(np.concatenate([t.daily_energy for t in traces]), dtype=np.float64)
    return harvest, offsets


def _evaluate_block(harvest, offsets, rows, profile, b0, k_min, step, backend):
    impl = kernel.get_impl(backend)
    return impl.evaluate_many(
        harvest, offsets, np.ascontiguousarray(rows, dtype=np.float64),
        profile.idle_power * SECONDS_PER_DAY, profile.energy_per_localization,
        profile.battery_energy, profile.battery_floor, float(b0), int(k_min), int(step), 0)


def evaluate_params(params: TuningParams, traces: list[HarvestTrace],
                    profile: DeviceEnergyProfile = DEFAULT_PROFILE, b0: float = 1.0,
                    k_min: int = K_MIN, increase_step: int = INCREASE_STEP,
                    years: int = 1) -> ParamEvaluation:
    """Score one parameter set on every trace (full runs, no early stop)."""
    from .simulator import run_simulation

    results = [run_simulation(t, profile, params, b0, k_min, increase_step, years=years)
               for t in traces]
    if not results:
        raise ValueError("need at least one trace")
    per = tuple(r.total_localizations for r in results)
    return ParamEvaluation(params, all(r.feasible for r in results), sum(per), per)


def grid_search(grid: GridSpec, traces: list[HarvestTrace],
                profile: DeviceEnergyProfile = DEFAULT_PROFILE, b0: float = 1.0,
                k_min: int = K_MIN, increase_step: int = INCREASE_STEP,
                metric_scale_B: float = 3.0, years: int = 1, workers: int = 1,
                backend: str | None = None) -> GridResult:
    """Find the grid point with the most localizations that is feasible on all traces.

    Ties on J go to the lexicographically smallest (beta1, beta2, gamma).
    Report rows for infeasible points carry the partial J accumulated up to
    the first failing trace.

    Raises:
        NoFeasibleParameters: no grid point keeps every trace above the floor.
    """
    points = grid.points()
    if not points:
        raise ValueError("grid contains no valid (beta1 < beta2) points")
    harvest, offsets = _pack([t.repeat(years) for t in traces])
    rows = np.array([(b1, b2, g, metric_scale_B) for b1, b2, g in points], dtype=np.float64)
    backend = backend or kernel.BACKEND

    if workers > 1 and len(rows) > workers:
        chunks = np.array_split(rows, workers)
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_evaluate_block, *zip(*[
                (harvest, offsets, c, profile, b0, k_min, increase_step, backend) for c in chunks])))
        feas = np.concatenate([p[0] for p in parts])
        totals = np.concatenate([p[1] for p in parts])
    else:
        feas, totals = _evaluate_block(harvest, offsets, rows, profile, b0, k_min,
                                       increase_step, backend)

    report = []
    for i, (b1, b2, g) in enumerate(points):
        per = tuple(int(x) for x in totals[i])
        report.append(ParamEvaluation(TuningParams(b1, b2, g, metric_scale_B),
                                      bool(feas[i].all()), sum(per), per))
    best = select_best(report)
    return GridResult(best.params, best.J_total, report)


def select_best(report: list[ParamEvaluation]) -> ParamEvaluation:
    """Feasible entry with maximal J; ties go to the smallest (beta1, beta2, gamma)."""
    feasible = [ev for ev in report if ev.feasible]
    if not feasible:
        raise NoFeasibleParameters("no feasible parameters in grid")
    return min(feasible, key=lambda ev: (-ev.J_total, round(ev.params.beta1, GRID_DECIMALS),
                                         round(ev.params.beta2, GRID_DECIMALS),
                                         round(ev.params.gamma, GRID_DECIMALS)))


def write_report_csv(report: list[ParamEvaluation], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_HEADER)
        for ev in report:
            p = ev.params
            w.writerow([repr(p.beta1), repr(p.beta2), repr(p.gamma), int(ev.feasible), ev.J_total])
