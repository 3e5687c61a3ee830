"""Closed-loop simulation of harvest, battery and controller over many days."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernel
from .controller import DEFAULT_PARAMS, INCREASE_STEP, K_MIN, FsmState, TuningParams
from .energy import DEFAULT_PROFILE, SECONDS_PER_DAY, DeviceEnergyProfile, daily_consumption
from .traces import HarvestTrace

RESULT_HEADER = ["day", "harvested_j", "k", "battery_frac", "state", "spilled_j"]


@dataclass(frozen=True)
class SimulationResult:
    """Per-day trajectory plus the feasibility verdict.

    ``k_used[d]`` is the rate applied during day ``d``; ``state[d]`` is the
    FSM state reached at the end of day ``d`` (it sets ``k_used[d + 1]``).
    """

    harvested: np.ndarray
    k_used: np.ndarray
    b_end: np.ndarray
    state: np.ndarray
    spilled: np.ndarray
    feasible: bool
    total_localizations: int
    min_battery: float

    def __len__(self) -> int:
        return len(self.k_used)

    @property
    def days(self) -> np.ndarray:
        return np.arange(len(self.k_used))

    def consumed(self, profile: DeviceEnergyProfile) -> np.ndarray:
        return profile.idle_power * SECONDS_PER_DAY + self.k_used * profile.energy_per_localization

    def records(self):
        """Yield ``(day, harvested, k, b_end, FsmState, spilled)`` tuples."""
        for d in range(len(self)):
            yield (d, float(self.harvested[d]), int(self.k_used[d]), float(self.b_end[d]),
                   FsmState(int(self.state[d])), float(self.spilled[d]))


def run_simulation(trace: HarvestTrace, profile: DeviceEnergyProfile = DEFAULT_PROFILE,
                   params: TuningParams = DEFAULT_PARAMS, b0: float = 1.0,
                   k_min: int = K_MIN, increase_step: int = INCREASE_STEP,
                   k_max: int | None = None, years: int = 1,
                   backend: str | None = None) -> SimulationResult:
    """Simulate the controlled device over ``trace``, repeated ``years`` times.

    Each day the current rate's energy is drawn, the harvest added and the
    battery clipped; the controller then picks the next day's rate. Days that
    end below the battery floor are recorded and make the run infeasible,
    the run itself never stops early.
    """
    if not profile.battery_floor <= b0 <= 1.0:
        raise ValueError(f"b0 must lie in [{profile.battery_floor}, 1], got {b0}")
    if k_min < 1 or increase_step < 1:
        raise ValueError("k_min and increase_step must be positive")
    harvest = np.ascontiguousarray(trace.repeat(years).daily_energy, dtype=np.float64)
    n = len(harvest)
    k_out = np.empty(n, dtype=np.int64)
    b_out = np.empty(n, dtype=np.float64)
    state_out = np.empty(n, dtype=np.int8)
    spill_out = np.empty(n, dtype=np.float64)
    impl = kernel.get_impl(backend)
    feasible, total, min_b = impl.simulate(
        harvest, profile.idle_power * SECONDS_PER_DAY, profile.energy_per_localization,
        profile.battery_energy, profile.battery_floor, float(b0),
        params.beta1, params.beta2, params.gamma, params.metric_scale_B,
        int(k_min), int(increase_step), int(k_max or 0),
        k_out, b_out, state_out, spill_out)
    return SimulationResult(harvest, k_out, b_out, state_out, spill_out,
                            bool(feasible), int(total), float(min_b))


def run_constant_rate(trace: HarvestTrace, k: int, profile: DeviceEnergyProfile = DEFAULT_PROFILE,
                      b0: float = 1.0) -> tuple[bool, float]:
    """Fixed-rate run with the controller disabled. Returns (feasible, min battery)."""
    energy = profile.battery_energy
    consumed = daily_consumption(k, profile)
    b = b0
    min_b = 1.0
    for h in trace.daily_energy:
        b = b + (float(h) - consumed) / energy
        if b > 1.0:
            b = 1.0
        if b < min_b:
            min_b = b
    return min_b >= profile.battery_floor, max(min_b, 0.0)


def write_result_csv(result: SimulationResult, path) -> None:
    if len(result) == 0:
        raise ValueError("refusing to serialize an empty result")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(RESULT_HEADER)
            for d, h, k, b, s, sp in result.records():
                w.writerow([d, repr(h), k, repr(b), s.name.lower(), repr(sp)])
    except OSError as exc:
        raise OSError(f"cannot write simulation result to {path}: {exc}") from exc


def read_result_csv(path) -> list[tuple]:
    """Read back rows written by :func:`write_result_csv`."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULT_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for r in reader:
            rows.append((int(r["day"]), float(r["harvested_j"]), int(r["k"]),
                         float(r["battery_frac"]), FsmState[r["state"].upper()],
                         float(r["spilled_j"])))
    return rows
