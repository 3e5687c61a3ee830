"""Clairvoyant finite-horizon optimum of hourly localization rates.

The horizon is cyclic: the battery must end where it started. With hourly
harvest ``h``, idle energy ``c`` per hour and energy ``q`` per fix, the linear
program is::

    maximize    sum(r)
    subject to  e[i+1] = e[i] + h[i] - c - q*r[i] - s[i]
                floor*E <= e[i] <= E,  s[i] >= 0,  r[i] >= r_min,  e[T] = e[0]

Summing the dynamics over the cycle gives ``q*sum(r) = sum(h) - T*c - sum(s)``,
so an optimum never spills: any spill can be consumed as extra fixes along the
same battery path. The problem then reduces to feasibility, which is decided
by the highest periodic "fill until full" battery path. ``method="exact"``
uses that O(T) construction; ``method="simplex"`` hands the full LP to the
in-repo tableau solver and is meant for short horizons.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..energy import DEFAULT_PROFILE, DeviceEnergyProfile
from ..traces import HarvestTrace
from .simplex import LPInfeasible, solve_lp

SIMPLEX_MAX_HOURS = 240


@dataclass(frozen=True)
class FhcProblem:
    """LP data in joules, one entry per hour."""

    harvest: np.ndarray
    idle_energy: float
    energy_per_localization: float
    capacity: float
    floor: float
    min_rate: float = 1.0

    @property
    def hours(self) -> int:
        return len(self.harvest)

    @property
    def lower(self) -> float:
        return self.floor * self.capacity

    def net_at_min_rate(self) -> np.ndarray:
        return self.harvest - self.idle_energy - self.energy_per_localization * self.min_rate


@dataclass(frozen=True)
class FhcSolution:
    hourly_rate: np.ndarray
    objective: float
    battery_path: np.ndarray
    spill: np.ndarray
    status: str

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def hourly_problem(trace: HarvestTrace, profile: DeviceEnergyProfile = DEFAULT_PROFILE,
                   floor: float | None = None, horizon_hours: int | None = None,
                   min_hourly_rate: float = 1.0) -> FhcProblem:
    """Spread each day's harvest uniformly over 24 hours.

    The trace is repeated cyclically when the horizon is longer than it.
    """
    hourly = np.repeat(np.asarray(trace.daily_energy, dtype=float) / 24.0, 24)
    horizon = len(hourly) if horizon_hours is None else int(horizon_hours)
    if horizon < 2:
        raise ValueError("horizon must be at least 2 hours")
    if horizon > len(hourly):
        hourly = np.resize(hourly, horizon)
    return FhcProblem(hourly[:horizon].copy(), profile.idle_power * 3600.0,
                      profile.energy_per_localization, profile.battery_energy,
                      profile.battery_floor if floor is None else floor, min_hourly_rate)


def _infeasible(T: int) -> FhcSolution:
    return FhcSolution(np.zeros(0), float("nan"), np.zeros(0), np.zeros(0), "infeasible")


def _solve_exact(p: FhcProblem) -> FhcSolution:
    w = p.net_at_min_rate()
    T = p.hours
    scale = max(p.capacity, float(np.abs(p.harvest).sum()), 1.0)
    if w.sum() < -1e-12 * scale:
        return _infeasible(T)
    # one pass from a full battery lands on the fixed point of the cyclic map
    e = p.capacity
    for wi in w:
        e = min(p.capacity, e + wi)
    path = np.empty(T + 1)
    path[0] = e
    for i, wi in enumerate(w):
        e = min(p.capacity, e + wi)
        path[i + 1] = e
    if path.min() < p.lower - 1e-9 * scale:
        return _infeasible(T)
    path[-1] = path[0]
    extra = path[:-1] + w - path[1:]
    extra = np.maximum(extra, 0.0)
    rate = p.min_rate + extra / p.energy_per_localization
    return FhcSolution(rate, float(rate.sum()), path / p.capacity, np.zeros(T), "optimal")


def fhc_lp_matrices(p: FhcProblem):
    """Equality-form LP over ``x = [r, s, e_0..e_{T-1}]``; ``e_T`` aliases ``e_0``."""
    T = p.hours
    A = np.zeros((T, 3 * T))
    idx = np.arange(T)
    A[idx, idx] = p.energy_per_localization
    A[idx, T + idx] = 1.0
    A[idx, 2 * T + idx] -= 1.0
    A[idx, 2 * T + (idx + 1) % T] += 1.0
    b = p.harvest - p.idle_energy
    c = np.concatenate([-np.ones(T), np.zeros(2 * T)])
    lb = np.concatenate([np.full(T, p.min_rate), np.zeros(T), np.full(T, p.lower)])
    ub = np.concatenate([np.full(2 * T, np.inf), np.full(T, p.capacity)])
    return c, A, b, lb, ub


def _solve_simplex(p: FhcProblem) -> FhcSolution:
    T = p.hours
    c, A, b, lb, ub = fhc_lp_matrices(p)
    try:
        res = solve_lp(c, A_eq=A, b_eq=b, lb=lb, ub=ub)
    except LPInfeasible:
        return _infeasible(T)
    r, s, e = res.x[:T], res.x[T:2 * T], res.x[2 * T:]
    path = np.append(e, e[0]) / p.capacity
    return FhcSolution(r, float(r.sum()), path, s, "optimal")


def solve_problem(p: FhcProblem, method: str = "auto") -> FhcSolution:
    if method == "auto":
        method = "simplex" if p.hours <= 48 else "exact"
    if method == "exact":
        return _solve_exact(p)
    if method == "simplex":
        if p.hours > SIMPLEX_MAX_HOURS:
            raise ValueError(f"dense simplex limited to {SIMPLEX_MAX_HOURS} hours")
        return _solve_simplex(p)
    raise ValueError(f"unknown method {method!r}")


def solve_fhc(trace: HarvestTrace, profile: DeviceEnergyProfile = DEFAULT_PROFILE,
              floor: float | None = None, horizon_hours: int | None = None,
              min_hourly_rate: float = 1.0, method: str = "auto") -> FhcSolution:
    """Clairvoyant cyclic optimum over the hourly-expanded trace."""
    return solve_problem(hourly_problem(trace, profile, floor, horizon_hours, min_hourly_rate), method)


def residuals(p: FhcProblem, sol: FhcSolution) -> dict[str, float]:
    """Largest constraint violations, in joules (rates in fixes per hour)."""
    e = sol.battery_path * p.capacity
    flow = e[:-1] + p.harvest - p.idle_energy - p.energy_per_localization * sol.hourly_rate - sol.spill
    return {
        "dynamics": float(np.abs(e[1:] - flow).max()),
        "cyclic": float(abs(e[-1] - e[0])),
        "lower": float(max(0.0, (p.lower - e).max())),
        "upper": float(max(0.0, (e - p.capacity).max())),
        "spill": float(max(0.0, (-sol.spill).max())),
        "rate": float(max(0.0, (p.min_rate - sol.hourly_rate).max())),
    }


def fhc_total_localizations(solution: FhcSolution) -> float:
    if not solution.optimal or len(solution.hourly_rate) == 0:
        raise ValueError("no optimal FHC solution")
    return float(np.sum(solution.hourly_rate))


def write_fhc_csv(solution: FhcSolution, path) -> None:
    if not solution.optimal:
        raise ValueError("no optimal FHC solution to write")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["hour", "rate", "battery_frac", "spill_j"])
        for i, (r, s) in enumerate(zip(solution.hourly_rate, solution.spill)):
            w.writerow([i, repr(float(r)), repr(float(solution.battery_path[i])), repr(float(s))])
