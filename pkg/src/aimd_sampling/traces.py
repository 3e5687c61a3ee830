"""Irradiance and daily-harvest traces: CSV I/O, conversion, synthetic years."""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, field

import numpy as np

from .energy import SECONDS_PER_DAY
from .solar import SolarModel, predict_power


@dataclass(frozen=True)
class IrradianceTrace:
    location_name: str
    timestamps: np.ndarray
    irradiance: np.ndarray
    sample_interval: float

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=float)
        irr = np.asarray(self.irradiance, dtype=float)
        if ts.shape != irr.shape or ts.ndim != 1 or len(ts) == 0:
            raise ValueError("timestamps and irradiance must be equal-length, non-empty 1-D arrays")
        if np.any(irr < 0):
            raise ValueError("irradiance must be >= 0")
        if len(ts) > 1 and not np.allclose(np.diff(ts), self.sample_interval, rtol=0, atol=1e-6):
            raise ValueError("timestamps must be uniformly spaced by sample_interval")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "irradiance", irr)

    def __len__(self) -> int:
        return len(self.irradiance)


@dataclass(frozen=True)
class HarvestTrace:
    """Harvested energy per day, in joules."""

    location_name: str
    daily_energy: np.ndarray
    start_day: dt.date = field(default=dt.date(2000, 1, 1))

    def __post_init__(self):
        e = np.asarray(self.daily_energy, dtype=float)
        if e.ndim != 1 or len(e) == 0:
            raise ValueError("daily_energy must be a non-empty 1-D array")
        if np.any(e < 0) or not np.all(np.isfinite(e)):
            raise ValueError("daily_energy must be finite and >= 0")
        e.setflags(write=False)
        object.__setattr__(self, "daily_energy", e)

    def __len__(self) -> int:
        return len(self.daily_energy)

    def repeat(self, years: int) -> "HarvestTrace":
        """Cyclic repetition of the trace ``years`` times."""
        if years < 1:
            raise ValueError("years must be >= 1")
        if years == 1:
            return self
        return HarvestTrace(self.location_name, np.tile(self.daily_energy, years), self.start_day)

    @property
    def average_power(self) -> np.ndarray:
        return self.daily_energy / SECONDS_PER_DAY


def load_irradiance_csv(path, sample_interval: float | None = None,
                        location_name: str | None = None) -> IrradianceTrace:
    """Parse a ``timestamp_s,irradiance_wm2`` CSV.

    The sample interval is taken from the first two rows when not given.
    """
    ts, irr = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: no samples")
        if [h.strip() for h in header[:2]] != ["timestamp_s", "irradiance_wm2"]:
            raise ValueError(f"{path}:1: expected header timestamp_s,irradiance_wm2")
        for row in reader:
            lineno = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2 or not row[0].strip() or not row[1].strip():
                raise ValueError(f"{path}:{lineno}: missing value")
            try:
                t, e = float(row[0]), float(row[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed row {row!r}") from None
            if not (math.isfinite(t) and math.isfinite(e)):
                raise ValueError(f"{path}:{lineno}: non-finite value")
            if e < 0:
                raise ValueError(f"{path}:{lineno}: negative irradiance {e}")
            if ts:
                step = t - ts[-1]
                expected = sample_interval if sample_interval is not None else (
                    step if len(ts) == 1 else ts[1] - ts[0])
                if step <= 0 or abs(step - expected) > 1e-6:
                    raise ValueError(f"{path}:{lineno}: non-uniform timestamp spacing")
            ts.append(t)
            irr.append(e)
    if not ts:
        raise ValueError(f"{path}: no samples")
    if sample_interval is None:
        if len(ts) < 2:
            raise ValueError(f"{path}: cannot infer sample interval from one sample")
        sample_interval = ts[1] - ts[0]
    name = location_name if location_name is not None else str(path)
    return IrradianceTrace(name, np.array(ts), np.array(irr), float(sample_interval))


def irradiance_to_harvest(trace: IrradianceTrace, model: SolarModel) -> HarvestTrace:
    """Rectangle-rule daily energy; a trailing partial day is dropped."""
    per_day = SECONDS_PER_DAY / trace.sample_interval
    spd = int(round(per_day))
    if abs(per_day - spd) > 1e-9:
        raise ValueError("sample_interval must divide one day evenly")
    days = len(trace) // spd
    if days < 1:
        raise ValueError("trace spans less than one full day")
    power = predict_power(model, trace.irradiance[: days * spd])
    energy = (np.asarray(power).reshape(days, spd) * trace.sample_interval).sum(axis=1)
    start = dt.datetime.fromtimestamp(trace.timestamps[0], tz=dt.timezone.utc).date()
    return HarvestTrace(trace.location_name, energy, start)


def synth_trace(days: int, min_avg_power: float, max_avg_power: float, peak_day: float,
                noise_fraction: float = 0.0, seed: int = 0,
                location_name: str = "synthetic") -> HarvestTrace:
    """Seasonal cosine year with multiplicative uniform daily noise.

    Daily average power swings between ``min_avg_power`` and ``max_avg_power``
    (watts) with a 365-day period peaking on ``peak_day``.
    """
    if days < 1:
        raise ValueError("days must be >= 1")
    if not 0.0 < min_avg_power <= max_avg_power:
        raise ValueError("need 0 < min_avg_power <= max_avg_power")
    if noise_fraction < 0:
        raise ValueError("noise_fraction must be >= 0")
    d = np.arange(days, dtype=float)
    p = min_avg_power + (max_avg_power - min_avg_power) * (1.0 + np.cos(2.0 * np.pi * (d - peak_day) / 365.0)) / 2.0
    noise = np.random.default_rng(seed).uniform(-noise_fraction, noise_fraction, days)
    energy = SECONDS_PER_DAY * np.maximum(0.0, p * (1.0 + noise))
    return HarvestTrace(location_name, energy)


def write_harvest_csv(trace: HarvestTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["day_index", "energy_j"])
        for i, e in enumerate(trace.daily_energy):
            w.writerow([i, repr(float(e))])


def read_harvest_csv(path, location_name: str | None = None) -> HarvestTrace:
    energy = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"day_index", "energy_j"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected header day_index,energy_j")
        for row in reader:
            try:
                day, e = int(row["day_index"]), float(row["energy_j"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{reader.line_num}: malformed row") from None
            if day != len(energy):
                raise ValueError(f"{path}:{reader.line_num}: day_index out of sequence")
            if e < 0:
                raise ValueError(f"{path}:{reader.line_num}: negative energy")
            energy.append(e)
    if not energy:
        raise ValueError(f"{path}: no samples")
    return HarvestTrace(location_name or str(path), np.array(energy))
