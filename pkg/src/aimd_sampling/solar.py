"""Irradiance to harvested-power model.

A one-dimensional ridge regression with an unpenalized intercept, fitted on
calibration pairs of (irradiance W/m^2, harvested power W).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SATURATION_IRRADIANCE = 100.0


@dataclass(frozen=True)
class SolarModel:
    slope: float
    intercept: float
    alpha: float = 0.1

    def save(self, path) -> None:
        Path(path).write_text(
            f"slope={self.slope!r}\nintercept={self.intercept!r}\nalpha={self.alpha!r}\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path) -> "SolarModel":
        values = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            values[key.strip()] = float(val)
        missing = {"slope", "intercept"} - values.keys()
        if missing:
            raise ValueError(f"{path}: missing keys {sorted(missing)}")
        return cls(values["slope"], values["intercept"], values.get("alpha", 0.1))


@dataclass(frozen=True)
class CalibrationSet:
    irradiance: np.ndarray
    power: np.ndarray

    def __post_init__(self):
        irr = np.asarray(self.irradiance, dtype=float)
        pw = np.asarray(self.power, dtype=float)
        if irr.shape != pw.shape or irr.ndim != 1:
            raise ValueError("irradiance and power must be 1-D arrays of equal length")
        if np.any(irr < 0) or np.any(pw < 0):
            raise ValueError("calibration samples must be non-negative")
        object.__setattr__(self, "irradiance", irr)
        object.__setattr__(self, "power", pw)

    @classmethod
    def from_pairs(cls, pairs) -> "CalibrationSet":
        pairs = list(pairs)
        return cls(np.array([p[0] for p in pairs], dtype=float),
                   np.array([p[1] for p in pairs], dtype=float))

    def __len__(self) -> int:
        return len(self.irradiance)

    def subset(self, idx) -> "CalibrationSet":
        return CalibrationSet(self.irradiance[idx], self.power[idx])


def load_calibration_csv(path, drop_saturated: bool = True,
                         saturation: float = SATURATION_IRRADIANCE) -> CalibrationSet:
    """Read ``irradiance_wm2,power_w`` rows.

    Samples at or above the light sensor's saturation level are dropped unless
    ``drop_saturated`` is False.
    """
    irr, pw = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"irradiance_wm2", "power_w"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected header irradiance_wm2,power_w")
        for row in reader:
            try:
                e, p = float(row["irradiance_wm2"]), float(row["power_w"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{reader.line_num}: malformed row") from None
            if drop_saturated and e >= saturation:
                continue
            irr.append(e)
            pw.append(p)
    if len(irr) < 2:
        raise ValueError(f"{path}: need at least 2 calibration samples")
    return CalibrationSet(np.array(irr), np.array(pw))


def ridge_1d(x: np.ndarray, y: np.ndarray, alpha: float) -> tuple[float, float]:
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise ValueError("singular design: all irradiance values are equal")
    slope = float(dx @ (y - ym)) / (sxx + alpha)
    return slope, float(ym - slope * xm)


def fit_ridge(data: CalibrationSet, alpha: float = 0.1, split_seed: int = 0,
              train_fraction: float = 0.8) -> tuple[SolarModel, CalibrationSet]:
    """Fit on a seeded random train/holdout split.

    Returns the model and the holdout set. ``train_fraction=1.0`` is allowed and
    gives an empty holdout.
    """
    if not 0.0 < train_fraction <= 1.0:
        raise ValueError("train_fraction must lie in (0, 1]")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    n = len(data)
    perm = np.random.default_rng(split_seed).permutation(n)
    n_train = int(round(n * train_fraction))
    if n_train < 2:
        raise ValueError("need at least 2 training samples after the split")
    train, hold = perm[:n_train], perm[n_train:]
    slope, intercept = ridge_1d(data.irradiance[train], data.power[train], alpha)
    return SolarModel(slope, intercept, alpha), data.subset(np.sort(hold))


def predict_power(model: SolarModel, irradiance):
    """Harvested power in watts, clamped at zero. Accepts scalars or arrays."""
    p = np.maximum(0.0, model.slope * np.asarray(irradiance, dtype=float) + model.intercept)
    return float(p) if p.ndim == 0 else p


def evaluate_model(model: SolarModel, holdout: CalibrationSet) -> tuple[float, float]:
    """RMSE and MAE of the model on ``holdout``, in watts."""
    if len(holdout) == 0:
        raise ValueError("empty holdout")
    err = predict_power(model, holdout.irradiance) - holdout.power
    err = np.atleast_1d(err)
    return math.sqrt(float(np.mean(err * err))), float(np.mean(np.abs(err)))
