"""Energy-aware AIMD sampling-rate control for solar-harvesting trackers."""

from .controller import (DEFAULT_PARAMS, ControllerState, FsmState, MetricValue, TuningParams,
                         compute_metric, controller_step, fsm_step)
from .energy import DEFAULT_PROFILE, DeviceEnergyProfile, apply_day, daily_consumption
from .simulator import SimulationResult, run_simulation
from .solar import CalibrationSet, SolarModel, evaluate_model, fit_ridge, predict_power
from .traces import HarvestTrace, IrradianceTrace, irradiance_to_harvest, synth_trace

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PARAMS", "DEFAULT_PROFILE", "CalibrationSet", "ControllerState",
    "DeviceEnergyProfile", "FsmState", "HarvestTrace", "IrradianceTrace", "MetricValue",
    "SimulationResult", "SolarModel", "TuningParams", "apply_day", "compute_metric",
    "controller_step", "daily_consumption", "evaluate_model", "fit_ridge", "fsm_step",
    "irradiance_to_harvest", "predict_power", "run_simulation", "synth_trace",
]
