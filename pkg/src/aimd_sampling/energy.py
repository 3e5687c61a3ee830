"""Daily energy accounting for the tracker and its battery."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class DeviceEnergyProfile:
    """Power budget of the device.

    Defaults are the measured tracker figures: 5.1 J per GNSS fix, 19 mW
    while idling, a 3000 mAh cell at a 3.8 V system voltage.
    """

    energy_per_localization: float = 5.1
    idle_power: float = 0.019
    battery_capacity: float = 3000.0
    system_voltage: float = 3.8
    battery_floor: float = 0.05

    def __post_init__(self):
        for name in ("energy_per_localization", "idle_power", "battery_capacity", "system_voltage"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not 0.0 < self.battery_floor < 1.0:
            raise ValueError("battery_floor must lie in (0, 1)")

    @property
    def battery_energy(self) -> float:
        """Usable battery energy in joules."""
        return self.battery_capacity / 1000.0 * self.system_voltage * 3600.0

    @property
    def idle_energy_per_day(self) -> float:
        return self.idle_power * SECONDS_PER_DAY


DEFAULT_PROFILE = DeviceEnergyProfile()


class DayOutcome(NamedTuple):
    fraction: float
    spilled: float
    failed: bool


def daily_consumption(k: int, profile: DeviceEnergyProfile) -> float:
    if k < 0:
        raise ValueError("k must be >= 0")
    return profile.idle_power * SECONDS_PER_DAY + k * profile.energy_per_localization


def apply_day(b: float, harvested: float, consumed: float,
              profile: DeviceEnergyProfile) -> DayOutcome:
    """Advance the battery fraction by one day of net energy flow.

    Energy above a full battery is spilled. ``failed`` flags a day ending
    below the battery floor; the fraction is then clipped at zero.
    """
    if harvested < 0 or consumed < 0:
        raise ValueError("harvested and consumed energy must be >= 0")
    energy = profile.battery_energy
    nb = b + (harvested - consumed) / energy
    spilled = 0.0
    if nb > 1.0:
        spilled = (nb - 1.0) * energy
        nb = 1.0
    failed = nb < profile.battery_floor
    if nb < 0.0:
        nb = 0.0
    return DayOutcome(nb, spilled, failed)
