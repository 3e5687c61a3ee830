"""Best fixed daily rate in hindsight."""

from __future__ import annotations

from ..controller import K_MIN
from ..energy import DEFAULT_PROFILE, DeviceEnergyProfile
from ..simulator import run_constant_rate
from ..traces import HarvestTrace


class UnsustainableTrace(ValueError):
    pass


def optimize_constant_rate(trace: HarvestTrace, profile: DeviceEnergyProfile = DEFAULT_PROFILE,
                           b0: float = 1.0, k_min: int = K_MIN, years: int = 1) -> int:
    """Largest integer rate that never takes the battery below its floor.

    Raises:
        UnsustainableTrace: even ``k_min`` fixes per day drain the battery.
    """
    trace = trace.repeat(years)

    def ok(k):
        return run_constant_rate(trace, k, profile, b0)[0]

    if not ok(k_min):
        raise UnsustainableTrace("trace cannot sustain minimum rate")
    lo, hi = k_min, 2 * k_min
    while ok(hi):
        lo, hi = hi, 2 * hi
    # invariant: ok(lo), not ok(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
