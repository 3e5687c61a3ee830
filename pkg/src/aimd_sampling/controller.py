"""Energy-aware AIMD sampling-rate controller.

The controller runs once per day. It turns the battery trend into a scalar
metric, moves a three-state machine (Decrease / Hold / Increase) and derives
the next day's sampling rate from the state it lands in: halve, keep, or add a
fixed step. Only the previous day's battery fraction is kept between calls.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

K_MIN = 24
INCREASE_STEP = 24


class FsmState(enum.IntEnum):
    DECREASE = 0
    HOLD = 1
    INCREASE = 2


@dataclass(frozen=True)
class TuningParams:
    """Controller thresholds.

    Attributes:
        beta1: Metric threshold below which the rate is cut.
        beta2: Metric threshold above which the rate ramps up.
        gamma: Battery fraction at or above which the metric saturates.
        metric_scale_B: Weight of the day-over-day battery difference, the
            battery capacity in ampere-hours (3.0 for a 3000 mAh cell).
    """

    beta1: float = -0.203
    beta2: float = 0.468
    gamma: float = 0.67
    metric_scale_B: float = 3.0

    def __post_init__(self):
        if not self.beta1 < self.beta2:
            raise ValueError(f"beta1 must be < beta2, got {self.beta1} >= {self.beta2}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not self.metric_scale_B > 0.0:
            raise ValueError(f"metric_scale_B must be > 0, got {self.metric_scale_B}")


DEFAULT_PARAMS = TuningParams()


@dataclass(frozen=True)
class MetricValue:
    """Metric output; ``saturated`` stands for the +infinity branch."""

    value: float
    saturated: bool = False

    def __float__(self) -> float:
        return float("inf") if self.saturated else self.value

    def exceeds(self, threshold: float) -> bool:
        return self.saturated or self.value > threshold

    def at_least(self, threshold: float) -> bool:
        return self.saturated or self.value >= threshold

    def below(self, threshold: float) -> bool:
        return not self.saturated and self.value < threshold

    def at_most(self, threshold: float) -> bool:
        return not self.saturated and self.value <= threshold


SATURATED = MetricValue(0.0, saturated=True)


@dataclass(frozen=True)
class ControllerState:
    fsm_state: FsmState
    k: int
    prev_b: float

    @classmethod
    def initial(cls, first_b: float, k_min: int = K_MIN) -> "ControllerState":
        """Start in Hold at the minimum rate, anchored on the first battery reading."""
        return cls(FsmState.HOLD, k_min, first_b)


def compute_metric(b_now: float, b_prev: float, params: TuningParams) -> MetricValue:
    """Battery-trend metric.

    ``B * (b_now - b_prev) - (1 / b_now - 1)``, saturating to +infinity once
    ``b_now`` reaches ``params.gamma``.

    Raises:
        ValueError: if ``b_now`` is not in (0, 1]; an empty battery must be
            handled as a failure by the caller.
    """
    if not 0.0 < b_now <= 1.0:
        raise ValueError(f"battery fraction must lie in (0, 1], got {b_now}")
    if b_now >= params.gamma:
        return SATURATED
    return MetricValue(params.metric_scale_B * (b_now - b_prev) - (1.0 / b_now - 1.0))


def next_fsm_state(current: FsmState, m: MetricValue, params: TuningParams) -> FsmState:
    b1, b2 = params.beta1, params.beta2
    if current is FsmState.DECREASE:
        return FsmState.DECREASE if m.at_most(b1) else FsmState.HOLD
    if current is FsmState.INCREASE:
        return FsmState.INCREASE if m.at_least(b2) else FsmState.HOLD
    if m.below(b1):
        return FsmState.DECREASE
    if m.exceeds(b2):
        return FsmState.INCREASE
    return FsmState.HOLD


def update_rate(state: FsmState, k: int, k_min: int = K_MIN,
                increase_step: int = INCREASE_STEP, k_max: int | None = None) -> int:
    if state is FsmState.DECREASE:
        k = max(k_min, k // 2)
    elif state is FsmState.INCREASE:
        k = k + increase_step
    if k_max is not None:
        k = min(k, k_max)
    return k


def fsm_step(state: ControllerState, m: MetricValue, params: TuningParams,
             k_min: int = K_MIN, increase_step: int = INCREASE_STEP,
             k_max: int | None = None) -> ControllerState:
    """Apply one transition and the rate update of the state arrived in.

    ``prev_b`` is carried over unchanged.
    """
    new_state = next_fsm_state(state.fsm_state, m, params)
    k = update_rate(new_state, state.k, k_min, increase_step, k_max)
    return ControllerState(new_state, k, state.prev_b)


def controller_step(state: ControllerState, b_today: float, params: TuningParams,
                    k_min: int = K_MIN, increase_step: int = INCREASE_STEP,
                    k_max: int | None = None) -> ControllerState:
    """End-of-day update; the returned ``k`` is the rate for the next day."""
    m = compute_metric(b_today, state.prev_b, params)
    nxt = fsm_step(state, m, params, k_min, increase_step, k_max)
    return replace(nxt, prev_b=b_today)
