"""Pure-Python closed-loop kernel.

Reference implementation of the day loop; ``_ckernel.pyx`` mirrors it
operation for operation so both backends agree bit for bit.
"""

import numpy as np

DECREASE, HOLD, INCREASE = 0, 1, 2


def _next_state(state, nb, prev_b, beta1, beta2, gamma, scale_b):
    if nb <= 0.0:
        # drained battery: metric undefined, always cut
        return DECREASE
    if nb >= gamma:
        if state == DECREASE:
            return HOLD
        return INCREASE
    m = scale_b * (nb - prev_b) - (1.0 / nb - 1.0)
    if state == DECREASE:
        return DECREASE if m <= beta1 else HOLD
    if state == INCREASE:
        return INCREASE if m >= beta2 else HOLD
    if m < beta1:
        return DECREASE
    if m > beta2:
        return INCREASE
    return HOLD


def simulate(harvest, idle_day, e_loc, energy, floor, b0,
             beta1, beta2, gamma, scale_b, k_min, step, k_max,
             k_out, b_out, state_out, spill_out):
    """Run the loop, filling the four output arrays. ``k_max <= 0`` means no cap.

    Returns ``(feasible, total_localizations, min_battery)``.
    """
    b = b0
    k = k_min
    state = HOLD
    prev_b = b0
    total = 0
    min_b = 1.0
    feasible = True
    n = len(harvest)
    for d in range(n):
        consumed = idle_day + k * e_loc
        nb = b + (harvest[d] - consumed) / energy
        spilled = 0.0
        if nb > 1.0:
            spilled = (nb - 1.0) * energy
            nb = 1.0
        if nb < floor:
            feasible = False
        if nb < 0.0:
            nb = 0.0
        if nb < min_b:
            min_b = nb
        k_out[d] = k
        b_out[d] = nb
        spill_out[d] = spilled
        total += k
        if d == 0:
            prev_b = nb
        state = _next_state(state, nb, prev_b, beta1, beta2, gamma, scale_b)
        if state == DECREASE:
            k = k // 2
            if k < k_min:
                k = k_min
        elif state == INCREASE:
            k = k + step
        if 0 < k_max < k:
            k = k_max
        state_out[d] = state
        prev_b = nb
        b = nb
    return feasible, total, min_b


def evaluate(harvest, idle_day, e_loc, energy, floor, b0,
             beta1, beta2, gamma, scale_b, k_min, step, k_max):
    """Feasibility and total localizations only; stops at the first failure."""
    b = b0
    k = k_min
    state = HOLD
    prev_b = b0
    total = 0
    for d in range(len(harvest)):
        consumed = idle_day + k * e_loc
        nb = b + (harvest[d] - consumed) / energy
        if nb > 1.0:
            nb = 1.0
        if nb < floor:
            return False, total + k
        total += k
        if d == 0:
            prev_b = nb
        state = _next_state(state, nb, prev_b, beta1, beta2, gamma, scale_b)
        if state == DECREASE:
            k = k // 2
            if k < k_min:
                k = k_min
        elif state == INCREASE:
            k = k + step
        if 0 < k_max < k:
            k = k_max
        prev_b = nb
        b = nb
    return True, total


def evaluate_many(harvest, offsets, params, idle_day, e_loc, energy, floor, b0,
                  k_min, step, k_max):
    """Evaluate every parameter row of ``params`` (beta1, beta2, gamma, B) on
    every trace ``harvest[offsets[i]:offsets[i+1]]``.

    Returns ``(feasible[n_params, n_traces], totals[n_params, n_traces])``.
    """
    harvest = [float(x) for x in harvest]
    n_tr = len(offsets) - 1
    n_p = len(params)
    feas = np.zeros((n_p, n_tr), dtype=np.uint8)
    totals = np.zeros((n_p, n_tr), dtype=np.int64)
    for p in range(n_p):
        beta1, beta2, gamma, scale_b = (float(v) for v in params[p])
        for t in range(n_tr):
            ok, tot = evaluate(harvest[offsets[t]:offsets[t + 1]], idle_day, e_loc, energy,
                               floor, b0, beta1, beta2, gamma, scale_b, k_min, step, k_max)
            feas[p, t] = ok
            totals[p, t] = tot
            if not ok:
                break
    return feas, totals
