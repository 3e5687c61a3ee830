# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled closed-loop kernel; same contract as ``_pykernel``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    DECREASE = 0
    HOLD = 1
    INCREASE = 2


cdef inline int _next_state(int state, double nb, double prev_b, double beta1, double beta2,
                            double gamma, double scale_b) noexcept nogil:
    cdef double m
    if nb <= 0.0:
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


cdef inline long long _update_k(int state, long long k, long long k_min, long long step,
                                long long k_max) noexcept nogil:
    if state == DECREASE:
        k = k // 2
        if k < k_min:
            k = k_min
    elif state == INCREASE:
        k = k + step
    if 0 < k_max < k:
        k = k_max
    return k


def simulate(const double[::1] harvest, double idle_day, double e_loc, double energy,
             double floor, double b0, double beta1, double beta2, double gamma,
             double scale_b, long long k_min, long long step, long long k_max,
             long long[::1] k_out, double[::1] b_out, signed char[::1] state_out,
             double[::1] spill_out):
    cdef Py_ssize_t d, n = harvest.shape[0]
    cdef double b = b0, nb, consumed, spilled, prev_b = b0, min_b = 1.0
    cdef long long k = k_min, total = 0
    cdef int state = HOLD
    cdef bint feasible = True
    with nogil:
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
            k = _update_k(state, k, k_min, step, k_max)
            state_out[d] = <signed char>state
            prev_b = nb
            b = nb
    return bool(feasible), int(total), min_b


cdef (bint, long long) _evaluate(const double[::1] harvest, Py_ssize_t start, Py_ssize_t stop,
                                 double idle_day, double e_loc, double energy, double floor,
                                 double b0, double beta1, double beta2, double gamma,
                                 double scale_b, long long k_min, long long step,
                                 long long k_max) noexcept nogil:
    cdef Py_ssize_t d
    cdef double b = b0, nb, consumed, prev_b = b0
    cdef long long k = k_min, total = 0
    cdef int state = HOLD
    for d in range(start, stop):
        consumed = idle_day + k * e_loc
        nb = b + (harvest[d] - consumed) / energy
        if nb > 1.0:
            nb = 1.0
        if nb < floor:
            return False, total + k
        total += k
        if d == start:
            prev_b = nb
        state = _next_state(state, nb, prev_b, beta1, beta2, gamma, scale_b)
        k = _update_k(state, k, k_min, step, k_max)
        prev_b = nb
        b = nb
    return True, total


def evaluate(const double[::1] harvest, double idle_day, double e_loc, double energy,
             double floor, double b0, double beta1, double beta2, double gamma,
             double scale_b, long long k_min, long long step, long long k_max):
    cdef bint ok
    cdef long long total
    ok, total = _evaluate(harvest, 0, harvest.shape[0], idle_day, e_loc, energy, floor, b0,
                          beta1, beta2, gamma, scale_b, k_min, step, k_max)
    return bool(ok), int(total)


def evaluate_many(const double[::1] harvest, const long long[::1] offsets,
                  const double[:, ::1] params, double idle_day, double e_loc, double energy,
                  double floor, double b0, long long k_min, long long step, long long k_max):
    cdef Py_ssize_t p, t, n_p = params.shape[0], n_tr = offsets.shape[0] - 1
    feas_arr = np.zeros((n_p, n_tr), dtype=np.uint8)
    tot_arr = np.zeros((n_p, n_tr), dtype=np.int64)
    cdef unsigned char[:, ::1] feas = feas_arr
    cdef long long[:, ::1] totals = tot_arr
    cdef bint ok
    cdef long long total
    with nogil:
        for p in range(n_p):
            for t in range(n_tr):
                ok, total = _evaluate(harvest, offsets[t], offsets[t + 1], idle_day, e_loc,
                                      energy, floor, b0, params[p, 0], params[p, 1],
                                      params[p, 2], params[p, 3], k_min, step, k_max)
                feas[p, t] = ok
                totals[p, t] = total
                if not ok:
                    break
    return feas_arr, tot_arr
