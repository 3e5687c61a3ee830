import random

import numpy as np
import pytest

from aimd_sampling import kernel
from aimd_sampling.controller import DEFAULT_PARAMS, TuningParams
from aimd_sampling.traces import synth_trace
from aimd_sampling.tuner import (GridSpec, NoFeasibleParameters, evaluate_params, grid_search,
                                 select_best, write_report_csv)

BENIGN = synth_trace(365, 0.03, 0.15, 172, 0.2, 1, "benign")
HARSH = synth_trace(365, 0.02, 0.12, 100, 0.4, 2, "harsh")


def test_zero_harvest_infeasible(flat_trace):
    ev = evaluate_params(DEFAULT_PARAMS, [flat_trace(0.0, 60)])
    assert not ev.feasible


def test_balanced_trace_pins_at_k_min(flat_trace):
    ev = evaluate_params(DEFAULT_PARAMS, [flat_trace(1764.0, 100)], b0=0.5)
    assert ev.feasible and ev.J_per_trace == (2400,)
    assert ev.J_total == ev.J_per_trace[0]


def test_single_point_grid():
    grid = GridSpec((-0.2, -0.2), (0.4, 0.4), (0.7, 0.7), (1, 1, 1))
    res = grid_search(grid, [BENIGN])
    assert res.best == TuningParams(-0.2, 0.4, 0.7)
    assert res.J == evaluate_params(res.best, [BENIGN]).J_total


def test_tie_goes_to_smallest(flat_trace):
    grid = GridSpec((-0.5, -0.1), (0.1, 0.5), (0.6, 0.9), (3, 3, 4))
    res = grid_search(grid, [flat_trace(1764.0, 50)], b0=0.5)
    assert all(ev.J_total == 1200 for ev in res.report)
    assert (res.best.beta1, res.best.beta2, res.best.gamma) == (-0.5, 0.1, 0.6)


def test_contains_tuned_point():
    grid = GridSpec((-0.403, -0.203), (0.468, 0.668), (0.67, 0.87), (3, 3, 3))
    assert (-0.203, 0.468, 0.67) in grid.points()
    res = grid_search(grid, [BENIGN])
    ref = evaluate_params(DEFAULT_PARAMS, [BENIGN])
    assert ref.feasible and res.J >= ref.J_total


def test_no_feasible(flat_trace):
    with pytest.raises(NoFeasibleParameters):
        grid_search(GridSpec(steps=(3, 3, 3)), [flat_trace(0.0, 60)])


def test_empty_grid():
    grid = GridSpec((0.0, 0.0), (-1.0, -0.5), (0.7, 0.7), (1, 2, 1))
    assert grid.points() == []
    with pytest.raises(ValueError):
        grid_search(grid, [BENIGN])


def test_result_matches_full_simulation():
    res = grid_search(GridSpec(steps=(6, 6, 6)), [BENIGN, HARSH], years=2)
    ev = evaluate_params(res.best, [BENIGN, HARSH], years=2)
    assert ev.feasible and ev.J_total == res.J
    for rep in res.report[:40]:
        full = evaluate_params(rep.params, [BENIGN, HARSH], years=2)
        assert full.feasible == rep.feasible
        if rep.feasible:
            assert full.J_per_trace == rep.J_per_trace


def test_order_invariance():
    res = grid_search(GridSpec(steps=(6, 6, 6)), [BENIGN, HARSH])
    shuffled = list(res.report)
    for seed in range(5):
        random.Random(seed).shuffle(shuffled)
        assert select_best(shuffled) == select_best(res.report)


def test_superset_grid_never_worse():
    small = grid_search(GridSpec(steps=(3, 3, 3)), [BENIGN, HARSH])
    big = grid_search(GridSpec(steps=(5, 5, 5)), [BENIGN, HARSH])  # contains the 3-point axes
    assert big.J >= small.J


def test_backends_agree():
    if len(kernel.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    grid = GridSpec(steps=(4, 4, 3))
    a = grid_search(grid, [BENIGN, HARSH], backend="python")
    b = grid_search(grid, [BENIGN, HARSH], backend="compiled")
    assert a.report == b.report


def test_parallel_matches_serial():
    grid = GridSpec(steps=(5, 5, 4))
    assert grid_search(grid, [BENIGN], workers=2).report == grid_search(grid, [BENIGN]).report


def test_report_csv(tmp_path):
    res = grid_search(GridSpec(steps=(3, 3, 2)), [BENIGN])
    write_report_csv(res.report, tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "beta1,beta2,gamma,feasible,J_total"
    assert len(lines) == len(res.report) + 1
