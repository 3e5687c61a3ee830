import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from aimd_sampling.baselines.constant import UnsustainableTrace, optimize_constant_rate
from aimd_sampling.baselines.fhc import (FhcProblem, fhc_lp_matrices, fhc_total_localizations,
                                         hourly_problem, residuals, solve_fhc, solve_problem,
                                         write_fhc_csv)
from aimd_sampling.baselines.simplex import LPInfeasible, LPUnbounded, solve_lp
from aimd_sampling.energy import DEFAULT_PROFILE, DeviceEnergyProfile
from aimd_sampling.simulator import run_constant_rate, run_simulation
from aimd_sampling.traces import HarvestTrace, synth_trace

from fhc_oracle import brute_force_max

TOY_PROFILE = DeviceEnergyProfile(5.0, 300.0 / 86400.0, 1000.0 / 3.6, 1.0, 0.05)


# constant rate

def test_constant_rate_toy():
    tr = HarvestTrace("toy", [500.0, 500.0])
    assert TOY_PROFILE.battery_energy == 1000.0
    k_star = optimize_constant_rate(tr, TOY_PROFILE)
    exhaustive = max(k for k in range(24, 201) if run_constant_rate(tr, k, TOY_PROFILE)[0])
    assert k_star == exhaustive == 135


def test_constant_rate_unsustainable():
    tr = HarvestTrace("dark", np.full(100, 1000.0))
    with pytest.raises(UnsustainableTrace, match="cannot sustain"):
        optimize_constant_rate(tr)


def test_constant_rate_boundary(flat_trace):
    assert optimize_constant_rate(flat_trace(1764.0, 400), b0=0.05 + 1e-12) == 24


@pytest.mark.parametrize("seed", range(5))
def test_constant_rate_bisection(seed):
    rng = np.random.default_rng(seed)
    tr = synth_trace(365, rng.uniform(0.015, 0.04), rng.uniform(0.05, 0.18), 172, 0.3, seed)
    k = optimize_constant_rate(tr)
    assert run_constant_rate(tr, k)[0] and not run_constant_rate(tr, k + 1)[0]


# generic simplex vs scipy's HiGHS

def test_simplex_small_known():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = solve_lp([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.objective == pytest.approx(-2.8)
    assert res.x == pytest.approx([1.6, 1.2])


def test_simplex_infeasible_and_unbounded():
    with pytest.raises(LPInfeasible):
        solve_lp([1, 1], A_eq=[[1, 1]], b_eq=[5], ub=[1, 1])
    with pytest.raises(LPUnbounded):
        solve_lp([-1, 0], A_ub=[[0, 1]], b_ub=[1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_simplex_matches_highs(seed):
    rng = np.random.default_rng(seed)
    n, m_ub, m_eq = rng.integers(2, 7), rng.integers(1, 5), rng.integers(0, 3)
    # last row bounds sum(x) so an optimum always exists
    A_ub = np.vstack([rng.normal(size=(m_ub, n)), np.ones(n)])
    x0 = rng.uniform(0, 2, n)
    b_ub = A_ub @ x0 + rng.uniform(0, 1, m_ub + 1)
    A_eq = rng.normal(size=(m_eq, n))
    b_eq = A_eq @ x0
    lb = np.zeros(n)
    ub = np.where(rng.random(n) < 0.5, 5.0, np.inf)
    c = rng.normal(size=n)
    ref = linprog(c, A_ub, b_ub, A_eq if m_eq else None, b_eq if m_eq else None,
                  bounds=list(zip(lb, ub)), method="highs")
    assert ref.status == 0
    res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, lb, ub)
    assert res.objective == pytest.approx(ref.fun, rel=1e-7, abs=1e-7)
    assert np.all(A_ub @ res.x <= b_ub + 1e-7)


# finite-horizon optimum

def _assert_residuals(p, sol, tol=1e-7):
    r = residuals(p, sol)
    assert max(r.values()) < tol, r
    assert abs(sol.battery_path[0] - sol.battery_path[-1]) < tol


def test_two_hour_pinned():
    p = FhcProblem(np.array([2.0, 2.0]), idle_energy=1.0, energy_per_localization=1.0,
                   capacity=10.0, floor=0.5, min_rate=1.0)
    for method in ("simplex", "exact"):
        sol = solve_problem(p, method)
        assert sol.optimal
        assert sol.hourly_rate == pytest.approx([1.0, 1.0], abs=1e-9)
        assert fhc_total_localizations(sol) == pytest.approx(2.0)
        _assert_residuals(p, sol)


def test_abundant_constant_harvest_energy_balance():
    p = FhcProblem(np.full(24, 10.0), 1.0, 2.0, 1e6, 0.05)
    expected = (p.harvest.sum() - 24 * 1.0) / 2.0
    for method in ("simplex", "exact"):
        sol = solve_problem(p, method)
        assert fhc_total_localizations(sol) == pytest.approx(expected, rel=1e-12)
        _assert_residuals(p, sol)
    assert solve_problem(p, "exact").hourly_rate == pytest.approx(np.full(24, expected / 24))


def _random_problem(rng, T):
    capacity = rng.uniform(5, 30)
    return FhcProblem(rng.uniform(0, 6, T), rng.uniform(0.2, 1.0), rng.uniform(0.5, 1.5),
                      capacity, rng.uniform(0.05, 0.3), 1.0)


@pytest.mark.parametrize("seed", range(12))
def test_exact_matches_simplex(seed):
    rng = np.random.default_rng(seed)
    p = _random_problem(rng, int(rng.integers(2, 49)))
    a, b = solve_problem(p, "exact"), solve_problem(p, "simplex")
    assert a.status == b.status
    if a.optimal:
        assert a.objective == pytest.approx(b.objective, rel=1e-9, abs=1e-9)
        _assert_residuals(p, a)
        _assert_residuals(p, b)


@pytest.mark.parametrize("seed", range(12))
def test_simplex_matches_highs_on_fhc(seed):
    rng = np.random.default_rng(100 + seed)
    p = _random_problem(rng, int(rng.integers(2, 30)))
    c, A, b, lb, ub = fhc_lp_matrices(p)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=list(zip(lb, ub)), method="highs")
    sol = solve_problem(p, "simplex")
    assert (ref.status == 0) == sol.optimal
    if sol.optimal:
        assert sol.objective == pytest.approx(-ref.fun, rel=1e-9)


def test_infeasible_when_harvest_too_low():
    p = FhcProblem(np.zeros(10), 1.0, 1.0, 100.0, 0.05)
    assert solve_problem(p, "exact").status == "infeasible"
    assert solve_problem(p, "simplex").status == "infeasible"
    with pytest.raises(ValueError):
        fhc_total_localizations(solve_problem(p, "exact"))


@pytest.mark.parametrize("seed", range(8))
def test_toy_matches_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    p = FhcProblem(rng.uniform(1.5, 8, 4), 0.5, 1.0, rng.uniform(2, 12), 0.1)
    brute = brute_force_max(p.harvest, p.idle_energy, p.energy_per_localization, p.lower, p.capacity)
    sol = solve_problem(p, "simplex")
    if brute is None:
        assert not solve_problem(p, "exact").optimal
        return
    assert sol.optimal
    assert brute <= sol.objective + 1e-9
    assert sol.objective - brute <= 0.25 * 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.01, 100))
def test_scaling_invariance(seed, factor):
    rng = np.random.default_rng(seed)
    p = _random_problem(rng, 24)
    q = FhcProblem(p.harvest * factor, p.idle_energy * factor, p.energy_per_localization * factor,
                   p.capacity * factor, p.floor)
    a, b = solve_problem(p, "exact"), solve_problem(q, "exact")
    assert a.status == b.status
    if a.optimal:
        assert b.hourly_rate == pytest.approx(a.hourly_rate, rel=1e-9, abs=1e-9)


def test_year_long_solution_residuals():
    tr = synth_trace(365, 0.02, 0.18, 172, 0.5, 9)
    p = hourly_problem(tr)
    sol = solve_problem(p)
    assert sol.optimal and len(sol.hourly_rate) == 8760
    _assert_residuals(p, sol)
    expected = (p.harvest.sum() - 8760 * p.idle_energy) / p.energy_per_localization
    assert fhc_total_localizations(sol) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_fhc_dominates_feasible_aimd(seed):
    rng = np.random.default_rng(seed)
    tr = synth_trace(365, rng.uniform(0.015, 0.04), rng.uniform(0.08, 0.18), 172,
                     rng.uniform(0, 0.5), seed)
    aimd = run_simulation(tr, years=2)
    if not aimd.feasible:
        pytest.skip("AIMD run infeasible on this trace")
    fhc = fhc_total_localizations(solve_fhc(tr.repeat(2)))
    assert fhc >= aimd.total_localizations * (1 - 1e-6)


def test_hourly_expansion():
    p = hourly_problem(HarvestTrace("x", [240.0, 480.0]), DEFAULT_PROFILE)
    assert list(p.harvest) == [10.0] * 24 + [20.0] * 24
    assert p.idle_energy == pytest.approx(0.019 * 3600)
    with pytest.raises(ValueError):
        hourly_problem(HarvestTrace("x", [1.0]), horizon_hours=1)


def test_fhc_csv(tmp_path):
    p = FhcProblem(np.array([2.0, 2.0, 3.0]), 1.0, 1.0, 10.0, 0.5)
    sol = solve_problem(p, "simplex")
    write_fhc_csv(sol, tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "hour,rate,battery_frac,spill_j" and len(lines) == 4


def test_deep_winter_cosine_cannot_sustain_hourly_fixes():
    # seasonal cosine from 3.73 mW to 183 mW: the winter deficit at one fix per
    # hour exceeds the whole usable battery, so no rate is sustainable
    tr = synth_trace(365, 0.00373, 0.183, 172, 0.0, 0)
    assert not run_constant_rate(tr, 24)[0]
    with pytest.raises(UnsustainableTrace, match="cannot sustain"):
        optimize_constant_rate(tr)
