"""
Test suite for the hopping and partition optimizer

Validates that:
1. p_f* = min{1, b_D/(theta B)} and it maximises the rate density
2. Time hopping: p_t* = 1 in heavy load with w >= 1, p_t* = 0 for tiny w
3. The per-interval theta candidates match an exhaustive grid
4. The shared-mode grid search and the solver ladder behave
"""

import math

import numpy as np

from analytic_engine.rates import rate_lower_bounds
from network_model.enums import AllocationMode, SearchMethod, Utility
from network_model.errors import CostGuardError
from network_model.load import is_heavily_loaded, load_state
from network_model.models import D2DTypeConfig, NetworkConfig
from optimizer.engine import get_solver_diagnostics, solve
from optimizer.hopping import (
    optimal_frequency_hopping,
    optimal_time_hopping,
    probability_axis,
)
from optimizer.objective import apply_utility, rate_density
from optimizer.partition import (
    full_grid_theta,
    incumbent_thresholds,
    optimal_theta,
    region_candidate,
    region_objective,
    theta_objective,
    theta_partition_coeffs,
)
from optimizer.shared import optimize_shared
from scenarios.loader import load_scenario

CELL = 500.0 ** 2


def table2(name: str = "table2-dedicated"):
    return load_scenario(name)[1]


def single_type_shared() -> NetworkConfig:
    cfg = table2("table2-shared")
    return cfg.replace(d2d_types=cfg.d2d_types[:1])


def random_heavy_config(rng: np.random.Generator) -> NetworkConfig:
    """
    Random dedicated scenario that is heavily loaded at theta = 0.

    B divides 1000, so every b_D/B kink lies on the 1e-3 theta grid.
    """
    b_total = int(rng.choice((20, 25, 40, 50)))
    b_c = int(rng.integers(2, 9))
    users_per_cell = rng.uniform(1.2, 4.0) * 7.0 * b_total / (9.0 * b_c)
    types = tuple(
        D2DTypeConfig(
            lambda_d=rng.uniform(1, 30) / CELL,
            b_d=int(rng.integers(1, b_total + 1)),
        )
        for _ in range(int(rng.integers(1, 5)))
    )
    return NetworkConfig(
        lambda_b=1.0 / CELL,
        lambda_u=users_per_cell / CELL,
        d2d_types=types,
        delta=rng.uniform(20, 300),
        p_b=39.8,
        p_d=0.1,
        noise=4e-14,
        alpha=rng.uniform(2.5, 5.0),
        b_total=b_total,
        b_c=b_c,
        w=2.0,
        theta=0.5,
    )


def test_frequency_hopping_formula():
    """Test: p_f* = min{1, b_D/(theta B)}"""
    print("\n=== Test 1: Frequency Hopping Formula ===")

    cfg = table2()
    assert optimal_frequency_hopping(cfg) == (0.2, 0.6)
    assert optimal_frequency_hopping(cfg.replace(theta=0.2)) == (0.5, 1.0)
    assert optimal_frequency_hopping(cfg.replace(theta=0.0)) == (0.0, 0.0)

    axis = probability_axis(0.3, 0.07)
    assert list(axis) == [0.0, 0.07, 0.14, 0.21, 0.28, 0.3]
    assert len(probability_axis(0.1, 0.01)) == 11

    print("✓ Reference scenario at theta = 0.5: p_f* = (0.2, 0.6)")


def _argmax_over_type(cfg, index, utility, axis):
    values = []
    for x in axis:
        p_f = list(optimal_frequency_hopping(cfg))
        p_f[index] = float(x)
        values.append(rate_density(cfg.with_hopping(p_f=p_f), utility=utility))
    return float(axis[int(np.argmax(values))])


def test_frequency_hopping_is_optimal():
    """Test: a grid over p_f of one type peaks at b_D/(theta B)"""
    print("\n=== Test 2: Frequency Hopping Optimality ===")

    cfg = table2().with_hopping(p_t=1.0)
    axis = np.round(np.arange(51) * 0.02, 12)
    targets = optimal_frequency_hopping(cfg)

    for index in range(cfg.num_types):
        best = _argmax_over_type(cfg, index, Utility.TOTAL_RATE, axis)
        assert abs(best - targets[index]) <= 0.02 + 1e-12, (index, best)
        print(f"✓ total rate, type {index + 1}: argmax p_f = {best:.2f}")

    best = _argmax_over_type(cfg, 0, Utility.LOG_RATE, axis)
    assert abs(best - targets[0]) <= 0.02 + 1e-12, best
    print(f"✓ log rate, type 1: argmax p_f = {best:.2f}")

    assert math.isclose(apply_utility(math.e - 1.0, Utility.LOG_RATE), 1.0)


def test_time_hopping_heavy_load():
    """Test: p_t* = 1 without a search in heavy load with w >= 1"""
    print("\n=== Test 3: Time Hopping in Heavy Load ===")

    solution = optimal_time_hopping(table2())
    assert solution.p_t_star == (1.0, 1.0)
    assert solution.method == SearchMethod.CLOSED_FORM
    assert solution.theta_star == 0.5

    shared = optimal_time_hopping(table2("table2-shared"))
    assert shared.p_t_star == (1.0, 1.0)
    assert shared.theta_star is None

    print("✓ p_t* = (1, 1) in both modes")


def test_rate_density_monotone_in_p_t():
    """Test: rate density never decreases in p_t for w >= 1"""
    print("\n=== Test 4: Monotonicity in p_t ===")

    axis = probability_axis(1.0, 0.1)
    for name in ("table2-dedicated", "table2-shared"):
        for w in (1.0, 1.5, 2.0):
            cfg = table2(name).replace(w=w)
            for index in range(cfg.num_types):
                values = []
                for x in axis:
                    p_t = [1.0] * cfg.num_types
                    p_t[index] = float(x)
                    values.append(rate_density(cfg.with_hopping(p_t=p_t)))
                for a, b in zip(values, values[1:]):
                    assert b >= a - 1e-9 * abs(a), (name, w, index, a, b)
            print(f"✓ {name}, w = {w}: non-decreasing for every type")


def test_time_hopping_cheap_relay():
    """Test: w -> 0 sends every link through the BS in both modes"""
    print("\n=== Test 5: Cheap Cellular Mode ===")

    for name in ("table2-dedicated", "table2-shared"):
        cfg = table2(name).replace(w=1e-3)
        solution = optimal_time_hopping(cfg, step=0.25)
        assert solution.p_t_star == (0.0, 0.0), (name, solution.p_t_star)
        assert solution.method == SearchMethod.REDUCED_GRID
        print(f"✓ {name}: w = 1e-3 gives p_t* = (0, 0)")


def test_partition_coefficients():
    """Test: interval aggregates and the closed-form objective"""
    print("\n=== Test 6: Partition Coefficients ===")

    cfg = table2().with_hopping(p_t=1.0)
    thresholds = incumbent_thresholds(cfg)
    coeffs = theta_partition_coeffs(cfg, thresholds)

    assert [(r.lower, r.upper) for r in coeffs.regions] == [(0.0, 0.1), (0.1, 0.3), (0.3, 1.0)]
    assert coeffs.d > 0
    for region in coeffs.regions:
        assert region.f >= 1.0 and region.a >= 0 and region.c >= 0 and region.e >= 0
        assert math.isclose(region.c * region.e, region.a * (region.f - 1.0), rel_tol=1e-12, abs_tol=1e-30)

        theta, _ = region_candidate(region, coeffs.d)
        assert region.lower <= theta <= region.upper

        for theta in np.linspace(max(region.lower, 1e-3), region.upper, 5):
            closed = region_objective(region, coeffs.d, theta) + coeffs.d
            direct = theta_objective(cfg, theta, thresholds)
            assert math.isclose(closed, direct, rel_tol=1e-9), (theta, closed, direct)

    print(f"✓ {len(coeffs.regions)} regions, closed form equals the rate density")


def test_table2_partition():
    """Test: the reference scenario prefers giving the whole band to D2D"""
    print("\n=== Test 7: Reference Partition ===")

    cfg = table2()
    solution = optimal_theta(cfg)
    assert solution.method == SearchMethod.CLOSED_FORM
    assert solution.theta_star == 1.0
    assert solution.p_f_star == (0.1, 0.3)
    assert solution.p_t_star == (1.0, 1.0)

    for candidate in solution.candidate_set:
        assert math.isclose(candidate.objective, candidate.closed_form_objective, rel_tol=1e-9)
    assert math.isclose(
        solution.objective, theta_objective(cfg, solution.theta_star, solution.thresholds)
    )

    print(f"✓ theta* = {solution.theta_star}, objective {solution.objective:.4e}")


def _assert_matches_grid(cfg, label):
    solution = optimal_theta(cfg)
    grid = full_grid_theta(cfg.with_hopping(p_t=1.0), step=1e-3, thresholds=solution.thresholds)

    assert solution.objective >= grid.objective * (1.0 - 1e-9), (label, solution.objective, grid.objective)
    assert math.isclose(solution.objective, grid.objective, rel_tol=1e-6), label
    assert (
        abs(solution.theta_star - grid.theta_star) <= 1e-3 + 1e-12
        or math.isclose(solution.objective, grid.objective, rel_tol=1e-9)
    ), (label, solution.theta_star, grid.theta_star)
    assert solution.theta_star in [c.theta for c in solution.candidate_set]
    return solution, grid


def test_closed_form_matches_grid():
    """Test: closed-form theta* agrees with a 1e-3 grid on random heavy scenarios"""
    print("\n=== Test 8: Closed Form vs Grid ===")

    rng = np.random.default_rng(2024)
    for k in range(50):
        cfg = random_heavy_config(rng)
        assert is_heavily_loaded(cfg.replace(theta=0.0))
        _assert_matches_grid(cfg, k)
    print("✓ 50 random scenarios agree")

    solution, grid = _assert_matches_grid(table2("fig10-distance280"), "280 m")
    print(f"✓ 280 m links: theta* = {solution.theta_star:.4f} (grid {grid.theta_star:.3f})")


def test_shared_search():
    """Test: shared-mode grid search against a finer grid"""
    print("\n=== Test 9: Shared-Mode Search ===")

    cfg = single_type_shared()
    coarse = optimize_shared(cfg, grid_resolution=0.01)
    fine = optimize_shared(cfg, grid_resolution=0.001)

    assert coarse.method == SearchMethod.REDUCED_GRID
    assert coarse.p_t_star == (1.0,)
    assert coarse.theta_star is None
    assert 0.0 <= coarse.p_f_star[0] <= 0.1
    assert fine.objective >= coarse.objective * (1.0 - 1e-12)
    assert abs(coarse.p_f_star[0] - fine.p_f_star[0]) <= 0.01 + 1e-12

    print(f"✓ p_f* = {coarse.p_f_star[0]:.2f} (fine grid {fine.p_f_star[0]:.3f})")


def test_shared_without_d2d_traffic():
    """Test: p_f = 0 leaves only the cellular term"""
    print("\n=== Test 10: Shared Mode Without D2D ===")

    cfg = table2("table2-shared").with_hopping(p_f=0.0)
    no_d2d = cfg.replace(d2d_types=tuple(D2DTypeConfig(0.0, t.b_d) for t in cfg.d2d_types))
    bounds = rate_lower_bounds(
        no_d2d,
        AllocationMode.SHARED,
        interference_limited=True,
        load=load_state(no_d2d, AllocationMode.SHARED),
    )
    assert math.isclose(rate_density(cfg), cfg.lambda_u * bounds.lb_cellular, rel_tol=1e-12)

    print(f"✓ Objective = lambda_U * R_C = {rate_density(cfg):.4e}")


def test_table2_shared_time_hopping():
    """Test: the shared reference scenario keeps every link in D2D mode"""
    print("\n=== Test 11: Shared Reference ===")

    solution = optimize_shared(table2("table2-shared"), grid_resolution=0.05)
    assert solution.p_t_star == (1.0, 1.0)
    assert solution.method == SearchMethod.REDUCED_GRID
    assert solution.p_f_star[0] <= 0.1 and solution.p_f_star[1] <= 0.3

    print(f"✓ p_t* = {solution.p_t_star}, p_f* = {solution.p_f_star}")


def test_cost_guard():
    """Test: oversized grids are refused before any evaluation"""
    print("\n=== Test 12: Cost Guard ===")

    cfg = table2("table2-shared").replace(
        d2d_types=tuple(D2DTypeConfig(15 / CELL, 50) for _ in range(4))
    )
    try:
        optimize_shared(cfg, grid_resolution=0.001)
        assert False, "grid of 1001^4 points should be refused"
    except CostGuardError:
        pass

    print("✓ CostGuardError raised")


def test_solver_ladder():
    """Test: closed form, reduced grid and full grid are picked by regime"""
    print("\n=== Test 13: Solver Ladder ===")

    dedicated = solve(table2())
    assert dedicated.method == SearchMethod.CLOSED_FORM
    assert dedicated.theta_star == 1.0

    shared = solve(single_type_shared())
    assert shared.method == SearchMethod.REDUCED_GRID

    light = table2().replace(
        lambda_u=1.0 / CELL,
        d2d_types=table2().d2d_types[:1],
    )
    assert not is_heavily_loaded(light.replace(theta=0.0))
    fallback = solve(light)
    assert fallback.method == SearchMethod.FULL_GRID
    assert 0.0 <= fallback.theta_star <= 1.0
    assert not fallback.heavily_loaded

    print(f"✓ dedicated: {dedicated.method.value}")
    print(f"✓ shared: {shared.method.value}")
    print(f"✓ light load: {fallback.method.value}, theta* = {fallback.theta_star:.2f}")


def test_solver_diagnostics():
    """Test: diagnostics report which solver matched"""
    print("\n=== Test 14: Solver Diagnostics ===")

    diagnostics = get_solver_diagnostics(table2())
    assert diagnostics["scenario_summary"]["heavily_loaded"]
    evaluations = diagnostics["solver_evaluations"]
    assert evaluations[0]["solver"] == "solve_dedicated_closed_form"
    assert evaluations[0]["matched"]
    assert not evaluations[1]["matched"]
    assert diagnostics["fallback"] is None
    assert evaluations[0]["solution"]["theta_star"] == 1.0

    print(f"✓ {[e['solver'] for e in evaluations if e['matched']]}")


def run_all_tests():
    """Run all tests"""
    print("=" * 60)
    print("OPTIMIZER TEST SUITE")
    print("=" * 60)

    try:
        test_frequency_hopping_formula()
        test_frequency_hopping_is_optimal()
        test_time_hopping_heavy_load()
        test_rate_density_monotone_in_p_t()
        test_time_hopping_cheap_relay()
        test_partition_coefficients()
        test_table2_partition()
        test_closed_form_matches_grid()
        test_shared_search()
        test_shared_without_d2d_traffic()
        test_table2_shared_time_hopping()
        test_cost_guard()
        test_solver_ladder()
        test_solver_diagnostics()

        print("\n" + "=" * 60)
        print("✓ ALL TESTS PASSED")
        print("=" * 60)

    except AssertionError as e:
        print(f"\n✗ TEST FAILED: {e}")
        raise
    except Exception as e:
        print(f"\n✗ ERROR: {e}")
        raise


if __name__ == "__main__":
    run_all_tests()
