"""
Test suite for the analytic engine

Validates that:
1. kappa, H_1 and H_0 agree with their closed forms
2. The Laplace transform handles its edge cases
3. General coverage integrals reduce to the interference-limited forms at zero noise
4. Coverage curves are monotone probabilities
5. Rate integrals, supremum bounds and mode comparison behave
6. Slowly decaying CCDFs integrate to finite rates
7. The shared band never improves coverage or D2D rates
"""

import math

import numpy as np

from analytic_engine.coverage import (
    coverage_cellular_dedicated,
    coverage_cellular_dedicated_il,
    coverage_cellular_shared,
    coverage_cellular_shared_il,
    coverage_curve,
    coverage_d2d_dedicated,
    coverage_d2d_dedicated_il,
    coverage_d2d_shared,
    coverage_d2d_shared_il,
    coverage_function,
    default_betas,
)
from analytic_engine.laplace import laplace_d2d_interference
from analytic_engine.rates import (
    assemble_rates,
    compare_allocation_modes,
    mixture,
    rate_integral,
    rates,
    rates_dedicated,
    rates_shared,
    supremum_log_rate,
)
from analytic_engine.special import h0, h0_closed_form, h1, h1_hypergeometric, kappa
from controller.sweeps import apply_sweep_value
from network_model.enums import AllocationMode, LinkClass
from network_model.errors import DivergenceError, QuadratureError
from network_model.load import load_state
from network_model.models import D2DTypeConfig, NetworkConfig
from scenarios.loader import load_scenario
from scenarios.presets import PRESETS

CELL = 500.0 ** 2
BETAS = [10.0 ** (x / 10.0) for x in (-20, -10, 0, 10, 20)]


def random_noiseless_config(rng: np.random.Generator, mode: AllocationMode) -> NetworkConfig:
    """A random scenario with sigma² = 0."""
    types = tuple(
        D2DTypeConfig(
            lambda_d=rng.uniform(1, 20) / CELL,
            b_d=int(rng.integers(1, 20)),
            p_t=rng.uniform(0.2, 1.0),
            p_f=rng.uniform(0.1, 1.0),
        )
        for _ in range(int(rng.integers(1, 4)))
    )
    return NetworkConfig(
        lambda_b=1.0 / CELL,
        lambda_u=rng.uniform(10, 100) / CELL,
        d2d_types=types,
        delta=rng.uniform(20, 80),
        p_b=40.0,
        p_d=rng.uniform(0.01, 0.2),
        noise=0.0,
        alpha=rng.uniform(2.8, 4.5),
        b_total=50,
        b_c=5,
        w=2.0,
        theta=rng.uniform(0.1, 0.9),
        mode=mode,
    )


def test_kappa():
    """Test: kappa(3.5) and divergence at alpha = 2"""
    print("\n=== Test 1: Kappa ===")

    assert abs(kappa(3.5) - 1.8414) < 1e-3
    assert kappa(100.0) > 1.0

    try:
        kappa(2.0)
        assert False, "alpha = 2 should diverge"
    except DivergenceError:
        pass

    print(f"✓ kappa(3.5) = {kappa(3.5):.4f}")
    print("✓ alpha = 2 raises DivergenceError")


def test_h1_hypergeometric():
    """Test: numeric H_1 matches the Gauss hypergeometric form for beta <= 1"""
    print("\n=== Test 2: H_1 vs Hypergeometric ===")

    for alpha in (2.5, 3.5, 4.0):
        for beta in (0.01, 0.3, 1.0):
            numeric = h1(beta, alpha)
            closed = h1_hypergeometric(beta, alpha)
            assert math.isclose(numeric, closed, rel_tol=1e-6), (alpha, beta, numeric, closed)
            print(f"✓ H1({beta}, {alpha}) = {numeric:.8f}")

    assert h1(0.0, 3.5) == 0.0


def test_h0_closed_form():
    """Test: numeric H_0 matches (kappa/2)(beta P_B/P_D)^(2/alpha)"""
    print("\n=== Test 3: H_0 Closed Form ===")

    ratio = 10.0 ** (-2.6)
    for alpha in (3.0, 3.5, 4.0):
        for beta in (0.1, 1.0, 10.0):
            numeric = h0(beta, alpha, ratio)
            closed = h0_closed_form(beta, alpha, ratio)
            assert math.isclose(numeric, closed, rel_tol=1e-6), (alpha, beta, numeric, closed)

    assert h0(0.0, 3.5, ratio) == 0.0
    print(f"✓ H0(1, 3.5) = {h0(1.0, 3.5, ratio):.4f}")


def test_laplace_edges():
    """Test: Laplace transform edge cases"""
    print("\n=== Test 4: Laplace Transform ===")

    assert laplace_d2d_interference(0.0, 1e-4, 0.1, 3.5) == 1.0
    assert laplace_d2d_interference(1e6, 0.0, 0.1, 3.5) == 1.0

    lam, p_d, alpha = 4.8e-5, 0.1, 3.5
    s = (math.log(2.0) / (lam * math.pi * kappa(alpha))) ** (alpha / 2.0) / p_d
    assert math.isclose(laplace_d2d_interference(s, lam, p_d, alpha), 0.5, rel_tol=1e-9)

    try:
        laplace_d2d_interference(-1.0, lam, p_d, alpha)
        assert False, "negative argument should raise"
    except ValueError:
        pass

    print("✓ s = 0 and lambda = 0 give 1")
    print("✓ Negative argument raises")


def test_zero_noise_reduces_to_closed_forms():
    """Test: with sigma² = 0 the general integrals equal the closed forms"""
    print("\n=== Test 5: Zero-Noise Consistency ===")

    pairs = {
        AllocationMode.DEDICATED: (
            (coverage_d2d_dedicated, coverage_d2d_dedicated_il),
            (coverage_cellular_dedicated, coverage_cellular_dedicated_il),
        ),
        AllocationMode.SHARED: (
            (coverage_d2d_shared, coverage_d2d_shared_il),
            (coverage_cellular_shared, coverage_cellular_shared_il),
        ),
    }

    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(10):
        for mode, functions in pairs.items():
            cfg = random_noiseless_config(rng, mode)
            load = load_state(cfg, mode, congested=False)
            for general, limited in functions:
                for beta in BETAS:
                    a = general(cfg, beta, load=load)
                    b = limited(cfg, beta, load=load)
                    assert abs(a - b) <= 1e-6, (general.__name__, beta, a, b)
                    checked += 1

    print(f"✓ {checked} general/closed-form pairs agree within 1e-6")


def test_noise_lowers_coverage():
    """Test: thermal noise can only reduce coverage"""
    print("\n=== Test 6: Noise Lowers Coverage ===")

    cfg = load_scenario("fig10-distance280")[1]
    load = load_state(cfg)
    for beta in BETAS:
        noisy = coverage_d2d_dedicated(cfg, beta, load=load)
        limited = coverage_d2d_dedicated_il(cfg, beta, load=load)
        assert noisy <= limited + 1e-9

    print("✓ P(SINR > beta) <= interference-limited value")


def test_coverage_edges():
    """Test: beta <= 0, delta = 0 and an empty D2D process"""
    print("\n=== Test 7: Coverage Edge Cases ===")

    cfg = load_scenario("table2-dedicated")[1]
    assert coverage_d2d_dedicated(cfg, 0.0) == 1.0
    assert coverage_cellular_dedicated(cfg, -1.0) == 1.0
    assert coverage_d2d_dedicated(cfg.replace(delta=0.0), 10.0) == 1.0

    silent = cfg.with_hopping(p_t=0.0)
    assert coverage_d2d_dedicated_il(silent, 100.0) == 1.0

    try:
        coverage_cellular_dedicated(cfg.replace(lambda_b=0.0), 1.0)
        assert False, "cellular coverage without BSs should raise"
    except ValueError:
        pass

    print("✓ Trivial thresholds, zero link distance and silent D2D give 1")


def test_coverage_curve():
    """Test: curves are non-increasing probabilities on an ascending grid"""
    print("\n=== Test 8: Coverage Curves ===")

    cfg = load_scenario("table2-shared")[1]
    betas = default_betas()
    assert len(betas) == 40
    assert math.isclose(betas[0], 0.01) and math.isclose(betas[-1], 1e4)

    for link_class in (LinkClass.D2D, LinkClass.CELLULAR):
        curve = coverage_curve(cfg, link_class, betas=betas, workers=2)
        assert all(0.0 <= p <= 1.0 for p in curve.ccdf)
        assert all(b <= a for a, b in zip(curve.ccdf, curve.ccdf[1:]))
        print(f"✓ {link_class.value}: P(SINR > 0 dB) ~ {curve.function(1.0):.3f}")

    try:
        coverage_curve(cfg, LinkClass.D2D, betas=[1.0, 0.1])
        assert False, "descending grid should raise"
    except ValueError:
        pass


def test_rate_integral_oracle():
    """Test: rate integral and supremum search on P(beta) = 1/(1+beta)"""
    print("\n=== Test 9: Rate Integral Oracle ===")

    ccdf = lambda beta: 1.0 / (1.0 + beta)

    # integral of e^{-u} du = 1
    assert math.isclose(rate_integral(ccdf), 1.0 / math.log(2.0), rel_tol=1e-7)

    beta_star, value = supremum_log_rate(ccdf)
    assert abs(beta_star - (math.e - 1.0)) < 1e-4
    assert math.isclose(value, 1.0 / (math.e * math.log(2.0)), rel_tol=1e-8)

    print(f"✓ E[log2(1+SINR)] = {rate_integral(ccdf):.6f}")
    print(f"✓ beta* = {beta_star:.5f}, sup = {value:.6f}")


def test_rate_prefactors():
    """Test: resource prefactors and the lambda-weighted mixture"""
    print("\n=== Test 10: Rate Prefactors ===")

    cfg = load_scenario("table2-dedicated")[1].with_hopping(p_t=[1.0, 0.5])
    load = load_state(cfg)
    rate_c, per_type = assemble_rates(cfg, AllocationMode.DEDICATED, load, 2.0, 3.0)

    assert math.isclose(rate_c, 5 * load.p_a * 2.0)
    # type 1: min(0.2 * 25, 5) = 5 subbands, never relayed
    assert math.isclose(per_type[0], 5 * 3.0)
    # type 2: half the time direct on min(0.6 * 25, 15) subbands, half relayed at cost w
    expected = 0.5 * 15 * 3.0 + (15 / 2.0) * 0.5 * load.p_a * 2.0
    assert math.isclose(per_type[1], expected)
    assert math.isclose(mixture(cfg, per_type), 0.5 * per_type[0] + 0.5 * per_type[1])
    assert mixture(cfg.replace(d2d_types=(D2DTypeConfig(0.0, 5),)), (1.0,)) == 0.0

    print(f"✓ R_C = {rate_c:.4f}, R_D = {per_type}")


def test_lower_bounds_below_rates():
    """Test: supremum bounds never exceed the exact rates"""
    print("\n=== Test 11: Lower Bounds ===")

    for name, solver in (("table2-dedicated", rates_dedicated), ("table2-shared", rates_shared)):
        cfg = load_scenario(name)[1]
        report = solver(cfg)

        assert report.lb_cellular <= report.rate_cellular
        assert report.lb_cellular >= 0.25 * report.rate_cellular
        for lb, exact in zip(report.lb_d2d_per_type, report.rate_d2d_per_type):
            assert lb <= exact
            assert lb >= 0.25 * exact

        ratio = report.lb_cellular / report.rate_cellular
        print(f"✓ {name}: lb/exact (cellular) = {ratio:.3f}")


def test_mode_comparison_low_density():
    """Test: sparse D2D favours the shared band"""
    print("\n=== Test 12: Dedicated vs Shared (sparse D2D) ===")

    cfg = load_scenario("lowdensity-lambdaD-0.1")[1]
    result = compare_allocation_modes(cfg)
    dedicated = result["dedicated_bps"]
    shared = result["shared_bps"]

    assert abs(dedicated - 9.6e6) <= 0.2 * 9.6e6, dedicated
    assert abs(shared - 13.6e6) <= 0.2 * 13.6e6, shared
    assert shared > dedicated

    print(f"✓ Dedicated: {dedicated / 1e6:.2f} Mbps per cell")
    print(f"✓ Shared:    {shared / 1e6:.2f} Mbps per cell")


def test_rate_integral_truncation():
    """Test: slowly decaying CCDFs converge, flat ones are refused"""
    print("\n=== Test 13: Rate Integral Truncation ===")

    # decays like e^{-u/2} in u = ln(1 + beta); the u-integral is pi/2
    heavy = lambda beta: 1.0 / (1.0 + math.sqrt(beta))
    assert math.isclose(rate_integral(heavy), 0.5 * math.pi / math.log(2.0), rel_tol=1e-6)
    print(f"✓ 1/(1+sqrt(beta)): {rate_integral(heavy):.6f}")

    try:
        rate_integral(lambda beta: 1.0)
        assert False, "a CCDF that never decays should raise"
    except QuadratureError as e:
        assert "unbounded" in str(e)
    print("✓ P = 1 raises QuadratureError")

    # H_1 ~ (kappa/2) beta^(2/alpha) - 1/2 for large beta
    for beta in (1e20, 1e30):
        asymptote = 0.5 * kappa(3.5) * beta ** (2.0 / 3.5) - 0.5
        assert math.isclose(h1(beta, 3.5), asymptote, rel_tol=1e-5)
    assert h1(1e30, 3.5) > h1(1e20, 3.5)

    for name in PRESETS:
        cfg = load_scenario(name)[1]
        general = rates(cfg)
        limited = rates(cfg, interference_limited=True, load=load_state(cfg, congested=True))
        for report in (general, limited):
            values = (
                report.spectral_efficiency_cellular,
                report.spectral_efficiency_d2d,
                report.rate_cellular,
                report.rate_d2d_mixture,
            )
            assert all(math.isfinite(v) and v > 0 for v in values), (name, values)
        print(f"✓ {name}: SE_C = {general.spectral_efficiency_cellular:.3f}, "
              f"SE_D = {general.spectral_efficiency_d2d:.3f}")


def test_shared_coverage_below_dedicated():
    """Test: the shared band only adds interference at equal load"""
    print("\n=== Test 14: Shared vs Dedicated Coverage ===")

    cfg = load_scenario("table2-dedicated")[1]
    load = load_state(cfg, AllocationMode.SHARED)
    assert load.rho == 1.0

    for link_class in (LinkClass.D2D, LinkClass.CELLULAR):
        for limited in (True, False):
            dedicated = coverage_function(
                cfg, link_class, AllocationMode.DEDICATED, interference_limited=limited, load=load
            )
            shared = coverage_function(
                cfg, link_class, AllocationMode.SHARED, interference_limited=limited, load=load
            )
            for beta in BETAS:
                assert shared(beta) <= dedicated(beta) + 1e-9, (link_class, limited, beta)
            if link_class == LinkClass.D2D:
                assert shared(1.0) < dedicated(1.0)
        print(f"✓ {link_class.value}: shared <= dedicated on {len(BETAS)} thresholds")


def test_shared_coverage_monotone_in_hopping():
    """Test: more D2D activity never raises shared-band coverage"""
    print("\n=== Test 15: Shared Coverage vs Hopping ===")

    cfg = load_scenario("table2-shared")[1]
    grid = (0.25, 0.5, 0.75, 1.0)

    for link_class in (LinkClass.D2D, LinkClass.CELLULAR):
        for name in ("p_t", "p_f"):
            for beta in (0.1, 1.0, 10.0):
                values = [
                    coverage_function(cfg.with_hopping(**{name: p}), link_class)(beta)
                    for p in grid
                ]
                assert all(b <= a + 1e-9 for a, b in zip(values, values[1:])), (
                    link_class, name, beta, values
                )
        print(f"✓ {link_class.value}: non-increasing in p_t and p_f")


def test_dedicated_d2d_rate_exceeds_shared():
    """Test: D2D links earn more in the dedicated band across user densities"""
    print("\n=== Test 16: Dedicated vs Shared D2D Rate ===")

    dedicated_cfg = load_scenario("table2-dedicated")[1]
    shared_cfg = load_scenario("table2-shared")[1]

    for users in (20, 60, 100):
        dedicated = rates_dedicated(apply_sweep_value(dedicated_cfg, "lambda_u", users))
        shared = rates_shared(apply_sweep_value(shared_cfg, "lambda_u", users))
        assert dedicated.rate_d2d_mixture > shared.rate_d2d_mixture
        for ded_rate, shared_rate in zip(dedicated.rate_d2d_per_type, shared.rate_d2d_per_type):
            assert ded_rate > shared_rate
        print(f"✓ {users} users/cell: R_D dedicated = {dedicated.rate_d2d_mixture:.3f}, "
              f"shared = {shared.rate_d2d_mixture:.3f}")


def run_all_tests():
    """Run all tests"""
    print("=" * 60)
    print("ANALYTIC ENGINE TEST SUITE")
    print("=" * 60)

    try:
        test_kappa()
        test_h1_hypergeometric()
        test_h0_closed_form()
        test_laplace_edges()
        test_zero_noise_reduces_to_closed_forms()
        test_noise_lowers_coverage()
        test_coverage_edges()
        test_coverage_curve()
        test_rate_integral_oracle()
        test_rate_prefactors()
        test_lower_bounds_below_rates()
        test_mode_comparison_low_density()
        test_rate_integral_truncation()
        test_shared_coverage_below_dedicated()
        test_shared_coverage_monotone_in_hopping()
        test_dedicated_d2d_rate_exceeds_shared()

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
