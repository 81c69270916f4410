"""
Special functions of the interference functionals: kappa, H_1 and H_0.

H_1 and H_0 are integrated numerically after the substitution x = e^u,
which turns the algebraic tails into exponential ones. Closed forms are
kept next to them as independent cross-checks.
"""

import math

from scipy.special import hyp2f1, log_expit

from analytic_engine.quadrature import integrate_1d
from network_model.cache import memoize
from network_model.errors import DivergenceError


def kappa(alpha: float) -> float:
    """(2 pi / alpha) / sin(2 pi / alpha); diverges as alpha -> 2."""
    if alpha <= 2.0:
        raise DivergenceError(f"path-loss exponent must exceed 2, got alpha={alpha}")
    x = 2.0 * math.pi / alpha
    return x / math.sin(x)


def _check_alpha(alpha: float) -> None:
    if alpha <= 2.0:
        raise DivergenceError(f"path-loss exponent must exceed 2, got alpha={alpha}")


@memoize()
def h1(beta: float, alpha: float) -> float:
    """
    H_1(beta, alpha) = integral over [1, inf) of x / (1 + x^alpha / beta) dx.

    Interference from BSs farther than the serving one, normalised by the
    serving distance squared.
    """
    _check_alpha(alpha)
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    if beta == 0:
        return 0.0

    log_beta = math.log(beta)
    peak = log_beta / alpha

    def integrand(u: float) -> float:
        # x = e^u: x dx = e^{2u} du, and 1/(1+e^t) = expit(-t)
        return math.exp(2.0 * u + log_expit(log_beta - alpha * u))

    if peak <= 0.0:
        return integrate_1d(integrand, 0.0, math.inf, label="H1").value
    left = integrate_1d(integrand, 0.0, peak, label="H1")
    right = integrate_1d(integrand, peak, math.inf, label="H1")
    return left.value + right.value


@memoize()
def h0(beta: float, alpha: float, power_ratio: float) -> float:
    """
    H_0(beta, alpha) = integral over (0, inf) of x / (1 + P_D/P_B x^alpha / beta) dx.

    power_ratio is P_D / P_B.
    """
    _check_alpha(alpha)
    if power_ratio <= 0:
        raise ValueError(f"power ratio must be positive, got {power_ratio}")
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    if beta == 0:
        return 0.0

    log_scale = math.log(beta / power_ratio)
    peak = log_scale / alpha

    def integrand(u: float) -> float:
        return math.exp(2.0 * u + log_expit(log_scale - alpha * u))

    left = integrate_1d(integrand, -math.inf, peak, label="H0")
    right = integrate_1d(integrand, peak, math.inf, label="H0")
    return left.value + right.value


def h0_closed_form(beta: float, alpha: float, power_ratio: float) -> float:
    """(kappa/2) * (beta / power_ratio)^(2/alpha)."""
    if beta <= 0:
        return 0.0
    return 0.5 * kappa(alpha) * (beta / power_ratio) ** (2.0 / alpha)


def h1_hypergeometric(beta: float, alpha: float) -> float:
    """beta/(alpha-2) * 2F1(1, 1-2/alpha; 2-2/alpha; -beta)."""
    _check_alpha(alpha)
    if beta <= 0:
        return 0.0
    delta = 2.0 / alpha
    return beta / (alpha - 2.0) * float(hyp2f1(1.0, 1.0 - delta, 2.0 - delta, -beta))
