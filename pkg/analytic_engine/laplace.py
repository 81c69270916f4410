import math

from analytic_engine.special import kappa


def laplace_d2d_interference(
    s: float,
    lambda_d_tilde: float,
    p_d: float,
    alpha: float,
) -> float:
    """
    Laplace transform E[exp(-s I)] of the interference from a PPP of D2D
    transmitters with density lambda_d_tilde, power p_d and Rayleigh fading.

    exp(-lambda_d_tilde * pi * kappa(alpha) * (s p_d)^(2/alpha))
    """
    if s < 0:
        raise ValueError(f"transform argument must be non-negative, got {s}")
    if s == 0 or lambda_d_tilde == 0:
        return 1.0
    exponent = lambda_d_tilde * math.pi * kappa(alpha) * (s * p_d) ** (2.0 / alpha)
    return math.exp(-exponent)
