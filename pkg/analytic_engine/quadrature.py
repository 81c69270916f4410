"""
Thin layer over QUADPACK (scipy.integrate.quad).

Every integral comes back with its error estimate. Non-convergence is
tolerated when the reported error is still small; otherwise it raises
QuadratureError with the QUADPACK diagnostics.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from scipy import integrate

from network_model.errors import QuadratureError

logger = logging.getLogger("analytic_engine")

EPSREL = 1e-8
EPSABS = 1e-12
LIMIT = 500

# Accept a flagged result when its error estimate stays below this,
# relative to max(1, |value|)
ACCEPT_TOL = 1e-7


@dataclass(frozen=True)
class QuadResult:
    value: float
    abserr: float
    neval: int


def integrate_1d(
    fn: Callable[[float], float],
    lower: float,
    upper: float = math.inf,
    *,
    label: str = "integral",
    points: Optional[Sequence[float]] = None,
) -> QuadResult:
    """Integrate fn over [lower, upper]; infinite limits are allowed."""
    kwargs = dict(epsabs=EPSABS, epsrel=EPSREL, limit=LIMIT, full_output=1)
    if points is not None and math.isfinite(lower) and math.isfinite(upper):
        kwargs["points"] = list(points)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(fn, lower, upper, **kwargs)

    value, abserr, info = out[0], out[1], out[2]
    neval = int(info.get("neval", 0))

    if len(out) > 3:
        message = str(out[3])
        if not math.isfinite(value) or abserr > ACCEPT_TOL * max(1.0, abs(value)):
            raise QuadratureError(label, value, abserr, neval, message)
        logger.debug("%s: accepted flagged quadrature (abserr=%.3g): %s", label, abserr, message)

    if not math.isfinite(value):
        raise QuadratureError(label, value, abserr, neval, "non-finite result")

    return QuadResult(value=value, abserr=abserr, neval=neval)
