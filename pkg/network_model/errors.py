from typing import List, Optional, Tuple


class ConfigError(ValueError):
    """
    Raised when a scenario or experiment spec fails validation.

    Carries field-level diagnostics as (field, message) pairs so the CLI can
    print one line per offending field.
    """

    def __init__(self, diagnostics: List[Tuple[str, str]]):
        self.diagnostics = list(diagnostics)
        summary = "; ".join(f"{field}: {message}" for field, message in self.diagnostics)
        super().__init__(f"Invalid configuration: {summary}")


class NoCellularSpectrumError(ZeroDivisionError):
    """Raised when B_C = 0, i.e. theta = 1 in dedicated mode."""


class DivergenceError(ValueError):
    """Raised for path-loss exponents where the interference functional diverges."""


class QuadratureError(ArithmeticError):
    """
    Raised when an adaptive quadrature does not reach the requested accuracy.
    """

    def __init__(
        self,
        label: str,
        value: float,
        abserr: float,
        neval: int,
        message: Optional[str] = None,
    ):
        self.label = label
        self.value = value
        self.abserr = abserr
        self.neval = neval
        self.message = message or ""
        super().__init__(
            f"{label}: quadrature did not converge "
            f"(value={value:.6g}, abserr={abserr:.3g}, neval={neval}) {self.message}".rstrip()
        )

    def diagnostics(self) -> dict:
        return {
            "integral": self.label,
            "value": self.value,
            "abserr": self.abserr,
            "neval": self.neval,
            "message": self.message,
        }


class CostGuardError(RuntimeError):
    """Raised when a grid search exceeds the configured point budget."""
