from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


def _one_of(model: BaseModel, *names: str, required: bool = True) -> None:
    given = [n for n in names if getattr(model, n) is not None]
    if len(given) > 1:
        raise ValueError(f"give only one of {', '.join(names)} (got {', '.join(given)})")
    if required and not given:
        raise ValueError(f"one of {', '.join(names)} is required")


class D2DTypeSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lambda_d: Optional[float] = Field(default=None, ge=0)
    lambda_d_per_cell: Optional[float] = Field(default=None, ge=0)
    b_d: int = Field(ge=1)
    p_t: float = Field(default=1.0, ge=0, le=1)
    p_f: float = Field(default=1.0, ge=0, le=1)

    @model_validator(mode="after")
    def _density(self):
        _one_of(self, "lambda_d", "lambda_d_per_cell")
        return self


class ScenarioSchema(BaseModel):
    """Scenario file as written by users: per-cell densities and dBm powers allowed."""
    model_config = ConfigDict(extra="forbid")

    name: str = "custom"
    mode: Literal["dedicated", "shared"] = "dedicated"

    cell_side_m: Optional[float] = Field(default=None, gt=0)
    lambda_b: Optional[float] = Field(default=None, ge=0)
    lambda_b_per_cell: Optional[float] = Field(default=None, ge=0)
    lambda_u: Optional[float] = Field(default=None, ge=0)
    lambda_u_per_cell: Optional[float] = Field(default=None, ge=0)

    delta: Optional[float] = Field(default=None, ge=0)
    delta_mean_m: Optional[float] = Field(default=None, ge=0)

    p_b: Optional[float] = Field(default=None, gt=0)
    p_b_dbm: Optional[float] = None
    p_d: Optional[float] = Field(default=None, gt=0)
    p_d_dbm: Optional[float] = None
    noise: Optional[float] = Field(default=None, ge=0)
    noise_dbm: Optional[float] = None

    alpha: float = Field(gt=2)
    b_total: int = Field(ge=1)
    b_c: int = Field(ge=1)
    w: float = Field(gt=0)
    theta: float = Field(default=0.5, ge=0, le=1)

    subband_bandwidth_hz: Optional[float] = Field(default=None, gt=0)
    bandwidth_hz: Optional[float] = Field(default=None, gt=0)

    d2d_types: List[D2DTypeSchema] = Field(min_length=1)

    @model_validator(mode="after")
    def _alternatives(self):
        _one_of(self, "lambda_b", "lambda_b_per_cell")
        _one_of(self, "lambda_u", "lambda_u_per_cell")
        _one_of(self, "delta", "delta_mean_m")
        _one_of(self, "p_b", "p_b_dbm")
        _one_of(self, "p_d", "p_d_dbm")
        _one_of(self, "noise", "noise_dbm")
        _one_of(self, "subband_bandwidth_hz", "bandwidth_hz", required=False)

        per_cell = (
            self.lambda_b_per_cell is not None
            or self.lambda_u_per_cell is not None
            or any(t.lambda_d_per_cell is not None for t in self.d2d_types)
        )
        if per_cell and self.cell_side_m is None:
            raise ValueError("per-cell densities need cell_side_m")
        return self


class SweepSchema(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    var: str
    start: Optional[float] = Field(default=None, alias="from")
    stop: Optional[float] = Field(default=None, alias="to")
    step: Optional[float] = Field(default=None, gt=0)
    grid: Optional[List[float]] = None

    @model_validator(mode="after")
    def _range_or_grid(self):
        ranged = [self.start, self.stop, self.step]
        if self.grid is not None:
            if any(v is not None for v in ranged):
                raise ValueError("give either grid or from/to/step, not both")
            if not self.grid:
                raise ValueError("sweep grid is empty")
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                raise ValueError("sweep grid must be strictly increasing")
        else:
            if any(v is None for v in ranged):
                raise ValueError("sweep needs from, to and step (or a grid)")
            if self.stop < self.start:
                raise ValueError("sweep 'to' must not be below 'from'")
        return self


class BetaGridSchema(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    start: float = Field(default=-20.0, alias="from")
    stop: float = Field(default=40.0, alias="to")
    points: int = Field(default=40, ge=1)

    @model_validator(mode="after")
    def _ordered(self):
        if self.stop < self.start:
            raise ValueError("betas_db 'to' must not be below 'from'")
        return self


class ExperimentSpecSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: str
    task: Literal["coverage", "rates", "validate", "optimize", "sweep"]
    mode: Optional[Literal["dedicated", "shared"]] = None
    sweep: Optional[SweepSchema] = None
    betas_db: Optional[BetaGridSchema] = None
    replications: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0)
    tolerance: float = Field(default=0.015, gt=0)
    window_m: Optional[float] = Field(default=None, gt=0)
    fidelity: Literal["thinned", "scheduled"] = "thinned"
    output: Optional[str] = None
    format: Literal["csv", "record", "json"] = "csv"
    workers: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _sweep_for_sweep_task(self):
        if self.task == "sweep" and self.sweep is None:
            raise ValueError("task 'sweep' needs a sweep section")
        return self
