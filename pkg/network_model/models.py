from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from network_model.enums import (
    AllocationMode,
    LinkClass,
    OutputFormat,
    SearchMethod,
    SimulationFidelity,
    Task,
)
from network_model.units import linear_to_db


# -------- Scenario --------

@dataclass(frozen=True)
class D2DTypeConfig:
    """
    One class of potential D2D transmitters.

    lambda_d is in points per m²; b_d is the subband demand; p_t and p_f are
    the time- and frequency-hopping probabilities.
    """
    lambda_d: float
    b_d: int
    p_t: float = 1.0
    p_f: float = 1.0

    @property
    def activity(self) -> float:
        """Probability that a link of this type occupies a given subband."""
        return self.p_t * self.p_f


@dataclass(frozen=True)
class NetworkConfig:
    """
    All physical and MAC parameters of one scenario.

    Internal units only: densities in m⁻², distances in meters, powers in
    watts. dB values are converted at the scenario-file boundary.
    """
    lambda_b: float
    lambda_u: float
    d2d_types: Tuple[D2DTypeConfig, ...]
    delta: float
    p_b: float
    p_d: float
    noise: float
    alpha: float
    b_total: int
    b_c: int
    w: float
    theta: float
    mode: AllocationMode = AllocationMode.DEDICATED
    subband_bandwidth_hz: float = 200e3

    @property
    def num_types(self) -> int:
        return len(self.d2d_types)

    @property
    def lambda_d(self) -> float:
        """Total density of potential D2D transmitters."""
        return sum(t.lambda_d for t in self.d2d_types)

    def b_cellular(self, mode: Optional[AllocationMode] = None) -> float:
        """Subbands available to the cellular side, B_C."""
        mode = mode or self.mode
        if mode == AllocationMode.DEDICATED:
            return (1.0 - self.theta) * self.b_total
        return float(self.b_total)

    def b_d2d(self, mode: Optional[AllocationMode] = None) -> float:
        """Subband pool D2D links hop over: theta*B dedicated, B shared."""
        mode = mode or self.mode
        if mode == AllocationMode.DEDICATED:
            return self.theta * self.b_total
        return float(self.b_total)

    def replace(self, **changes) -> "NetworkConfig":
        return replace(self, **changes)

    def with_mode(self, mode: AllocationMode) -> "NetworkConfig":
        return replace(self, mode=mode)

    def with_hopping(
        self,
        p_t: Union[None, float, Sequence[float]] = None,
        p_f: Union[None, float, Sequence[float]] = None,
    ) -> "NetworkConfig":
        """
        Return a copy with new hopping probabilities.

        Scalars are broadcast to every type; sequences must have one entry
        per type.
        """
        p_t_values = _broadcast(p_t, [t.p_t for t in self.d2d_types], "p_t")
        p_f_values = _broadcast(p_f, [t.p_f for t in self.d2d_types], "p_f")
        types = tuple(
            replace(t, p_t=float(pt), p_f=float(pf))
            for t, pt, pf in zip(self.d2d_types, p_t_values, p_f_values)
        )
        return replace(self, d2d_types=types)


def _broadcast(value, current, name):
    if value is None:
        return current
    if isinstance(value, (int, float)):
        return [float(value)] * len(current)
    values = list(value)
    if len(values) != len(current):
        raise ValueError(f"{name} needs {len(current)} entries, got {len(values)}")
    return values


@dataclass(frozen=True)
class LoadState:
    """
    Expected load quantities of one allocation mode.

    congested marks the heavy-load convention (rho forced to 1, p_a
    unclamped) used by the optimizers.
    """
    rho: float
    p_a: float
    lambda_d_tilde: float
    b_cellular: float
    congested: bool = False


# -------- Analytic results --------

@dataclass(frozen=True)
class CoverageCurve:
    """
    CCDF of the SINR of one link class on a beta grid.

    function keeps the underlying coverage callable so the rate integral
    can be evaluated on (0, inf) rather than on the sampled points.
    """
    link_class: LinkClass
    mode: AllocationMode
    betas: Tuple[float, ...]
    ccdf: Tuple[float, ...]
    interference_limited: bool = False
    function: Optional[Callable[[float], float]] = field(
        default=None, compare=False, repr=False
    )

    @property
    def betas_db(self) -> Tuple[float, ...]:
        return tuple(linear_to_db(b) for b in self.betas)


@dataclass(frozen=True)
class RateLowerBounds:
    """Supremum-based rate bounds and the thresholds that attain them."""
    lb_cellular: float
    lb_d2d_per_type: Tuple[float, ...]
    beta_c_star: float
    beta_d_star: float
    log_rate_cellular: float
    log_rate_d2d: float


@dataclass(frozen=True)
class RateReport:
    """
    Average rates of one allocation mode.

    Rates are in subband-units x bits/s/Hz; multiply by the subband
    bandwidth to get bits/s.
    """
    mode: AllocationMode
    rate_cellular: float
    rate_d2d_per_type: Tuple[float, ...]
    rate_d2d_mixture: float
    lb_cellular: float
    lb_d2d_per_type: Tuple[float, ...]
    lb_d2d_mixture: float
    beta_c_star: float
    beta_d_star: float
    spectral_efficiency_cellular: float
    spectral_efficiency_d2d: float


# -------- Simulation --------

class D2DLink(NamedTuple):
    tx: Tuple[float, float]
    rx: Tuple[float, float]
    type_index: int
    active: bool
    subbands: frozenset


@dataclass(frozen=True, eq=False)
class Deployment:
    """
    One sampled realization on a square torus of side `window`.

    D2D links are stored column-wise; `subbands` is a boolean matrix with
    one row per link and one column per subband. The typical link is kept
    apart from the process (Slivnyak) with its receiver at the centre.
    """
    window: float
    seed: int
    bs_points: np.ndarray
    ue_points: np.ndarray
    d2d_tx: np.ndarray
    d2d_rx: np.ndarray
    d2d_type: np.ndarray
    d2d_active: np.ndarray
    d2d_subbands: np.ndarray
    typical_tx: np.ndarray
    typical_rx: np.ndarray
    typical_type: int
    resample_count: int = 0

    @property
    def center(self) -> np.ndarray:
        return np.array([self.window / 2.0, self.window / 2.0])

    @property
    def num_links(self) -> int:
        return int(self.d2d_tx.shape[0])

    def links(self) -> Iterator[D2DLink]:
        for k in range(self.num_links):
            yield D2DLink(
                tx=(float(self.d2d_tx[k, 0]), float(self.d2d_tx[k, 1])),
                rx=(float(self.d2d_rx[k, 0]), float(self.d2d_rx[k, 1])),
                type_index=int(self.d2d_type[k]),
                active=bool(self.d2d_active[k]),
                subbands=frozenset(np.flatnonzero(self.d2d_subbands[k]).tolist()),
            )


@dataclass(frozen=True)
class EmpiricalCcdf:
    """Counts of replications whose SINR exceeded each threshold."""
    link_class: LinkClass
    mode: AllocationMode
    betas: Tuple[float, ...]
    counts: Tuple[int, ...]
    replications: int
    seed: int
    half_widths: Tuple[float, ...]
    ci_low: Tuple[float, ...]
    ci_high: Tuple[float, ...]
    capped_samples: int = 0

    @property
    def ccdf(self) -> Tuple[float, ...]:
        return tuple(c / self.replications for c in self.counts)


@dataclass(frozen=True)
class EmpiricalRates:
    """Simulated counterpart of RateReport (exact rates only)."""
    mode: AllocationMode
    rate_cellular: float
    rate_d2d_per_type: Tuple[float, ...]
    rate_d2d_mixture: float
    spectral_efficiency_cellular: float
    spectral_efficiency_d2d: float
    stderr_cellular: float
    stderr_d2d: float
    replications: int
    seed: int
    capped_samples: int = 0


# -------- Optimizer --------

@dataclass(frozen=True)
class ThetaRegion:
    """
    One interval [lower, upper] of the spectrum-partition search.

    inner_types have b_d/B <= lower (their p_f* is below 1 on this interval);
    outer_types hop over the whole D2D pool.
    """
    index: int
    lower: float
    upper: float
    a: float
    c: float
    e: float
    f: float
    inner_types: Tuple[int, ...]
    outer_types: Tuple[int, ...]


@dataclass(frozen=True)
class ThetaPartitionCoeffs:
    regions: Tuple[ThetaRegion, ...]
    d: float
    beta_c: float
    beta_d: float


@dataclass(frozen=True)
class ThetaCandidate:
    """
    Candidate theta of one region.

    rising is True when E_i >= D*F_i, in which case the candidate is the
    right endpoint. unit_rule_theta is the candidate obtained by jumping to
    theta = 1 clamped to the region, recorded for audit.
    """
    region: int
    lower: float
    upper: float
    theta: float
    objective: float
    closed_form_objective: float
    rising: bool
    unit_rule_theta: float


@dataclass(frozen=True)
class PartitionSolution:
    p_t_star: Tuple[float, ...]
    p_f_star: Tuple[float, ...]
    theta_star: Optional[float]
    objective: float
    method: SearchMethod
    candidate_set: Tuple[ThetaCandidate, ...] = ()
    thresholds: Optional[Tuple[float, float]] = None
    heavily_loaded: bool = True


# -------- Experiment harness --------

@dataclass(frozen=True)
class ExperimentSpec:
    """
    One batch job: which scenario, which task, and where results go.
    """
    scenario: NetworkConfig
    scenario_name: str
    task: Task
    mode: Optional[AllocationMode] = None
    sweep_var: Optional[str] = None
    sweep_grid: Tuple[float, ...] = ()
    betas: Tuple[float, ...] = ()
    replications: int = 1000
    seed: int = 0
    tolerance: float = 0.015
    window: Optional[float] = None
    fidelity: SimulationFidelity = SimulationFidelity.THINNED
    output: Optional[str] = None
    output_format: OutputFormat = OutputFormat.CSV
    workers: Optional[int] = None

    @property
    def effective_mode(self) -> AllocationMode:
        return self.mode or self.scenario.mode
