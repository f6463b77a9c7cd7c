"""Data models for kmc_traffic package."""

import math
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .__version__ import __version__

SECONDS_PER_HOUR = 3600.0


class KernelKind(str, Enum):
    """Look-ahead kernel families."""

    CONSTANT = "constant"  # k_i = 1 within L
    LINEAR = "linear"  # linear decay within L
    EXPONENTIAL = "exponential"  # global, strength lambda
    CUSTOM = "custom"  # explicit values


class SlowdownKind(str, Enum):
    """Slowdown function families."""

    ARRHENIUS = "arrhenius"  # exp(-c x)
    LINEAR = "linear"  # max(1 - x, 0)
    QUADRATIC = "quadratic"  # max(1 - x, 0)^2


class EngineKind(str, Enum):
    """KMC engine variants."""

    STANDARD = "standard"
    ACCELERATED = "accelerated"
    LIST_BASED = "list_based"


class RateConvention(str, Enum):
    """Which total rate sets the waiting time of a step."""

    PRE = "pre"  # total before the event's rate update
    POST = "post"  # total after the update (literal step order)


class LimitKind(str, Enum):
    """Limits of the exponential kernel strength."""

    LAMBDA_TO_ZERO = "lambda_to_zero"
    LAMBDA_TO_INFINITY = "lambda_to_infinity"


class KernelConfig(BaseModel):
    """Configuration of a look-ahead kernel."""

    kind: KernelKind = Field(..., description="Kernel family")
    look_ahead: Optional[int] = Field(
        default=None, ge=1, description="Look-ahead distance L (constant, linear)"
    )
    strength: Optional[float] = Field(
        default=None, gt=0, description="Interaction strength lambda (exponential)"
    )
    values: Optional[List[float]] = Field(
        default=None, description="Explicit values by offset 0..N-1 (custom)"
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_parameters(self) -> "KernelConfig":
        """Validate that the parameter needed by the kind is provided."""
        if self.kind in (KernelKind.CONSTANT, KernelKind.LINEAR) and self.look_ahead is None:
            raise ValueError(f"{self.kind.value} kernel requires look_ahead")
        if self.kind == KernelKind.EXPONENTIAL and self.strength is None:
            raise ValueError("exponential kernel requires strength")
        if self.kind == KernelKind.CUSTOM and not self.values:
            raise ValueError("custom kernel requires values")
        return self

    @classmethod
    def parse(cls, text: str) -> "KernelConfig":
        """Parse the shorthand 'constant:L', 'linear:L' or 'exponential:LAMBDA'."""
        kind, _, arg = text.strip().partition(":")
        kind = kind.strip().lower()
        if not arg:
            raise ValueError(f"kernel '{text}' needs a parameter, e.g. linear:50")
        if kind == KernelKind.EXPONENTIAL.value:
            return cls(kind=KernelKind.EXPONENTIAL, strength=float(arg))
        if kind in (KernelKind.CONSTANT.value, KernelKind.LINEAR.value):
            return cls(kind=KernelKind(kind), look_ahead=int(arg))
        raise ValueError(f"unknown kernel kind '{kind}'")

    def label(self) -> str:
        """Kernel family name."""
        return self.kind.value

    def parameter(self) -> str:
        """L or lambda as text, for report columns."""
        if self.kind == KernelKind.EXPONENTIAL:
            return f"{self.strength:g}"
        if self.kind == KernelKind.CUSTOM:
            return ""
        return str(self.look_ahead)


class SlowdownConfig(BaseModel):
    """Configuration of the slowdown function g."""

    kind: SlowdownKind = Field(default=SlowdownKind.LINEAR, description="Slowdown family")
    coefficient: float = Field(default=1.0, gt=0, description="Arrhenius coefficient c")

    model_config = ConfigDict(frozen=True)

    @classmethod
    def parse(cls, text: str) -> "SlowdownConfig":
        """Parse 'arrhenius[:C]', 'linear' or 'quadratic'."""
        kind, _, arg = text.strip().partition(":")
        kind = kind.strip().lower()
        if kind == SlowdownKind.ARRHENIUS.value:
            return cls(kind=SlowdownKind.ARRHENIUS, coefficient=float(arg) if arg else 1.0)
        if arg:
            raise ValueError(f"slowdown '{kind}' takes no parameter")
        return cls(kind=SlowdownKind(kind))

    def label(self) -> str:
        """Shorthand label."""
        if self.kind == SlowdownKind.ARRHENIUS:
            return f"arrhenius:{self.coefficient:g}"
        return self.kind.value


class SimConfig(BaseModel):
    """Configuration of a single simulation run.

    Either n_cars or density must be given; density resolves to
    n_cars = floor(density * n_cells + 1/2). burn_in defaults to 10% of t_final.
    """

    n_cells: int = Field(..., ge=2, description="Number of lattice cells N")
    n_cars: Optional[int] = Field(default=None, ge=0, description="Number of cars Nc")
    density: Optional[float] = Field(
        default=None, ge=0, le=1, description="Average density rho-bar"
    )
    jump: int = Field(default=1, ge=1, description="Cells advanced per move J")
    omega0: float = Field(default=4.0, gt=0, description="Base hop frequency, 1/s")
    kernel: KernelConfig = Field(..., description="Look-ahead kernel")
    slowdown: SlowdownConfig = Field(
        default_factory=SlowdownConfig, description="Slowdown function g"
    )
    t_final: float = Field(default=3600.0, ge=0, description="Simulated horizon, s")
    burn_in: Optional[float] = Field(
        default=None, ge=0, description="Discarded initial span, s (default 10% of t_final)"
    )
    seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit random seed")
    engine: EngineKind = Field(default=EngineKind.ACCELERATED, description="Engine variant")
    refresh_every: int = Field(
        default=10_000, ge=0, description="Executed events between full weight refreshes (0: never)"
    )
    detector_cell: int = Field(default=0, ge=0, description="Detector site for flow counting")
    dt_rate_convention: RateConvention = Field(
        default=RateConvention.POST, description="Total rate used for the waiting time"
    )

    model_config = ConfigDict()

    @model_validator(mode="after")
    def validate_config(self) -> "SimConfig":
        """Resolve derived fields and check cross-field invariants."""
        if self.n_cars is None and self.density is None:
            raise ValueError("either n_cars or density must be provided")
        if self.density is not None:
            resolved = int(math.floor(self.density * self.n_cells + 0.5))
            if self.n_cars is not None and self.n_cars != resolved:
                raise ValueError(
                    f"n_cars={self.n_cars} disagrees with density={self.density} "
                    f"(expected {resolved})"
                )
            self.n_cars = resolved
        if self.n_cars > self.n_cells:
            raise ValueError(f"n_cars must not exceed n_cells ({self.n_cells})")
        if self.jump >= self.n_cells:
            raise ValueError("jump must be smaller than n_cells")
        if self.detector_cell >= self.n_cells:
            raise ValueError("detector_cell must lie in [0, n_cells)")

        if self.burn_in is None:
            self.burn_in = 0.1 * self.t_final
        if self.burn_in > self.t_final or (self.burn_in == self.t_final and self.t_final > 0):
            raise ValueError("t_final must exceed burn_in")

        if self.kernel.look_ahead is not None and self.kernel.look_ahead > self.n_cells:
            raise ValueError("kernel look_ahead must not exceed n_cells")
        if self.kernel.values is not None and len(self.kernel.values) != self.n_cells:
            raise ValueError("custom kernel values must have length n_cells")
        if self.engine == EngineKind.LIST_BASED and self.kernel.kind != KernelKind.CONSTANT:
            raise ValueError("list_based engine requires a constant kernel")
        return self

    @property
    def cars(self) -> int:
        """Resolved number of cars."""
        assert self.n_cars is not None
        return self.n_cars

    @property
    def rho_bar(self) -> float:
        """Realised density Nc / N."""
        return self.cars / self.n_cells

    def with_updates(self, **changes: Any) -> "SimConfig":
        """Return a re-validated copy with some fields replaced.

        Changing density or n_cars drops the other one so they cannot disagree.
        """
        data = self.model_dump()
        if "density" in changes:
            data["n_cars"] = None
        if "n_cars" in changes:
            data["density"] = None
        if "t_final" in changes and "burn_in" not in changes:
            data["burn_in"] = None
        data.update(changes)
        return SimConfig.model_validate(data)


class EventRecord(BaseModel):
    """Outcome of one KMC step.

    Attributes:
        time_before: Clock value when the step started, s
        dt: Waiting time drawn for the step, s
        car: Selected car identity
        old_cell: Cell left by the car (None for a null event)
        new_cell: Cell entered by the car (None for a null event)
        executed: False when the selected car was blocked
    """

    time_before: float = Field(..., ge=0)
    dt: float = Field(..., gt=0)
    car: Optional[int] = Field(default=None, ge=0)
    old_cell: Optional[int] = Field(default=None, ge=0)
    new_cell: Optional[int] = Field(default=None, ge=0)
    executed: bool = Field(...)

    @model_validator(mode="after")
    def validate_cells(self) -> "EventRecord":
        """Cells are present exactly for executed events."""
        has_cells = self.old_cell is not None and self.new_cell is not None
        if self.executed != has_cells:
            raise ValueError("old_cell/new_cell must be set iff the event was executed")
        return self


class SimSummary(BaseModel):
    """Measured averages of one run."""

    config: SimConfig
    flow: float = Field(default=0.0, ge=0, description="Average flow F-bar, cars/s")
    velocity: float = Field(default=0.0, ge=0, description="Ensemble velocity v-bar, cells/s")
    velocity_defined: bool = Field(default=False, description="False when v-bar had no cars")
    crossings: int = Field(default=0, ge=0)
    cells_advanced: int = Field(default=0, ge=0)
    measure_time: float = Field(default=0.0, ge=0, description="Measurement window, s")
    events_executed: int = Field(default=0, ge=0, description="Executed events in the window")
    events_null: int = Field(default=0, ge=0, description="Null events in the window")
    steps: int = Field(default=0, ge=0, description="All steps taken, burn-in included")
    final_clock: float = Field(default=0.0, ge=0)
    frozen: bool = Field(default=False)
    wall_time: float = Field(default=0.0, ge=0, description="Wall-clock time, s")

    @property
    def flow_per_hour(self) -> float:
        return self.flow * SECONDS_PER_HOUR

    @property
    def null_fraction(self) -> float:
        total = self.events_executed + self.events_null
        return self.events_null / total if total else 0.0


class DiagramRow(BaseModel):
    """One (density, seed) point of a fundamental diagram."""

    rho_bar: float = Field(..., ge=0, le=1)
    n_cars: int = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    replicate: int = Field(default=0, ge=0)
    strength: Optional[float] = Field(default=None, description="Kernel strength tag")
    flow: float = Field(..., ge=0, description="cars/s")
    velocity: float = Field(..., ge=0, description="cells/s")
    null_fraction: float = Field(..., ge=0, le=1)
    engine: EngineKind
    frozen: bool = False
    wall_time: float = Field(default=0.0, ge=0)

    @property
    def flow_per_hour(self) -> float:
        return self.flow * SECONDS_PER_HOUR


class DiagramAggregate(BaseModel):
    """Mean and standard error over the seeds of one density."""

    rho_bar: float = Field(..., ge=0, le=1)
    strength: Optional[float] = None
    n_seeds: int = Field(..., ge=1)
    flow_mean: float = Field(..., ge=0)
    flow_stderr: float = Field(..., ge=0)
    velocity_mean: float = Field(..., ge=0)
    velocity_stderr: float = Field(..., ge=0)

    @property
    def flow_per_hour_mean(self) -> float:
        return self.flow_mean * SECONDS_PER_HOUR


class BenchRow(BaseModel):
    """Timing of one engine at one lattice size."""

    engine: EngineKind
    n_cells: int = Field(..., ge=2)
    n_cars: int = Field(..., ge=0)
    events_executed: int = Field(..., ge=0)
    steps: int = Field(..., ge=0)
    wall_time: float = Field(..., ge=0)


class SlopeFit(BaseModel):
    """Least-squares fit of log(wall time) against log(N)."""

    engine: str
    slope: float
    intercept: float


class ValidationCheck(BaseModel):
    """One oracle comparison."""

    suite: str
    name: str
    measured: float
    threshold: float
    comparison: str = Field(default="<=", description="How measured relates to threshold")
    passed: bool


class ValidationReport(BaseModel):
    """Machine-readable outcome of the oracle suites."""

    checks: List[ValidationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(
        self, suite: str, name: str, measured: float, threshold: float, comparison: str = "<="
    ) -> ValidationCheck:
        """Record a check; comparison is '<=' or '>='."""
        if comparison == "<=":
            passed = measured <= threshold
        elif comparison == ">=":
            passed = measured >= threshold
        else:
            raise ValueError(f"unsupported comparison '{comparison}'")
        check = ValidationCheck(
            suite=suite,
            name=name,
            measured=float(measured),
            threshold=float(threshold),
            comparison=comparison,
            passed=bool(passed),
        )
        self.checks.append(check)
        return check


class RunManifest(BaseModel):
    """Everything needed to reproduce a set of output files."""

    subcommand: str
    version: str = Field(default=__version__)
    config: Optional[SimConfig] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)


class SweepResult(BaseModel):
    """Rows of a density sweep plus their per-density aggregates, in run order."""

    rows: List[DiagramRow] = Field(default_factory=list)
    aggregates: List[DiagramAggregate] = Field(default_factory=list)


class BenchReport(BaseModel):
    """Timings of a benchmark and the fitted scaling exponents."""

    rows: List[BenchRow] = Field(default_factory=list)
    fits: List[SlopeFit] = Field(default_factory=list)

    def slope(self, engine: str) -> Optional[float]:
        for fit in self.fits:
            if fit.engine == engine:
                return fit.slope
        return None

    def slope_gap(self, slower: str = "standard", faster: str = "accelerated") -> Optional[float]:
        """slope(slower) - slope(faster), or None if either fit is missing."""
        a, b = self.slope(slower), self.slope(faster)
        if a is None or b is None:
            return None
        return a - b
