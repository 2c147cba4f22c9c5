"""Experiment and solver configuration models."""

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# Config and table value for "no SNR grid"
NOISELESS = "noiseless"


class SensingMode(str, Enum):
    """How the signal is linearly sensed before the intensity stage."""

    FOURIER = "fourier"  # four masks + partial unitary DFT
    GAUSSIAN = "gaussian"  # dense complex Gaussian A, vector measurements of Ax
    BERNOULLI = "bernoulli"  # dense real +-1/sqrt(L) A


class EpsilonMode(str, Enum):
    """Residual budget selection for the sparse solver."""

    FIXED = "fixed"
    ESTIMATED = "estimated"


class OutputFormat(str, Enum):
    """Table output format."""

    CSV = "csv"
    JSON = "json"
    GNUPLOT = "gnuplot"


def rows_for_measurements(mode: SensingMode, measurements: int) -> int:
    """Number of linear samples L behind M intensity measurements.

    Fourier mode takes 4 measurements per sampled frequency (M = 4L); the dense
    modes measure y in C^L' with 4L' - 4 vectors.
    """
    if mode == SensingMode.FOURIER:
        return measurements // 4
    return measurements // 4 + 1


def measurements_for_rows(mode: SensingMode, rows: int) -> int:
    """Inverse of rows_for_measurements."""
    if mode == SensingMode.FOURIER:
        return 4 * rows
    return 4 * rows - 4


def max_rows(mode: SensingMode, n: int) -> int:
    """Largest admissible L for signal dimension n."""
    if mode == SensingMode.FOURIER:
        return n - 1
    return n


def min_rows(mode: SensingMode) -> int:
    """Smallest admissible L."""
    return 1 if mode == SensingMode.FOURIER else 2


class SolverOptions(BaseModel):
    """Options for the l1 solver (stage 2)."""

    model_config = ConfigDict(extra="forbid")

    max_iterations: int = Field(default=50_000, ge=1)
    feasibility_tol: float = Field(default=1e-8, gt=0)
    gap_tol: float = Field(default=1e-8, gt=0)
    check_every: int = Field(default=25, ge=1)
    primal_weight: float = Field(default=1.0, gt=0)
    epsilon_mode: EpsilonMode = Field(default=EpsilonMode.FIXED)
    epsilon: float = Field(default=0.0, ge=0)
    confidence: float = Field(default=0.95, gt=0, lt=1)
    # Append the row e_1^T with value sqrt(N) * y~[1] (Fourier mode only)
    use_first_entry: bool = Field(default=False)


class RetrievalOptions(BaseModel):
    """Options for the algebraic phase retrieval (stage 1)."""

    model_config = ConfigDict(extra="forbid")

    # Relative to the mean measurement value
    vanishing_tol: float = Field(default=1e-12, ge=0)
    negative_tol: float = Field(default=1e-12, ge=0)
    renormalize: bool = Field(default=False)


class ExperimentConfig(BaseModel):
    """Configuration for a Monte Carlo experiment."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(default=512, ge=2)
    k_values: list[int] = Field(default_factory=lambda: [12])
    # Exactly one of the two grids is set
    measurements: list[int] | None = Field(default=None)
    l_values: list[int] | None = Field(default=None)
    trials: int = Field(default=200, ge=1)
    # None means noiseless
    snr_db: list[float] | None = Field(default=None)
    mode: SensingMode = Field(default=SensingMode.FOURIER)

    # Test signals
    fix_first: bool = Field(default=False)
    include_first: bool = Field(default=True)
    compare_first_entry: bool = Field(default=True)

    threshold: float = Field(default=1e-5, gt=0)
    targets: list[float] = Field(default_factory=lambda: [0.95, 0.99])
    seed: int = Field(default=0, ge=0)
    # 0 runs one worker process per core
    workers: int = Field(default=0, ge=0)
    full_scale: bool = Field(default=False)

    out: str | None = Field(default=None)
    format: OutputFormat = Field(default=OutputFormat.CSV)

    solver: SolverOptions = Field(default_factory=SolverOptions)
    retrieval: RetrievalOptions = Field(default_factory=RetrievalOptions)

    @field_validator("k_values", "targets")
    @classmethod
    def validate_non_empty(cls, v: list) -> list:
        """Grids must not be empty."""
        if not v:
            msg = "grid must not be empty"
            raise ValueError(msg)
        return v

    @field_validator("targets")
    @classmethod
    def validate_targets(cls, v: list[float]) -> list[float]:
        """Target success rates lie in (0, 1]."""
        if any(not 0 < t <= 1 for t in v):
            msg = "target rates must lie in (0, 1]"
            raise ValueError(msg)
        return v

    @field_validator("snr_db", mode="before")
    @classmethod
    def parse_noiseless(cls, v: Any) -> Any:
        """The string "noiseless" stands for no SNR grid."""
        if isinstance(v, str) and v.strip().lower() == NOISELESS:
            return None
        return v

    @field_validator("snr_db")
    @classmethod
    def validate_snr(cls, v: list[float] | None) -> list[float] | None:
        """An SNR grid, when given, is non-empty."""
        if v is not None and not v:
            msg = "snr_db grid must not be empty (omit it for noiseless runs)"
            raise ValueError(msg)
        return v

    @model_validator(mode="after")
    def validate_grid(self) -> "ExperimentConfig":
        """Validate the (k, M) grid against N and the sensing mode."""
        if any(k < 1 or k > self.n for k in self.k_values):
            msg = f"every k must satisfy 1 <= k <= n ({self.n})"
            raise ValueError(msg)

        if (self.measurements is None) == (self.l_values is None):
            msg = "exactly one of measurements (M-grid) or l_values (L-grid) must be set"
            raise ValueError(msg)

        if self.measurements is not None:
            if not self.measurements:
                msg = "measurements grid must not be empty"
                raise ValueError(msg)
            if any(m < 4 or m % 4 for m in self.measurements):
                msg = "every M must be a positive multiple of 4"
                raise ValueError(msg)

        if self.l_values is not None and not self.l_values:
            msg = "l_values grid must not be empty"
            raise ValueError(msg)

        low, high = min_rows(self.mode), max_rows(self.mode, self.n)
        for rows in self.rows_grid():
            if rows < low or rows > high:
                msg = (
                    f"L = {rows} is infeasible for mode '{self.mode.value}' and n = {self.n} "
                    f"(need {low} <= L <= {high})"
                )
                raise ValueError(msg)
        return self

    def rows_grid(self) -> list[int]:
        """Sorted distinct L values of the grid."""
        if self.l_values is not None:
            return sorted(set(self.l_values))
        return sorted({rows_for_measurements(self.mode, m) for m in self.measurements or []})

    def measurement_grid(self) -> list[int]:
        """Sorted distinct M values of the grid."""
        return [measurements_for_rows(self.mode, rows) for rows in self.rows_grid()]

    @property
    def noiseless(self) -> bool:
        """True when no SNR grid is configured."""
        return self.snr_db is None
