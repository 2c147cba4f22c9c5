"""The three Monte Carlo experiments: success rate, phase transition and noise sweep."""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from cprsim.catalog.presets import NOISE_SWEEP, PHASE_TRANSITION, SUCCESS_RATE, effective_trials
from cprsim.experiments.seeds import trial_seed
from cprsim.experiments.trials import FIXED_FIRST, RANDOM_FIRST, TrialRecord, TrialSpec, run_trials
from cprsim.model.config import ExperimentConfig, measurements_for_rows
from cprsim.model.validation import invalid_argument

logger = logging.getLogger(__name__)

NOT_REACHED = "not reached"


@dataclass(frozen=True)
class SuccessRow:
    """Empirical success rate at one (k, M) grid point."""

    k: int
    measurements: int
    rows: int
    snr_db: float | None
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def k_over_m(self) -> float:
        return self.k / self.measurements


@dataclass(frozen=True)
class TransitionRow:
    """Smallest grid M reaching a target success rate for one k."""

    k: int
    target: float
    min_measurements: int | None
    rate: float | None
    reference_log2: float
    reference_ln: float

    @property
    def reached(self) -> bool:
        return self.min_measurements is not None


@dataclass(frozen=True)
class NoiseRow:
    """Mean aligned MSE at one SNR point for one first-entry variant."""

    k: int
    measurements: int
    snr_db: float
    variant: str
    trials: int
    mean_mse: float
    std_error: float
    success_rate: float

    @property
    def mse_db(self) -> float:
        return float(10.0 * np.log10(self.mean_mse)) if self.mean_mse > 0 else float("-inf")


@dataclass
class ExperimentResult:
    """Aggregate table plus the trial records it was computed from."""

    experiment: str
    rows: list = field(default_factory=list)
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def unreachable(self) -> bool:
        """True when a phase-transition target was not reached within the grid."""
        return any(isinstance(row, TransitionRow) and not row.reached for row in self.rows)


def reference_measurements(n: int, k: int) -> tuple[float, float]:
    """The two reference curves 4k log2(N/k) and 8k ln(N/k)."""
    return 4 * k * math.log2(n / k), 8 * k * math.log(n / k)


def _specs(
    config: ExperimentConfig,
    experiment: str,
    k: int,
    rows: int,
    trials: int,
    snr_db: float | None = None,
    variant: str | None = None,
) -> list[TrialSpec]:
    measurements = measurements_for_rows(config.mode, rows)
    variant = variant or (FIXED_FIRST if config.fix_first else RANDOM_FIRST)
    return [
        TrialSpec(
            experiment=experiment,
            n=config.n,
            k=k,
            mode=config.mode,
            rows=rows,
            measurements=measurements,
            trial=trial,
            seed=trial_seed(config.seed, experiment, k, measurements, snr_db, variant, trial),
            snr_db=snr_db,
            variant=variant,
            include_first=config.include_first,
            threshold=config.threshold,
            solver=config.solver,
            retrieval=config.retrieval,
        )
        for trial in range(trials)
    ]


def run_success_rate(config: ExperimentConfig) -> ExperimentResult:
    """Success rate over every (k, M[, SNR]) grid point."""
    trials = effective_trials(config, SUCCESS_RATE)
    snr_grid: list[float | None] = [None] if config.noiseless else list(config.snr_db)

    specs: list[TrialSpec] = []
    for k in config.k_values:
        for rows in config.rows_grid():
            for snr in snr_grid:
                specs.extend(_specs(config, SUCCESS_RATE, k, rows, trials, snr))

    records = run_trials(specs, config.workers, "Success rate")
    result = ExperimentResult(experiment=SUCCESS_RATE, records=records)
    for (k, measurements, _, _), group in _groups(records):
        result.rows.append(
            SuccessRow(
                k=k,
                measurements=measurements,
                rows=group[0].rows,
                snr_db=group[0].snr_db,
                trials=len(group),
                successes=sum(r.success for r in group),
            )
        )
    return result


def _groups(records: list[TrialRecord]) -> list[tuple[tuple, list[TrialRecord]]]:
    grouped: dict[tuple, list[TrialRecord]] = {}
    for record in records:
        grouped.setdefault(record.sort_key()[:4], []).append(record)
    return list(grouped.items())


def first_reaching(count: int, rate: Callable[[int], float], target: float) -> int | None:
    """Smallest index i in [0, count) with rate(i) >= target, assuming rate is nondecreasing.

    Returns None when even the last index misses the target.
    """
    if count == 0 or rate(count - 1) < target:
        return None
    low, high = 0, count - 1
    while low < high:
        mid = (low + high) // 2
        if rate(mid) >= target:
            high = mid
        else:
            low = mid + 1
    return low


def run_phase_transition(config: ExperimentConfig, targets: list[float] | None = None) -> ExperimentResult:
    """Minimal grid M reaching each target rate, by bisection over the sorted M-grid.

    Rates are cached per grid point, so targets share evaluations. The first
    SNR of the grid is used when one is configured; otherwise trials are noiseless.
    """
    targets = sorted(targets or config.targets)
    trials = effective_trials(config, PHASE_TRANSITION)
    snr = None if config.noiseless else config.snr_db[0]
    grid = config.rows_grid()
    result = ExperimentResult(experiment=PHASE_TRANSITION)

    for k in config.k_values:
        cache: dict[int, float] = {}

        def rate(index: int, k: int = k, cache: dict[int, float] = cache) -> float:
            rows = grid[index]
            if rows not in cache:
                specs = _specs(config, PHASE_TRANSITION, k, rows, trials, snr)
                description = f"k={k}, M={measurements_for_rows(config.mode, rows)}"
                records = run_trials(specs, config.workers, description)
                result.records.extend(records)
                cache[rows] = sum(r.success for r in records) / len(records)
            return cache[rows]

        log2_ref, ln_ref = reference_measurements(config.n, k)
        for target in targets:
            index = first_reaching(len(grid), rate, target)
            if index is None:
                logger.warning("k=%d: target rate %.3f not reached within the grid", k, target)
            result.rows.append(
                TransitionRow(
                    k=k,
                    target=target,
                    min_measurements=None if index is None else measurements_for_rows(config.mode, grid[index]),
                    rate=None if index is None else cache[grid[index]],
                    reference_log2=log2_ref,
                    reference_ln=ln_ref,
                )
            )

    result.records.sort(key=TrialRecord.sort_key)
    return result


def run_noise_sweep(config: ExperimentConfig) -> ExperimentResult:
    """Mean aligned MSE per SNR point, for the random and/or fixed |x[1]| variants."""
    if config.noiseless:
        raise invalid_argument("the noise sweep needs an SNR grid (snr_db)")
    trials = effective_trials(config, NOISE_SWEEP)
    if config.compare_first_entry:
        variants = [RANDOM_FIRST, FIXED_FIRST]
    else:
        variants = [FIXED_FIRST if config.fix_first else RANDOM_FIRST]

    specs: list[TrialSpec] = []
    for k in config.k_values:
        for rows in config.rows_grid():
            for snr in config.snr_db:
                for variant in variants:
                    specs.extend(_specs(config, NOISE_SWEEP, k, rows, trials, float(snr), variant))

    records = run_trials(specs, config.workers, "Noise sweep")
    result = ExperimentResult(experiment=NOISE_SWEEP, records=records)
    for (k, measurements, snr, variant), group in _groups(records):
        mse = np.array([r.mse for r in group])
        std_error = float(np.std(mse, ddof=1) / np.sqrt(mse.size)) if mse.size > 1 else 0.0
        result.rows.append(
            NoiseRow(
                k=k,
                measurements=measurements,
                snr_db=float(snr),
                variant=variant,
                trials=len(group),
                mean_mse=float(np.mean(mse)),
                std_error=std_error,
                success_rate=sum(r.success for r in group) / len(group),
            )
        )
    return result


def noise_slope(rows: list[NoiseRow], variant: str = RANDOM_FIRST, low: float = 20.0, high: float = 60.0) -> float:
    """Least-squares slope of mean MSE (dB) against SNR (dB) over [low, high]."""
    points = [(r.snr_db, r.mse_db) for r in rows if r.variant == variant and low <= r.snr_db <= high]
    if len(points) < 2:
        raise invalid_argument(f"need at least two SNR points in [{low}, {high}] for variant '{variant}'")
    snr, mse_db = np.array(points).T
    slope, _ = np.polyfit(snr, mse_db, 1)
    return float(slope)
