"""Single Monte Carlo trials and the worker pool that runs them."""

import logging
import multiprocessing
import os
import time
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

from cprsim.experiments.seeds import trial_generators
from cprsim.measurement.sensing import SensingOperator, build_operator
from cprsim.model.config import RetrievalOptions, SensingMode, SolverOptions
from cprsim.model.signals import SparseSignal, random_sparse_signal
from cprsim.model.validation import FirstEntryVanishesError
from cprsim.pipeline import assess, reconstruct, simulate
from cprsim.utils.console import console, get_show_progress

logger = logging.getLogger(__name__)

RANDOM_FIRST = "random"
FIXED_FIRST = "fixed"


@dataclass(frozen=True)
class TrialSpec:
    """Everything needed to rerun one trial from its seed."""

    experiment: str
    n: int
    k: int
    mode: SensingMode
    rows: int
    measurements: int
    trial: int
    seed: int
    snr_db: float | None = None
    variant: str = RANDOM_FIRST
    include_first: bool = True
    threshold: float = 1e-5
    solver: SolverOptions | None = None
    retrieval: RetrievalOptions | None = None

    @property
    def fix_first(self) -> bool:
        """True for the |x[1]| = 1 variant."""
        return self.variant == FIXED_FIRST

    def sort_key(self) -> tuple:
        """Deterministic ordering by grid point, then trial index."""
        snr = -np.inf if self.snr_db is None else self.snr_db
        return (self.k, self.measurements, snr, self.variant, self.trial)


@dataclass
class TrialRecord:
    """Outcome of one trial."""

    experiment: str
    k: int
    measurements: int
    rows: int
    snr_db: float | None
    variant: str
    trial: int
    seed: int
    success: bool
    mse: float
    stage1_residual: float
    iterations: int
    converged: bool
    error: str | None = None
    wall_time: float = 0.0

    def sort_key(self) -> tuple:
        """Same ordering as TrialSpec.sort_key."""
        snr = -np.inf if self.snr_db is None else self.snr_db
        return (self.k, self.measurements, snr, self.variant, self.trial)


def trial_instance(spec: TrialSpec) -> tuple[SparseSignal, SensingOperator, np.random.Generator]:
    """Regenerate the signal, the operator and the noise generator of a trial."""
    signal_rng, operator_rng, noise_rng = trial_generators(spec.seed)
    signal = random_sparse_signal(
        spec.n,
        spec.k,
        signal_rng,
        fix_first=spec.fix_first,
        include_first=spec.include_first or spec.fix_first,
    )
    operator = build_operator(spec.mode, spec.n, spec.rows, operator_rng)
    return signal, operator, noise_rng


def run_trial(spec: TrialSpec) -> TrialRecord:
    """Draw, measure and recover one signal; first-entry failures count as MSE 1."""
    start = time.perf_counter()
    signal, operator, noise_rng = trial_instance(spec)
    measurements = simulate(signal.values, operator, rng=noise_rng, snr=spec.snr_db, seed=spec.seed)

    fields = dict(
        experiment=spec.experiment,
        k=spec.k,
        measurements=spec.measurements,
        rows=spec.rows,
        snr_db=spec.snr_db,
        variant=spec.variant,
        trial=spec.trial,
        seed=spec.seed,
    )
    try:
        reconstruction = reconstruct(measurements, operator, spec.solver, spec.retrieval)
    except FirstEntryVanishesError as e:
        logger.debug("Trial %d (seed %d) failed: %s", spec.trial, spec.seed, e.message)
        return TrialRecord(
            **fields,
            success=False,
            mse=1.0,
            stage1_residual=float("nan"),
            iterations=0,
            converged=False,
            error=e.code,
            wall_time=time.perf_counter() - start,
        )

    outcome = assess(signal.values, reconstruction, spec.threshold)
    return TrialRecord(
        **fields,
        success=outcome.success,
        mse=outcome.aligned_mse,
        stage1_residual=outcome.stage1_residual,
        iterations=outcome.solver_report.iterations,
        converged=outcome.solver_report.converged,
        wall_time=time.perf_counter() - start,
    )


def resolve_workers(workers: int) -> int:
    """Number of processes for a `workers` setting; 0 means one per core."""
    return workers if workers > 0 else os.cpu_count() or 1


def run_trials(specs: Iterable[TrialSpec], workers: int = 1, description: str = "Running trials") -> list[TrialRecord]:
    """Run trials on a process pool and return records sorted by grid point and trial.

    Args:
        specs: Trials to run
        workers: Number of worker processes (1 runs in-process, 0 uses every core)
        description: Progress bar label

    Returns:
        Records in deterministic order, independent of scheduling
    """
    specs = list(specs)
    workers = min(resolve_workers(workers), max(1, len(specs)))
    records: list[TrialRecord] = []

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
        disable=not get_show_progress(),
    ) as progress:
        task = progress.add_task(description, total=len(specs))
        if workers <= 1 or len(specs) <= 1:
            for spec in specs:
                records.append(run_trial(spec))
                progress.advance(task)
        else:
            chunksize = max(1, len(specs) // (workers * 8))
            with multiprocessing.Pool(processes=workers) as pool:
                for record in pool.imap_unordered(run_trial, specs, chunksize=chunksize):
                    records.append(record)
                    progress.advance(task)

    records.sort(key=TrialRecord.sort_key)
    return records
