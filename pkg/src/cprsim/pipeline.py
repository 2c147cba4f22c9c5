"""Two-stage recovery: intensities -> algebraic phase retrieval -> l1 recovery."""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from cprsim.measurement.intensities import (
    IntensityMeasurements,
    masked_fields,
    measure_fourier,
    measure_vectors,
    sigma_for_snr,
)
from cprsim.measurement.masks import MaskSet, build_masks, measurement_vectors
from cprsim.measurement.sensing import FirstEntryAugmented, PartialFourierOperator, SensingOperator
from cprsim.model.config import EpsilonMode, RetrievalOptions, SensingMode, SolverOptions
from cprsim.model.signals import ComplexSignal, as_signal, inner
from cprsim.model.validation import invalid_argument
from cprsim.retrieval import PhaseRetrievalResult, recover_phases, split_result
from cprsim.solver.l1 import L1Problem, SolverReport, estimate_epsilon, solve_bp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Reconstruction:
    """Estimate plus the intermediate results of both stages."""

    estimate: ComplexSignal
    stage1: PhaseRetrievalResult
    report: SolverReport


@dataclass(frozen=True)
class RecoveryOutcome:
    """Reconstruction scored against the true signal."""

    x_estimate: ComplexSignal
    aligned_mse: float
    stage1_residual: float
    solver_report: SolverReport
    success: bool
    phase: complex = 1.0


def simulate(
    x: npt.ArrayLike,
    operator: SensingOperator,
    rng: np.random.Generator | None = None,
    snr: float | None = None,
    masks: MaskSet | None = None,
    seed: int | None = None,
) -> IntensityMeasurements:
    """Measure x through `operator`, adding field noise for the requested SNR (dB).

    Fourier operators go through the four masks; dense operators measure
    y = A x with the pair vectors.
    """
    x = as_signal(x, "x")
    if x.size != operator.dimension:
        raise invalid_argument(f"x has length {x.size}, operator dimension is {operator.dimension}")

    if isinstance(operator, PartialFourierOperator):
        masks = masks or build_masks(x.size)
        sigma = 0.0
        if snr is not None:
            fields = masked_fields(x, masks, operator.sampling_set)
            sigma = sigma_for_snr(float(np.sum(np.abs(fields) ** 2)), fields.size, snr)
        return measure_fourier(x, masks, operator.sampling_set, rng=rng, sigma_nu=sigma, seed=seed)

    y = operator.forward(x)
    psi_set = measurement_vectors(y.size)
    sigma = 0.0
    if snr is not None:
        fields = psi_set.fields(y)
        sigma = sigma_for_snr(float(np.sum(np.abs(fields) ** 2)), fields.size, snr)
    return measure_vectors(y, psi_set, rng=rng, sigma_nu=sigma, mode=operator.mode, dimension=x.size, seed=seed)


def _stage2_problem(
    b: IntensityMeasurements,
    operator: SensingOperator,
    stage1: PhaseRetrievalResult,
    solver: SolverOptions,
) -> L1Problem:
    if b.mode == SensingMode.FOURIER:
        if not isinstance(operator, PartialFourierOperator):
            raise invalid_argument("Fourier measurements need a partial Fourier operator")
        if b.sampling_set is not None and tuple(b.sampling_set) != operator.sampling_set:
            raise invalid_argument("measurement sampling set does not match the operator")
        x1_scaled, rhs = split_result(stage1, operator.dimension)
        matrix: SensingOperator = operator
        if solver.use_first_entry:
            matrix = FirstEntryAugmented(operator)
            rhs = np.append(rhs, x1_scaled)
    else:
        if isinstance(operator, PartialFourierOperator):
            raise invalid_argument(f"{b.mode.value} measurements need a dense operator")
        matrix, rhs = operator, stage1.y_tilde

    if rhs.size != matrix.rows:
        raise invalid_argument(f"recovered {rhs.size} linear samples, operator has {matrix.rows} rows")

    epsilon = solver.epsilon
    if solver.epsilon_mode == EpsilonMode.ESTIMATED:
        epsilon = estimate_epsilon(
            rhs.size,
            float(np.sqrt(b.noise_variance)),
            solver.confidence,
            amplification=stage1.noise_amplification,
        )
    return L1Problem(operator=matrix, rhs=rhs, epsilon=epsilon)


def _first_entry_convention(x: np.ndarray) -> np.ndarray:
    if abs(x[0]) == 0:
        return x
    rotated = x * (np.conj(x[0]) / abs(x[0]))
    rotated[0] = abs(x[0])
    return rotated


def reconstruct(
    b: IntensityMeasurements,
    operator: SensingOperator,
    solver: SolverOptions | None = None,
    retrieval: RetrievalOptions | None = None,
) -> Reconstruction:
    """Run both stages and keep their intermediate results.

    Raises:
        FirstEntryVanishesError: stage 1 cannot use y~[1] as reference
    """
    solver = solver or SolverOptions()
    if b.dimension is not None and b.dimension != operator.dimension:
        raise invalid_argument(f"measurements are for N = {b.dimension}, operator has N = {operator.dimension}")
    stage1 = recover_phases(b, retrieval)
    problem = _stage2_problem(b, operator, stage1, solver)
    report = solve_bp(problem, solver)
    if not report.converged:
        logger.debug("Stage 2 did not converge; using the best feasible candidate")
    return Reconstruction(estimate=_first_entry_convention(report.solution), stage1=stage1, report=report)


def recover(
    b: IntensityMeasurements,
    operator: SensingOperator,
    solver: SolverOptions | None = None,
    retrieval: RetrievalOptions | None = None,
) -> ComplexSignal:
    """Estimate x (x[1] real and nonnegative) from intensity measurements."""
    return reconstruct(b, operator, solver, retrieval).estimate


def align_phase(truth: npt.ArrayLike, estimate: npt.ArrayLike) -> tuple[complex, float]:
    """Best unimodular c for `estimate` and the relative error ||truth - c estimate||^2 / ||truth||^2."""
    truth = as_signal(truth, "truth")
    estimate = as_signal(estimate, "estimate")
    if truth.size != estimate.size:
        raise invalid_argument(f"truth has length {truth.size}, estimate has length {estimate.size}")
    energy = float(np.vdot(truth, truth).real)
    if energy == 0:
        raise invalid_argument("truth must be nonzero")
    correlation = inner(truth, estimate)
    c = correlation / abs(correlation) if correlation != 0 else 1.0 + 0.0j
    mse = float(np.linalg.norm(truth - c * estimate) ** 2 / energy)
    return complex(c), mse


def assess(truth: npt.ArrayLike, reconstruction: Reconstruction, threshold: float = 1e-5) -> RecoveryOutcome:
    """Score a reconstruction; success means aligned MSE below `threshold`."""
    c, mse = align_phase(truth, reconstruction.estimate)
    return RecoveryOutcome(
        x_estimate=reconstruction.estimate,
        aligned_mse=mse,
        stage1_residual=reconstruction.stage1.residual,
        solver_report=reconstruction.report,
        success=mse < threshold,
        phase=c,
    )
