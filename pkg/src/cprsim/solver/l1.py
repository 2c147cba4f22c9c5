"""Complex basis pursuit and basis pursuit denoising.

    minimize ||z||_1  subject to  ||A z - b||_2 <= epsilon

The iteration is a primal-dual hybrid gradient scheme that only needs A, A*
and entrywise complex soft-thresholding. Every `check_every` iterations the
current iterate is turned into feasible primal candidates (feasibility
correction and a least-squares polish on its support) and dual certificates;
the run stops once the best pair closes the duality gap.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.stats import chi2

from cprsim.measurement.sensing import SensingOperator
from cprsim.model.config import SolverOptions
from cprsim.model.signals import ComplexSignal, as_signal, l1_norm
from cprsim.model.validation import invalid_argument

logger = logging.getLogger(__name__)

# Entries of the iterate below this fraction of its peak are left out of the polish support
SUPPORT_FRACTION = 1e-6
# Polished entries below this fraction of their peak are pruned before refitting
PRUNE_FRACTION = 1e-10
SIGN_REFINEMENTS = 4


@dataclass(frozen=True)
class L1Problem:
    """min ||z||_1 s.t. ||A z - rhs|| <= epsilon (epsilon = 0: equality constrained)."""

    operator: SensingOperator
    rhs: ComplexSignal
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        rhs = as_signal(self.rhs, "rhs")
        if rhs.size != self.operator.rows:
            raise invalid_argument(f"rhs has length {rhs.size}, operator has {self.operator.rows} rows")
        if not np.isfinite(self.epsilon) or self.epsilon < 0:
            raise invalid_argument(f"epsilon must be finite and >= 0, got {self.epsilon}")
        object.__setattr__(self, "rhs", rhs)


@dataclass(frozen=True)
class SolverReport:
    """Result of solve_bp."""

    solution: ComplexSignal
    objective: float
    residual_norm: float
    iterations: int
    converged: bool
    gap: float = 0.0
    epsilon: float = 0.0


def soft_threshold(z: npt.ArrayLike, tau: float) -> np.ndarray:
    """exp(i angle(z)) * max(|z| - tau, 0), entrywise."""
    z = np.asarray(z, dtype=np.complex128)
    magnitude = np.abs(z)
    shrink = np.maximum(magnitude - tau, 0.0)
    return np.where(magnitude > 0, z * (shrink / np.where(magnitude > 0, magnitude, 1.0)), 0.0)


def _project_ball(v: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    offset = v - center
    distance = float(np.linalg.norm(offset))
    if distance <= radius:
        return v
    if radius == 0:
        return center.copy()
    return center + offset * (radius / distance)


class _Search:
    """Candidate bookkeeping for one normalized solve."""

    def __init__(self, op: SensingOperator, b: np.ndarray, epsilon: float, feasibility_tol: float) -> None:
        self.op = op
        self.b = b
        self.epsilon = epsilon
        self.budget = epsilon + feasibility_tol
        self.primal: np.ndarray | None = None
        self.primal_value = np.inf
        self.dual_value = -np.inf

    def offer_primal(self, z: np.ndarray) -> None:
        if not np.all(np.isfinite(z)):
            return
        residual = float(np.linalg.norm(self.op.forward(z) - self.b))
        value = l1_norm(z)
        if residual <= self.budget and value < self.primal_value:
            self.primal = z
            self.primal_value = value

    def offer_dual(self, w: np.ndarray) -> None:
        if not np.all(np.isfinite(w)):
            return
        peak = float(np.max(np.abs(self.op.adjoint(w))))
        if peak > 1.0:
            w = w / peak
        value = float(np.real(np.vdot(w, self.b))) - self.epsilon * float(np.linalg.norm(w))
        self.dual_value = max(self.dual_value, value)

    @property
    def gap(self) -> float:
        if self.primal is None:
            return np.inf
        if self.primal_value == 0:
            return 0.0
        return max(self.primal_value - self.dual_value, 0.0) / self.primal_value

    def correct(self, z: np.ndarray) -> np.ndarray:
        """Move z into the constraint set along the minimum-norm correction."""
        target = _project_ball(self.op.forward(z), self.b, self.epsilon)
        return z + self.op.min_norm_solve(target - self.op.forward(z))

    def polish(self, z: np.ndarray) -> None:
        """Fit on the support of z, refining the sign pattern; offers the fit and its certificate."""
        peak = float(np.max(np.abs(z)))
        if peak == 0:
            return
        support = np.flatnonzero(np.abs(z) > SUPPORT_FRACTION * peak)
        if support.size > self.op.rows:
            support = support[np.argsort(np.abs(z[support]))[::-1][: self.op.rows]]
        coefficients = z[support]

        for _ in range(SIGN_REFINEMENTS):
            columns = self.op.columns(support)
            pinv = np.linalg.pinv(columns)
            fit = pinv @ self.b
            residual = self.b - columns @ fit
            signs = coefficients / np.abs(coefficients)
            q = pinv.conj().T @ signs
            slack = self.epsilon**2 - float(np.vdot(residual, residual).real)
            if self.epsilon > 0 and slack > 0 and np.linalg.norm(q) > 0:
                t = np.sqrt(slack) / float(np.linalg.norm(q))
                coefficients = pinv @ (self.b - t * q)
                certificate = (self.b - columns @ coefficients) / t
            else:
                coefficients = fit
                certificate = q

            candidate = np.zeros_like(z)
            candidate[support] = coefficients
            self.offer_primal(candidate)
            self.offer_dual(certificate)

            magnitudes = np.abs(coefficients)
            keep = magnitudes > PRUNE_FRACTION * max(float(np.max(magnitudes, initial=0.0)), np.finfo(float).tiny)
            if not np.any(keep):
                return
            if np.all(keep) and np.allclose(signs, coefficients / magnitudes, atol=1e-12, rtol=0):
                return
            support = support[keep]
            coefficients = coefficients[keep]


def _zero_report(problem: L1Problem, n: int) -> SolverReport:
    return SolverReport(
        solution=np.zeros(n, dtype=np.complex128),
        objective=0.0,
        residual_norm=float(np.linalg.norm(problem.rhs)),
        iterations=0,
        converged=True,
        epsilon=problem.epsilon,
    )


def solve_bp(problem: L1Problem, options: SolverOptions | None = None) -> SolverReport:
    """Solve basis pursuit (epsilon = 0) or basis pursuit denoising (epsilon > 0).

    Returns the best feasible candidate found. `converged` is False when the
    relative duality gap did not reach `gap_tol` within `max_iterations`.
    """
    options = options or SolverOptions()
    op = problem.operator
    n = op.dimension

    scale = float(np.linalg.norm(problem.rhs))
    if scale == 0 or problem.epsilon >= scale:
        return _zero_report(problem, n)

    b = problem.rhs / scale
    search = _Search(op, b, problem.epsilon / scale, options.feasibility_tol)

    norm = op.norm_bound
    tau = 0.99 * options.primal_weight / norm
    sigma = 0.99 / (options.primal_weight * norm)

    z = op.adjoint(b)
    z_bar = z.copy()
    u = np.zeros(op.rows, dtype=np.complex128)

    iterations = 0
    while iterations < options.max_iterations:
        v = u + sigma * op.forward(z_bar)
        u = v - sigma * _project_ball(v / sigma, b, search.epsilon)
        z_next = soft_threshold(z - tau * op.adjoint(u), tau)
        z_bar = 2.0 * z_next - z
        z = z_next
        iterations += 1

        if iterations % options.check_every == 0 or iterations == options.max_iterations:
            search.offer_primal(search.correct(z))
            search.offer_dual(-u)
            search.polish(z)
            if search.gap <= options.gap_tol:
                break

    converged = search.gap <= options.gap_tol
    solution = search.primal if search.primal is not None else z
    solution = solution * scale
    residual = float(np.linalg.norm(op.forward(solution) - problem.rhs))
    gap = float(search.gap)
    if converged:
        logger.debug("solve_bp converged after %d iterations (gap %.2e)", iterations, gap)
    else:
        logger.info("solve_bp stopped after %d iterations without convergence (gap %.2e)", iterations, gap)

    return SolverReport(
        solution=solution,
        objective=l1_norm(solution),
        residual_norm=residual,
        iterations=iterations,
        converged=converged,
        gap=gap,
        epsilon=problem.epsilon,
    )


def estimate_epsilon(rows: int, sigma_nu: float, confidence: float = 0.95, amplification: float = 1.0) -> float:
    """Residual budget for stage-2 data carrying propagated measurement noise.

    The stage-1 output error is modelled as circular Gaussian with per-entry
    variance 2 sigma_nu^2 g, where g is the amplification (1 + mean(v_l)/u
    for recovered data). Then ||e||^2 ~ sigma_nu^2 g chi2(2 rows) and

        epsilon = sigma_nu * sqrt(g * chi2.ppf(confidence, 2 rows))
    """
    if not 0 < confidence < 1:
        raise invalid_argument(f"confidence must lie in (0, 1), got {confidence}")
    if sigma_nu < 0:
        raise invalid_argument(f"sigma_nu must be >= 0, got {sigma_nu}")
    if rows < 1:
        raise invalid_argument(f"row count must be >= 1, got {rows}")
    if amplification < 0:
        raise invalid_argument(f"amplification must be >= 0, got {amplification}")
    if sigma_nu == 0:
        return 0.0
    return float(sigma_nu * np.sqrt(amplification * chi2.ppf(confidence, 2 * rows)))
