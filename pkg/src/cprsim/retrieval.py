"""Algebraic phase retrieval from the four-mask intensity structure.

Each block l couples y~[1] and y~[l+1]. With u = |y~[1]|^2, v_l = |y~[l+1]|^2
and z_l = y~[1] conj(y~[l+1]), the block satisfies

    (b1 + b3) / 2 = alpha^2 u + |beta|^2 v_l
    (b2 + b4) / 2 = |beta|^2 u + alpha^2 v_l
    Re z_l = -sqrt(3) (b1 - b3 + b2 - b4) / 4
    Im z_l = -s sqrt(3) (b1 - b3 - b2 + b4) / 4

with s = 1 for the standard vector family and s = -1 for the conjugate
family produced by the masked Fourier path.
"""

import logging
from dataclasses import dataclass

import numpy as np

from cprsim.measurement.intensities import IntensityMeasurements
from cprsim.measurement.masks import ALPHA, BETA, measurement_vectors
from cprsim.model.config import RetrievalOptions
from cprsim.model.signals import ComplexSignal
from cprsim.model.validation import FirstEntryVanishesError, invalid_argument

logger = logging.getLogger(__name__)

_ALPHA2 = ALPHA**2
_BETA2 = abs(BETA) ** 2
_DETERMINANT = _ALPHA2**2 - _BETA2**2  # -1/sqrt(3)
_CROSS = np.sqrt(3.0) / 4.0


@dataclass(frozen=True)
class PhaseRetrievalResult:
    """Stage-1 output y~ in C^(L+1), with y~[1] real and nonnegative."""

    y_tilde: ComplexSignal
    first_entry_magnitude: float
    residual: float
    # Direct estimates of |y~[l+1]|^2 from the magnitude equations
    magnitudes: np.ndarray
    clamped: bool = False
    conjugate: bool = False

    @property
    def blocks(self) -> int:
        """Number of recovered pair entries L."""
        return int(self.y_tilde.size - 1)

    @property
    def noise_amplification(self) -> float:
        """1 + mean(v_l) / u: error growth of the division by y~[1] under noise."""
        u = self.first_entry_magnitude**2
        if u == 0:
            return 1.0
        return float(1.0 + np.mean(self.magnitudes) / u)


def _remeasure(y_tilde: np.ndarray, conjugate: bool) -> np.ndarray:
    fields = measurement_vectors(y_tilde.size, conjugate=conjugate).fields(y_tilde)
    return np.abs(fields) ** 2


def recover_phases(b: IntensityMeasurements, options: RetrievalOptions | None = None) -> PhaseRetrievalResult:
    """Recover y~ up to a global phase from the 4L intensities in closed form.

    Args:
        b: Intensity measurements, (4, L)
        options: Vanishing/negative tolerances and the renormalize flag

    Returns:
        PhaseRetrievalResult with y~[1] = sqrt(u) real and y~[l+1] = conj(z_l) / y~[1]

    Raises:
        FirstEntryVanishesError: the averaged |y~[1]|^2 is below tolerance
    """
    options = options or RetrievalOptions()
    values = b.values
    b1, b2, b3, b4 = values
    scale = float(np.mean(values))

    s1 = (b1 + b3) / 2.0
    s2 = (b2 + b4) / 2.0
    u_per_block = (_ALPHA2 * s1 - _BETA2 * s2) / _DETERMINANT
    v = (-_BETA2 * s1 + _ALPHA2 * s2) / _DETERMINANT

    u = float(np.mean(u_per_block))
    if u <= options.vanishing_tol * scale:
        raise FirstEntryVanishesError(f"|y~[1]|^2 = {u:.3e} is below tolerance (mean intensity {scale:.3e})")

    clamped = False
    negative = v < 0
    if np.any(negative):
        if np.any(v < -options.negative_tol * scale):
            clamped = True
            logger.warning("Clamped %d negative magnitude estimates to zero", int(np.count_nonzero(negative)))
        v = np.where(negative, 0.0, v)

    sign = 1.0 if b.conjugate else -1.0
    z = -_CROSS * (b1 - b3 + b2 - b4) + 1j * sign * _CROSS * (b1 - b3 - b2 + b4)

    first = np.sqrt(u)
    rest = np.conj(z) / first
    if options.renormalize:
        modulus = np.abs(rest)
        rest = np.where(modulus > 0, rest * np.sqrt(v) / np.where(modulus > 0, modulus, 1.0), rest)

    y_tilde = np.concatenate(([first], rest)).astype(np.complex128)
    norm_b = float(np.linalg.norm(values))
    residual = float(np.linalg.norm(values - _remeasure(y_tilde, b.conjugate)) / norm_b)

    return PhaseRetrievalResult(
        y_tilde=y_tilde,
        first_entry_magnitude=float(first),
        residual=residual,
        magnitudes=v,
        clamped=clamped,
        conjugate=b.conjugate,
    )


def split_result(r: PhaseRetrievalResult, n: int) -> tuple[complex, ComplexSignal]:
    """Split y~ into sqrt(N) y~[1] (the candidate x[1]) and x^ = y~[2..L+1]."""
    if n < 1:
        raise invalid_argument(f"signal dimension must be >= 1, got {n}")
    return complex(np.sqrt(n) * r.y_tilde[0]), r.y_tilde[1:].copy()
