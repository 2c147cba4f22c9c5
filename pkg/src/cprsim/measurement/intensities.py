"""Noiseless and noisy intensity measurements, and the SNR definition."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from cprsim.measurement.masks import MaskSet, MeasurementVectors
from cprsim.model.config import SensingMode
from cprsim.model.signals import DFTOperator, as_signal, complex_gaussian
from cprsim.model.validation import invalid_argument


@dataclass(frozen=True)
class PairMeasurementBlock:
    """The four intensities coupling y~[1] and y~[l+1]."""

    l: int
    b1: float
    b2: float
    b3: float
    b4: float


@dataclass(frozen=True)
class IntensityMeasurements:
    """Intensities b_{s,l}, s = 1..4, l = 1..L, stored as a (4, L) array.

    `conjugate` tells which vector family produced them: masked Fourier data
    comes from the conjugate family. `sampling_set` is set in Fourier mode only.
    """

    values: np.ndarray
    mode: SensingMode
    conjugate: bool
    dimension: int | None = None
    sampling_set: tuple[int, ...] | None = None
    noise_variance: float = 0.0
    seed: int | None = None

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != 4 or values.shape[1] < 1:
            raise invalid_argument(f"measurements must have shape (4, L) with L >= 1, got {values.shape}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise invalid_argument("measurements must be finite and nonnegative")
        if self.sampling_set is not None and len(self.sampling_set) != values.shape[1]:
            raise invalid_argument("sampling set size does not match the number of measurement blocks")
        if self.noise_variance < 0:
            raise invalid_argument("noise variance must be >= 0")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def blocks(self) -> int:
        """Number of pair blocks L."""
        return int(self.values.shape[1])

    @property
    def count(self) -> int:
        """Total number of intensities M = 4L."""
        return int(self.values.size)

    def block(self, l: int) -> PairMeasurementBlock:
        """Block l (1-based)."""
        if l < 1 or l > self.blocks:
            raise invalid_argument(f"block index must be 1..{self.blocks}, got {l}")
        b1, b2, b3, b4 = (float(v) for v in self.values[:, l - 1])
        return PairMeasurementBlock(l=l, b1=b1, b2=b2, b3=b3, b4=b4)


def field_noise(rng: np.random.Generator | None, shape: tuple[int, ...], sigma_nu: float) -> np.ndarray | float:
    """Circular complex Gaussian field noise of variance sigma_nu**2; exactly 0 when sigma_nu == 0."""
    if sigma_nu < 0:
        raise invalid_argument("sigma_nu must be >= 0")
    if sigma_nu == 0:
        return 0.0
    if rng is None:
        raise invalid_argument("a random generator is required when sigma_nu > 0")
    return complex_gaussian(rng, shape, variance=sigma_nu**2)


def masked_fields(x: npt.ArrayLike, masks: MaskSet, sampling_set: tuple[int, ...]) -> np.ndarray:
    """Noiseless fields F(x . p_s)[l] for l in the sampling set, shape (4, L)."""
    x = as_signal(x, "x")
    if x.size != masks.dimension:
        raise invalid_argument(f"x has length {x.size}, masks have length {masks.dimension}")
    dft = DFTOperator(x.size, tuple(sampling_set))
    return np.stack([dft.forward(x * p) for p in masks.masks])


def measure_fourier(
    x: npt.ArrayLike,
    masks: MaskSet,
    sampling_set: tuple[int, ...],
    rng: np.random.Generator | None = None,
    sigma_nu: float = 0.0,
    seed: int | None = None,
) -> IntensityMeasurements:
    """b_{s,l} = |F(x . p_s)[l] + nu_{s,l}|^2 over the (sorted) sampling set."""
    ordered = tuple(sorted(int(i) for i in sampling_set))
    fields = masked_fields(x, masks, ordered)
    noisy = fields + field_noise(rng, fields.shape, sigma_nu)
    return IntensityMeasurements(
        values=np.abs(noisy) ** 2,
        mode=SensingMode.FOURIER,
        conjugate=True,
        dimension=masks.dimension,
        sampling_set=ordered,
        noise_variance=float(sigma_nu**2),
        seed=seed,
    )


def measure_vectors(
    y: npt.ArrayLike,
    psi_set: MeasurementVectors,
    rng: np.random.Generator | None = None,
    sigma_nu: float = 0.0,
    mode: SensingMode = SensingMode.GAUSSIAN,
    dimension: int | None = None,
    seed: int | None = None,
) -> IntensityMeasurements:
    """b_{s,l} = |<y, psi_{s,l}> + nu_{s,l}|^2, s = 1..4, l = 1..L'-1."""
    y = as_signal(y, "y")
    if y.size != psi_set.length:
        raise invalid_argument(f"y has length {y.size}, measurement vectors have length {psi_set.length}")
    fields = psi_set.fields(y)
    noisy = fields + field_noise(rng, fields.shape, sigma_nu)
    return IntensityMeasurements(
        values=np.abs(noisy) ** 2,
        mode=mode,
        conjugate=psi_set.conjugate,
        dimension=dimension,
        noise_variance=float(sigma_nu**2),
        seed=seed,
    )


def snr_from_energy(signal_energy: float, count: int, sigma_nu: float) -> float:
    """10 log10(S / E) with E = count * sigma_nu**2; +inf when sigma_nu == 0."""
    if sigma_nu < 0:
        raise invalid_argument("sigma_nu must be >= 0")
    if sigma_nu == 0:
        return float("inf")
    return float(10.0 * np.log10(signal_energy / (count * sigma_nu**2)))


def sigma_for_snr(signal_energy: float, count: int, snr_db: float) -> float:
    """Noise standard deviation giving the requested SNR for a measurement energy."""
    if count < 1:
        raise invalid_argument("measurement count must be >= 1")
    return float(np.sqrt(signal_energy / (count * 10.0 ** (snr_db / 10.0))))


def snr_db(x: npt.ArrayLike, masks: MaskSet, sampling_set: tuple[int, ...], sigma_nu: float) -> float:
    """SNR in dB of the masked Fourier measurements.

    S sums the noiseless field energy over all four masks and the sampled
    points; E = 4 L sigma_nu**2. Returns +inf for sigma_nu == 0.
    """
    fields = masked_fields(x, masks, tuple(sampling_set))
    return snr_from_energy(float(np.sum(np.abs(fields) ** 2)), fields.size, sigma_nu)
