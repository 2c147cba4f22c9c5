"""Mask constants, the four transmittance masks and the pair measurement vectors."""

from dataclasses import dataclass

import numpy as np

from cprsim.model.validation import invalid_argument

ALPHA = float(np.sqrt((1.0 - 1.0 / np.sqrt(3.0)) / 2.0))
BETA = complex(np.exp(-1j * 5.0 * np.pi / 4.0) * np.sqrt((1.0 + 1.0 / np.sqrt(3.0)) / 2.0))

# (a_s, b_s) for s = 1..4
FIRST_COEFFICIENTS = np.array([ALPHA, BETA, ALPHA, -BETA], dtype=np.complex128)
SECOND_COEFFICIENTS = np.array([BETA, ALPHA, -BETA, ALPHA], dtype=np.complex128)
FIRST_COEFFICIENTS.setflags(write=False)
SECOND_COEFFICIENTS.setflags(write=False)


@dataclass(frozen=True)
class MaskConstants:
    """alpha, beta and the per-mask constants (a_s, b_s)."""

    alpha: float
    beta: complex
    a: tuple[complex, complex, complex, complex]
    b: tuple[complex, complex, complex, complex]


def mask_constants() -> MaskConstants:
    """Return the constants shared by the masks and the measurement vectors."""
    return MaskConstants(
        alpha=ALPHA,
        beta=BETA,
        a=tuple(complex(c) for c in FIRST_COEFFICIENTS),
        b=tuple(complex(c) for c in SECOND_COEFFICIENTS),
    )


@dataclass(frozen=True)
class MaskSet:
    """Four transmittance vectors p_s[n] = a_s delta[n] + b_s, stored as rows of a (4, N) array."""

    masks: np.ndarray
    constants: MaskConstants

    @property
    def dimension(self) -> int:
        """Signal length N."""
        return int(self.masks.shape[1])

    def mask(self, s: int) -> np.ndarray:
        """Mask p_s for s = 1..4."""
        if s < 1 or s > 4:
            raise invalid_argument(f"mask index must be 1..4, got {s}")
        return self.masks[s - 1]


def build_masks(n: int) -> MaskSet:
    """Build the four masks for signals of length n >= 2."""
    if n < 2:
        raise invalid_argument(f"masks need N >= 2, got {n}")
    masks = np.repeat(SECOND_COEFFICIENTS[:, None], n, axis=1)
    masks[:, 0] += FIRST_COEFFICIENTS
    masks.setflags(write=False)
    return MaskSet(masks=masks, constants=mask_constants())


@dataclass(frozen=True)
class MeasurementVectors:
    """The 4(L'-1) vectors psi_{s,l} = c_s e_1 + d_s e_{l+1} over C^L'.

    The standard family uses (c_s, d_s) = (a_s, b_s). The conjugate family uses
    their conjugates; masked Fourier intensities are measurements of
    y~ = (x[1]/sqrt(N), F_L x) against the conjugate family.
    """

    length: int
    conjugate: bool = False

    def __post_init__(self) -> None:
        if self.length < 2:
            raise invalid_argument(f"measurement vectors need length >= 2, got {self.length}")

    @property
    def first(self) -> np.ndarray:
        """Coefficients c_s on e_1."""
        return np.conj(FIRST_COEFFICIENTS) if self.conjugate else FIRST_COEFFICIENTS

    @property
    def second(self) -> np.ndarray:
        """Coefficients d_s on e_{l+1}."""
        return np.conj(SECOND_COEFFICIENTS) if self.conjugate else SECOND_COEFFICIENTS

    def fields(self, y: np.ndarray) -> np.ndarray:
        """<y, psi_{s,l}> as a (4, L'-1) array."""
        return y[0] * np.conj(self.first)[:, None] + np.conj(self.second)[:, None] * y[None, 1:]

    def dense(self) -> np.ndarray:
        """Explicit vectors as a (4, L'-1, L') array."""
        blocks = self.length - 1
        vectors = np.zeros((4, blocks, self.length), dtype=np.complex128)
        vectors[:, :, 0] = self.first[:, None]
        rows = np.arange(blocks)
        vectors[:, rows, rows + 1] = self.second[:, None]
        return vectors


def measurement_vectors(length: int, conjugate: bool = False) -> MeasurementVectors:
    """Pair measurement vectors over C^length."""
    return MeasurementVectors(length=length, conjugate=conjugate)
