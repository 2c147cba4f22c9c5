"""Linear sensing operators: partial unitary DFT and dense Gaussian/Bernoulli matrices."""

from functools import cached_property

import numpy as np
import numpy.typing as npt
from scipy.sparse.linalg import LinearOperator

from cprsim.model.config import SensingMode
from cprsim.model.signals import DFTOperator, complex_gaussian, draw_sampling_set
from cprsim.model.validation import invalid_argument


class SensingOperator(LinearOperator):
    """An L x N complex operator with forward/adjoint application.

    Subclasses provide `_matvec`, `_rmatvec`, `columns` and `norm_bound`.
    """

    mode: SensingMode

    def __init__(self, shape: tuple[int, int]) -> None:
        super().__init__(dtype=np.complex128, shape=shape)

    @property
    def rows(self) -> int:
        """Output size L."""
        return int(self.shape[0])

    @property
    def dimension(self) -> int:
        """Input size N."""
        return int(self.shape[1])

    def forward(self, x: npt.ArrayLike) -> np.ndarray:
        """A x."""
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.dimension,):
            raise invalid_argument(f"expected input of length {self.dimension}, got shape {x.shape}")
        return self._matvec(x)

    def adjoint(self, v: npt.ArrayLike) -> np.ndarray:
        """A* v."""
        v = np.asarray(v, dtype=np.complex128)
        if v.shape != (self.rows,):
            raise invalid_argument(f"expected input of length {self.rows}, got shape {v.shape}")
        return self._rmatvec(v)

    def columns(self, indices: npt.ArrayLike) -> np.ndarray:
        """Dense columns for 0-based indices."""
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        """The full L x N matrix."""
        return self.columns(np.arange(self.dimension))

    @property
    def norm_bound(self) -> float:
        """Upper bound on the spectral norm."""
        raise NotImplementedError

    def min_norm_solve(self, r: npt.ArrayLike) -> np.ndarray:
        """Minimum-norm z with A z = r (least squares if inconsistent)."""
        return self._pseudo_inverse @ np.asarray(r, dtype=np.complex128)

    @cached_property
    def _pseudo_inverse(self) -> np.ndarray:
        return np.linalg.pinv(self.to_dense())


class PartialFourierOperator(SensingOperator):
    """F_L: rows L of the unitary N-point DFT. Rows are orthonormal, so A A* = I."""

    mode = SensingMode.FOURIER

    def __init__(self, dft: DFTOperator) -> None:
        if dft.rows is None:
            dft = DFTOperator(dft.dimension, tuple(range(1, dft.dimension + 1)))
        self.dft = dft
        super().__init__(shape=(dft.output_size, dft.dimension))

    @property
    def sampling_set(self) -> tuple[int, ...]:
        """1-based sampled frequencies."""
        return self.dft.rows

    def _matvec(self, x: np.ndarray) -> np.ndarray:
        return self.dft.forward(np.ravel(x))

    def _rmatvec(self, v: np.ndarray) -> np.ndarray:
        return self.dft.adjoint(np.ravel(v))

    def columns(self, indices: npt.ArrayLike) -> np.ndarray:
        return self.dft.columns(indices)

    @property
    def norm_bound(self) -> float:
        return 1.0

    def min_norm_solve(self, r: npt.ArrayLike) -> np.ndarray:
        return self._rmatvec(np.asarray(r, dtype=np.complex128))


class DenseOperator(SensingOperator):
    """Explicit random sensing matrix (Gaussian complex or Bernoulli real)."""

    def __init__(self, matrix: np.ndarray, mode: SensingMode) -> None:
        if matrix.ndim != 2:
            raise invalid_argument("sensing matrix must be two-dimensional")
        self.matrix = np.array(matrix)
        self.matrix.setflags(write=False)
        self.mode = mode
        super().__init__(shape=matrix.shape)

    def _matvec(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.ravel(x)

    def _rmatvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix.conj().T @ np.ravel(v)

    def columns(self, indices: npt.ArrayLike) -> np.ndarray:
        return self.matrix[:, np.asarray(indices, dtype=np.intp)].astype(np.complex128)

    @cached_property
    def norm_bound(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


class FirstEntryAugmented(SensingOperator):
    """Base operator with the extra row e_1^T appended (known first signal entry)."""

    def __init__(self, base: SensingOperator) -> None:
        self.base = base
        self.mode = base.mode
        super().__init__(shape=(base.rows + 1, base.dimension))

    def _matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.ravel(x)
        return np.concatenate((self.base._matvec(x), x[:1]))

    def _rmatvec(self, v: np.ndarray) -> np.ndarray:
        v = np.ravel(v)
        out = self.base._rmatvec(v[:-1])
        out[0] += v[-1]
        return out

    def columns(self, indices: npt.ArrayLike) -> np.ndarray:
        cols = np.asarray(indices, dtype=np.intp)
        extra = (cols == 0).astype(np.complex128)[None, :]
        return np.vstack((self.base.columns(cols), extra))

    @property
    def norm_bound(self) -> float:
        return float(np.hypot(self.base.norm_bound, 1.0))


def gaussian_matrix(rows: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. circular complex Gaussian entries with variance 1/rows."""
    return complex_gaussian(rng, (rows, n), variance=1.0 / rows)


def bernoulli_matrix(rows: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. real entries +-1/sqrt(rows) with probability 1/2 each."""
    signs = rng.integers(0, 2, size=(rows, n)) * 2 - 1
    return signs.astype(np.float64) / np.sqrt(rows)


def build_operator(mode: SensingMode, n: int, rows: int, rng: np.random.Generator) -> SensingOperator:
    """Draw a sensing operator with `rows` outputs for signals of length n.

    Fourier mode draws a uniform sampling set; dense modes draw the matrix.
    """
    if mode == SensingMode.FOURIER:
        return PartialFourierOperator(DFTOperator(n, draw_sampling_set(n, rows, rng)))
    if rows < 1:
        raise invalid_argument(f"dense operators need at least one row, got {rows}")
    if mode == SensingMode.GAUSSIAN:
        return DenseOperator(gaussian_matrix(rows, n, rng), mode)
    return DenseOperator(bernoulli_matrix(rows, n, rng), mode)
