"""Complex signals, sparse test signals and the unitary DFT.

Indices are 1-based at every public boundary (supports, sampling sets, DFT
rows); arrays are stored 0-based internally.
"""

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from cprsim.model.validation import invalid_argument

ComplexSignal = npt.NDArray[np.complex128]


def as_signal(values: npt.ArrayLike, name: str = "signal") -> ComplexSignal:
    """Return values as a finite, non-empty 1-D complex128 array."""
    array = np.asarray(values, dtype=np.complex128)
    if array.ndim != 1:
        raise invalid_argument(f"{name} must be one-dimensional, got shape {array.shape}")
    if array.size < 1:
        raise invalid_argument(f"{name} must have length >= 1")
    if not np.all(np.isfinite(array)):
        raise invalid_argument(f"{name} contains NaN or Inf entries")
    return array


def inner(x: npt.ArrayLike, y: npt.ArrayLike) -> complex:
    """<x, y> = sum x[n] conj(y[n])."""
    return complex(np.vdot(y, x))


def l1_norm(x: npt.ArrayLike) -> float:
    """Sum of entry moduli."""
    return float(np.sum(np.abs(x)))


def complex_gaussian(rng: np.random.Generator, shape: int | tuple[int, ...], variance: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian samples; real and imaginary parts each N(0, variance/2)."""
    scale = np.sqrt(variance / 2.0)
    draws = rng.standard_normal((2,) + (shape if isinstance(shape, tuple) else (shape,)))
    return scale * (draws[0] + 1j * draws[1])


def _check_index_set(indices: tuple[int, ...], n: int, name: str) -> tuple[int, ...]:
    if len(indices) < 1:
        raise invalid_argument(f"{name} must not be empty")
    if len(set(indices)) != len(indices):
        raise invalid_argument(f"{name} contains duplicate indices")
    if min(indices) < 1 or max(indices) > n:
        raise invalid_argument(f"{name} must be a subset of {{1..{n}}}")
    return tuple(sorted(indices))


@dataclass(frozen=True)
class SparseSignal:
    """A k-sparse complex signal with its (1-based) support."""

    values: ComplexSignal
    support: tuple[int, ...]
    sparsity: int

    def __post_init__(self) -> None:
        values = as_signal(self.values, "values")
        support = tuple(sorted(int(i) for i in self.support))
        if len(support) > self.sparsity:
            raise invalid_argument(f"support size {len(support)} exceeds sparsity {self.sparsity}")
        if support and (support[0] < 1 or support[-1] > values.size):
            raise invalid_argument("support must lie in {1..N}")
        off_support = np.ones(values.size, dtype=bool)
        off_support[np.asarray(support, dtype=int) - 1] = False
        if np.any(values[off_support] != 0):
            raise invalid_argument("entries off the support must be exactly zero")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "support", support)

    @property
    def dimension(self) -> int:
        """Signal length N."""
        return int(self.values.size)


@dataclass(frozen=True)
class DFTOperator:
    """Unitary DFT of dimension N, optionally restricted to a row subset.

    Entry convention: [F]_{m,n} = exp(-i 2 pi (m-1)(n-1) / N) / sqrt(N).
    """

    dimension: int
    rows: tuple[int, ...] | None = None
    _index: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise invalid_argument("DFT dimension must be >= 1")
        if self.rows is not None:
            rows = _check_index_set(tuple(int(r) for r in self.rows), self.dimension, "row subset")
            object.__setattr__(self, "rows", rows)
            index = np.asarray(rows, dtype=np.intp) - 1
            index.setflags(write=False)
            object.__setattr__(self, "_index", index)

    @property
    def output_size(self) -> int:
        """L for a partial operator, N otherwise."""
        return self.dimension if self.rows is None else len(self.rows)

    def forward(self, x: npt.ArrayLike) -> ComplexSignal:
        """F x, or F_L x when a row subset is set."""
        x = as_signal(x, "x")
        if x.size != self.dimension:
            raise invalid_argument(f"x has length {x.size}, operator dimension is {self.dimension}")
        spectrum = np.fft.fft(x, norm="ortho")
        if self._index is None:
            return spectrum
        return spectrum[self._index]

    def adjoint(self, v: npt.ArrayLike) -> ComplexSignal:
        """F* v, zero-filling the rows outside the subset."""
        v = as_signal(v, "v")
        if v.size != self.output_size:
            raise invalid_argument(f"v has length {v.size}, operator output size is {self.output_size}")
        if self._index is None:
            return np.fft.ifft(v, norm="ortho")
        full = np.zeros(self.dimension, dtype=np.complex128)
        full[self._index] = v
        return np.fft.ifft(full, norm="ortho")

    def columns(self, indices: npt.ArrayLike) -> np.ndarray:
        """Dense columns (0-based indices) of the (partial) DFT matrix, shape (output_size, len(indices))."""
        cols = np.asarray(indices, dtype=np.intp)
        rows = np.arange(self.dimension) if self._index is None else self._index
        phase = np.outer(rows, cols) % self.dimension
        return np.exp(-2j * np.pi * phase / self.dimension) / np.sqrt(self.dimension)


def dft_forward(x: npt.ArrayLike, op: DFTOperator) -> ComplexSignal:
    """Apply the unitary (partial) DFT."""
    return op.forward(x)


def dft_adjoint(v: npt.ArrayLike, op: DFTOperator) -> ComplexSignal:
    """Apply the adjoint of the unitary (partial) DFT."""
    return op.adjoint(v)


def draw_sampling_set(n: int, size: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform sampling set of `size` distinct 1-based indices from {1..n}, sorted."""
    if size < 1 or size > n:
        raise invalid_argument(f"sampling set size must satisfy 1 <= L <= N ({n}), got {size}")
    chosen = rng.choice(n, size=size, replace=False)
    return tuple(sorted(int(i) + 1 for i in chosen))


def random_sparse_signal(
    n: int,
    k: int,
    rng: np.random.Generator,
    fix_first: bool = False,
    include_first: bool = False,
) -> SparseSignal:
    """Draw a k-sparse test signal.

    The support is uniform without replacement; nonzero entries are circular
    complex Gaussian with variance 1. `include_first` forces index 1 into the
    support; `fix_first` also sets |x[1]| = 1 with a random phase.
    """
    if k < 1 or k > n:
        raise invalid_argument(f"sparsity must satisfy 1 <= k <= N ({n}), got {k}")

    if fix_first or include_first:
        rest = rng.choice(np.arange(1, n), size=k - 1, replace=False)
        support0 = np.concatenate(([0], rest))
    else:
        support0 = rng.choice(n, size=k, replace=False)
    support0 = np.sort(support0)

    values = np.zeros(n, dtype=np.complex128)
    values[support0] = complex_gaussian(rng, k)
    if fix_first:
        values[0] = np.exp(2j * np.pi * rng.random())

    return SparseSignal(values=values, support=tuple(int(i) + 1 for i in support0), sparsity=k)
