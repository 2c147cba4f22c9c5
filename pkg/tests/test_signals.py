"""Tests for complex signals, sparse test signals and the unitary DFT."""

import numpy as np
import pytest

from cprsim.model.signals import (
    DFTOperator,
    SparseSignal,
    as_signal,
    dft_adjoint,
    dft_forward,
    draw_sampling_set,
    inner,
    random_sparse_signal,
)
from cprsim.model.validation import ValidationError


class TestAsSignal:
    """Test signal validation."""

    def test_rejects_nan(self):
        """NaN entries are invalid."""
        with pytest.raises(ValidationError) as exc:
            as_signal([1.0, np.nan])
        assert exc.value.code == "INVALID_ARGUMENT"

    def test_rejects_empty_and_matrices(self):
        """Signals are non-empty vectors."""
        with pytest.raises(ValidationError):
            as_signal([])
        with pytest.raises(ValidationError):
            as_signal(np.ones((2, 2)))

    def test_inner_conjugates_second_argument(self):
        """<x, y> = sum x conj(y)."""
        assert inner([1j, 0], [1, 0]) == 1j
        assert inner([1, 0], [1j, 0]) == -1j


class TestDFTForward:
    """Test the unitary DFT."""

    def test_delta_maps_to_constant(self):
        """e_1 maps to 1/sqrt(N)."""
        result = dft_forward([1, 0, 0, 0], DFTOperator(4))
        np.testing.assert_allclose(result, [0.5, 0.5, 0.5, 0.5], atol=1e-15)

    def test_constant_maps_to_scaled_delta(self):
        """(1,1,1,1) maps to (2,0,0,0)."""
        result = dft_forward([1, 1, 1, 1], DFTOperator(4))
        np.testing.assert_allclose(result, [2, 0, 0, 0], atol=1e-15)

    def test_entry_convention(self):
        """F e_2 has entries exp(-i 2 pi (m-1)/8)/sqrt(8)."""
        x = np.zeros(8)
        x[1] = 1.0
        expected = np.exp(-2j * np.pi * np.arange(8) / 8) / np.sqrt(8)
        np.testing.assert_allclose(dft_forward(x, DFTOperator(8)), expected, atol=1e-15)

    def test_columns_match_forward(self, random_vector):
        """Explicit columns agree with the FFT path."""
        op = DFTOperator(12, (2, 5, 7, 11))
        x = random_vector(12)
        np.testing.assert_allclose(op.columns(np.arange(12)) @ x, op.forward(x), atol=1e-12)

    @pytest.mark.parametrize("n", [4, 64, 512])
    def test_parseval_and_round_trip(self, n, random_vector):
        """||F x|| = ||x|| and F* F x = x."""
        op = DFTOperator(n)
        x = random_vector(n)
        fx = op.forward(x)
        assert abs(np.linalg.norm(fx) - np.linalg.norm(x)) <= 1e-12 * np.linalg.norm(x)
        np.testing.assert_allclose(op.adjoint(fx), x, rtol=0, atol=1e-12 * np.linalg.norm(x))

    def test_partial_rows_are_subset_of_full(self, random_vector):
        """F_L x equals rows L of F x."""
        x = random_vector(16)
        full = DFTOperator(16).forward(x)
        partial = DFTOperator(16, (9, 1, 4)).forward(x)
        np.testing.assert_array_equal(partial, full[[0, 3, 8]])

    def test_rows_are_sorted(self):
        """The row subset is stored sorted."""
        assert DFTOperator(8, (5, 2, 7)).rows == (2, 5, 7)

    def test_dimension_mismatch(self):
        """Wrong input length raises invalid-argument."""
        with pytest.raises(ValidationError) as exc:
            dft_forward([1, 2, 3], DFTOperator(4))
        assert exc.value.code == "INVALID_ARGUMENT"

    def test_invalid_row_subset(self):
        """Rows must lie in 1..N and be distinct."""
        with pytest.raises(ValidationError):
            DFTOperator(4, (0, 1))
        with pytest.raises(ValidationError):
            DFTOperator(4, (5,))
        with pytest.raises(ValidationError):
            DFTOperator(4, (2, 2))


class TestDFTAdjoint:
    """Test the adjoint of the (partial) DFT."""

    def test_inverse_of_constant(self):
        """F* (2,0,0,0) = (1,1,1,1)."""
        np.testing.assert_allclose(dft_adjoint([2, 0, 0, 0], DFTOperator(4)), [1, 1, 1, 1], atol=1e-15)

    def test_single_dc_row(self):
        """Subset {1}: F* (1) = (0.5, 0.5, 0.5, 0.5)."""
        np.testing.assert_allclose(dft_adjoint([1], DFTOperator(4, (1,))), [0.5] * 4, atol=1e-15)

    def test_adjoint_identity(self, random_vector):
        """<F x, v> = <x, F* v> on a partial operator."""
        op = DFTOperator(32, (1, 3, 8, 17, 30))
        x, v = random_vector(32), random_vector(5)
        assert abs(inner(op.forward(x), v) - inner(x, op.adjoint(v))) < 1e-12

    def test_length_mismatch(self):
        """v must have L entries."""
        with pytest.raises(ValidationError):
            dft_adjoint([1, 2], DFTOperator(4, (1,)))


class TestSparseSignals:
    """Test sparse signal types and generation."""

    def test_full_support(self, rng):
        """k = N gives all entries nonzero."""
        signal = random_sparse_signal(8, 8, rng)
        assert signal.support == tuple(range(1, 9))
        assert np.all(signal.values != 0)

    def test_fixed_first_entry(self, rng):
        """fix_first puts index 1 in the support with |x[1]| = 1."""
        signal = random_sparse_signal(512, 12, rng, fix_first=True)
        assert 1 in signal.support
        assert len(signal.support) == 12
        assert abs(abs(signal.values[0]) - 1.0) < 1e-15

    def test_include_first_keeps_gaussian_amplitude(self, rng):
        """include_first forces index 1 without fixing its modulus."""
        amplitudes = [abs(random_sparse_signal(64, 4, rng, include_first=True).values[0]) for _ in range(20)]
        assert all(a > 0 for a in amplitudes)
        assert np.std(amplitudes) > 0

    def test_deterministic_for_fixed_seed(self):
        """Same seed, same signal."""
        first = random_sparse_signal(128, 10, np.random.default_rng(3))
        second = random_sparse_signal(128, 10, np.random.default_rng(3))
        np.testing.assert_array_equal(first.values, second.values)
        assert first.support == second.support

    def test_invalid_sparsity(self, rng):
        """k > N is rejected."""
        with pytest.raises(ValidationError) as exc:
            random_sparse_signal(4, 5, rng)
        assert exc.value.code == "INVALID_ARGUMENT"

    def test_support_invariant(self):
        """Entries off the support must be zero."""
        with pytest.raises(ValidationError):
            SparseSignal(values=np.array([1, 1, 0]), support=(1,), sparsity=1)

    def test_variance_one(self):
        """Nonzero entries have unit variance with real/imaginary parts of variance 1/2."""
        rng = np.random.default_rng(11)
        values = np.concatenate([random_sparse_signal(64, 64, rng).values for _ in range(200)])
        assert abs(np.mean(np.abs(values) ** 2) - 1.0) < 0.05
        assert abs(np.var(values.real) - 0.5) < 0.05


class TestSamplingSet:
    """Test sampling set draws."""

    def test_sorted_distinct_one_based(self, rng):
        """Sampling sets are sorted, distinct and 1-based."""
        rows = draw_sampling_set(16, 16, rng)
        assert rows == tuple(range(1, 17))
        rows = draw_sampling_set(512, 64, rng)
        assert len(set(rows)) == 64
        assert list(rows) == sorted(rows)
        assert min(rows) >= 1 and max(rows) <= 512

    def test_too_large(self, rng):
        """L > N is rejected."""
        with pytest.raises(ValidationError):
            draw_sampling_set(4, 5, rng)
