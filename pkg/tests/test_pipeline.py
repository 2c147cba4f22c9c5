"""Tests for the end-to-end recovery pipeline."""

import numpy as np
import pytest

from cprsim.measurement.intensities import snr_db
from cprsim.measurement.masks import build_masks
from cprsim.measurement.sensing import DenseOperator, PartialFourierOperator, bernoulli_matrix, gaussian_matrix
from cprsim.model.config import EpsilonMode, SensingMode, SolverOptions
from cprsim.model.signals import DFTOperator, draw_sampling_set, random_sparse_signal
from cprsim.model.validation import FirstEntryVanishesError, ValidationError
from cprsim.pipeline import align_phase, assess, reconstruct, recover, simulate
from tests.oracles import certified_unique


def fourier(n: int, rows: tuple[int, ...]) -> PartialFourierOperator:
    return PartialFourierOperator(DFTOperator(n, rows))


class TestAlignPhase:
    """Test global phase alignment."""

    def test_identity(self, random_vector):
        """estimate = truth gives c = 1, mse = 0."""
        x = random_vector(8)
        c, mse = align_phase(x, x)
        assert c == pytest.approx(1.0)
        assert mse == pytest.approx(0.0, abs=1e-15)

    def test_rotated(self, random_vector):
        """estimate = i truth gives c = -i, mse = 0."""
        x = random_vector(8)
        c, mse = align_phase(x, 1j * x)
        assert c == pytest.approx(-1j)
        assert mse == pytest.approx(0.0, abs=1e-15)

    def test_zero_estimate(self, random_vector):
        """estimate = 0 gives mse = 1."""
        _, mse = align_phase(random_vector(8), np.zeros(8))
        assert mse == pytest.approx(1.0)

    def test_optimal_over_phase_grid(self, random_vector):
        """For 100 pairs, no phase on a 10^4-point grid beats the returned c."""
        rotations = np.exp(1j * np.linspace(0, 2 * np.pi, 10_000, endpoint=False))
        for _ in range(100):
            truth, estimate = random_vector(16), random_vector(16)
            _, mse = align_phase(truth, estimate)
            energy = np.linalg.norm(truth) ** 2
            grid = np.linalg.norm(truth[None, :] - rotations[:, None] * estimate[None, :], axis=1) ** 2 / energy
            assert mse <= grid.min() + 1e-10

    def test_invalid(self):
        """Zero truth and length mismatch are rejected."""
        with pytest.raises(ValidationError):
            align_phase(np.zeros(4), np.ones(4))
        with pytest.raises(ValidationError):
            align_phase(np.ones(4), np.ones(3))


class TestFourierPipeline:
    """Test recovery from masked Fourier intensities."""

    def test_delta_round_trip(self):
        """x = e_1, N = 8, L = {1..4} comes back as e_1."""
        x = np.zeros(8, dtype=np.complex128)
        x[0] = 1.0
        op = fourier(8, (1, 2, 3, 4))
        estimate = recover(simulate(x, op), op)
        _, mse = align_phase(x, estimate)
        assert mse < 1e-8
        np.testing.assert_allclose(estimate, x, atol=1e-6)

    def test_first_entry_vanishes(self):
        """x[1] = 0 cannot serve as the phase reference."""
        x = np.zeros(8, dtype=np.complex128)
        x[1] = 1.0
        op = fourier(8, (1, 2, 3))
        with pytest.raises(FirstEntryVanishesError):
            recover(simulate(x, op), op)

    def test_sparse_recovery(self, rng):
        """A 4-sparse signal in C^128 is recovered from 48 frequencies."""
        x = random_sparse_signal(128, 4, rng, include_first=True).values
        op = fourier(128, draw_sampling_set(128, 48, rng))
        reconstruction = reconstruct(simulate(x, op), op)
        outcome = assess(x, reconstruction)
        assert outcome.success
        assert outcome.aligned_mse < 1e-10
        assert outcome.stage1_residual < 1e-10
        assert reconstruction.estimate[0].imag == 0
        assert reconstruction.estimate[0].real > 0

    def test_global_phase_quotient(self, rng):
        """For 100 draws, x and exp(i theta) x give identical measurements and equal aligned MSE."""
        for _ in range(100):
            x = random_sparse_signal(32, 2, rng, include_first=True).values
            op = fourier(32, draw_sampling_set(32, 16, rng))
            rotated = np.exp(1j * rng.uniform(0, 2 * np.pi)) * x
            b, b_rotated = simulate(x, op), simulate(rotated, op)
            np.testing.assert_allclose(b_rotated.values, b.values, rtol=0, atol=1e-12 * np.abs(b.values).max())
            estimate = recover(b, op)
            assert estimate[0].imag == 0
            assert estimate[0].real >= 0
            _, mse = align_phase(x, estimate)
            _, mse_rotated = align_phase(rotated, recover(b_rotated, op))
            assert mse_rotated == pytest.approx(mse, abs=1e-10)

    def test_first_entry_row(self, rng):
        """use_first_entry appends sqrt(N) y~[1] as an extra constraint."""
        x = random_sparse_signal(64, 3, rng, include_first=True).values
        op = fourier(64, draw_sampling_set(64, 32, rng))
        reconstruction = reconstruct(simulate(x, op), op, SolverOptions(use_first_entry=True))
        assert reconstruction.report.solution.size == 64
        assert reconstruction.estimate[0] == pytest.approx(abs(x[0]), rel=1e-6)
        assert assess(x, reconstruction).success

    def test_noisy_estimated_budget(self, rng):
        """At 40 dB the estimated budget is positive and the error stays small."""
        x = random_sparse_signal(128, 4, rng, fix_first=True).values
        op = fourier(128, draw_sampling_set(128, 48, rng))
        b = simulate(x, op, rng, snr=40.0)
        assert snr_db(x, build_masks(128), op.sampling_set, np.sqrt(b.noise_variance)) == pytest.approx(40.0)
        reconstruction = reconstruct(b, op, SolverOptions(epsilon_mode=EpsilonMode.ESTIMATED))
        assert reconstruction.report.epsilon > 0
        _, mse = align_phase(x, reconstruction.estimate)
        assert mse < 1e-2

    def test_dimension_mismatch(self, random_vector):
        """Measurements for one N are not solved with an operator for another."""
        b = simulate(random_vector(16), fourier(16, (1, 2)))
        with pytest.raises(ValidationError):
            reconstruct(b, fourier(32, (1, 2)))

    def test_sampling_set_mismatch(self, random_vector):
        """The operator must sample the recorded frequencies."""
        b = simulate(random_vector(16), fourier(16, (1, 2)))
        with pytest.raises(ValidationError):
            reconstruct(b, fourier(16, (1, 3)))


class TestDensePipeline:
    """Test recovery with dense sensing matrices and the pair vectors."""

    def test_gaussian(self, rng):
        """Complex Gaussian A: y = A x recovered, then x."""
        x = random_sparse_signal(48, 3, rng).values
        op = DenseOperator(gaussian_matrix(30, 48, rng), SensingMode.GAUSSIAN)
        b = simulate(x, op)
        assert b.mode == SensingMode.GAUSSIAN
        assert b.count == 4 * 30 - 4
        if not certified_unique(op.matrix, x):
            pytest.skip("draw without a dual certificate")
        assert assess(x, reconstruct(b, op)).success

    def test_bernoulli(self, rng):
        """Real +-1/sqrt(L) A works the same way."""
        x = random_sparse_signal(48, 2, rng).values
        op = DenseOperator(bernoulli_matrix(30, 48, rng), SensingMode.BERNOULLI)
        if not certified_unique(op.matrix.astype(np.complex128), x):
            pytest.skip("draw without a dual certificate")
        outcome = assess(x, reconstruct(simulate(x, op), op))
        assert outcome.success
        assert outcome.phase != 0

    def test_operator_kind_mismatch(self, rng, random_vector):
        """Dense measurements need a dense operator."""
        op = DenseOperator(gaussian_matrix(6, 16, rng), SensingMode.GAUSSIAN)
        b = simulate(random_vector(16), op)
        with pytest.raises(ValidationError):
            reconstruct(b, fourier(16, (1, 2, 3, 4, 5)))
