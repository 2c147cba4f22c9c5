"""Tests for module imports to ensure all components are accessible."""


class TestCLIImports:
    """Test CLI module imports."""

    def test_cli_app_import(self):
        """Test CLI app can be imported."""
        from cprsim.cli import app

        assert app is not None

    def test_cli_console_import(self):
        """Test CLI console can be imported."""
        from cprsim.cli import console

        assert console is not None


class TestModelImports:
    """Test model package exports."""

    def test_model_exports(self):
        """Test config models and the DFT are re-exported."""
        from cprsim.model import DFTOperator, ExperimentConfig, SensingMode, SolverOptions

        assert callable(DFTOperator)
        assert ExperimentConfig(measurements=[256]).mode == SensingMode.FOURIER
        assert SolverOptions().max_iterations > 0


class TestMeasurementImports:
    """Test measurement package exports."""

    def test_measurement_exports(self):
        """Test mask and measurement helpers are re-exported."""
        from cprsim.measurement import build_masks, measure_fourier, measure_vectors, measurement_vectors

        assert callable(build_masks)
        assert callable(measure_fourier)
        assert callable(measure_vectors)
        assert callable(measurement_vectors)

    def test_records_module(self):
        """Test record readers and writers can be imported."""
        from cprsim.measurement.records import BINARY_MAGIC, read_record, write_record

        assert BINARY_MAGIC.startswith(b"CPRSIM")
        assert callable(read_record)
        assert callable(write_record)


class TestStageImports:
    """Test the two recovery stages."""

    def test_retrieval_import(self):
        """Test phase retrieval can be imported."""
        from cprsim.retrieval import recover_phases, split_result

        assert callable(recover_phases)
        assert callable(split_result)

    def test_solver_exports(self):
        """Test the solver package exports."""
        from cprsim.solver import L1Problem, estimate_epsilon, solve_bp

        assert callable(solve_bp)
        assert callable(estimate_epsilon)
        assert L1Problem is not None

    def test_pipeline_import(self):
        """Test the pipeline entry points can be imported."""
        from cprsim.pipeline import align_phase, recover, simulate

        assert callable(simulate)
        assert callable(recover)
        assert callable(align_phase)


class TestExperimentImports:
    """Test experiment harness imports."""

    def test_experiment_exports(self):
        """Test the three experiments are exported."""
        from cprsim.experiments import run_noise_sweep, run_phase_transition, run_success_rate

        assert callable(run_success_rate)
        assert callable(run_phase_transition)
        assert callable(run_noise_sweep)

    def test_presets_import(self):
        """Test presets can be imported."""
        from cprsim.catalog.presets import PRESETS, get_preset

        assert set(PRESETS) == {"success-rate", "phase-transition", "noise-sweep"}
        assert get_preset("unknown") is None

    def test_console_utils_import(self):
        """Test console helpers can be imported."""
        from cprsim.utils.console import get_show_progress, set_show_progress, setup_logging

        assert callable(setup_logging)
        set_show_progress(False)
        assert get_show_progress() is False
        set_show_progress(True)
