"""Preset configurations for the three experiments."""

from cprsim.model.config import EpsilonMode, ExperimentConfig, SolverOptions

SUCCESS_RATE = "success-rate"
PHASE_TRANSITION = "phase-transition"
NOISE_SWEEP = "noise-sweep"

# Trial counts restored by --full-scale
FULL_SCALE_TRIALS: dict[str, int] = {
    SUCCESS_RATE: 2000,
    PHASE_TRANSITION: 2000,
    NOISE_SWEEP: 1000,
}

PRESETS: dict[str, ExperimentConfig] = {
    SUCCESS_RATE: ExperimentConfig(
        n=512,
        k_values=[5, 10, 20, 40],
        measurements=[32, 64, 96, 128, 192, 256, 384, 512],
        trials=200,
    ),
    PHASE_TRANSITION: ExperimentConfig(
        n=512,
        k_values=[5, 10, 20],
        measurements=list(range(32, 2044, 16)),
        trials=200,
    ),
    NOISE_SWEEP: ExperimentConfig(
        n=512,
        k_values=[12],
        measurements=[256],
        trials=200,
        snr_db=[20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0],
        compare_first_entry=True,
        solver=SolverOptions(
            epsilon_mode=EpsilonMode.ESTIMATED,
            gap_tol=1e-6,
            max_iterations=20_000,
        ),
    ),
}


def get_preset(name: str) -> ExperimentConfig | None:
    """Get a preset configuration by name."""
    return PRESETS.get(name)


def effective_trials(config: ExperimentConfig, experiment: str) -> int:
    """Trials per grid point, honouring --full-scale."""
    if config.full_scale:
        return FULL_SCALE_TRIALS.get(experiment, config.trials)
    return config.trials
