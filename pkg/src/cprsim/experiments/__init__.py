"""Monte Carlo experiment harness."""

from cprsim.experiments.sweeps import (
    ExperimentResult,
    NoiseRow,
    SuccessRow,
    TransitionRow,
    noise_slope,
    run_noise_sweep,
    run_phase_transition,
    run_success_rate,
)
from cprsim.experiments.trials import TrialRecord, TrialSpec, run_trial, run_trials

__all__ = [
    "ExperimentResult",
    "NoiseRow",
    "SuccessRow",
    "TransitionRow",
    "TrialRecord",
    "TrialSpec",
    "noise_slope",
    "run_noise_sweep",
    "run_phase_transition",
    "run_success_rate",
    "run_trial",
    "run_trials",
]
