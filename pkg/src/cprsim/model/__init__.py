"""Data models for compressive phase retrieval experiments."""

from cprsim.model.config import (
    EpsilonMode,
    ExperimentConfig,
    OutputFormat,
    RetrievalOptions,
    SensingMode,
    SolverOptions,
)
from cprsim.model.signals import DFTOperator, SparseSignal

__all__ = [
    "DFTOperator",
    "EpsilonMode",
    "ExperimentConfig",
    "OutputFormat",
    "RetrievalOptions",
    "SensingMode",
    "SolverOptions",
    "SparseSignal",
]
