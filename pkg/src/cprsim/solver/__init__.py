"""Sparse recovery (stage 2)."""

from cprsim.solver.l1 import L1Problem, SolverReport, estimate_epsilon, soft_threshold, solve_bp

__all__ = ["L1Problem", "SolverReport", "estimate_epsilon", "soft_threshold", "solve_bp"]
