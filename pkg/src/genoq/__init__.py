"""Workbench for quantum-search and QUBO-annealing approaches to genomics tasks."""

__version__ = "0.1.0"

from . import genome, grover, qubo, runtime, sim, solvers, tts  # noqa: F401
