"""Classical reference solvers: exhaustive brute force and simulated annealing."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityError
from .qubo import BinaryModel, IsingModel, Model, energy

BRUTE_FORCE_MAX_VARS = 25

DEFAULT_BETA_START = 0.1
DEFAULT_BETA_END = 10.0


@dataclass(frozen=True)
class AnnealSchedule:
    """One sweep = n single-variable update attempts."""

    sweeps: int
    beta_start: float = DEFAULT_BETA_START
    beta_end: float = DEFAULT_BETA_END
    interpolation: str = "geometric"

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if not 0 < self.beta_start <= self.beta_end:
            raise ValueError("need 0 < beta_start <= beta_end")
        if self.interpolation not in ("linear", "geometric"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")

    def betas(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.beta_start])
        if self.interpolation == "linear":
            return np.linspace(self.beta_start, self.beta_end, self.sweeps)
        return np.geomspace(self.beta_start, self.beta_end, self.sweeps)


@dataclass
class SolverRun:
    best_assignment: tuple[int, ...]
    best_energy: float
    trace: list[float]  # best-so-far per sweep, non-increasing
    seed: object
    wall_seconds: float


@dataclass
class SuccessStats:
    runs: int
    successes: int
    threshold: float

    @property
    def p_hat(self) -> float:
        return self.successes / self.runs


def _batch_energies(model: Model, values: np.ndarray) -> np.ndarray:
    e = values @ np.asarray(model.h, dtype=float) + model.offset
    for (i, j), w in model.J.items():
        e += w * values[:, i] * values[:, j]
    return e


def brute_force(model: Model) -> tuple[float, list[tuple[int, ...]]]:
    """Exhaustive enumeration: exact optimum and every optimal assignment."""
    if model.n > BRUTE_FORCE_MAX_VARS:
        raise CapacityError(
            f"{model.n} variables exceeds brute-force cap {BRUTE_FORCE_MAX_VARS}"
        )
    spin = isinstance(model, IsingModel)
    best_e = math.inf
    best: list[tuple[int, ...]] = []
    chunk = 1 << 16
    dim = 1 << model.n
    arange_n = np.arange(model.n)
    for start in range(0, dim, chunk):
        idx = np.arange(start, min(start + chunk, dim), dtype=np.int64)
        bits = (idx[:, None] >> arange_n) & 1
        values = (2 * bits - 1) if spin else bits
        e = _batch_energies(model, values)
        lo = float(e.min())
        if lo < best_e - 1e-12:
            best_e, best = lo, []
        if lo <= best_e + 1e-12:
            for row in values[np.abs(e - best_e) <= 1e-12]:
                best.append(tuple(int(v) for v in row))
    return best_e, best


def _neighbor_lists(model: Model) -> list[list[tuple[int, float]]]:
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(model.n)]
    for (i, j), w in model.J.items():
        nbrs[i].append((j, w))
        nbrs[j].append((i, w))
    return nbrs


def flip_delta(model: Model, assignment: Sequence[int], i: int) -> float:
    """Energy change of flipping variable i, via the local field."""
    f = model.h[i] + sum(w * assignment[j] for j, w in _neighbor_lists(model)[i])
    old = assignment[i]
    new = -old if isinstance(model, IsingModel) else 1 - old
    return (new - old) * f


def simulated_annealing(model: Model, schedule: AnnealSchedule,
                        seed) -> SolverRun:
    """Metropolis single-variable updates with incremental local-field dE."""
    t0 = time.perf_counter()
    n = model.n
    spin = isinstance(model, IsingModel)
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=n)
    vals = (2 * bits - 1) if spin else bits
    vals = vals.astype(np.int64)
    nbrs = _neighbor_lists(model)
    fields = np.asarray(model.h, dtype=float).copy()
    for (i, j), w in model.J.items():
        fields[i] += w * vals[j]
        fields[j] += w * vals[i]
    e = energy(model, tuple(int(v) for v in vals))
    best_e = e
    best = vals.copy()
    trace: list[float] = []
    for beta in schedule.betas():
        targets = rng.integers(0, n, size=n)
        thresholds = rng.random(n)
        for t, u in zip(targets, thresholds):
            old = vals[t]
            new = -old if spin else 1 - old
            delta = (new - old) * fields[t]
            if delta <= 0.0 or u < math.exp(-beta * delta):
                vals[t] = new
                e += delta
                step = new - old
                for j, w in nbrs[t]:
                    fields[j] += w * step
                if e < best_e:
                    best_e = e
                    best = vals.copy()
        trace.append(best_e)
    best_tuple = tuple(int(v) for v in best)
    return SolverRun(
        best_assignment=best_tuple,
        best_energy=energy(model, best_tuple),
        trace=trace,
        seed=seed,
        wall_seconds=time.perf_counter() - t0,
    )


def estimate_success_probability(model: Model, schedule: AnnealSchedule,
                                 runs: int, threshold: float,
                                 seed: int) -> SuccessStats:
    """Independently-seeded SA runs; success iff best energy <= threshold."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    child_seeds = np.random.SeedSequence(seed).spawn(runs)
    successes = 0
    for s in child_seeds:
        run = simulated_annealing(model, schedule, s)
        if run.best_energy <= threshold + 1e-9:
            successes += 1
    return SuccessStats(runs=runs, successes=successes, threshold=threshold)


def planted_ferromagnet(n: int, density: float, seed: int) -> IsingModel:
    """Random-sign planted Ising glass: couplings -s*_i s*_j on a random
    graph, so the planted configuration is a certified ground state."""
    rng = np.random.default_rng(seed)
    planted = rng.choice([-1, 1], size=n)
    J = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                J[(i, j)] = -float(planted[i] * planted[j])
    return IsingModel(n, (0.0,) * n, J, 0.0)
