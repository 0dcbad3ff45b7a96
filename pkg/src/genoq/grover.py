"""Grover search over a read-window database without QRAM.

State preparation V entangles each index with its window data, the oracle
phase-marks states whose data register equals the key, and diffusion is the
composite V . R0 . Vdag with R0 a sign flip of the all-zeros register.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sim
from .errors import CapacityError, ShapeError
from .genome import (
    ReadWindowDatabase,
    RegisterLayout,
    build_window_db,
    encode_window,
    register_layout,
)
from .sim import Circuit, Gate, StateVector, bitstring, gate_count, init_state, run_circuit


@dataclass(frozen=True)
class SearchProblem:
    db: ReadWindowDatabase
    key: str  # base string of length M
    layout: RegisterLayout

    @property
    def key_bits(self) -> str:
        return encode_window(self.key)


def make_problem(db: ReadWindowDatabase, key: str) -> SearchProblem:
    if len(key) != db.window_length:
        raise ShapeError(
            f"key length {len(key)} != window length {db.window_length}"
        )
    return SearchProblem(db=db, key=key, layout=register_layout(db))


@dataclass(frozen=True)
class PreparedDatabaseCircuit:
    state_prep: Circuit
    oracle: Circuit
    diffusion: Circuit

    @property
    def per_iteration_counts(self) -> dict[str, int]:
        counts = gate_count(self.oracle)
        for kind, c in gate_count(self.diffusion).items():
            counts[kind] = counts.get(kind, 0) + c
        return counts


@dataclass
class GroverRun:
    iterations: int
    p_exact: float
    histogram: dict[str, int]
    matched_indices: set[int]
    matches: list[dict] = field(default_factory=list)


def _data_flip_gates(layout: RegisterLayout, slot: int, bits: str,
                     set_flag: bool) -> list[Gate]:
    """Multicontrolled-X gates loading ``bits`` (plus flag) into slot ``slot``."""
    controls = tuple(
        (layout.index_qubit(j), (slot >> j) & 1)
        for j in range(layout.index_qubits)
    )
    gates = []
    qd = layout.data_qubits
    for p, ch in enumerate(bits):
        if ch == "1":
            gates.append(Gate("X", qd - 1 - p, controls))
    if set_flag:
        gates.append(Gate("X", layout.flag_qubit, controls))
    return gates


def build_state_prep(db: ReadWindowDatabase,
                     max_qubits: int = sim.MAX_QUBITS) -> Circuit:
    """H layer on the index register, then one MCX per set data bit per slot."""
    layout = register_layout(db)
    if layout.total > max_qubits:
        raise CapacityError(
            f"register needs {layout.total} qubits, ceiling is {max_qubits}"
        )
    gates = [Gate("H", layout.index_qubit(j)) for j in range(layout.index_qubits)]
    for slot in range(db.padded_size):
        padding = slot >= db.count
        bits = db.windows[0] if padding else db.windows[slot]
        gates.extend(_data_flip_gates(layout, slot, bits, set_flag=padding))
    return Circuit(layout.total, tuple(gates))


def build_oracle(problem: SearchProblem) -> Circuit:
    """Phase -1 on data == key (flag unset), as X-conjugated multicontrolled-Z."""
    layout = problem.layout
    key_bits = problem.key_bits
    if len(key_bits) != layout.data_qubits:
        raise ShapeError(
            f"key encodes to {len(key_bits)} bits, register has "
            f"{layout.data_qubits} data qubits"
        )
    qd = layout.data_qubits
    x_qubits = [qd - 1 - p for p, ch in enumerate(key_bits) if ch == "0"]
    if layout.flag_qubits:
        x_qubits.append(layout.flag_qubit)
    conj = [Gate("X", q) for q in x_qubits]
    ctrl_qubits = list(range(1, qd))
    if layout.flag_qubits:
        ctrl_qubits.append(layout.flag_qubit)
    mcz = Gate("Z", 0, tuple((q, 1) for q in ctrl_qubits))
    return Circuit(layout.total, tuple(conj + [mcz] + list(reversed(conj))))


def build_diffusion(state_prep: Circuit) -> Circuit:
    """V . R0 . Vdag; R0 flips the sign of the all-zeros state of the register."""
    n = state_prep.num_qubits
    x_all = [Gate("X", q) for q in range(n)]
    r0 = x_all + [Gate("Z", 0, tuple((q, 1) for q in range(1, n)))] + x_all
    # H, X, and multicontrolled X are involutions, so Vdag is V reversed.
    vdag = list(reversed(state_prep.gates))
    return Circuit(n, tuple(vdag + r0 + list(state_prep.gates)))


def prepare_circuits(problem: SearchProblem) -> PreparedDatabaseCircuit:
    v = build_state_prep(problem.db)
    return PreparedDatabaseCircuit(
        state_prep=v,
        oracle=build_oracle(problem),
        diffusion=build_diffusion(v),
    )


def optimal_iterations(num_windows: int, num_solutions: int) -> int:
    if num_solutions < 1:
        raise ValueError(
            "num_solutions must be >= 1; use search_unknown_count otherwise"
        )
    if num_solutions > num_windows:
        raise ValueError("num_solutions cannot exceed num_windows")
    k = math.floor((math.pi / 4.0) * math.sqrt(num_windows / num_solutions))
    return max(1, k)


def _match_mask(problem: SearchProblem) -> np.ndarray:
    """Boolean mask over basis indices whose data register equals the key."""
    layout = problem.layout
    dim = 1 << layout.total
    idx = np.arange(dim, dtype=np.int64)
    key_val = int(problem.key_bits, 2)
    mask = (idx & ((1 << layout.data_qubits) - 1)) == key_val
    if layout.flag_qubits:
        mask &= ((idx >> layout.flag_qubit) & 1) == 0
    return mask


def success_probability(problem: SearchProblem, state: StateVector) -> float:
    p = np.abs(state.amplitudes) ** 2
    return float(p[_match_mask(problem)].sum())


def decode_outcome(problem: SearchProblem, bits: str) -> tuple[int, str]:
    """Split a measured full-register bitstring into (index, data bits)."""
    layout = problem.layout
    qi = layout.index_qubits
    index = int(bits[:qi], 2) if qi else 0
    data = bits[qi + layout.flag_qubits:]
    return index, data


def run_search(problem: SearchProblem, iterations: int, shots: int,
               seed: int) -> GroverRun:
    circuits = prepare_circuits(problem)
    state = init_state(problem.layout.total)
    run_circuit(circuits.state_prep, state)
    for _ in range(iterations):
        run_circuit(circuits.oracle, state)
        run_circuit(circuits.diffusion, state)
    p_exact = success_probability(problem, state)
    histogram = sim.sample(state, seed=seed, shots=shots)
    key_bits = problem.key_bits
    matched = set()
    for bits in histogram:
        index, data = decode_outcome(problem, bits)
        if data == key_bits and index < problem.db.count:
            matched.add(index)
    matches = [
        {"index": i, "window": problem.db.window_string(i)}
        for i in sorted(matched)
    ]
    return GroverRun(
        iterations=iterations,
        p_exact=p_exact,
        histogram=histogram,
        matched_indices=matched,
        matches=matches,
    )


def classical_scan(db: ReadWindowDatabase, key: str,
                   max_mismatches: int = 0) -> set[tuple[int, int]]:
    """Exhaustive Hamming scan over base symbols; the verification baseline."""
    out = set()
    for i in range(db.count):
        window = db.window_string(i)
        mism = sum(a != b for a, b in zip(window, key))
        if mism <= max_mismatches:
            out.add((i, mism))
    return out


def search_unknown_count(problem: SearchProblem, seed: int,
                         shots: int = 64) -> GroverRun | None:
    """Doubling-iteration driver for an unknown number of matching windows.

    Tries k = 1, 2, 4, ... and classically verifies each sampled candidate;
    returns the first run whose top sampled outcome verifies, or None when
    the doubling budget is exhausted (key absent).
    """
    key_bits = problem.key_bits
    budget = 2 * math.ceil(math.sqrt(problem.db.padded_size)) + 1
    k = 1
    while k <= budget:
        run = run_search(problem, iterations=k, shots=shots, seed=seed + k)
        top = max(run.histogram, key=run.histogram.get)
        index, data = decode_outcome(problem, top)
        if data == key_bits and index < problem.db.count:
            if problem.db.window_string(index) == problem.key:
                return run
        k *= 2
    return None


@dataclass(frozen=True)
class LoadingCostRow:
    genome_length: int
    prep_gates: int
    iter_gates: int
    total_gates: int


@dataclass(frozen=True)
class LoadingCostScan:
    rows: tuple[LoadingCostRow, ...]
    prep_exponent: float
    total_exponent: float

    def to_csv(self) -> str:
        lines = ["N,prep_gates,iter_gates,total_gates"]
        for r in self.rows:
            lines.append(
                f"{r.genome_length},{r.prep_gates},{r.iter_gates},{r.total_gates}"
            )
        return "\n".join(lines) + "\n"


def _loglog_exponent(xs: list[int], ys: list[int]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)),
                          np.log(np.asarray(ys, float)), 1)
    return float(slope)


def loading_cost_scan(sizes: list[int], window_length: int,
                      seed: int) -> LoadingCostScan:
    """Gate-count sweep over random genomes; circuits are built, never run.

    Total cost assumes a unique key: prep + optimal-iterations x per-iteration
    gates, which grows as N^(3/2) while prep alone grows as N.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for n in sorted(sizes):
        genome = "".join(rng.choice(list("ATGC"), size=n))
        db = build_window_db(genome, window_length)
        start = int(rng.integers(0, db.count))
        key = genome[start : start + window_length]
        problem = make_problem(db, key)
        v = build_state_prep(db, max_qubits=10**9)  # count-only, never executed
        oracle = build_oracle(problem)
        diffusion = build_diffusion(v)
        prep = len(v)
        per_iter = len(oracle) + len(diffusion)
        k = optimal_iterations(db.count, 1)
        rows.append(LoadingCostRow(n, prep, per_iter, prep + k * per_iter))
    sizes_sorted = [r.genome_length for r in rows]
    return LoadingCostScan(
        rows=tuple(rows),
        prep_exponent=_loglog_exponent(sizes_sorted, [r.prep_gates for r in rows]),
        total_exponent=_loglog_exponent(sizes_sorted, [r.total_gates for r in rows]),
    )
