"""Command-line entry point: reproducible, seeded experiments with CSV/JSON output.

Exit codes: 0 success, 1 domain failure, 2 capacity, 3 parse/config error.
Flags override values from a flat key=value config file (--config).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from . import __version__, grover, qubo, runtime, solvers, tts
from .errors import (
    CapacityError,
    InfeasibleBudgetError,
    SequenceParseError,
    ShapeError,
)
from .genome import build_window_db, layout_for, parse_sequence

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CAPACITY = 2
EXIT_CONFIG = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _load_config(path: str) -> dict:
    config = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def _meta(args, extra: dict | None = None) -> dict:
    meta = {"version": __version__, "command": args.command}
    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("command", "func", "config", "out", "no_timestamp")
        and v is not None
    }
    meta["parameters"] = params
    if extra:
        meta.update(extra)
    if not getattr(args, "no_timestamp", False):
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    return meta


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    payload = {"meta": _meta(args), **payload}
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _csv_header(args) -> list[str]:
    return [f"# {k}={_fmt(v)}" for k, v in sorted(_meta(args).items())
            if k != "parameters"] + [
        f"# param.{k}={_fmt(v)}" for k, v in sorted(_meta(args)["parameters"].items())
    ]


def _emit_csv(args, body: str) -> None:
    _emit(args, "\n".join(_csv_header(args)) + "\n" + body)


def _require_seed(args) -> None:
    if getattr(args, "seed", None) is None:
        raise ValueError("--seed is required (no silent entropy)")


# --------------------------------------------------------------------------
# Subcommands


def cmd_grover_demo(args) -> int:
    _require_seed(args)
    db = build_window_db("TATG", 1)
    problem = grover.make_problem(db, "A")
    circuits = grover.prepare_circuits(problem)
    run = grover.run_search(problem, iterations=args.iterations,
                            shots=args.shots, seed=args.seed)
    top = max(run.histogram, key=run.histogram.get)
    index, _ = grover.decode_outcome(problem, top)
    payload = {
        "circuit": {
            "state_prep": circuits.state_prep.dump().splitlines(),
            "oracle": circuits.oracle.dump().splitlines(),
            "diffusion_gates": len(circuits.diffusion),
        },
        "iterations": run.iterations,
        "p_exact": run.p_exact,
        "histogram": run.histogram,
        "top_outcome": top,
        "decoded": {"index": index, "base": db.window_string(index)
                    if index < db.count else None},
        "matches": run.matches,
    }
    _emit_json(args, payload)
    ok = run.p_exact >= 0.999 and index == 1
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_grover_search(args) -> int:
    _require_seed(args)
    with open(args.genome) as fh:
        genome = parse_sequence(fh.read())
    key = args.key.upper()
    db = build_window_db(genome, len(key))
    layout = layout_for(len(genome), len(key))
    if layout.total > args.max_qubits:
        raise CapacityError(
            f"search needs {layout.total} qubits "
            f"(index {layout.index_qubits} + data {layout.data_qubits} + "
            f"flag {layout.flag_qubits}), ceiling is {args.max_qubits}"
        )
    problem = grover.make_problem(db, key)
    scan = grover.classical_scan(db, key, 0)
    iterations = args.iterations
    if iterations is None:
        iterations = grover.optimal_iterations(db.count, max(1, len(scan)))
    run = grover.run_search(problem, iterations=iterations,
                            shots=args.shots, seed=args.seed)
    scan_indices = sorted(i for i, _ in scan)
    payload = {
        "iterations": run.iterations,
        "p_exact": run.p_exact,
        "histogram": run.histogram,
        "matches": run.matches,
        "classical_scan": scan_indices,
        "agreement": sorted(run.matched_indices) == scan_indices,
    }
    _emit_json(args, payload)
    return EXIT_OK


def cmd_loading_scan(args) -> int:
    _require_seed(args)
    sizes = [int(s) for s in args.sizes.split(",")]
    scan = grover.loading_cost_scan(sizes, args.window, args.seed)
    body = scan.to_csv()
    body += f"# prep_exponent={_fmt(scan.prep_exponent)}\n"
    body += f"# total_exponent={_fmt(scan.total_exponent)}\n"
    _emit_csv(args, body)
    return EXIT_OK


def _parse_freq(text: str) -> float:
    units = {"khz": 1e3, "mhz": 1e6, "ghz": 1e9, "hz": 1.0}
    low = text.strip().lower()
    for suffix, mult in units.items():
        if low.endswith(suffix):
            return float(low[: -len(suffix)]) * mult
    return float(low)


def cmd_runtime(args) -> int:
    hw = runtime.HardwareProfile(args.profile, _parse_freq(args.freq)) \
        if args.freq else runtime.BUILTIN_PROFILES[args.profile]
    n = int(float(args.N))
    depth = runtime.max_depth_per_call(n, args.budget, hw)
    estimate = runtime.quantum_runtime(n, depth, hw)
    classical = runtime.PowerLawModel(args.classical_seconds / n, 1.0)
    quantum = runtime.PowerLawModel(depth / hw.logical_gate_frequency, 0.5)
    lines = ["N,T_classical,T_quantum,crossover_flag"]
    sweep_sizes = [int(float(s)) for s in args.sweep.split(",")] if args.sweep else [n]
    for row in runtime.runtime_sweep(sweep_sizes, classical, quantum):
        lines.append(
            f"{row.problem_size},{_fmt(row.t_classical)},"
            f"{_fmt(row.t_quantum)},{int(row.crossover_flag)}"
        )
    lines.append(f"# max_depth_per_call={depth}")
    lines.append(f"# calls={estimate.calls}")
    lines.append(f"# seconds_per_call={_fmt(estimate.seconds_per_call)}")
    lines.append(f"# seconds_total={_fmt(estimate.seconds_total)}")
    _emit_csv(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _build_encoding(args) -> qubo.Encoding:
    problem = args.problem
    if args.input:
        with open(args.input) as fh:
            text = fh.read()
    else:
        text = None
    if problem == "max-cut":
        return qubo.maxcut_to_ising(qubo.weighted_graph_from_json(text))
    if problem == "phasing":
        return qubo.phasing_to_ising(qubo.fragment_graph_from_json(text))
    if problem == "mis":
        return qubo.mis_to_qubo(qubo.weighted_graph_from_json(text))
    if problem == "knapsack":
        return qubo.knapsack_to_qubo(qubo.knapsack_from_json(text))
    if problem in ("assembly-path", "tsp-path"):
        if text is not None:
            inst = qubo.overlap_from_json(text)
        else:
            if args.n is None:
                raise ValueError("assembly/tsp builds need --input or --n")
            _require_seed(args)
            import numpy as np

            rng = np.random.default_rng(args.seed)
            overlaps = {
                (u, v): float(rng.integers(1, 10))
                for u in range(args.n) for v in range(args.n) if u != v
            }
            inst = qubo.OverlapInstance(args.n, overlaps)
        return qubo.assembly_to_qubo(inst)
    raise ValueError(f"unknown problem {problem!r}")


def cmd_qubo_build(args) -> int:
    enc = _build_encoding(args)
    text = qubo.write_model(enc.model)
    info = "".join(f"# {k}={_fmt(v)}\n" for k, v in sorted(enc.info.items()))
    _emit(args, text + info)
    return EXIT_OK


def cmd_qubo_solve(args) -> int:
    with open(args.model) as fh:
        model = qubo.read_model(fh.read())
    if args.solver == "brute":
        best_e, assignments = solvers.brute_force(model)
        payload = {
            "solver": "brute",
            "best_energy": best_e,
            "optimal_assignments": [list(a) for a in assignments],
        }
    else:
        _require_seed(args)
        schedule = solvers.AnnealSchedule(
            sweeps=args.sweeps, beta_start=args.beta_start,
            beta_end=args.beta_end)
        run = solvers.simulated_annealing(model, schedule, args.seed)
        payload = {
            "solver": "sa",
            "best_energy": run.best_energy,
            "best_assignment": list(run.best_assignment),
            "trace": run.trace,
            "sweeps": args.sweeps,
        }
    _emit_json(args, payload)
    return EXIT_OK


def cmd_tts_scan(args) -> int:
    _require_seed(args)
    sizes = [int(s) for s in args.sizes.split(",")]
    t_grid = [float(t) for t in args.t_grid.split(",")]
    rows = ["N,t,p_hat,R,TTS"]
    star_rows = ["N,TTS_star,t_star,boundary_flag"]
    tts_star: dict[float, float] = {}
    for n in sizes:
        if args.stub_tau:
            # Closed-form stub p(t) = 1 - exp(-t / (tau * N)) for protocol checks.
            import math

            tau = args.stub_tau * n
            estimator = lambda t, tau=tau: 1.0 - math.exp(-t / tau)
        else:
            model = solvers.planted_ferromagnet(n, args.density, args.seed + n)
            best_e, _ = solvers.brute_force(model)
            estimator = tts.sa_probability_estimator(
                model, threshold=best_e, runs=args.runs, seed=args.seed + n)
        curve = tts.tts_curve(estimator, t_grid, args.target_p)
        for p in curve.points:
            rows.append(
                f"{n},{_fmt(p.t)},{_fmt(p.p_hat)},"
                f"{p.repetitions if p.repetitions is not None else 'excluded'},"
                f"{_fmt(p.tts) if p.tts is not None else 'excluded'}"
            )
        best = tts.optimal_tts(curve)
        boundary = tts.optimum_at_boundary(curve)
        star_rows.append(f"{n},{_fmt(best.tts)},{_fmt(best.t)},{int(boundary)}")
        tts_star[float(n)] = best.tts
    body = "\n".join(rows) + "\n" + "\n".join(star_rows) + "\n"
    if len(tts_star) >= 3:
        fit = tts.scaling_fit(tts_star)
        body += (
            f"# power_law_exponent={_fmt(fit.power_law.rate)}\n"
            f"# power_law_stderr={_fmt(fit.power_law.rate_stderr)}\n"
            f"# exponential_base={_fmt(fit.exponential.base)}\n"
            f"# exponential_stderr={_fmt(fit.exponential.rate_stderr)}\n"
        )
    _emit_csv(args, body)
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser


def _add_common(p: _Parser) -> None:
    p.add_argument("--seed", type=int, help="RNG seed (required when stochastic)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--no-timestamp", action="store_true",
                   help="suppress the timestamp metadata field")


def build_parser(config: dict | None = None) -> _Parser:
    parser = _Parser(prog="genoq",
                     description="Quantum-search and QUBO workbench for genomics")
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        _add_common(p)
        return p

    p = command("grover-demo", cmd_grover_demo,
                "4-element toy database search, key 'A'")
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--shots", type=int, default=256)

    p = command("grover-search", cmd_grover_search,
                "search a genome file for a key string")
    p.add_argument("--genome", required=True, help="plain or FASTA sequence file")
    p.add_argument("--key", required=True, help="key string of bases")
    p.add_argument("--iterations", type=int,
                   help="Grover iterations (default: optimal for scan count)")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--max-qubits", type=int, default=26)

    p = command("loading-scan", cmd_loading_scan,
                "gate-count scaling sweep over genome sizes")
    p.add_argument("--sizes", default="64,128,256,512,1024,2048,4096",
                   help="comma-separated genome lengths")
    p.add_argument("--window", type=int, default=2)

    p = command("runtime", cmd_runtime,
                "quantum vs classical runtime and depth budgets")
    p.add_argument("--N", required=True, help="problem size (accepts 3e9)")
    p.add_argument("--budget", type=float, default=60.0,
                   help="total runtime budget in seconds")
    p.add_argument("--freq", help="logical gate frequency, e.g. 10kHz")
    p.add_argument("--profile", default="surface-10kHz",
                   choices=sorted(runtime.BUILTIN_PROFILES))
    p.add_argument("--classical-seconds", type=float,
                   default=runtime.DEFAULT_CLASSICAL_SECONDS)
    p.add_argument("--sweep", help="comma-separated N values for the CSV sweep")

    p = command("qubo-build", cmd_qubo_build, "encode a native instance")
    p.add_argument("--problem", required=True,
                   choices=("max-cut", "phasing", "assembly-path",
                            "tsp-path", "knapsack", "mis"))
    p.add_argument("--input", help="native instance as JSON")
    p.add_argument("--n", type=int, help="random instance size (tsp/assembly)")

    p = command("qubo-solve", cmd_qubo_solve, "solve a serialized model")
    p.add_argument("--model", required=True, help="model file path")
    p.add_argument("--solver", choices=("brute", "sa"), default="brute")
    p.add_argument("--sweeps", type=int, default=100)
    p.add_argument("--beta-start", type=float, default=solvers.DEFAULT_BETA_START)
    p.add_argument("--beta-end", type=float, default=solvers.DEFAULT_BETA_END)

    p = command("tts-scan", cmd_tts_scan, "TTS curves and scaling fits")
    p.add_argument("--sizes", default="8,12,16,20,24")
    p.add_argument("--t-grid", default="1,2,4,8,16,32,64")
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--target-p", type=float, default=0.9)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--stub-tau", type=float,
                   help="use the closed-form stub p(t)=1-exp(-t/(tau*N))")

    if config:
        for action in sub.choices.values():
            known = {a.dest for a in action._actions}
            action.set_defaults(
                **{k: _coerce(v) for k, v in config.items() if k in known}
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    config = {}
    if "--config" in argv:
        try:
            path = argv[argv.index("--config") + 1]
            config = _load_config(path)
        except (IndexError, OSError, ValueError) as exc:
            sys.stderr.write(f"genoq: config error: {exc}\n")
            return EXIT_CONFIG
    parser = build_parser(config)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        sys.stderr.write(f"genoq: capacity error: {exc}\n")
        return EXIT_CAPACITY
    except (SequenceParseError,) as exc:
        sys.stderr.write(f"genoq: parse error: {exc}\n")
        return EXIT_CONFIG
    except (InfeasibleBudgetError, ShapeError, ValueError, OSError) as exc:
        sys.stderr.write(f"genoq: error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
