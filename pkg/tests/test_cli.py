import json

import pytest

from genoq import qubo
from genoq.cli import main


def run_cli(argv, capsys):
    """Invoke the CLI in-process; normalize argparse SystemExit to a code."""
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_exits_zero(capsys):
    code, out, _ = run_cli(["--help"], capsys)
    assert code == 0
    assert "grover-demo" in out


def test_missing_subcommand_exits_three(capsys):
    code, _, err = run_cli([], capsys)
    assert code == 3


def test_unknown_flag_exits_three(capsys):
    code, _, _ = run_cli(["grover-demo", "--bogus"], capsys)
    assert code == 3


def test_grover_demo_success(capsys):
    code, out, _ = run_cli(
        ["grover-demo", "--seed", "1", "--no-timestamp"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["p_exact"] >= 0.999
    assert payload["decoded"] == {"index": 1, "base": "A"}
    assert payload["top_outcome"] == "0100"
    assert "timestamp" not in payload["meta"]


def test_grover_demo_overrotation_fails(capsys):
    code, out, _ = run_cli(
        ["grover-demo", "--seed", "1", "--iterations", "2"], capsys)
    assert code == 1
    assert json.loads(out)["p_exact"] < 0.999


def test_grover_demo_requires_seed(capsys):
    code, _, err = run_cli(["grover-demo"], capsys)
    assert code == 1
    assert "seed" in err


def test_grover_search_agreement(tmp_path, capsys):
    genome = tmp_path / "g.fa"
    genome.write_text(">toy\nATGATG\n")
    code, out, _ = run_cli(
        ["grover-search", "--genome", str(genome), "--key", "ATG",
         "--seed", "5", "--no-timestamp"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["classical_scan"] == [0, 3]
    assert payload["agreement"] is True


def test_grover_search_bad_base_exits_three(tmp_path, capsys):
    genome = tmp_path / "g.txt"
    genome.write_text("ATXG\n")
    code, _, err = run_cli(
        ["grover-search", "--genome", str(genome), "--key", "A",
         "--seed", "1"], capsys)
    assert code == 3
    assert "position 3" in err


def test_grover_search_capacity_exits_two(tmp_path, capsys):
    genome = tmp_path / "g.txt"
    genome.write_text("ATGC" * 64 + "\n")
    code, _, err = run_cli(
        ["grover-search", "--genome", str(genome), "--key", "ATGCATGCATGC",
         "--seed", "1"], capsys)
    assert code == 2
    assert "qubits" in err


def test_runtime_surface_numbers(capsys):
    code, out, _ = run_cli(
        ["runtime", "--N", "3e9", "--no-timestamp"], capsys)
    assert code == 0
    assert "# max_depth_per_call=10\n" in out
    assert "# calls=54773\n" in out


def test_runtime_optimistic_depth(capsys):
    code, out, _ = run_cli(
        ["runtime", "--N", "3e9", "--profile", "optimistic-10MHz",
         "--no-timestamp"], capsys)
    assert code == 0
    assert "# max_depth_per_call=10954\n" in out


def test_runtime_sweep_rows(capsys):
    code, out, _ = run_cli(
        ["runtime", "--N", "3e9", "--sweep", "1e6,1e12", "--no-timestamp"],
        capsys)
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "N,T_classical,T_quantum,crossover_flag"
    assert len(lines) == 3


def test_runtime_infeasible_budget_exits_one(capsys):
    code, _, err = run_cli(
        ["runtime", "--N", "3e9", "--budget", "1e-6"], capsys)
    assert code == 1


def test_loading_scan(capsys):
    code, out, _ = run_cli(
        ["loading-scan", "--sizes", "64,128,256", "--seed", "2",
         "--no-timestamp"], capsys)
    assert code == 0
    assert "N,prep_gates,iter_gates,total_gates" in out
    assert "# prep_exponent=" in out


def test_qubo_build_maxcut_from_json(tmp_path, capsys):
    inst = tmp_path / "g.json"
    inst.write_text(json.dumps(
        {"n": 3, "edges": [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]]}))
    code, out, _ = run_cli(
        ["qubo-build", "--problem", "max-cut", "--input", str(inst)], capsys)
    assert code == 0
    assert out.splitlines()[0] == "QUBO 3 -1.5 spin"


def test_qubo_build_tsp_path_n4_has_16_variables(capsys):
    code, out, _ = run_cli(
        ["qubo-build", "--problem", "tsp-path", "--n", "4", "--seed", "9"],
        capsys)
    assert code == 0
    header = out.splitlines()[0].split()
    assert header[:2] == ["QUBO", "16"]


def test_qubo_build_random_requires_seed(capsys):
    code, _, err = run_cli(
        ["qubo-build", "--problem", "assembly-path", "--n", "3"], capsys)
    assert code == 1


def test_qubo_build_unknown_problem_exits_three(capsys):
    code, _, _ = run_cli(["qubo-build", "--problem", "sudoku"], capsys)
    assert code == 3


def test_qubo_solve_brute(tmp_path, capsys):
    g = qubo.WeightedGraph(3, {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0})
    model_file = tmp_path / "m.qubo"
    model_file.write_text(qubo.write_model(qubo.maxcut_to_ising(g).model))
    code, out, _ = run_cli(
        ["qubo-solve", "--model", str(model_file), "--no-timestamp"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["best_energy"] == pytest.approx(-2.0)
    assert len(payload["optimal_assignments"]) == 6


def test_qubo_solve_sa_requires_seed(tmp_path, capsys):
    model_file = tmp_path / "m.qubo"
    model_file.write_text("QUBO 2 0 spin\n0 1 -1\n")
    code, _, _ = run_cli(
        ["qubo-solve", "--model", str(model_file), "--solver", "sa"], capsys)
    assert code == 1


def test_qubo_solve_sa(tmp_path, capsys):
    model_file = tmp_path / "m.qubo"
    model_file.write_text("QUBO 4 0 spin\n0 1 -1\n1 2 -1\n2 3 -1\n")
    code, out, _ = run_cli(
        ["qubo-solve", "--model", str(model_file), "--solver", "sa",
         "--seed", "3", "--sweeps", "200", "--no-timestamp"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["best_energy"] == pytest.approx(-3.0)


def test_qubo_solve_missing_model_exits_one(capsys):
    code, _, _ = run_cli(["qubo-solve", "--model", "/nonexistent"], capsys)
    assert code == 1


def test_tts_scan_stub_closed_form(capsys):
    code, out, _ = run_cli(
        ["tts-scan", "--sizes", "8,12,16", "--t-grid", "1,4,16,64,256",
         "--stub-tau", "2.0", "--seed", "1", "--no-timestamp"], capsys)
    assert code == 0
    lines = out.splitlines()
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    assert data[0] == "N,t,p_hat,R,TTS"
    import math

    first = data[1].split(",")
    n, t = int(first[0]), float(first[1])
    assert float(first[2]) == 1.0 - math.exp(-t / (2.0 * n))
    assert any(ln.startswith("# power_law_exponent=") for ln in lines)
    assert any(ln.startswith("# exponential_base=") for ln in lines)


def test_tts_scan_sa_small(capsys):
    code, out, _ = run_cli(
        ["tts-scan", "--sizes", "6,8", "--t-grid", "2,8,32", "--runs", "10",
         "--seed", "4", "--no-timestamp"], capsys)
    assert code == 0
    assert "N,TTS_star,t_star,boundary_flag" in out


def test_determinism_byte_identical(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["tts-scan", "--sizes", "8,12,16", "--t-grid", "1,4,16",
            "--stub-tau", "1.5", "--seed", "7", "--no-timestamp"]
    assert run_cli(argv + ["--out", str(out1)], capsys)[0] == 0
    assert run_cli(argv + ["--out", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_config_file_sets_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("shots=512\niterations=1\n")
    code, out, _ = run_cli(
        ["--config", str(cfg), "grover-demo", "--seed", "1",
         "--no-timestamp"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["meta"]["parameters"]["shots"] == 512
    assert sum(payload["histogram"].values()) == 512


def test_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("shots=512\n")
    code, out, _ = run_cli(
        ["--config", str(cfg), "grover-demo", "--seed", "1", "--shots", "64",
         "--no-timestamp"], capsys)
    assert code == 0
    assert sum(json.loads(out)["histogram"].values()) == 64


def test_bad_config_exits_three(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("not a pair\n")
    code, _, err = run_cli(
        ["--config", str(cfg), "grover-demo", "--seed", "1"], capsys)
    assert code == 3
    assert "config error" in err
