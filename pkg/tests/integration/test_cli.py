"""Integration tests for CLI."""

import json
import os
from unittest.mock import patch

import numpy as np
import pytest

from heleshaw import NoConvergence
from protocol import IterationReport
from selfsim.cli import build_parser, load_config, main

DESK = [
    "--n",
    "1024",
    "--half-width",
    "50",
    "--tol",
    "1e-9",
    "--max-iter",
    "30",
]


@pytest.fixture(autouse=True)
def isolated_environment():
    """Fixture that keeps .env files and SELFSIM_* variables out of tests."""
    env = {k: v for k, v in os.environ.items() if not k.startswith("SELFSIM_")}
    with patch.dict(os.environ, env, clear=True):
        with patch("selfsim.cli.load_dotenv"):
            yield


@pytest.fixture(scope="module")
def flat_run_dir(tmp_path_factory):
    """Fixture that provides the directory of an epsilon = 0 solve."""
    out = tmp_path_factory.mktemp("flat")
    with patch("selfsim.cli.load_dotenv"):
        code = main(
            ["solve", *DESK, "--epsilon", "0", "--output-dir", str(out)]
        )
    assert code == 0
    return out / "eps_0"


def read_json(path):
    return json.loads(path.read_text())


def test_cli_loads_dotenv_file_on_startup():
    """Test CLI loads .env file when starting."""
    with patch("selfsim.cli.load_dotenv") as mock_load_dotenv:
        main(["solve", "--n", "1023"])

    mock_load_dotenv.assert_called_once()


def test_flat_solve_writes_every_artifact(flat_run_dir):
    """Test epsilon = 0 converges with ||v||_X <= 1e-12 and writes its files."""
    run = read_json(flat_run_dir / "run.json")

    assert run["schema"] == 1
    assert run["status"] == "converged"
    assert run["error"] is None
    assert run["norms"]["xnorm"] <= 1e-12
    assert [p["node"] for p in run["pipeline"]] == [
        "BuildProfile",
        "SolveProfile",
        "ReconstructInterface",
    ]
    for name in [
        "gprofile.json",
        "gprofile.csv",
        "diagnostics.json",
        "v.csv",
        "interface.csv",
        "interface.svg",
    ]:
        assert (flat_run_dir / name).is_file()
    assert read_json(flat_run_dir / "diagnostics.json")["schema"] == 1


def test_flat_interface_table_is_the_real_line(flat_run_dir):
    """Test the interface table has eta = x to 1e-10."""
    table = np.loadtxt(
        flat_run_dir / "interface.csv", delimiter=",", skiprows=1
    )
    x, re_eta, im_eta = table[:, 0], table[:, 1], table[:, 2]

    assert np.max(np.abs(re_eta - x)) <= 1e-10
    assert np.max(np.abs(im_eta)) <= 1e-10


def test_config_file_layer(tmp_path):
    """Test key=value config values load, with times comma separated."""
    path = tmp_path / "run.cfg"
    path.write_text("epsilon=0.005\nn_points=512\ntimes=0.5,2\n")

    args = build_parser().parse_args(["solve", "--config", str(path)])
    cfg = load_config(args)

    assert cfg.epsilon == 0.005
    assert cfg.n_points == 512
    assert cfg.times == [0.5, 2.0]
    assert cfg.half_width == 200.0


def test_flags_override_environment_and_file(tmp_path):
    """Test defaults < config file < environment < flags."""
    path = tmp_path / "run.cfg"
    path.write_text(f"output_dir={tmp_path / 'file'}\nepsilon=0.005\n")
    argv = ["solve", "--config", str(path)]

    with patch.dict(os.environ, {"SELFSIM_OUTPUT_DIR": str(tmp_path / "env")}):
        from_env = load_config(build_parser().parse_args(argv))
        from_flags = load_config(
            build_parser().parse_args(
                [*argv, "--output-dir", "flag", "--epsilon", "0.01"]
            )
        )

    assert from_env.output_dir == str(tmp_path / "env")
    assert from_env.epsilon == 0.005
    assert from_flags.output_dir == "flag"
    assert from_flags.epsilon == 0.01


def test_environment_output_dir_used_by_gprofile(tmp_path):
    """Test SELFSIM_OUTPUT_DIR decides where gprofile.json goes."""
    with patch.dict(os.environ, {"SELFSIM_OUTPUT_DIR": str(tmp_path)}):
        code = main(["gprofile", "--n", "1024", "--half-width", "50"])

    summary = read_json(tmp_path / "eps_0.01" / "gprofile.json")
    assert code == 0
    assert summary["schema"] == 1
    assert summary["integral_Gx"] == pytest.approx(2.0, abs=1e-6)


def test_gprofile_writes_profile_table(tmp_path):
    """Test gprofile.csv has columns x, G, G_x, iHG, V, w on N rows."""
    argv = ["gprofile", "--n", "1024", "--half-width", "50"]

    code = main([*argv, "--run-dir", str(tmp_path)])

    path = tmp_path / "gprofile.csv"
    header = path.read_text().splitlines()[0]
    table = np.loadtxt(path, delimiter=",", skiprows=1)

    assert code == 0
    assert header.split(",") == ["x", "G", "G_x", "iHG", "V", "w"]
    assert table.shape == (1024, 6)
    assert np.all(table[:, 5] > 0.0)
    assert table[512, 0] == 0.0
    assert table[512, 1] == 0.0


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--n", "1023"],
        ["solve", "--epsilon", "2"],
        ["solve", "--relaxation", "0"],
        ["solve", "--no-such-flag"],
        ["integrate"],
        [],
    ],
)
def test_usage_and_config_errors_exit_3(argv, capsys):
    """Test invalid flags, values and subcommands map to exit code 3."""
    assert main(argv) == 3
    assert "selfsim:" in capsys.readouterr().err


def test_config_file_errors_exit_3(tmp_path):
    """Test a missing file, an unknown key and a bare key all exit 3."""
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("epsilon=0.01\nmesh=fine\n")
    bare = tmp_path / "bare.cfg"
    bare.write_text("epsilon\n")

    for path in [tmp_path / "missing.cfg", unknown, bare]:
        assert main(["solve", "--config", str(path)]) == 3


def test_log_level_from_environment_is_validated():
    """Test an unknown SELFSIM_LOG_LEVEL is a config error."""
    with patch.dict(os.environ, {"SELFSIM_LOG_LEVEL": "chatty"}):
        assert main(["solve", "--n", "1024"]) == 3


def test_sweep_rejects_empty_list():
    """Test sweep with no epsilons exits 3."""
    assert main(["sweep", "--epsilons"]) == 3
    assert main(["sweep"]) == 3


def test_sweep_deduplicates_and_isolates_failures(tmp_path, caplog):
    """Test duplicates are dropped with a warning and a rejected run is kept."""
    argv = ["sweep", *DESK, "--output-dir", str(tmp_path)]

    code = main([*argv, "--epsilons", "0", "0", "1"])

    sweep = read_json(tmp_path / "sweep.json")
    statuses = {e["epsilon"]: e["status"] for e in sweep["entries"]}
    assert statuses == {0.0: "converged", 1.0: "rejected"}
    assert code == 3
    assert sweep["response_exponent"] is None
    assert "duplicate epsilons" in caplog.text
    rejected = read_json(tmp_path / "eps_1" / "run.json")
    assert rejected["error"]["type"] == "EpsilonRejected"
    assert (tmp_path / "eps_0" / "v.csv").is_file()


def test_solve_no_convergence_exits_2(tmp_path):
    """Test NoConvergence exits 2 and is serialized into run.json."""
    failure = NoConvergence("no convergence after 1 steps", IterationReport())
    argv = ["solve", *DESK, "--epsilon", "0", "--output-dir", str(tmp_path)]

    with patch("selfsim.pipeline.picard_solve", side_effect=failure):
        code = main(argv)

    run = read_json(tmp_path / "eps_0" / "run.json")
    assert code == 2
    assert run["status"] == "no_convergence"
    assert run["error"]["type"] == "NoConvergence"
    assert run["iteration"]["converged"] is False


def test_unexpected_numeric_error_is_serialized(tmp_path):
    """Test an unhandled numeric error ends the run as failed with exit 1."""
    argv = ["solve", *DESK, "--epsilon", "0", "--output-dir", str(tmp_path)]

    with patch(
        "selfsim.pipeline.reconstruct_eta",
        side_effect=FloatingPointError("overflow in exp"),
    ):
        code = main(argv)

    run = read_json(tmp_path / "eps_0" / "run.json")
    assert code == 1
    assert run["status"] == "failed"
    assert run["error"] == {
        "type": "FloatingPointError",
        "message": "overflow in exp",
    }
    assert run["pipeline"][-1]["node"] == "ReconstructInterface"


def test_verify_flat_run_passes(tmp_path, capsys):
    """Test verify on a fresh epsilon = 0 run passes every check."""
    argv = ["verify", *DESK, "--epsilon", "0", "--output-dir", str(tmp_path)]

    code = main(argv)

    checks = read_json(tmp_path / "eps_0" / "checks.json")
    assert code == 0
    assert checks["schema"] == 1
    assert len(checks["checks"]) >= 15
    assert all(c["passed"] for c in checks["checks"])
    out = capsys.readouterr().out
    assert f"{len(checks['checks'])}/{len(checks['checks'])} passed" in out


def test_verify_rejects_corrupted_run_json(tmp_path):
    """Test a corrupted run.json in --run-dir exits 3."""
    (tmp_path / "run.json").write_text('{"schema": 1, "status": ')

    assert main(["verify", "--run-dir", str(tmp_path)]) == 3


def test_reconstruct_from_saved_run(flat_run_dir):
    """Test reconstruct rebuilds diagnostics.json from run.json and v.csv."""
    diagnostics = flat_run_dir / "diagnostics.json"
    diagnostics.unlink()

    code = main(["reconstruct", "--run-dir", str(flat_run_dir), "--no-plot"])

    assert code == 0
    payload = read_json(diagnostics)
    assert payload["epsilon"] == 0.0
    assert payload["antiderivative_error"] <= 1e-12


def test_reconstruct_needs_saved_field(tmp_path, flat_run_dir):
    """Test reconstruct exits 3 when the run directory has no v.csv."""
    (tmp_path / "run.json").write_text((flat_run_dir / "run.json").read_text())

    assert main(["reconstruct", "--run-dir", str(tmp_path)]) == 3
