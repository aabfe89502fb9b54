import json

import numpy as np
import pytest

from quasiherm import matrixcore as mc
from quasiherm.cli import main
from quasiherm.models import parity, pt_chain, toy_2x2


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(mc.matrix_to_json(toy_2x2(2.0))))
    return str(path)


@pytest.fixture
def parity_params_file(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps([mc.matrix_to_json(parity(2))]))
    return str(path)


def run(argv):
    return main(argv)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_analyze_toy(toy_file, tmp_path):
    out = tmp_path / "report.json"
    assert run(["analyze", "--input", toy_file, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    eigs = [complex(e["re"], e["im"]) for e in report["eigenvalues"]]
    np.testing.assert_allclose(eigs, [-2.0, 2.0], atol=1e-12)
    assert report["spectral_reality"] is True


def test_analyze_broken_phase_exits_one(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(mc.matrix_to_json(pt_chain(2, 1.5))))
    assert run(["analyze", "--input", str(path)]) == 1


def test_analyze_csv_format(toy_file, tmp_path):
    out = tmp_path / "eigs.csv"
    assert run(["analyze", "--input", toy_file, "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "re,im"
    assert len(lines) == 3


def test_analyze_garbage_input_exits_two(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert run(["analyze", "--input", str(path)]) == 2


def test_analyze_missing_file_exits_two(tmp_path):
    assert run(["analyze", "--input", str(tmp_path / "absent.json")]) == 2


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

def test_metric_toy(toy_file, tmp_path):
    out = tmp_path / "metric.json"
    assert run(["metric", "--input", toy_file, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["solution_space_dim"] == 2
    assert report["positive_definite"] is True
    assert report["qh_residual"] <= 1e-10
    theta = mc.matrix_from_json(report["default_metric"])
    assert abs(theta[0, 1]) < 1e-12
    assert theta[0, 0].real == pytest.approx(4.0 * theta[1, 1].real, rel=1e-10)


def test_metric_broken_phase_exits_one(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(mc.matrix_to_json(pt_chain(2, 1.5))))
    assert run(["metric", "--input", str(path)]) == 1


# ---------------------------------------------------------------------------
# chain / verify
# ---------------------------------------------------------------------------

def test_chain_toy_with_parity_parameter(toy_file, parity_params_file, tmp_path):
    out = tmp_path / "chain.json"
    code = run(
        [
            "chain",
            "--input",
            toy_file,
            "--params",
            parity_params_file,
            "--n-factors",
            "2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["ladder"]["overall_pass"] is True
    assert report["theorem1"]["overall_pass"] is True
    names = [r["relation"] for r in report["ladder"]["relations"]]
    assert names[:3] == ["able3", "able2", "able1"]
    assert all(r["residual"] <= 1e-9 for r in report["ladder"]["relations"])
    # the emitted charge is parity^-1 times the emitted metric
    theta = mc.matrix_from_json(report["chain"]["Theta"])
    charge = mc.matrix_from_json(report["chain"]["observables"][1])
    np.testing.assert_allclose(charge, mc.inverse(parity(2)) @ theta, atol=1e-13)


def test_chain_random_params_roundtrip_through_verify(toy_file, tmp_path):
    chain_out = tmp_path / "chain.json"
    assert (
        run(
            [
                "chain",
                "--input",
                toy_file,
                "--n-factors",
                "4",
                "--seed",
                "3",
                "--out",
                str(chain_out),
            ]
        )
        == 0
    )
    emitted = json.loads(chain_out.read_text())
    verify_out = tmp_path / "verify.json"
    assert (
        run(["verify", "--input", str(chain_out), "--out", str(verify_out)]) == 0
    )
    reverified = json.loads(verify_out.read_text())
    first = {r["relation"]: r["residual"] for r in emitted["ladder"]["relations"]}
    second = {r["relation"]: r["residual"] for r in reverified["ladder"]["relations"]}
    assert first.keys() == second.keys()
    for name in first:
        assert abs(first[name] - second[name]) <= 1e-12


def test_verify_corrupted_factor_fails_hermiticity_tag(toy_file, tmp_path):
    chain_out = tmp_path / "chain.json"
    run(
        [
            "chain",
            "--input",
            toy_file,
            "--n-factors",
            "4",
            "--seed",
            "1",
            "--out",
            str(chain_out),
        ]
    )
    report = json.loads(chain_out.read_text())
    chain_obj = report["chain"]
    last = chain_obj["factors"][-1]
    bumped = np.array(last["im"]).reshape(2, 2)
    bumped[0, 1] += 0.25      # breaks Hermiticity of Z_N only
    chain_obj["factors"][-1]["im"] = [float(x) for x in bumped.ravel()]
    corrupted_path = tmp_path / "corrupted.json"
    corrupted_path.write_text(json.dumps(chain_obj))
    verify_out = tmp_path / "verify.json"
    assert run(["verify", "--input", str(corrupted_path), "--out", str(verify_out)]) == 1
    reverified = json.loads(verify_out.read_text())
    failed = [
        r["relation"] for r in reverified["ladder"]["relations"] if not r["pass"]
    ]
    assert "deble1" in failed


def test_chain_wrong_param_count_exits_two(toy_file, parity_params_file):
    assert (
        run(
            [
                "chain",
                "--input",
                toy_file,
                "--params",
                parity_params_file,
                "--n-factors",
                "3",
            ]
        )
        == 2
    )


def test_chain_reports_are_deterministic(toy_file, tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    argv = ["chain", "--input", toy_file, "--n-factors", "3", "--seed", "5"]
    assert run(argv + ["--out", str(first)]) == 0
    assert run(argv + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def test_evolve_toy(toy_file, tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps(mc.vector_to_json(np.array([1.0, 0.0]))))
    out = tmp_path / "evolve.json"
    code = run(
        [
            "evolve",
            "--input",
            toy_file,
            "--state",
            str(state),
            "--t-max",
            "10",
            "--samples",
            "101",
            "--tol",
            "1e-8",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["trajectory"]["drift"] <= 1e-8
    assert len(report["trajectory"]["times"]) == 101


def test_evolve_csv(toy_file, tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps(mc.vector_to_json(np.array([1.0, 1.0]))))
    out = tmp_path / "traj.csv"
    code = run(
        [
            "evolve",
            "--input",
            toy_file,
            "--state",
            str(state),
            "--samples",
            "11",
            "--tol",
            "1e-8",
            "--format",
            "csv",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0].startswith("t,norm,re_psi0")
    assert len(lines) == 12


# ---------------------------------------------------------------------------
# sweep / suite
# ---------------------------------------------------------------------------

def test_sweep_lattice(tmp_path):
    out = tmp_path / "sweep.json"
    code = run(
        [
            "sweep",
            "--dim",
            "2",
            "--range-lo",
            "0",
            "--range-hi",
            "2",
            "--samples",
            "21",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert abs(report["summary"]["critical_estimate"] - 1.0) <= 1e-5


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run(
        [
            "sweep",
            "--range-lo",
            "0",
            "--range-hi",
            "2",
            "--samples",
            "5",
            "--format",
            "csv",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "parameter,reality,positivity"
    assert len(lines) == 6


def test_sweep_bad_range_exits_two():
    assert run(["sweep", "--range-lo", "2", "--range-hi", "0", "--samples", "5"]) == 2


def test_nonpositive_tolerance_exits_two(toy_file):
    assert run(["analyze", "--input", toy_file, "--tol", "-1"]) == 2


def test_suite_small_run(tmp_path):
    out = tmp_path / "suite.json"
    code = run(
        [
            "suite",
            "--seed",
            "0",
            "--samples",
            "6",
            "--n-factors",
            "3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["pass"] is True
    assert len(report["systems"]) == 6
    assert max(report["worst_residuals"].values()) <= 1e-9
