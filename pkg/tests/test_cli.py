"""Command-line interface: output formats and exit codes."""

import json
import math

import pytest

from bessel_sum_rules.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --------------------------------------------------------------------------
# eval


def test_eval_plain_single_term(capsys):
    code, out, _ = run_cli(
        capsys, "eval", "--hierarchy", "2", "--p", "0", "--ell", "0", "--z", "1"
    )
    assert code == 0
    assert "hierarchy 2  p 0  ell 0  z 1" in out
    lines = dict(
        line.split(None, 1) for line in out.strip().splitlines() if " " in line
    )
    assert float(lines["lhs_direct"].strip()) == pytest.approx(
        math.sin(1.0) ** 2, rel=1e-15
    )
    assert float(lines["rhs_closed"].strip()) == pytest.approx(
        math.sin(1.0) ** 2, rel=1e-12
    )
    assert lines["status"].strip() == "pass"


def test_eval_json_all_paths(capsys):
    code, out, _ = run_cli(
        capsys,
        "eval", "--hierarchy", "3c", "--p", "1", "--ell", "4", "--z", "1.5",
        "--path", "all", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["hierarchy"] == "3c"
    assert payload["p"] == 1 and payload["ell"] == 4 and payload["z"] == 1.5
    assert payload["passed"] is True
    for key in (
        "lhs_direct", "rhs_closed", "abs_error", "rel_error",
        "rhs_recursive", "rel_error_recursive", "tolerance",
    ):
        assert key in payload
    assert payload["rel_error"] <= 1e-12


def test_eval_direct_path_prints_no_verdict(capsys):
    code, out, _ = run_cli(
        capsys,
        "eval", "--hierarchy", "1", "--p", "0", "--ell", "3", "--z", "2",
        "--path", "direct",
    )
    assert code == 0
    assert "lhs_direct" in out
    assert "rhs_closed" not in out
    assert "status" not in out


def test_eval_recursive_path(capsys):
    code, out, _ = run_cli(
        capsys,
        "eval", "--hierarchy", "2", "--p", "2", "--ell", "6", "--z", "3",
        "--path", "recursive",
    )
    assert code == 0
    assert "rhs_recursive" in out
    assert "rel_error_recursive" in out
    assert "abs_error" not in out


def test_eval_zero_tolerance_fails(capsys):
    code, out, _ = run_cli(
        capsys,
        "eval", "--hierarchy", "1", "--p", "1", "--ell", "5", "--z", "2",
        "--tol", "0",
    )
    assert code == 1
    assert "status         fail" in out


def test_eval_domain_error_exits_2(capsys):
    code, _, err = run_cli(
        capsys, "eval", "--hierarchy", "2", "--p", "3", "--ell", "1", "--z", "1"
    )
    assert code == 2
    assert err.startswith("error:")
    assert "ell >= p" in err


# --------------------------------------------------------------------------
# coeffs


def test_coeffs_plain_h1_order_zero(capsys):
    code, out, _ = run_cli(
        capsys, "coeffs", "--hierarchy", "1", "--p", "0", "--ell", "0"
    )
    assert code == 0
    assert "variable 1/z^2" in out
    assert "A = [-2/3]" in out
    assert "B = [-2]" in out
    assert "C = [2]" in out
    assert "tail = (-4) * j_1(2z)/z^1" in out


def test_coeffs_json_h3(capsys):
    code, out, _ = run_cli(
        capsys,
        "coeffs", "--hierarchy", "3", "--p", "0", "--ell", "7",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["variable"] == "z^2"
    assert payload["a"] == [] and payload["b"] == []
    assert payload["c"] == ["-1"]
    assert "j_0(2z)" in payload["tail"]


def test_coeffs_composite(capsys):
    code, out, _ = run_cli(
        capsys, "coeffs", "--hierarchy", "3c", "--p", "1", "--ell", "2"
    )
    assert code == 0
    assert "A = [1/2]" in out
    assert "B = [-1/2]" in out
    assert "C = [9]" in out


def test_coeffs_domain_error_exits_2(capsys):
    code, _, err = run_cli(
        capsys, "coeffs", "--hierarchy", "2", "--p", "4", "--ell", "2"
    )
    assert code == 2
    assert err.startswith("error:")


# --------------------------------------------------------------------------
# verify


def test_verify_small_grid_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--max-p", "1", "--max-ell", "6", "--z-list", "1,5"
    )
    assert code == 0
    assert "four-term-recurrence" in out
    assert "total" in out
    assert "FAIL" not in out
    total_line = [l for l in out.splitlines() if l.startswith("total")][0]
    counts = total_line.split()[1]
    done, of = counts.split("/")
    assert done == of


def test_verify_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--max-p", "0", "--max-ell", "4", "--z-list", "2",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["checks"] == payload["passed"] > 0
    assert payload["failures"] == []
    assert "master-relation" in payload["per_identity"]


def test_verify_rejects_nonpositive_z(capsys):
    code, _, err = run_cli(capsys, "verify", "--z-list", "-1")
    assert code == 2
    assert err.startswith("error:")


# --------------------------------------------------------------------------
# bench


def test_bench_csv_shape(capsys):
    code, out, _ = run_cli(
        capsys,
        "bench", "--hierarchy", "2", "--p", "0", "--ell", "10,20", "--z", "1",
        "--repeats", "2",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == (
        "hierarchy,p,ell,z,repeats,mean_ns_direct,mean_ns_closed,speedup,checksum"
    )
    assert len(lines) == 3
    for row, ell in zip(lines[1:], (10, 20)):
        fields = row.split(",")
        assert fields[0] == "2"
        assert fields[2] == str(ell)
        assert int(fields[4]) == 2
        assert float(fields[5]) > 0 and float(fields[6]) > 0


def test_bench_rejects_empty_ell_list(capsys):
    code, _, err = run_cli(
        capsys, "bench", "--hierarchy", "2", "--p", "0", "--ell", "", "--z", "1"
    )
    assert code == 2
    assert err.startswith("error:")


# --------------------------------------------------------------------------
# sweep


def test_sweep_stdout_grid(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--hierarchy", "1", "--p", "0", "--ell", "4",
        "--z-min", "1", "--z-max", "2", "--z-steps", "3",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "z,lhs_direct,rhs_closed,abs_err,rel_err"
    assert len(lines) == 4
    zs = [float(row.split(",")[0]) for row in lines[1:]]
    assert zs == [1.0, 1.5, 2.0]
    for row in lines[1:]:
        fields = row.split(",")
        assert len(fields) == 5
        assert float(fields[4]) <= 1e-10


def test_sweep_single_step_uses_z_min(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--hierarchy", "2", "--p", "1", "--ell", "3",
        "--z-min", "2.5", "--z-max", "9", "--z-steps", "1",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("2.5,")


def test_sweep_writes_file(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    code, out, _ = run_cli(
        capsys,
        "sweep", "--hierarchy", "3", "--p", "1", "--ell", "5",
        "--z-min", "0.5", "--z-max", "1.5", "--z-steps", "2",
        "--out", str(target),
    )
    assert code == 0
    assert out == ""
    raw = target.read_bytes()
    assert b"\r" not in raw
    text = raw.decode("ascii")
    lines = text.splitlines()
    assert lines[0] == "z,lhs_direct,rhs_closed,abs_err,rel_err"
    assert len(lines) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("sweep", "--hierarchy", "1", "--p", "0", "--ell", "2",
         "--z-min", "0", "--z-max", "1", "--z-steps", "2"),
        ("sweep", "--hierarchy", "1", "--p", "0", "--ell", "2",
         "--z-min", "1", "--z-max", "2", "--z-steps", "0"),
        ("sweep", "--hierarchy", "1", "--p", "0", "--ell", "2",
         "--z-min", "2", "--z-max", "1", "--z-steps", "2"),
    ],
)
def test_sweep_grid_errors_exit_2(argv, capsys):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_sweep_unwritable_target_exits_3(tmp_path, capsys):
    target = tmp_path / "missing" / "scan.csv"
    code, _, err = run_cli(
        capsys,
        "sweep", "--hierarchy", "1", "--p", "0", "--ell", "2",
        "--z-min", "1", "--z-max", "2", "--z-steps", "2",
        "--out", str(target),
    )
    assert code == 3
    assert err.startswith("error:")


# --------------------------------------------------------------------------
# parser plumbing


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "bessel-sumrules" in out


def test_missing_subcommand_exits_2(capsys):
    assert main([]) == 2


def test_unknown_hierarchy_token_exits_2(capsys):
    code = main(["eval", "--hierarchy", "4", "--p", "0", "--ell", "1", "--z", "1"])
    assert code == 2
