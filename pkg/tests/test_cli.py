import json
from pathlib import Path

import pytest

from conftest import DISK_LEFT, DISK_RIGHT, REFERENCE_P, write_problem
from polysep.cli import main

DATA_DIR = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def reference_result_file(path):
    """A result file carrying only the published separator, no certificates."""
    p = {
        "string": REFERENCE_P,
        "coefficients": [
            {"exponents": [0, 0], "coefficient": 1.92876},
            {"exponents": [1, 0], "coefficient": -7.71502},
            {"exponents": [0, 2], "coefficient": 10.96977},
        ],
    }
    path.write_text(json.dumps({"version": "external", "p": p, "degree": 2}))
    return str(path)


# ---- separate -------------------------------------------------------------------


def test_separate_then_verify_round_trip(tmp_path, capsys, lemniscate_problem_file):
    out = tmp_path / "result.json"
    code, stdout, stderr = run(
        capsys, "separate", lemniscate_problem_file, "--degree-max", "2", "--out", str(out)
    )
    assert code == 0
    result = json.loads(out.read_text())
    assert result["degree"] == 2
    assert result["slack"] > 1e-6
    assert result["verification"]["separation"]["passed"]
    assert set(result["certificates"]) == {"A", "B"}

    code, stdout, _ = run(
        capsys, "verify", lemniscate_problem_file, str(out), "--resolution", "201", "--tol", "1e-3"
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["passed"]
    assert report["certificates"]["passed"]


def test_separate_intersecting_sets_exits_two(tmp_path, capsys):
    problem = write_problem(tmp_path / "same.json", 2, [DISK_LEFT], [DISK_LEFT])
    code, _, stderr = run(capsys, "separate", problem, "--degree-max", "1", "--level-max", "4")
    assert code == 2
    assert "no separator" in stderr


def test_separate_malformed_polynomial_exits_one(tmp_path, capsys):
    problem = tmp_path / "bad.json"
    problem.write_text(json.dumps({"n": 2, "A_generators": ["x1 +"], "B_generators": ["x1"]}))
    code, _, stderr = run(capsys, "separate", str(problem))
    assert code == 1
    assert "position" in stderr


def test_bad_flag_values_exit_one(tmp_path, capsys, disk_problem_file):
    code, *_ = run(capsys, "separate", disk_problem_file, "--degree-max", "0")
    assert code == 1
    code, *_ = run(capsys, "separate", disk_problem_file, "--degree-max", "nope")
    assert code == 1
    code, *_ = run(capsys, "separate")  # missing problem path
    assert code == 1


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_separate_respects_file_options(tmp_path, capsys):
    problem = write_problem(
        tmp_path / "p.json", 2, [DISK_LEFT], [DISK_RIGHT], options={"degree_max": 1, "level_max": 4}
    )
    out = tmp_path / "r.json"
    code, *_ = run(capsys, "separate", problem, "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["degree"] == 1


def test_separate_ball_switch_off(tmp_path, capsys, disk_problem_file):
    out = tmp_path / "r.json"
    code, *_ = run(
        capsys, "separate", disk_problem_file, "--degree-max", "1", "--ball", "off",
        "--out", str(out)
    )
    assert code == 0
    result = json.loads(out.read_text())
    # without the ball switch each certificate carries only the set's generator
    assert len(result["certificates"]["A"]["generators"]) == 1


def test_separate_is_deterministic(tmp_path, capsys, disk_problem_file):
    outputs = []
    for name in ("first.json", "second.json"):
        out = tmp_path / name
        code, *_ = run(capsys, "separate", disk_problem_file, "--degree-max", "1",
                       "--out", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        del data["timing"]
        outputs.append(data)
    assert outputs[0] == outputs[1]


# ---- verify ----------------------------------------------------------------------


def test_verify_reference_separator_on_circle_reading(
    tmp_path, capsys, lemniscate_problem_file
):
    result = reference_result_file(tmp_path / "reference.json")
    code, stdout, _ = run(
        capsys, "verify", lemniscate_problem_file, result, "--resolution", "201", "--tol", "1e-2"
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["separation"]["passed"]
    assert report["certificates"]["passed"] is None


def test_verify_reference_separator_fails_on_literal_reading(
    tmp_path, capsys, two_lobe_problem_file
):
    result = reference_result_file(tmp_path / "reference.json")
    code, stdout, _ = run(
        capsys, "verify", two_lobe_problem_file, result, "--resolution", "201", "--tol", "1e-2"
    )
    assert code == 3
    report = json.loads(stdout)
    assert not report["separation"]["passed"]
    assert report["separation"]["witness_B"][0] < 0.0


def test_verify_truncated_result_exits_one(tmp_path, capsys, lemniscate_problem_file):
    broken = tmp_path / "broken.json"
    broken.write_text('{"p": {"string": "x1"')
    code, _, stderr = run(capsys, "verify", lemniscate_problem_file, str(broken))
    assert code == 1


def test_verify_rejects_disagreeing_coefficient_list(tmp_path, capsys, lemniscate_problem_file):
    result = tmp_path / "mismatch.json"
    result.write_text(
        json.dumps(
            {
                "p": {
                    "string": "x1",
                    "coefficients": [{"exponents": [1, 0], "coefficient": 2.0}],
                }
            }
        )
    )
    code, _, stderr = run(capsys, "verify", lemniscate_problem_file, str(result))
    assert code == 1
    assert "disagree" in stderr


def test_verify_corrupted_certificate_exits_three(
    tmp_path, capsys, disk_problem_file
):
    out = tmp_path / "result.json"
    code, *_ = run(capsys, "separate", disk_problem_file, "--degree-max", "1", "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    data["certificates"]["A"]["multipliers"][0]["gram_row_major"][0] += 0.25
    out.write_text(json.dumps(data))
    code, stdout, _ = run(capsys, "verify", disk_problem_file, str(out))
    assert code == 3
    assert not json.loads(stdout)["certificates"]["passed"]


def test_verify_certificate_over_foreign_generators_exits_three(
    tmp_path, capsys, disk_problem_file
):
    out = tmp_path / "result.json"
    code, *_ = run(capsys, "separate", disk_problem_file, "--degree-max", "1", "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    data["certificates"]["A"]["generators"][0] = "1 - x1^2"  # not a problem generator
    out.write_text(json.dumps(data))
    code, stdout, _ = run(capsys, "verify", disk_problem_file, str(out))
    assert code == 3
    report = json.loads(stdout)
    assert report["certificates"]["passed"] is False
    assert report["certificates"]["foreign_generators"]


def test_verify_golden_result_file(capsys):
    """Schema stability: a stored result from a previous run still verifies."""
    code, stdout, _ = run(
        capsys,
        "verify",
        str(DATA_DIR / "golden_problem.json"),
        str(DATA_DIR / "golden_result.json"),
    )
    assert code == 0
    assert json.loads(stdout)["passed"]


# ---- bounds ----------------------------------------------------------------------


def test_bounds_disk_problem(capsys, disk_problem_file):
    code, stdout, _ = run(capsys, "bounds", disk_problem_file)
    assert code == 0
    report = json.loads(stdout)
    assert report["dist_estimate"] == pytest.approx(0.5, abs=1e-9)
    assert report["lipschitz_constant"] == pytest.approx(6.0, abs=1e-9)
    assert report["jackson_degree_err1"] == 17
    assert report["separation_degree_log10"] > 0
    assert report["warnings"]
    assert report["ball_rescaled"]["separation_degree_log10"] > report["separation_degree_log10"]


def test_bounds_lemniscate_problem(capsys, lemniscate_problem_file):
    code, stdout, _ = run(capsys, "bounds", lemniscate_problem_file)
    assert code == 0
    report = json.loads(stdout)
    # the Lipschitz constant is 3/dist by construction; at resolution 201 the
    # closest grid pair gives dist = 0.3/sqrt(5), hence L = 10*sqrt(5)
    assert report["lipschitz_constant"] == pytest.approx(
        3.0 / report["dist_estimate"], rel=1e-12
    )
    assert report["lipschitz_constant"] == pytest.approx(22.3606797749979, abs=1e-9)
    assert report["separation_degree_log10"] > 20.0
    assert report["separation_degree"].startswith("10^")
    assert any("Lojasiewicz" in w for w in report["warnings"])


def test_bounds_empty_set_exits_four(tmp_path, capsys):
    problem = write_problem(tmp_path / "empty.json", 2, [DISK_LEFT], ["-1 - x1^2"])
    code, _, stderr = run(capsys, "bounds", problem)
    assert code == 4


def test_bounds_rejects_bad_flags(capsys, disk_problem_file):
    code, _, stderr = run(capsys, "bounds", disk_problem_file, "--c", "-1")
    assert code == 1
    code, _, stderr = run(capsys, "bounds", disk_problem_file, "--T", "0.5")
    assert code == 1


# ---- grid ------------------------------------------------------------------------


def test_grid_row_count(tmp_path, capsys, lemniscate_problem_file):
    result = reference_result_file(tmp_path / "reference.json")
    out = tmp_path / "grid.csv"
    code, *_ = run(
        capsys, "grid", lemniscate_problem_file, result, "--resolution", "16", "--out", str(out)
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "x1,x2,p,inA,inB"
    assert len(lines) == 16 * 16 + 1


def test_grid_minimal_resolution(tmp_path, capsys, lemniscate_problem_file):
    result = reference_result_file(tmp_path / "reference.json")
    code, stdout, _ = run(capsys, "grid", lemniscate_problem_file, result, "--resolution", "2")
    assert code == 0
    assert len(stdout.strip().splitlines()) == 5


def test_grid_rejects_non_planar_problems(tmp_path, capsys):
    problem = write_problem(tmp_path / "p3.json", 3, ["1 - x1^2"], ["x2 - 2"])
    result = tmp_path / "r.json"
    result.write_text(json.dumps({"p": {"string": "x1", "coefficients": [
        {"exponents": [1, 0, 0], "coefficient": 1.0}]}}))
    code, _, stderr = run(capsys, "grid", str(problem), str(result))
    assert code == 1
    assert "2-D" in stderr


def test_grid_marks_membership(tmp_path, capsys, lemniscate_problem_file):
    result = reference_result_file(tmp_path / "reference.json")
    code, stdout, _ = run(
        capsys, "grid", lemniscate_problem_file, result, "--resolution", "41"
    )
    assert code == 0
    rows = [line.split(",") for line in stdout.strip().splitlines()[1:]]
    in_a = [r for r in rows if r[3] == "1"]
    in_b = [r for r in rows if r[4] == "1"]
    assert in_a and in_b
    # members of A sit near the x2 axis, members of B near (1/2, 0)
    assert all(abs(float(r[0])) <= 0.3 for r in in_a)
    assert all(0.25 <= float(r[0]) <= 0.75 for r in in_b)
