"""Command line behavior: exit codes, report shapes, determinism.

Exit code contract under test: 0 when the run passed (including an
infeasibility verdict, which is a completed analysis), 1 when a checked
identity failed (JSON report on stdout), 2 on usage errors or unreadable
input (message on stderr). Fixture values reuse expectations already
pinned by the module test suites: 5 maximal nested sets and f-vector
(5, 5, 1) for the path on three vertices, the corank certificate for the
first rank-four matrix, and the one-jet pass on rank-two types.
"""

import json
import subprocess
import sys

import pytest

jsonschema = pytest.importorskip("jsonschema")

from dynkit.cli import RunConfig, main, schema_for

A3 = {"vertices": ["1", "2", "3"], "edges": [["1", "2"], ["2", "3"]]}

MATRIX_ONE = "2 -1 0 0\n-1 2 -2 0\n0 -2 2 -1\n0 0 -1 2\n"
MATRIX_TWO = "2 -2 0 0\n-2 2 -1 0\n0 -1 2 -1\n0 0 -1 2\n"

# pentagon of maximal nested sets on the three-vertex path, listed so
# that consecutive entries (cyclically) differ in exactly one member
PENTAGON = [
    [["1"], ["1", "2"], ["1", "2", "3"]],
    [["2"], ["1", "2"], ["1", "2", "3"]],
    [["2"], ["2", "3"], ["1", "2", "3"]],
    [["3"], ["2", "3"], ["1", "2", "3"]],
    [["1"], ["3"], ["1", "2", "3"]],
]

IDENTITY2 = [["1", "0"], ["0", "1"]]
SHEAR2 = [["1", "1"], ["0", "1"]]


@pytest.fixture
def a3(tmp_path):
    path = tmp_path / "a3.json"
    path.write_text(json.dumps(A3))
    return str(path)


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(args, capsys):
    code, out, err = run(args, capsys)
    return code, json.loads(out), err


def phi_file(tmp_path, values):
    pairs = []
    for k, value in enumerate(values):
        pairs.append(
            {
                "first": PENTAGON[k],
                "second": PENTAGON[(k + 1) % len(PENTAGON)],
                "value": value,
            }
        )
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"dim": 2, "pairs": pairs}))
    return str(path)


# -- nested enum ---------------------------------------------------------------------


def test_nested_enum_lists_the_five_maximal_sets(a3, capsys):
    code, out, err = run(["nested", "enum", "--diagram", a3, "--mns"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5
    assert "{1} {1,2} {1,2,3}" in lines


def test_nested_enum_json_report(a3, capsys):
    code, report, _ = run_json(
        ["nested", "enum", "--diagram", a3, "--mns", "--format", "json"], capsys
    )
    assert code == 0
    assert report["count"] == 5
    assert report["maximal"] is True
    assert len(report["nested_sets"]) == 5
    jsonschema.validate(report, schema_for("nested enum"))


def test_nested_enum_includes_non_maximal_sets(a3, capsys):
    code, report, _ = run_json(
        ["nested", "enum", "--diagram", a3, "--format", "json"], capsys
    )
    assert code == 0
    assert report["maximal"] is False
    assert report["count"] > 5
    jsonschema.validate(report, schema_for("nested enum"))


# -- assoc export --------------------------------------------------------------------


def test_assoc_export_text_summary(a3, capsys):
    code, out, _ = run(["assoc", "export", "--diagram", a3], capsys)
    assert code == 0
    assert "f-vector: 5 5 1" in out
    assert "euler characteristic: 1" in out


def test_assoc_export_dot_skeleton(a3, capsys):
    code, out, _ = run(
        ["assoc", "export", "--diagram", a3, "--format", "dot"], capsys
    )
    assert code == 0
    assert out.startswith("graph skeleton {")
    assert out.count(" -- ") == 5


def test_assoc_export_json_report(a3, capsys):
    code, report, _ = run_json(
        ["assoc", "export", "--diagram", a3, "--format", "json"], capsys
    )
    assert code == 0
    assert report["f_vector"] == [5, 5, 1]
    assert len(report["faces"]) == 11
    jsonschema.validate(report, schema_for("assoc export"))


# -- assoc coherence -----------------------------------------------------------------


def test_coherence_passes_without_an_assignment_file(a3, capsys):
    code, out, _ = run(["assoc", "coherence", "--diagram", a3], capsys)
    assert code == 0
    assert "coherence ok" in out


def test_coherence_accepts_a_telescoping_matrix_assignment(a3, tmp_path, capsys):
    phi = phi_file(tmp_path, [IDENTITY2] * 5)
    code, report, _ = run_json(
        ["assoc", "coherence", "--diagram", a3, "--phi", phi, "--format", "json"],
        capsys,
    )
    assert code == 0
    assert report["ok"] is True
    assert report["checked_faces"] == 1
    jsonschema.validate(report, schema_for("assoc coherence"))


def test_coherence_failure_exits_one_with_a_json_report(a3, tmp_path, capsys):
    # one non-identity value on the pentagon makes the loop product a shear
    phi = phi_file(tmp_path, [IDENTITY2] * 4 + [SHEAR2])
    code, report, _ = run_json(
        ["assoc", "coherence", "--diagram", a3, "--phi", phi], capsys
    )
    assert code == 1
    assert report["ok"] is False
    assert len(report["failures"]) == 1
    failure = report["failures"][0]
    assert len(failure["cycle"]) == 5
    assert failure["product"] != IDENTITY2
    jsonschema.validate(report, schema_for("assoc coherence"))


def test_coherence_with_missing_pairs_is_an_input_error(a3, tmp_path, capsys):
    pairs = [
        {"first": PENTAGON[0], "second": PENTAGON[1], "value": IDENTITY2}
    ]
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"dim": 2, "pairs": pairs}))
    code, out, err = run(
        ["assoc", "coherence", "--diagram", a3, "--phi", str(path)], capsys
    )
    assert code == 2
    assert "no value assigned" in err


# -- cartan analyze ------------------------------------------------------------------


def test_analyze_reports_infeasible_with_exit_zero(tmp_path, capsys):
    path = tmp_path / "m1.txt"
    path.write_text(MATRIX_ONE)
    code, out, _ = run(["cartan", "analyze", "--gcm", str(path)], capsys)
    assert code == 0
    assert "verdict: infeasible" in out
    assert "corank violation" in out


def test_analyze_json_report_carries_the_certificate(tmp_path, capsys):
    path = tmp_path / "m1.txt"
    path.write_text(MATRIX_ONE)
    code, report, _ = run_json(
        ["cartan", "analyze", "--gcm", str(path), "--format", "json"], capsys
    )
    assert code == 0
    assert report["verdict"] == "infeasible"
    assert report["certificate"]["kind"] == "corank violation"
    assert report["assignment"] is None
    jsonschema.validate(report, schema_for("cartan analyze"))


def test_analyze_dimension_obstruction(tmp_path, capsys):
    path = tmp_path / "m2.txt"
    path.write_text(MATRIX_TWO)
    code, report, _ = run_json(
        ["cartan", "analyze", "--gcm", str(path), "--format", "json"], capsys
    )
    assert code == 0
    assert report["verdict"] == "infeasible"
    assert report["certificate"]["kind"] == "dimension obstruction"
    jsonschema.validate(report, schema_for("cartan analyze"))


def test_analyze_accepts_json_matrices_and_finds_structures(tmp_path, capsys):
    path = tmp_path / "affine.json"
    path.write_text("[[2, -2], [-2, 2]]")
    code, report, _ = run_json(
        ["cartan", "analyze", "--gcm", str(path), "--format", "json"], capsys
    )
    assert code == 0
    assert report["gcm"] == [[2, -2], [-2, 2]]
    assert report["verdict"] == "feasible"
    assert report["assignment"] is not None
    assert "1,2" in report["assignment"]
    jsonschema.validate(report, schema_for("cartan analyze"))


def test_analyze_rejects_a_non_gcm(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 -1\n0 2\n")
    code, out, err = run(["cartan", "analyze", "--gcm", str(path)], capsys)
    assert code == 2
    assert err.startswith("error:")


# -- verify braid --------------------------------------------------------------------


def test_braid_fundamental_passes(capsys):
    code, out, _ = run(["verify", "braid", "--type", "A2", "--rep", "fund"], capsys)
    assert code == 0
    assert "braid relations hold" in out


def test_braid_adjoint_json_report(capsys):
    code, report, _ = run_json(
        ["verify", "braid", "--type", "A2", "--rep", "adjoint", "--format", "json"],
        capsys,
    )
    assert code == 0
    assert report["ok"] is True
    assert report["dim"] == 8
    assert report["pairs"] == [
        {"i": 1, "j": 2, "m": 3, "tilde_s": True, "s_ic": True}
    ]
    jsonschema.validate(report, schema_for("verify braid"))


def test_braid_matrices_flag_dumps_equal_sides(capsys):
    code, report, _ = run_json(
        [
            "verify", "braid", "--type", "B2", "--rep", "fund",
            "--matrices", "--format", "json",
        ],
        capsys,
    )
    assert code == 0
    pair = report["pairs"][0]
    assert pair["m"] == 4
    assert pair["left"] == pair["right"]
    jsonschema.validate(report, schema_for("verify braid"))


def test_braid_accepts_explicit_weights(capsys):
    code, report, _ = run_json(
        ["verify", "braid", "--type", "A2", "--rep", "0:1", "--format", "json"],
        capsys,
    )
    assert code == 0
    assert report["dim"] == 3


# -- verify monodromy ----------------------------------------------------------------


def test_monodromy_passes_through_first_order(capsys):
    code, report, _ = run_json(
        ["verify", "monodromy", "--order", "2", "--format", "json"], capsys
    )
    assert code == 0
    assert report["ok"] is True
    assert report["verified_orders"] == [0, 1]
    assert report["grouplike"] is True
    assert report["coproduct_casimir"] is True
    # second order is reported but lies outside the verified window
    assert report["residual_left"][:2] == [True, True]
    assert report["residual_right"][:2] == [True, True]
    jsonschema.validate(report, schema_for("verify monodromy"))


def test_monodromy_order_zero_has_no_residuals(capsys):
    code, report, _ = run_json(
        ["verify", "monodromy", "--order", "0", "--format", "json"], capsys
    )
    assert code == 0
    assert report["residual_left"] is None
    assert report["verified_orders"] == [0]
    jsonschema.validate(report, schema_for("verify monodromy"))


def test_monodromy_matrices_flag(capsys):
    code, report, _ = run_json(
        ["verify", "monodromy", "--matrices", "--format", "json"], capsys
    )
    assert code == 0
    mats = report["matrices"]
    assert len(mats["s_first"]) == 2
    assert len(mats["casimir_pair"]) == 4
    jsonschema.validate(report, schema_for("verify monodromy"))


def test_monodromy_vertex_out_of_range(capsys):
    code, out, err = run(["verify", "monodromy", "--vertex", "3"], capsys)
    assert code == 2
    assert "out of range" in err


# -- verify twist --------------------------------------------------------------------


def test_twist_relative_example_passes(capsys):
    code, report, _ = run_json(
        [
            "verify", "twist", "--type", "A2", "--sub", "1",
            "--reps", "f,f", "--format", "json",
        ],
        capsys,
    )
    assert code == 0
    assert report["ok"] is True
    assert report["sub"] == [1]
    assert report["dims"] == [3, 3]
    assert report["alternation"]["match"] is True
    # order zero of the jet is the identity on the tensor square
    jet0 = report["jet"]["0"]
    assert all(
        jet0[a][b] == ("1" if a == b else "0") for a in range(9) for b in range(9)
    )
    jsonschema.validate(report, schema_for("verify twist"))


def test_twist_absolute_case(capsys):
    code, report, _ = run_json(
        ["verify", "twist", "--type", "A1", "--reps", "f,f", "--format", "json"],
        capsys,
    )
    assert code == 0
    assert report["sub"] == []
    assert report["alternation"]["match"] is True
    jsonschema.validate(report, schema_for("verify twist"))


def test_twist_needs_two_factors(capsys):
    code, out, err = run(["verify", "twist", "--type", "A1", "--reps", "f"], capsys)
    assert code == 2
    assert "exactly two" in err


def test_twist_rejects_vertices_outside_the_diagram(capsys):
    code, out, err = run(["verify", "twist", "--type", "A1", "--sub", "2"], capsys)
    assert code == 2
    assert "out of range" in err


# -- shared command plumbing ---------------------------------------------------------


def test_missing_input_file_is_a_usage_error(capsys):
    code, out, err = run(
        ["nested", "enum", "--diagram", "/nonexistent/d.json"], capsys
    )
    assert code == 2
    assert err.startswith("error:")
    assert out == ""


def test_bad_flags_exit_two(a3, capsys):
    assert main(["verify", "braid", "--type", "A2", "--order", "7"]) == 2
    assert main(["bogus"]) == 2
    assert main(["nested", "enum", "--diagram", a3, "--bound", "0"]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_run_config_rejects_bad_knobs():
    with pytest.raises(ValueError):
        RunConfig(command="nested enum", bound=0)
    with pytest.raises(ValueError):
        RunConfig(command="nested enum", order=5)
    with pytest.raises(ValueError):
        RunConfig(command="nested enum", fmt="yaml")


def test_output_is_byte_deterministic(a3, tmp_path):
    path = tmp_path / "m1.txt"
    path.write_text(MATRIX_ONE)
    commands = [
        ["nested", "enum", "--diagram", a3, "--mns", "--format", "json"],
        ["cartan", "analyze", "--gcm", str(path), "--format", "json"],
        ["verify", "braid", "--type", "A2", "--format", "json"],
    ]
    for args in commands:
        outs = [
            subprocess.run(
                [sys.executable, "-m", "dynkit.cli", *args],
                capture_output=True,
                check=True,
            ).stdout
            for _ in range(2)
        ]
        assert outs[0] == outs[1]
        assert outs[0]
