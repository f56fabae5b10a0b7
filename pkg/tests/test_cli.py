"""Command-line interface: exit codes, reports, and input validation."""

import json

from dnbrackets.cli import load_bracket, load_map, main

from conftest import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_good_document(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("nonflat2.json"))
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_flatness_worked_example(capsys):
    code, out, _ = run(capsys, "flatness", fixture_path("nonflat2.json"))
    assert code == 0
    assert "R(Gamma_[1]) = 0" in out
    assert "R(Gamma_[2]) = 0" in out
    # the two higher standard connections stay visibly curved
    assert "R(Gamma_(1))^2_{1,1,2} = (-4/9)/(u1^2)" in out
    assert "R(Gamma_(2))^1_{2,1,2} = -8/9" in out


def test_jacobi_failure_gives_exit_one_and_witness(capsys):
    code, out, _ = run(capsys, "jacobi", fixture_path("lc_k1_broken.json"))
    assert code == 1
    assert "FAIL" in out
    assert "contains" in out  # a concrete nonzero monomial is shown


def test_jacobi_pass(capsys):
    code, out, _ = run(capsys, "jacobi", fixture_path("lc_k1.json"))
    assert code == 0


def test_connections_constant_bracket_prints_zeros(capsys):
    code, out, _ = run(capsys, "connections", fixture_path("constant_k2.json"))
    assert code == 0
    assert "Gamma_(0):" in out and "Gamma_[1]:" in out
    assert "genericity = 0" in out


def test_curvature_specific_connection(capsys):
    code, out, _ = run(
        capsys, "curvature", fixture_path("nonflat2.json"), "--which", "std", "--s", "1"
    )
    assert code == 0
    assert "R(Gamma_(1))" in out


def test_curvature_index_out_of_range(capsys):
    code, _, err = run(
        capsys, "curvature", fixture_path("nonflat2.json"), "--s", "7"
    )
    assert code == 2
    assert "0..2" in err


def test_transform_round_trip(capsys):
    code, out, _ = run(
        capsys,
        "transform",
        fixture_path("lc_k1.json"),
        "--map",
        fixture_path("map_product.json"),
    )
    assert code == 0
    assert "round-trip recovers the original" in out


def test_transform_without_map_fails(capsys):
    code, out, _ = run(capsys, "transform", fixture_path("lc_k1.json"))
    assert code == 1


def test_lowdegree_dispatch(capsys):
    for name, needle in (
        ("lc_k1.json", "metric compatible"),
        ("canonical_k2.json", "(e) quadratic tail identity"),
        ("nonflat2.json", "cyclic sum vanishes"),
    ):
        code, out, _ = run(capsys, "lowdegree", fixture_path(name))
        assert code == 0
        assert needle in out


def test_spectral_command(capsys):
    code, out, _ = run(
        capsys,
        "spectral",
        fixture_path("lc_k1.json"),
        "--seed",
        "5",
        "--max-degu",
        "2",
    )
    assert code == 0
    assert "homotopy identity" in out


def test_report_json_mirror(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, _, _ = run(
        capsys,
        "validate",
        fixture_path("nonflat2.json"),
        "--json",
        str(target),
    )
    assert code == 0
    payload = json.loads(target.read_text())
    assert payload["command"] == "validate"
    assert payload["exit_code"] == 0
    assert all(c["status"] == "pass" for c in payload["checks"])
    assert all("seconds" in c for c in payload["checks"])


def test_report_statuses_deterministic(tmp_path, capsys):
    copies = []
    for name in ("a.json", "b.json"):
        target = tmp_path / name
        run(
            capsys,
            "report",
            fixture_path("lc_k1.json"),
            "--json",
            str(target),
            "--seed",
            "3",
        )
        payload = json.loads(target.read_text())
        copies.append([(c["name"], c["status"], c["witness"]) for c in payload["checks"]])
    assert copies[0] == copies[1]


def test_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, "validate", "no_such_file.json")
    assert code == 2
    assert "input error" in err


def test_schema_violations(tmp_path, capsys):
    cases = [
        ({"degree": 1, "entries": []}, "dimension"),
        ({"dimension": 1, "entries": []}, "degree"),
        ({"dimension": 1, "degree": 1, "entries": "nope"}, "entries"),
        (
            {
                "dimension": 1,
                "degree": 1,
                "entries": [{"s": 0, "i": 5, "j": 1, "expr": "1"}],
            },
            "out of range",
        ),
        (
            {
                "dimension": 1,
                "degree": 1,
                "entries": [
                    {"s": 1, "i": 1, "j": 1, "expr": "1"},
                    {"s": 1, "i": 1, "j": 1, "expr": "2"},
                ],
            },
            "duplicate",
        ),
        (
            {"dimension": 1, "degree": 1, "construction": "mystery", "entries": []},
            "construction",
        ),
        (
            {
                "dimension": 2,
                "degree": 2,
                "coordinates": ["x", "y"],
                "entries": [],
            },
            "u1..u2",
        ),
    ]
    for doc, needle in cases:
        path = tmp_path / "doc.json"
        path.write_text(json.dumps(doc))
        code, _, err = run(capsys, "validate", str(path))
        assert code == 2, doc
        assert needle in err


def test_parse_error_in_entry(tmp_path, capsys):
    path = tmp_path / "doc.json"
    path.write_text(
        json.dumps(
            {
                "dimension": 1,
                "degree": 1,
                "entries": [{"s": 1, "i": 1, "j": 1, "expr": "u1 +"}],
            }
        )
    )
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2


def test_inhomogeneous_raw_document_fails_validate_check(tmp_path, capsys):
    # parses fine, loads fine, but the homogeneity check fails: exit 1
    path = tmp_path / "doc.json"
    path.write_text(
        json.dumps(
            {
                "dimension": 1,
                "degree": 3,
                "entries": [
                    {"s": 3, "i": 1, "j": 1, "expr": "1"},
                    {"s": 0, "i": 1, "j": 1, "expr": "u1_1"},
                ],
            }
        )
    )
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    assert "FAIL" in out


def test_map_document_validation(tmp_path, capsys):
    path = tmp_path / "map.json"
    path.write_text(json.dumps({"dimension": 2, "forward": ["u1"], "inverse": ["u1"]}))
    code, _, err = run(
        capsys, "transform", fixture_path("lc_k1.json"), "--map", str(path)
    )
    assert code == 2

    # a forward/inverse pair that is not actually inverse
    path.write_text(
        json.dumps(
            {"dimension": 2, "forward": ["u1", "u1*u2"], "inverse": ["u1", "u2"]}
        )
    )
    code, _, err = run(
        capsys, "transform", fixture_path("lc_k1.json"), "--map", str(path)
    )
    assert code == 2
    assert "inverse" in err.lower() or "forward" in err.lower()


def test_load_bracket_entry_list_form(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text(
        json.dumps(
            {
                "dimension": 1,
                "degree": 1,
                "entries": [[1, 1, 1, "u1"], [0, 1, 1, "1/2*u1_1"]],
            }
        )
    )
    b = load_bracket(str(path))
    assert b.n == 1 and b.k == 1
    assert (1, 1, 1) in b.P and (1, 1, 0) in b.P


def test_load_map_round_trip():
    cmap = load_map(fixture_path("map_product.json"), 2)
    assert cmap.check_inverse() == []


def test_entry_point_runs_as_module():
    import subprocess
    import sys

    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "dnbrackets",
            "validate",
            fixture_path("nonflat2.json"),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
