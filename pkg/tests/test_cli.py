import json

from germlin.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify_first_family(capsys):
    code, out, _ = run(
        capsys, "certify", "--example", "ex4.1", "--order", "16", "--max-word-len", "6"
    )
    assert code == 0
    data = json.loads(out)
    assert data["certified"] is True
    assert len(data["solutions"]) == 2
    rep = data["solutions"][0]["report"]
    assert rep["multiplier_order"] == 6
    assert rep["theorem_a_applicable"] is False
    assert rep["product_ok"] is True


def test_certify_radical_pair_refuted(capsys):
    code, out, _ = run(
        capsys, "certify", "--example", "ex4.3", "--p", "2", "--order", "12"
    )
    assert code == 1
    data = json.loads(out)
    rep = data["solutions"][0]["report"]
    assert rep["product_ok"] is True
    assert rep["conjugacy"]["(1,2)"]["status"] == "not-found-up-to"


def test_certify_missing_file(capsys):
    code, _, err = run(capsys, "certify", "nonexistent.json")
    assert code == 2
    assert "nonexistent.json" in err


def test_certify_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": ["z + q", "z"]}')
    code, _, err = run(capsys, "certify", str(bad))
    assert code == 2
    assert "generator 1" in err


def test_linearize_rotation_file(tmp_path, capsys):
    path = tmp_path / "rot.json"
    path.write_text(json.dumps({"order": 16, "generators": ["-z", "-z"]}))
    code, out, _ = run(capsys, "linearize", str(path))
    assert code == 0
    data = json.loads(out)
    sol = data["solutions"][0]
    assert sol["result"]["outcome"] == "linearized"
    assert sol["group_order"] == 2


def test_linearize_obstruction(capsys):
    code, out, _ = run(capsys, "linearize", "--example", "ex4.1", "--order", "12")
    assert code == 1
    data = json.loads(out)
    for sol in data["solutions"]:
        steps = sol["result"]["steps"]
        assert sol["result"]["outcome"] == "obstruction"
        assert steps[-1]["k"] == 1
        assert steps[-1]["action"] == "obstruction"


def test_linearize_flat_inconsistent_file(tmp_path, capsys):
    path = tmp_path / "flat.json"
    path.write_text(
        json.dumps({"order": 12, "generators": ["z + z^2", "z - z^2"]})
    )
    code, out, _ = run(capsys, "linearize", str(path))
    assert code == 1
    data = json.loads(out)
    assert data["solutions"][0]["result"]["outcome"] == "flat_inconsistent"


def test_linearize_family_g12(capsys):
    code, out, _ = run(capsys, "linearize", "--example", "g12", "--order", "12")
    assert code == 1
    data = json.loads(out)
    for sol in data["solutions"]:
        assert sol["result"]["outcome"] == "obstruction"


def test_forms_cone(capsys):
    code, out, _ = run(capsys, "forms", "cone", "--example", "ex6.2")
    assert code == 0
    data = json.loads(out)
    assert data["dicritical"] is False
    assert data["cone"] == "2*x*y^2 + 2*x*z^2"


def test_forms_kupka(capsys):
    code, out, _ = run(
        capsys,
        "forms",
        "kupka",
        "--example",
        "ex6.1",
        "--k",
        "2",
        "--point",
        "0,1,-1,0",
    )
    assert code == 0
    assert json.loads(out)["kupka"] is True


def test_forms_first_integral(capsys):
    code, out, _ = run(capsys, "forms", "first-integral", "--example", "ex6.2")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "holomorphic" and data["first_integral"] is True
    code, out, _ = run(
        capsys, "forms", "first-integral", "--example", "ex6.1", "--k", "3"
    )
    assert code == 0
    assert json.loads(out)["kind"] == "meromorphic"


def test_forms_pullback(capsys):
    code, out, _ = run(capsys, "forms", "pullback", "--example", "ex6.2", "--chart", "x")
    assert code == 0
    data = json.loads(out)
    assert data["exceptional_multiplicity"] == 2
    assert data["matches_tangent_cone"] is True
    assert data["restriction"] == "(2*y^2 + 2*z^2)*dx"


def test_forms_file_and_failures(tmp_path, capsys):
    good = tmp_path / "form.json"
    good.write_text(
        json.dumps(
            {
                "vars": ["x", "y", "z"],
                "form": "y*dx + x*z*dy + dz",
            }
        )
    )
    code, out, _ = run(capsys, "forms", "integrable", str(good))
    assert code == 1
    assert json.loads(out)["integrable"] is False

    exact = tmp_path / "exact.json"
    exact.write_text(
        json.dumps(
            {
                "vars": ["x", "y", "z"],
                "form": "y*dx + x*dy + 2*z*dz",
                "integral": "x*y + z^2",
            }
        )
    )
    code, out, _ = run(capsys, "forms", "first-integral", str(exact))
    assert code == 0
    assert json.loads(out)["first_integral"] is True

    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, err = run(capsys, "forms", "integrable", str(bad))
    assert code == 2 and "invalid JSON" in err

    code, _, err = run(capsys, "forms", "kupka", str(good))
    assert code == 2 and "--point" in err


def test_deterministic_output(capsys):
    _, out1, _ = run(capsys, "certify", "--example", "ex4.3", "--p", "1", "--order", "10")
    _, out2, _ = run(capsys, "certify", "--example", "ex4.3", "--p", "1", "--order", "10")
    assert out1 == out2
    _, out3, _ = run(capsys, "forms", "cone", "--example", "ex6.2")
    _, out4, _ = run(capsys, "forms", "cone", "--example", "ex6.2")
    assert out3 == out4


def test_degenerate_expression_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps({"order": 8, "generators": ["z/(1 - 1)", "z"]}))
    code, _, err = run(capsys, "certify", str(path))
    assert code == 2
    assert "error" in err


def test_pretty_output_matches_compact(capsys):
    _, compact, _ = run(capsys, "forms", "cone", "--example", "ex6.2")
    _, pretty, _ = run(capsys, "forms", "cone", "--example", "ex6.2", "--pretty")
    assert json.loads(compact) == json.loads(pretty)
    assert pretty.count("\n") > compact.count("\n")


def test_invalid_subcommand_exits_two():
    import pytest

    with pytest.raises(SystemExit) as exc:
        main(["forms", "nonsense", "--example", "ex6.2"])
    assert exc.value.code == 2


def test_unknown_example(capsys):
    code, _, err = run(capsys, "certify", "--example", "nope")
    assert code == 2 and "unknown example" in err
    code, _, err = run(capsys, "forms", "cone", "--example", "nope")
    assert code == 2 and "unknown example" in err
