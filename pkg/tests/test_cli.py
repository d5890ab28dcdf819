import json

import pytest

from src.ui.cli import main, render, run

BROKEN = "[objects]\nx\ny\n[morphisms]\nf: x -> y\ng: y -> x\n[compose]\ng * f = id_x\n"


def statuses(report):
    return {v.name: v.status for v in report.verdicts}


def test_hom_with_expected_groups():
    report, code = run(["hom", "--cat", "bz2", "--max-degree", "6", "--expect", "Z, Z/2, 0, Z/2, 0"])
    assert code == 0
    assert [row["group"] for row in report.tables["homology"]] == ["Z", "Z/2", "0", "Z/2", "0", "Z/2"]
    assert statuses(report)["expect"] == "PASS"
    assert statuses(report)["H0 = colim"] == "PASS"


def test_hom_expectation_failure_exits_one():
    _, code = run(["hom", "--cat", "bz2", "--max-degree", "3", "--expect", "Z, 0"])
    assert code == 1


def test_hom_with_representable_coefficients():
    report, code = run(["hom", "--cat", "delta2", "--coeff", "whitehead:rep_d1.psh", "--max-degree", "3",
                        "--check-normalization"])
    assert code == 0
    assert [row["group"] for row in report.tables["homology"]] == ["Z", "0", "0"]
    assert statuses(report)["normalized = unnormalized"] == "PASS"


def test_sign_coefficients_from_file():
    report, code = run(["hom", "--cat", "bz2", "--coeff", "file:bz2_sign.apsh", "--max-degree", "4"])
    assert code == 0
    assert [row["group"] for row in report.tables["homology"]] == ["Z/2", "0", "Z/2", "0"]


def test_unknown_category_exits_two():
    report, code = run(["hom", "--cat", "no_such_category"])
    assert code == 2
    assert report.error.startswith("CathomError")


def test_malformed_expectation_exits_two():
    _, code = run(["hom", "--cat", "bz2", "--expect", "Q"])
    assert code == 2


def test_nerve_hom():
    report, code = run(["nerve-hom", "--cat", "discrete2", "--max-degree", "2"])
    assert code == 0
    assert [row["group"] for row in report.tables["homology"]] == ["Z^2", "0"]
    assert statuses(report)["H0 = Z^pi0"] == "PASS"


def test_tensor_yoneda():
    report, code = run(["tensor", "--cat", "cospan", "--left", "const-z", "--right", "rep:a"])
    assert code == 0
    assert statuses(report) == {"computed": "PASS", "symmetry": "PASS", "yoneda": "PASS"}
    assert report.tables["tensor"][0]["group"] == "Z"


def test_validate_broken_category_fails(tmp_path):
    path = tmp_path / "broken.cat"
    path.write_text(BROKEN, encoding="utf-8")
    report, code = run(["validate", "--cat", str(path)])
    assert code == 1
    assert report.tables["violations"]


@pytest.mark.parametrize("argv", [
    ["validate", "--cat", "square"],
    ["validate", "--cat", "bz2", "--presheaf", "bz2_sign.apsh"],
    ["validate", "--functor", "terminal_to_chain2"],
    ["validate", "--integrator", "delta:3"],
    ["validate", "--integrator", "bk:cospan"],
])
def test_validate_passes(argv):
    _, code = run(argv)
    assert code == 0


def test_theta_emit_then_validate(tmp_path):
    out = tmp_path / "theta1_w3.cat"
    report, code = run(["theta", "--level", "1", "--width", "3", "--emit", str(out)])
    assert code == 0
    assert report.tables["theta"][0]["objects"] == 4
    assert statuses(report)["iso Delta_<=3"] == "PASS"
    _, code = run(["validate", "--cat", str(out)])
    assert code == 0


def test_aspherical_exit_codes():
    report, code = run(["aspherical", "--functor", "cospan_to_terminal", "--via-lambda"])
    assert code == 0
    assert statuses(report)["tranches = lambda"] == "PASS"
    _, code = run(["aspherical", "--functor", "discrete2_to_terminal"])
    assert code == 1
    report, code = run(["aspherical", "--functor", "terminal_to_chain2"])
    assert code == 1
    assert statuses(report) == {"aspherical(0)": "FAIL", "aspherical(1)": "PASS"}


def test_hmap_and_lambda():
    _, code = run(["hmap", "--functor", "cospan_to_terminal"])
    assert code == 0
    _, code = run(["hmap", "--functor", "discrete2_to_terminal"])
    assert code == 1
    _, code = run(["lambda", "--functor", "bz2_to_terminal"])
    assert code == 1
    _, code = run(["lambda", "--functor", "cospan_to_terminal", "--representables"])
    assert code == 0


def test_elements_and_slice(tmp_path):
    out = tmp_path / "el.cat"
    report, code = run(["elements", "--cat", "cospan", "--presheaf", "cospan_sample.psh", "--emit", str(out)])
    assert code == 0
    assert report.tables["elements"][0]["objects"] == 4
    assert out.is_file()
    report, code = run(["slice", "--cat", "square", "--object", "1"])
    assert code == 0
    assert report.tables["slice"][0]["terminal_objects"] == 1


def test_doldkan_roundtrip():
    report, code = run(["doldkan-roundtrip", "--trunc", "2", "--samples", "3", "--seed", "1", "--max-rank", "2"])
    assert code == 0
    assert len(report.tables["samples"]) == 3
    assert all(v.status == "PASS" for v in report.verdicts)


def test_json_is_reproducible():
    argv = ["hom", "--cat", "bz3", "--max-degree", "3"]
    first, second = render(run(argv)[0]), render(run(argv)[0])
    assert first == second
    payload = json.loads(first)
    assert "timing_ms" not in payload
    assert payload["passed"] is True
    assert "timing_ms" in json.loads(render(run(argv)[0], timing=True))


def test_corpus_written(tmp_path):
    report, code = run(["corpus", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "bz2.cat").is_file()
    assert any(row["path"] == "m1_w2.fun" for row in report.tables["files"])


def test_main_text_output(capsys):
    code = main(["nerve-hom", "--cat", "chain3", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert "## homology" in out and "## verdicts" in out


def test_main_reports_errors_on_stderr(capsys):
    code = main(["slice", "--cat", "square", "--object", "zz"])
    captured = capsys.readouterr()
    assert code == 2
    assert "zz" in captured.err


@pytest.mark.parametrize("argv", [
    ["theta", "--level", "-1", "--width", "1"],
    ["theta", "--level", "1", "--width", "-2"],
    ["validate", "--integrator", "delta:x"],
])
def test_bad_arguments_exit_two(argv):
    report, code = run(argv)
    assert code == 2
    assert report.error.startswith(("ValidationError", "CathomError"))


def test_non_utf8_file_exits_two(tmp_path):
    path = tmp_path / "latin.cat"
    path.write_bytes(b"[objects]\nx\n\xff\n")
    report, code = run(["validate", "--cat", str(path)])
    assert code == 2
    assert report.error.startswith("InterchangeSyntaxError")
    assert f"{path}:3:" in report.error


def test_hmap_ignores_the_boundary_of_the_target(tmp_path):
    # Δ_{≤1} est tronquée mais discrete2 ne l'est pas : l'échec est certifié
    path = tmp_path / "split.fun"
    path.write_text("[functor]\ndom = discrete2.cat\ncod = delta1.cat\n[objects]\na = d0\nb = d1\n",
                    encoding="utf-8")
    report, code = run(["hmap", "--functor", str(path), "--max-degree", "2"])
    assert code == 1
    assert statuses(report)["H(u, Z) iso"] == "FAIL"
    report, code = run(["hmap", "--functor", "delta_diag1", "--max-degree", "3"])
    assert code == 0
    assert statuses(report)["H(u, Z) iso"] == "PASS"
