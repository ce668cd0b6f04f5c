import json

import pytest

from curv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_sphere(capsys):
    code, out, _ = run(capsys, "compute", "--model", '{"model": "sphere", "params": {"n": 4}}')
    doc = json.loads(out)
    assert code == 0
    assert doc["Scal"] == pytest.approx(12) and doc["h4"] == pytest.approx(6)
    assert doc["self_dual_defect"] < 1e-10
    assert doc["basis"]["2"][0] == [0, 1]


def test_compute_rational_and_file(tmp_path, capsys):
    cfg = tmp_path / "m.json"
    cfg.write_text('{"model": "sphere", "params": {"n": 5}}')
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "compute", "--model", str(cfg), "--mode", "rational", "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0 and doc["Scal"] == 20 and doc["h4"] == 30
    assert doc["lovelock"]["2"][0][0] == 6


def test_compute_euclidean_zero(capsys):
    code, out, _ = run(capsys, "compute", "--model", '{"model": "euclidean", "params": {"n": 5}}')
    doc = json.loads(out)
    assert code == 0 and doc["Scal"] == 0
    assert all(v == 0 for grid in doc["dd_star"].values() for row in grid for v in row)


def test_compute_anti_self_dual_product(capsys):
    cfg = ('{"model": "product", "params": {"factors": [{"model": "sphere", "params": {"n": 2}}, '
            '{"model": "hyperbolic", "params": {"n": 2}}]}}')
    code, out, _ = run(capsys, "compute", "--model", cfg)
    assert code == 0 and json.loads(out)["anti_self_dual_defect"] < 1e-10


@pytest.mark.parametrize("argv", [
    ["compute", "--model", "{bad json"],
    ["compute", "--model", "/no/such/file.json"],
    ["compute", "--model", '{"model": "sphere", "params": {"n": 9}}'],
    ["compute", "--model", '{"model": "perturbed_flat", "params": {"n": 4}}', "--mode", "rational"],
    ["verify", "--filter", "no_such_check"],
    ["bench", "--n", "7"],
    ["bench", "--n", "x"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_numeric_failure_exit_3(capsys):
    cfg = ('{"polynomial_metric": {"n": 2, "epsilon": 1.0, '
            '"coefficients": [{"i": 0, "j": 0, "monomial": [0, 0], "value": -2.0}]}}')
    assert run(capsys, "compute", "--model", cfg)[0] == 3


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "--filter", "curvature.oracle_dd_star_p", "--samples", "1")[0] == 0
    code, out, _ = run(capsys, "verify", "--filter", "curvature.oracle_dd_star_p", "--samples", "1", "--self-test-corrupt")
    assert code == 1 and json.loads(out)["checks"][0]["status"] == "fail"


def test_models_list(capsys):
    code, out, _ = run(capsys, "models", "list")
    assert code == 0 and "sphere" in json.loads(out)["models"]


def test_bench_cli(capsys):
    code, out, _ = run(capsys, "bench", "--n", "4")
    assert code == 0 and all(r["equal"] for r in json.loads(out)["rows"])
