import json

import numpy as np
import pytest

from sepprob.cli import run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_volume(capsys):
    assert run(["volume", "--n", "4", "--beta", "4"]) == 0
    out = _json(capsys)["result"]
    assert out["expression"] == "pi**12/315071454005160652800000"
    assert len(out["value"].replace(".", "").split("e")[0].lstrip("0")) == 17


def test_r2(capsys):
    assert run(["r2", "--system", "two-qubit", "--beta", "2"]) == 0
    res = _json(capsys)["result"]
    assert res["value"] == pytest.approx(71 / 99, rel=1e-9)
    assert res["std_error"] >= 0


def test_validation_exit_codes(capsys, tmp_path):
    assert run(["scan", "two-qubit", "--beta", "1", "--samples", "0"]) == 2
    assert run(["bogus"]) == 2
    assert run(["volume", "--n", "4"]) == 2
    assert run(["volume", "--n", "4", "--beta", "4", "--output",
                str(tmp_path / "missing" / "x")]) == 2


def _scan(tmp_path, name, *extra):
    prefix = str(tmp_path / name)
    code = run(["scan", "two-qubit", "--beta", "1", "--samples", "20000", "--grid-points",
                "21", "--block-size", "1000", "--output", prefix, *extra])
    assert code == 0
    return prefix


@pytest.mark.parametrize("workers", ["4", "16"])
def test_workers_byte_identical(tmp_path, capsys, workers):
    a = _scan(tmp_path, "a")
    b = _scan(tmp_path, "b", "--workers", workers)
    assert open(a + ".csv", "rb").read() == open(b + ".csv", "rb").read()
    assert open(a + ".json", "rb").read() == open(b + ".json", "rb").read()


def test_config_embedded(tmp_path, capsys):
    a = _scan(tmp_path, "a")
    first = open(a + ".csv").readline()
    cfg = json.loads(first[2:])
    assert cfg["beta"] == 1 and cfg["samples"] == 20000 and "workers" not in cfg
    meta = json.load(open(a + ".meta.json"))
    assert "started" in meta


def test_resume_bit_identical(tmp_path, capsys):
    full = _scan(tmp_path, "full")
    ck = str(tmp_path / "ck.json")
    prefix = str(tmp_path / "part")
    assert run(["scan", "two-qubit", "--beta", "1", "--samples", "12000", "--grid-points",
                "21", "--block-size", "1000", "--output", prefix, "--checkpoint", ck]) == 0
    resumed = _scan(tmp_path, "resumed", "--resume", ck)
    assert open(full + ".csv", "rb").read() == open(resumed + ".csv", "rb").read()
    bad = run(["scan", "two-qubit", "--beta", "1", "--samples", "20000", "--grid-points",
               "21", "--block-size", "1000", "--seed", "5", "--resume", ck])
    assert bad == 2


def test_fit_from_scan(tmp_path, capsys):
    prefix = str(tmp_path / "q")
    assert run(["scan", "qubit-qutrit", "--beta", "1", "--samples", "100000",
                "--grid-points", "11", "--output", prefix]) == 0
    capsys.readouterr()
    assert run(["fit", "--table", prefix + ".csv", "--family", "qq-one-param"]) == 0
    res = _json(capsys)["result"]
    assert 2.0 < res["params"][0] < 3.2


def test_eigen_pipeline(tmp_path, capsys):
    prefix = str(tmp_path / "e")
    assert run(["eigen", "scan", "--grid", "6", "--unitaries", "1000", "--output",
                prefix]) == 0
    capsys.readouterr()
    assert run(["eigen", "probability", "--table", prefix + ".csv", "--grid", "6"]) == 0
    assert 0 < _json(capsys)["result"]["value"] < 1
    assert run(["eigen", "bounds"]) == 0
    res = _json(capsys)["result"]
    assert res["ball"] == pytest.approx(35 * np.pi / (23328 * np.sqrt(3)), rel=1e-4)


def test_registry_list(capsys):
    assert run(["registry", "list"]) == 0
    entries = _json(capsys)["result"]
    names = {e["name"] for e in entries}
    assert any("R2" in n for n in names)
    assert all("expression" in e for e in entries)


def test_scenario_single(capsys):
    assert run(["scenario", "--name", "hs-23-complex"]) == 0
    res = _json(capsys)["result"]["hs-23-complex"]
    assert res["probability"] == pytest.approx(1 / 3, rel=1e-8)
