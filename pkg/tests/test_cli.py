import hashlib
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from artifact import cmatrix
from artifact.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(path.read_text())


def test_construct_writes_artifacts(tmp_path):
    assert run("construct", "--family", "eitff-q-q-2", "--q", 7, "--out", tmp_path) == 0
    for name in ("frame.json", "gen.json", "certificate.json", "manifest.json"):
        assert (tmp_path / name).exists()
    cert = load(tmp_path / "certificate.json")
    assert cert["is_equiisoclinic"] is True and cert["tol"] == 1e-9
    manifest = load(tmp_path / "manifest.json")
    assert manifest["command"] == "construct" and manifest["claim"]["satisfied"] is True
    for name, digest in manifest["outputs"].items():
        assert hashlib.sha256((tmp_path / name).read_bytes()).hexdigest() == digest


def test_construct_realified(tmp_path):
    assert run("construct", "--family", "eitff-11-11-3", "--realify", "--out", tmp_path) == 0
    assert load(tmp_path / "certificate.json")["is_real"] is True


def test_construct_ectff(tmp_path):
    assert run("construct", "--family", "ectff-qm1-q-r", "--q", 9, "--r", 4, "--out", tmp_path) == 0
    cert = load(tmp_path / "certificate.json")
    assert cert["is_equichordal"] is True and cert["is_equiisoclinic"] is False


def test_construct_harmonic_etf_multi_factor(tmp_path):
    code = run("construct", "--family", "harmonic-etf", "--group", "2,2", "--subset", "0,1;1,0;1,1",
               "--out", tmp_path)
    assert code == 0
    assert load(tmp_path / "certificate.json")["block_circulant"] is True


def test_claim_mismatch_exit_3(tmp_path):
    assert run("construct", "--family", "eitff-11-11-3", "--chi", 3, "--out", tmp_path) == 3
    cert = load(tmp_path / "certificate.json")
    (violation,) = cert["claim_violations"]
    assert violation["property"] == "equiisoclinic" and violation["residual"] > 0.1
    assert "condition" in violation
    assert load(tmp_path / "manifest.json")["claim"]["satisfied"] is False


def test_validation_exit_2(tmp_path, capsys):
    assert run("construct", "--family", "eitff-q-q-2", "--q", 6, "--out", tmp_path) == 2
    assert "prime power" in capsys.readouterr().err
    assert run("construct", "--family", "eitff-qm1-q-2", "--q", 8, "--out", tmp_path) == 2
    assert run("construct", "--family", "eitff-q-q-2", "--q", 7, "--chars", "0,x", "--out", tmp_path) == 2
    with pytest.raises(SystemExit) as exc:
        run("construct", "--family", "nope")
    assert exc.value.code == 2


def test_verify_reproduces_certificate(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("construct", "--family", "example-4-5-2", "--out", a) == 0
    assert run("verify", "--input", a / "frame.json", "--out", b) == 0
    assert (a / "certificate.json").read_bytes() == (b / "certificate.json").read_bytes()


def test_verify_perturbed_frame(tmp_path):
    assert run("construct", "--family", "harmonic-etf", "--group", 7, "--subset", "1,2,4", "--out", tmp_path) == 0
    frame = load(tmp_path / "frame.json")
    m = cmatrix.from_json(frame["isometries"][0]) * 1.001
    frame["isometries"][0] = cmatrix.to_json(m)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(frame))
    assert run("verify", "--input", bad, "--out", tmp_path / "v") == 0
    assert load(tmp_path / "v" / "certificate.json")["is_tight"] is False


def test_verify_with_group_flag(tmp_path):
    assert run("construct", "--family", "example-4-5-2", "--out", tmp_path) == 0
    frame = load(tmp_path / "frame.json")
    frame.pop("group", None)
    plain = tmp_path / "plain.json"
    plain.write_text(json.dumps(frame))
    assert run("verify", "--input", plain, "--group", 5, "--out", tmp_path / "v") == 0
    assert load(tmp_path / "v" / "certificate.json")["block_circulant"] is True


def test_verify_bad_inputs(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"ambient_dim": 3, "isometries": []}))
    assert run("verify", "--input", empty, "--out", tmp_path) == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run("verify", "--input", garbage, "--out", tmp_path) == 2
    assert run("verify", "--input", tmp_path / "missing.json", "--out", tmp_path) == 2


def test_complement_and_directsum(tmp_path):
    assert run("construct", "--family", "example-4-5-2", "--out", tmp_path / "c") == 0
    src = tmp_path / "c" / "frame.json"
    assert run("complement", "--kind", "naimark", "--input", src, "--out", tmp_path / "n") == 0
    cert = load(tmp_path / "n" / "certificate.json")
    assert (cert["ambient_dim"], cert["num_subspaces"], cert["ranks"][0]) == (6, 5, 2)
    assert cert["is_equiisoclinic"] is True
    assert run("complement", "--kind", "spatial", "--input", src, "--out", tmp_path / "s") == 0
    assert load(tmp_path / "s" / "certificate.json")["ranks"] == [2] * 5
    assert run("directsum", "--inputs", src, src, "--out", tmp_path / "d") == 0
    assert load(tmp_path / "d" / "certificate.json")["ambient_dim"] == 8
    assert run("construct", "--family", "harmonic-etf", "--group", 7, "--subset", "1,2,4",
               "--out", tmp_path / "e") == 0
    assert run("directsum", "--inputs", src, tmp_path / "e" / "frame.json", "--out", tmp_path / "x") == 2


def test_gauss_sum(capsys, tmp_path):
    assert run("gauss-sum", "--p", 11, "--k", 1, "--chi", 5, "--gamma", 1) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["value"]["re"]) < 1e-12 and out["value"]["im"] == pytest.approx(-math.sqrt(11))
    assert run("gauss-sum", "--p", 11, "--chi", 5, "--gamma", 11) == 2
    assert run("gauss-sum", "--p", 3, "--k", 2, "--chi", 1, "--gamma", 4, "--out", tmp_path) == 0
    assert (tmp_path / "gauss_sum.json").exists() and (tmp_path / "manifest.json").exists()


def test_conference_and_signature(tmp_path):
    assert run("conference", "--p", 5, "--k", 1, "--eps", "+1", "--out", tmp_path / "c5") == 0
    c = cmatrix.from_json(load(tmp_path / "c5" / "conference.json"))
    assert c.shape == (6, 6) and np.allclose(c.imag, 0) and np.allclose(c, c.T)
    assert np.allclose(c.conj().T @ c, 5 * np.eye(6))
    assert run("conference", "--q", 7, "--eps", -1, "--out", tmp_path / "c7") == 0
    assert run("conference", "--q", 8, "--eps", -1, "--out", tmp_path / "c8") == 2
    assert run("conference", "--q", 7, "--eps", 1, "--chi", 1, "--out", tmp_path / "c7b") == 2
    assert run("signature", "--from-core", tmp_path / "c7" / "core.json", "--out", tmp_path / "s7") == 0
    cert = load(tmp_path / "s7" / "certificate.json")
    assert (cert["ambient_dim"], cert["num_subspaces"], cert["is_equiisoclinic"]) == (6, 7, True)


def test_signature_from_non_core_exit_3(tmp_path):
    rng = np.random.default_rng(4)
    z = np.triu(np.exp(2j * np.pi * rng.random((5, 5))), 1)
    z = z + z.T
    path = tmp_path / "core.json"
    obj = cmatrix.to_json(z)
    obj["epsilon"] = 1
    path.write_text(json.dumps(obj))
    assert run("signature", "--from-core", path, "--out", tmp_path / "s") == 3
    assert load(tmp_path / "s" / "certificate.json")["claim_violations"][0]["residual"] > 1e-5


def test_outputs_are_byte_identical(tmp_path):
    args = ["construct", "--family", "eitff-qm1-q-2", "--q", 9]
    assert run(*args, "--out", tmp_path / "a") == 0
    assert run(*args, "--out", tmp_path / "b") == 0
    for name in ("frame.json", "gen.json", "certificate.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    ma, mb = load(tmp_path / "a" / "manifest.json"), load(tmp_path / "b" / "manifest.json")
    for m in (ma, mb):
        m.pop("wall_time_s")
        m["parameters"].pop("out")
    assert ma == mb


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "artifact", "gauss-sum", "--p", "7", "--chi", "0", "--gamma", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"]["re"] == pytest.approx(6)
