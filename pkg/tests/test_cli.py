import json
import shutil
import subprocess

import pytest

from rosserlab.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_SCENARIO, main


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert main(["seed-corpus", "--out", str(out)]) == EXIT_OK
    return out


def test_enumerate(capsys):
    assert main(["enumerate", "--count", "3"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0 19 R(0)", "1 41 R(x0)", "2 50 (0=0)"]
    assert main(["enumerate", "--count", "0"]) == EXIT_SCENARIO


def test_run_is_byte_identical(corpus, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["run", "--construction", "g1", "--scenario", str(corpus / "C1.json"),
                     "--out", str(out)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["mode"] == "procedure2" and data["switch_point"] == 2099


def test_verify_exit_codes(corpus, tmp_path):
    good = tmp_path / "g1.json"
    main(["run", "--construction", "g1", "--scenario", str(corpus / "C1.json"), "--out", str(good)])
    rep = tmp_path / "rep.json"
    assert main(["verify", "--trace", str(good), "--out", str(rep)]) == EXIT_OK
    assert json.loads(rep.read_text())["failed"] is False
    bad = tmp_path / "g3.json"
    main(["run", "--construction", "g3", "--scenario", str(corpus / "C1.json"), "--out", str(bad)])
    assert main(["verify", "--trace", str(bad), "--suite", "con", "--out", str(rep)]) == EXIT_FAIL
    assert main(["verify", "--trace", str(bad), "--suite", "claim1",
                 "--codes-up-to", "2100", "--out", str(rep)]) == EXIT_OK


def test_sat(corpus, capsys):
    assert main(["sat", "--scenario", str(corpus / "C1.json"), "--m", "2098"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "Sat(2098): true" and json.loads(out[1])["n"] == 19
    assert main(["sat", "--scenario", str(corpus / "C1.json"), "--m", "2099"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "Sat(2099): false"


def test_error_exit_codes(corpus, tmp_path):
    assert main(["run", "--construction", "g1", "--scenario", str(tmp_path / "none.json")]) == EXIT_SCENARIO
    bad = tmp_path / "bad.json"
    bad.write_text('{"horizon": 3, "events": [{"y": 0, "formula": "R("}]}')
    assert main(["run", "--construction", "g1", "--scenario", str(bad)]) == EXIT_SCENARIO
    assert main(["verify", "--trace", str(bad)]) == EXIT_SCENARIO
    assert main(["run", "--construction", "g1", "--scenario", str(corpus / "BELL2a.json"),
                 "--out", str(tmp_path / "x.json")]) == EXIT_CAP


@pytest.mark.skipif(shutil.which("rosserlab") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["rosserlab", "enumerate", "--count", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "0 19 R(0)\n"


def test_verify_claim1_on_corpus(corpus, tmp_path):
    from rosserlab.corpus import fixture_ids

    ran = 0
    for fid in fixture_ids():
        for kind in ("g1", "g2", "g3"):
            out = tmp_path / f"{fid}.{kind}.json"
            code = main(["run", "--construction", kind, "--scenario", str(corpus / f"{fid}.json"),
                         "--out", str(out)])
            if code == EXIT_CAP:
                continue
            ran += 1
            assert main(["verify", "--trace", str(out), "--suite", "claim1", "--codes-up-to", "5000",
                         "--out", str(tmp_path / "r.json")]) == EXIT_OK, (fid, kind)
    assert ran >= 30
