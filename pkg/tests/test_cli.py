import json

import numpy as np
import pytest

from dfnet.cli import main
from dfnet.dataset import load_csv
from dfnet.modelfile import load_model

TINY = """
seed = 5
test_per_class = 6
[dataset]
per_class = 15
k_per_antenna = 128
[sdae]
n_hidden = 16
epochs = 5
[dnn]
epochs = 10
"""


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "cfg.toml").write_text(TINY)
    assert main(["simulate", "--config", str(d / "cfg.toml"), "--out", str(d / "train.csv")]) == 0
    assert main(["simulate", "--config", str(d / "cfg.toml"), "--out", str(d / "test.csv"), "--test"]) == 0
    assert main(["train", "--config", str(d / "cfg.toml"), "--data", str(d / "train.csv"),
                 "--out", str(d / "m.json")]) == 0
    assert main(["train", "--config", str(d / "cfg.toml"), "--data", str(d / "train.csv"),
                 "--out", str(d / "b.json"), "--baseline"]) == 0
    return d


def test_simulate_output(workdir, capsys):
    out = workdir / "again.csv"
    assert main(["simulate", "--config", str(workdir / "cfg.toml"), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "class 7 (315 deg): 15" in text and "mean SNR" in text
    assert out.read_bytes() == (workdir / "train.csv").read_bytes()
    assert len(load_csv(workdir / "test.csv")) == 48


def test_simulate_invalid_snr(tmp_path, capsys):
    (tmp_path / "c.toml").write_text("[dataset]\nsnr_range_db = [9.0, 1.0]\n")
    assert main(["simulate", "--config", str(tmp_path / "c.toml"), "--out", str(tmp_path / "x.csv")]) == 1
    assert "snr_range_db" in capsys.readouterr().err


def test_missing_config_is_io_error(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.toml"), "--out", str(tmp_path / "x.csv")]) == 2


def test_train_outputs(workdir, capsys):
    m, meta = load_model(workdir / "m.json")
    b, _ = load_model(workdir / "b.json")
    assert m.kind == "sdae_dnn" and b.kind == "baseline_dnn"
    assert b.n_params < m.n_params
    assert meta["seed"] == 5 and len(meta["loss_trace"]) == 10
    again = workdir / "m2.json"
    assert main(["train", "--config", str(workdir / "cfg.toml"), "--data", str(workdir / "train.csv"),
                 "--out", str(again)]) == 0
    assert json.loads(again.read_text())["param_hash"] == json.loads((workdir / "m.json").read_text())["param_hash"]
    assert "sdae loss" in capsys.readouterr().out


def test_eval_single_and_paired(workdir, capsys):
    out = workdir / "r.json"
    assert main(["eval", "--model", str(workdir / "m.json"), "--data", str(workdir / "test.csv"),
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["q"] == 8 and sum(map(sum, doc["counts"])) == 48
    assert main(["eval", "--model", str(workdir / "m.json"), "--data", str(workdir / "test.csv"),
                 "--baseline-model", str(workdir / "b.json"), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["delta"] == pytest.approx(doc["proposed"]["accuracy"] - doc["baseline"]["accuracy"])
    assert "baseline DNN" in capsys.readouterr().out


def test_eval_dimension_mismatch(workdir, tmp_path, capsys):
    bad = tmp_path / "n3.csv"
    bad.write_text("p1,p2,p3,label\n1,2,3,0\n")
    assert main(["eval", "--model", str(workdir / "m.json"), "--data", str(bad),
                 "--out", str(tmp_path / "r.json")]) == 1
    assert "antennas" in capsys.readouterr().err


def test_predict(workdir, capsys):
    model = str(workdir / "m.json")
    assert main(["predict", "--model", model, "--powers", "1,2,0.5,0.1"]) == 0
    first = capsys.readouterr().out
    assert main(["predict", "--model", model, "--powers", "10,20,5,1"]) == 0
    assert capsys.readouterr().out == first
    lines = dict(l.split(": ", 1) for l in first.strip().splitlines())
    probs = np.array(lines["probabilities"].split(","), float)
    assert int(lines["class"]) == int(np.argmax(probs))
    assert float(lines["direction"].split()[0]) == 45.0 * int(lines["class"])
    assert main(["predict", "--model", model, "--powers", "1,1,1,1"]) == 0
    even = capsys.readouterr().out
    assert main(["predict", "--model", model, "--powers", "1,1,1,1"]) == 0
    assert capsys.readouterr().out == even


@pytest.mark.parametrize("powers", ["1,2,3", "1,2,nan,4", "1,2,x,4", "0,0,0,0"])
def test_predict_bad_input(workdir, powers):
    assert main(["predict", "--model", str(workdir / "m.json"), "--powers", powers]) == 1


def test_gradcheck(capsys):
    assert main(["gradcheck"]) == 0
    first = capsys.readouterr().out
    assert "max relative error" in first
    assert main(["gradcheck"]) == 0
    assert capsys.readouterr().out == first
    assert main(["gradcheck", "--inject-error"]) == 3


def test_thread_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("DFNET_THREADS", "1")
    assert main(["gradcheck", "--seed", "1"]) == 0
