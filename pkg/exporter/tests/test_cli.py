import json

from embexport import cli
from embexport.encoders import ENCODER_FACTORIES

from conftest import FakeWordpieceEncoder


def test_missing_dataset_exits_1(tmp_path, capsys):
    code = cli.main([
        "export", "--dataset", str(tmp_path / "missing.jsonl"),
        "--provider", "bert", "--out", str(tmp_path / "o.mdemb"),
    ])
    assert code == 1
    assert "missing.jsonl" in capsys.readouterr().err


def test_export_via_cli_with_injected_encoder(tmp_path, capsys, monkeypatch):
    monkeypatch.setitem(ENCODER_FACTORIES, "bert", lambda model, device: FakeWordpieceEncoder(dim=8))
    p = tmp_path / "d.jsonl"
    p.write_text(json.dumps({"id": "a", "tokens": ["one", "token"]}) + "\n", encoding="utf-8")
    out = tmp_path / "d.mdemb"
    code = cli.main([
        "export", "--dataset", str(p), "--provider", "bert",
        "--out", str(out), "--dim", "8",
    ])
    assert code == 0
    assert out.exists()
    assert "wrote 1 records" in capsys.readouterr().out


def test_model_load_failure_reported(tmp_path, capsys):
    p = tmp_path / "d.jsonl"
    p.write_text(json.dumps({"id": "a", "tokens": ["x"]}) + "\n", encoding="utf-8")
    code = cli.main([
        "export", "--dataset", str(p), "--provider", "elmo",
        "--out", str(tmp_path / "o.mdemb"),
    ])
    assert code == 1
    err = capsys.readouterr().err
    assert "error:" in err
