import csv
import json

import numpy as np
import pytest

from vanish.cli import main


def test_toy_golden_passes(capsys):
    assert main(["toy"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "terminated at degree 3" in out


def test_toy_skips_golden_for_other_settings(capsys):
    assert main(["toy", "--epsilon", "0.5"]) == 0
    assert "skipped" in capsys.readouterr().out
    assert main(["toy", "--strategy", "coefficient"]) == 0
    assert "skipped" in capsys.readouterr().out


def test_construct_writes_outputs(tmp_path):
    rc = main([
        "construct", "--dataset", "D1", "--count", "40", "--noise", "0.02",
        "--epsilon", "0.3", "--max-degree", "5",
        "--output-dir", str(tmp_path),
    ])
    assert rc == 0
    with open(tmp_path / "basis.json", encoding="utf-8") as fh:
        data = json.load(fh)
    assert data["schema_version"] == 1
    assert data["layers"]
    with open(tmp_path / "diagnostics.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and {"degree", "set", "count"} <= set(rows[0])


def test_construct_from_csv(tmp_path):
    pts = np.random.default_rng(0).normal(size=(20, 2))
    path = tmp_path / "pts.csv"
    np.savetxt(path, pts, delimiter=",")
    rc = main([
        "construct", "--dataset", f"csv:{path}", "--epsilon", "0.5",
        "--max-degree", "3", "--output-dir", str(tmp_path),
    ])
    assert rc == 0
    assert (tmp_path / "basis.json").exists()


def test_truncate_sweep_writes_csv(tmp_path):
    rc = main([
        "truncate-sweep", "--dataset", "D2plus", "--count", "50",
        "--noise", "0.05", "--epsilon", "0.8", "--max-degree", "4",
        "--thetas", "0.5,1.0", "--output-dir", str(tmp_path),
    ])
    assert rc == 0
    with open(tmp_path / "sweep.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["theta"]) for r in rows] == [0.5, 1.0]
    assert float(rows[0]["coeff_length"]) <= float(rows[1]["coeff_length"])


@pytest.fixture()
def labeled_csv(tmp_path):
    rng = np.random.default_rng(0)
    rows = []
    for label, radius in (("a", 1.0), ("b", 2.0)):
        ang = rng.uniform(0, 2 * np.pi, 30)
        pts = radius * np.column_stack([np.cos(ang), np.sin(ang)])
        pts += rng.normal(scale=0.02, size=pts.shape)
        rows.extend([f"{x},{y},{label}" for x, y in pts])
    path = tmp_path / "labeled.csv"
    path.write_text("x,y,label\n" + "\n".join(rows) + "\n")
    return path


def test_classify_writes_report(tmp_path, labeled_csv):
    rc = main([
        "classify", "--data", str(labeled_csv), "--epsilon", "0.3",
        "--max-degree", "4", "--output-dir", str(tmp_path),
    ])
    assert rc == 0
    with open(tmp_path / "classify.json", encoding="utf-8") as fh:
        report = json.load(fh)
    assert report["schema_version"] == 1
    assert report["test_error"] <= 0.1
    assert report["feature_length"] == sum(report["class_basis_sizes"])


def test_classify_rejects_single_class(tmp_path, capsys):
    path = tmp_path / "one.csv"
    path.write_text("x,y,label\n1,2,a\n3,4,a\n")
    rc = main(["classify", "--data", str(path), "--output-dir", str(tmp_path)])
    assert rc == 2


def test_seed_env_override(tmp_path, monkeypatch):
    def run(out):
        out.mkdir()
        main([
            "construct", "--dataset", "D1", "--count", "30", "--noise", "0.05",
            "--epsilon", "0.3", "--max-degree", "3", "--output-dir", str(out),
        ])
        with open(out / "basis.json", encoding="utf-8") as fh:
            return json.load(fh)["points"]

    base = run(tmp_path / "seed0")
    monkeypatch.setenv("VANISH_SEED", "5")
    other = run(tmp_path / "seed5")
    assert base != other
