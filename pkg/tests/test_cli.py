import json
import subprocess
import sys

import numpy as np
import pytest

from pamper.cli import main
from pamper.corpus import parse_database
from pamper.trees import load_model

DB_TEXT = "simp, [1,0]\nsimp, [1,1]\nauto, [0,1]\nauto, [0,0]\n"

WHICH_BLOCK = (
    "Promising methods for this proof goal are:\n"
    "  simp with expectation of 1.000\n"
    "  auto with expectation of 0.000\n"
)


@pytest.fixture
def db(tmp_path):
    path = tmp_path / "db.txt"
    path.write_text(DB_TEXT, encoding="utf-8")
    return str(path)


@pytest.fixture
def model(tmp_path, db, capsys):
    path = tmp_path / "model.txt"
    assert main(["train", db, str(path)]) == 0
    capsys.readouterr()
    return str(path)


def test_train_summary_and_model_file(tmp_path, db, capsys):
    out = tmp_path / "m.txt"
    assert main(["train", db, str(out)]) == 0
    printed = capsys.readouterr().out
    lines = printed.splitlines()
    assert lines[0] == f"model written to {out}"
    assert lines[1] == "methods: 2  points: 4  features: 2  depth limit: 5"
    assert lines[2] == "  auto: depth=1 splits=1 leaves=2"
    assert lines[3] == "  simp: depth=1 splits=1 leaves=2"
    text = out.read_text(encoding="utf-8")
    assert text.startswith("pamper-model v1 features=2 depth=5\n")
    loaded = load_model(str(out))
    assert set(loaded.trees) == {"auto", "simp"}


def test_train_max_depth_flag(tmp_path, db, capsys):
    out = tmp_path / "m.txt"
    assert main(["train", db, str(out), "--max-depth", "1"]) == 0
    assert "depth=1\n" in out.read_text(encoding="utf-8").splitlines()[0] + "\n"
    assert load_model(str(out)).max_depth == 1


def test_which_literal_golden(model, capsys):
    assert main(["which", model, "[1,0]"]) == 0
    assert capsys.readouterr().out == WHICH_BLOCK


def test_which_batch_file_and_k(tmp_path, model, capsys):
    vectors = tmp_path / "vectors.txt"
    vectors.write_text("# queries\n[1,0]\n\n[0,1]\n", encoding="utf-8")
    assert main(["which", model, str(vectors), "-k", "1"]) == 0
    out = capsys.readouterr().out
    assert out == (
        "Promising methods for this proof goal are:\n"
        "  simp with expectation of 1.000\n"
        "Promising methods for this proof goal are:\n"
        "  auto with expectation of 1.000\n"
    )


def test_which_json(model, capsys):
    assert main(["which", model, "[1,0]", "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["total_methods"] == 2
    assert record["ranked"][0] == {"method": "simp", "expectation": 1.0}
    assert record["ranked"][1] == {"method": "auto", "expectation": 0.0}


def test_which_width_mismatch_exits_2(model, capsys):
    assert main(["which", model, "[1,0,1]"]) == 2
    assert capsys.readouterr().err.startswith("pamper: ")


def test_rank_golden_and_json(model, capsys):
    assert main(["rank", model, "[1,0]", "simp"]) == 0
    assert capsys.readouterr().out == "simp 1 out of 2\n"
    assert main(["rank", model, "[1,0]", "auto", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {
        "method": "auto",
        "rank": 2,
        "total": 2,
    }


def test_unknown_method_exits_2(model, capsys):
    assert main(["rank", model, "[1,0]", "zap"]) == 2
    assert "unknown method: zap" in capsys.readouterr().err
    assert main(["why", model, "[1,0]", "zap"]) == 2
    assert "unknown method: zap" in capsys.readouterr().err


def test_why_with_and_without_catalog(tmp_path, model, capsys):
    assert main(["why", model, "[1,0]", "simp"]) == 0
    assert capsys.readouterr().out == "Because feature #0 holds.\n"
    catalog = tmp_path / "catalog.txt"
    catalog.write_text("0\tthe goal is an equation\n", encoding="utf-8")
    assert main(["why", model, "[1,0]", "simp", "--catalog", str(catalog)]) == 0
    assert capsys.readouterr().out == "Because the goal is an equation.\n"
    assert main(["why", model, "[0,1]", "simp", "--catalog", str(catalog)]) == 0
    assert capsys.readouterr().out == (
        "Because it is not true that the goal is an equation.\n"
    )


def test_why_json(model, capsys):
    assert main(["why", model, "[1,0]", "simp", "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["method"] == "simp"
    assert record["expectation"] == 1.0
    assert record["steps"] == [
        {"feature": 0, "value": True, "description": "feature #0 holds"}
    ]


def _evaluation_db(tmp_path, n=80):
    rng = np.random.default_rng(6)
    lines = []
    for _ in range(n):
        bits = rng.integers(0, 2, 3)
        name = "simp" if bits[0] else "auto"
        lines.append(f"{name}, [{bits[0]},{bits[1]},{bits[2]}]")
    path = tmp_path / "eval_db.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_evaluate_writes_reports(tmp_path, capsys):
    db_path = _evaluation_db(tmp_path)
    out_dir = tmp_path / "reports"
    code = main(
        ["evaluate", db_path, "--fraction", "0.3", "--seed", "1",
         "--top", "3", "--out-dir", str(out_dir)]
    )
    assert code == 0
    printed = capsys.readouterr().out
    for name in ("report.txt", "report.csv", "fig2.csv", "fig3.csv"):
        assert (out_dir / name).is_file()
    table = (out_dir / "report.txt").read_text(encoding="utf-8")
    assert printed == table + f"report files written to {out_dir}\n"
    assert table.splitlines()[0].startswith("proof method")
    assert "training points:" in table
    csv = (out_dir / "report.csv").read_text(encoding="utf-8")
    assert csv.splitlines()[0] == (
        "method,training,training_pct,evaluation,evaluation_pct,top1,top2,top3"
    )
    assert (out_dir / "fig2.csv").read_text(encoding="utf-8").splitlines()[0] == "rank,count"
    assert (out_dir / "fig3.csv").read_text(encoding="utf-8").splitlines()[0] == "k,ge25,ge50,ge75,ge90"


def test_evaluate_deterministic_reports(tmp_path, capsys):
    db_path = _evaluation_db(tmp_path)
    dirs = [tmp_path / "r1", tmp_path / "r2"]
    for d in dirs:
        assert main(["evaluate", db_path, "--seed", "4", "--out-dir", str(d)]) == 0
    capsys.readouterr()
    for name in ("report.txt", "report.csv", "fig2.csv", "fig3.csv"):
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


def test_evaluate_tiny_corpus(tmp_path, capsys):
    path = tmp_path / "tiny.txt"
    path.write_text("simp, [1]\nsimp, [0]\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    code = main(
        ["evaluate", str(path), "--fraction", "0.5", "--seed", "0",
         "--top", "1", "--out-dir", str(out_dir)]
    )
    assert code == 0
    table = (out_dir / "report.txt").read_text(encoding="utf-8")
    assert "training points: 1" in table
    assert "evaluation points: 1" in table
    capsys.readouterr()


def test_prune_lists_used_features(tmp_path, model, capsys):
    assert main(["prune", model]) == 0
    assert capsys.readouterr().out == "0\n"
    catalog = tmp_path / "catalog.txt"
    catalog.write_text("0\tthe goal is an equation\n", encoding="utf-8")
    assert main(["prune", model, "--catalog", str(catalog)]) == 0
    assert capsys.readouterr().out == "0\tthe goal is an equation\n"


def test_prune_leaf_only_model_prints_nothing(tmp_path, capsys):
    db_path = tmp_path / "one.txt"
    db_path.write_text("simp, [1,0]\nsimp, [0,1]\n", encoding="utf-8")
    model_path = tmp_path / "leafy.txt"
    assert main(["train", str(db_path), str(model_path)]) == 0
    capsys.readouterr()
    assert main(["prune", str(model_path)]) == 0
    assert capsys.readouterr().out == ""


GEN_CONFIG = """\
features = 3
rule 0.6 : 0=1 -> simp:1.0
fallback : auto:1.0
"""


def test_gen_stats_train_pipeline(tmp_path, capsys):
    cfg = tmp_path / "planted.txt"
    cfg.write_text(GEN_CONFIG, encoding="utf-8")
    db_path = tmp_path / "gen_db.txt"
    assert main(["gen", str(cfg), "200", "5", "-o", str(db_path)]) == 0
    assert capsys.readouterr().out == f"200 points written to {db_path}\n"

    assert main(["stats", str(db_path)]) == 0
    stats_out = capsys.readouterr().out.splitlines()
    assert stats_out[0].split() == ["method", "count", "percent"]
    assert stats_out[-1] == "total points: 200"
    counts = [int(line.split()[1]) for line in stats_out[1:-1]]
    percents = [float(line.split()[2]) for line in stats_out[1:-1]]
    assert sum(counts) == 200
    assert round(sum(percents), 6) == 100.0

    model_path = tmp_path / "gen_model.txt"
    assert main(["train", str(db_path), str(model_path)]) == 0
    capsys.readouterr()
    assert main(["which", str(model_path), "[1,0,0]", "-k", "1"]) == 0
    assert "simp" in capsys.readouterr().out


def test_gen_to_stdout(tmp_path, capsys):
    cfg = tmp_path / "planted.txt"
    cfg.write_text(GEN_CONFIG, encoding="utf-8")
    assert main(["gen", str(cfg), "5", "1"]) == 0
    corpus = parse_database(capsys.readouterr().out)
    assert len(corpus) == 5


def test_unreadable_paths_exit_2(tmp_path, capsys):
    assert main(["stats", str(tmp_path / "missing.txt")]) == 2
    assert capsys.readouterr().err.startswith("pamper: ")
    assert main(["inspect", str(tmp_path / "missing.txt")]) == 2
    capsys.readouterr()


def test_malformed_inputs_exit_2(tmp_path, model, capsys):
    bad_db = tmp_path / "bad.txt"
    bad_db.write_text("simp [1,0]\n", encoding="utf-8")
    assert main(["stats", str(bad_db)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["which", model, "[1,2]"]) == 2
    capsys.readouterr()


def test_inspect_summary(model, capsys):
    assert main(["inspect", model]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "methods: 2  features: 2  depth limit: 5"
    assert lines[1] == "  auto: depth=1 splits=1 leaves=2"


def test_module_entry_point(tmp_path, db, model):
    proc = subprocess.run(
        [sys.executable, "-m", "pamper.cli", "which", model, "[1,0]"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == WHICH_BLOCK
