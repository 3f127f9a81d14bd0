import csv
import json

import pytest

from botbench.cli import main
from botbench.ingest import Label, parse_account_file, split_by_label, write_account_file
from botbench.synthetic import make_population

from .conftest import account, dataset


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    pop = make_population(15, 15, seed=3, min_len=100, max_len=160, separation=2.0)
    write_account_file(pop, d / "mixed.jsonl")
    bots, humans = split_by_label(pop)
    write_account_file(bots, d / "bots.jsonl")
    write_account_file(humans, d / "humans.jsonl")
    (d / "clients.txt").write_text("Twitter for iPhone\nTwitter Web App\n")
    cfg = {
        "training_sets": [{"name": "syn", "bots": "bots.jsonl", "humans": "humans.jsonl"}],
        "k": 3,
        "min_posts": 100,
        "window": 100,
        "hyperparameters": {"random_forest": {"n_trees": 20}, "mlp": {"epochs": 100}},
    }
    (d / "config.json").write_text(json.dumps(cfg))
    return d


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_ingest_table(data_dir, capsys):
    assert main(["ingest", str(data_dir / "mixed.jsonl")]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["dataset", "class", ">=0", ">=100", ">=200", ">=300", ">=400"]
    assert rows[1][:4] == ["mixed", "bot", "15", "15"]
    assert rows[2][:4] == ["mixed", "human", "15", "15"]
    assert rows[1][4:] == ["0", "0", "0"]


def test_ingest_markdown(data_dir, capsys):
    assert main(["ingest", str(data_dir / "mixed.jsonl"), "--format", "md"]) == 0
    assert "| dataset | class |" in capsys.readouterr().out


def test_ingest_strict(tmp_path, capsys):
    p = tmp_path / "bad.jsonl"
    write_account_file(dataset([account(1, cap=0.1)]), p)
    with open(p, "a") as fh:
        fh.write("{not json\n")
    assert main(["ingest", str(p)]) == 0
    assert "warning" in capsys.readouterr().err
    assert main(["ingest", "--strict", str(p)]) == 1
    assert "bad.jsonl:2:" in capsys.readouterr().err


def test_ingest_missing_file(tmp_path):
    assert main(["ingest", str(tmp_path / "nope.jsonl")]) == 1


def test_ingest_empty(tmp_path, capsys):
    p = tmp_path / "empty.jsonl"
    p.write_text("")
    assert main(["ingest", str(p)]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[1][2:] == ["0"] * 5


def test_evaluate_shape_and_determinism(data_dir, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["evaluate", "--config", str(data_dir / "config.json"), "--out", str(out), "--format", "md"]) == 0
    rows = read_csv(out1 / "metrics.csv")
    assert rows[0] == [
        "training_set", "feature_set", "algorithm", "bal_accuracy", "precision", "recall", "mcc", "pr_auc", "roc_auc"
    ]
    assert len(rows) == 21
    assert {r[1] for r in rows[1:]} == {"cap_uni_star", "class_a", "class_b", "client"}
    assert {r[2] for r in rows[1:]} == {"mlp", "ripper", "naive_bayes", "random_forest", "knn"}
    for r in rows[1:]:
        for v in r[3:]:
            assert len(v.split(".")[1]) == 3
    raw = read_csv(out1 / "metrics_raw.csv")
    for r, q in zip(rows[1:], raw[1:]):
        assert abs(float(r[8]) - float(q[8])) <= 0.0005
    for name in ("metrics.csv", "metrics_raw.csv", "curves.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    manifest = json.loads((out1 / "manifest.json").read_text())
    assert manifest["status"] == "ok" and manifest["seed"] == 0
    assert {"metrics.csv", "curves.csv", "metrics.md"} <= set(manifest["files"])
    curves = read_csv(out1 / "curves.csv")
    assert curves[0] == ["training_set", "feature_set", "algorithm", "kind", "x", "y"]
    assert {r[3] for r in curves[1:]} == {"ROC", "PR"}


def test_evaluate_seed_changes_output(data_dir, tmp_path):
    base = ["evaluate", "--config", str(data_dir / "config.json")]
    assert main(base + ["--out", str(tmp_path / "a"), "--seed", "1"]) == 0
    assert main(base + ["--out", str(tmp_path / "b"), "--seed", "2"]) == 0
    assert (tmp_path / "a" / "curves.csv").read_bytes() != (tmp_path / "b" / "curves.csv").read_bytes()


def test_unknown_algorithm_fails_before_work(data_dir, tmp_path, capsys):
    cfg = json.loads((data_dir / "config.json").read_text())
    cfg["algorithms"] = ["knn", "svm"]
    cfg["training_sets"][0] = {"name": "syn", "bots": str(data_dir / "bots.jsonl"), "humans": str(data_dir / "humans.jsonl")}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert main(["evaluate", "--config", str(p), "--out", str(tmp_path / "o")]) == 1
    assert "svm" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_invalid_config(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"k": 1}))
    assert main(["evaluate", "--config", str(p)]) == 1
    p.write_text("{")
    assert main(["evaluate", "--config", str(p)]) == 1


def test_missing_training_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"training_sets": [{"name": "x", "data": "missing.jsonl"}]}))
    assert main(["evaluate", "--config", str(p)]) == 1


def test_runtime_error_exit_2(data_dir, tmp_path):
    # k larger than either class
    assert main(["evaluate", str(data_dir / "mixed.jsonl"), "--k", "40", "--min-posts", "100",
                 "--out", str(tmp_path / "o")]) == 2
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert manifest["status"] == "failed"


def test_clients_flag(data_dir, tmp_path):
    assert main(["evaluate", str(data_dir / "mixed.jsonl"), "--min-posts", "100", "--k", "3",
                 "--clients", str(data_dir / "clients.txt"), "--out", str(tmp_path / "o"),
                 "--config", str(data_dir / "config.json")]) == 0
    assert main(["evaluate", "--config", str(data_dir / "config.json"), "--clients", str(tmp_path / "none.txt")]) == 1


def test_threshold(data_dir, tmp_path, capsys):
    assert main(["threshold", "--config", str(data_dir / "config.json"), "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "threshold.csv")
    assert rows[0][:3] == ["training_set", "method", "threshold"]
    assert rows[1][1] == "threshold_rule"
    assert len(rows) == 3


def test_rank(tmp_path, capsys):
    bots = [account(i, Label.BOT, n_tweets=1, cap=0.9, listed_count=2) for i in range(12)]
    humans = [account(100 + i, Label.HUMAN, n_tweets=1, cap=0.9) for i in range(12)]
    p = tmp_path / "d.jsonl"
    write_account_file(dataset(bots + humans), p)
    assert main(["rank", str(p), "--min-posts", "0", "--out", str(tmp_path / "o"), "--top", "3"]) == 0
    rows = read_csv(tmp_path / "o" / "rank.csv")
    assert rows[1][2] == "belongs_to_list" and rows[1][4] == "1.000"
    assert float(rows[1][3]) == 1.0
    out = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert len(out) == 4


def test_sensitivity(data_dir, tmp_path):
    assert main(["sensitivity", "--config", str(data_dir / "config.json"), "--out", str(tmp_path),
                 "--thresholds", "50", "100"]) == 0
    rows = read_csv(tmp_path / "sensitivity.csv")
    assert len(rows) == 1 + 2 * 4 * 5
    assert {r[3] for r in rows[1:]} == {"50", "100"}


def test_subsample(tmp_path, capsys):
    bots = [account(i, Label.BOT) for i in range(217)]
    humans = [account(10_000 + i, Label.HUMAN) for i in range(1919)]
    src = tmp_path / "vv.jsonl"
    write_account_file(dataset(bots + humans), src)
    target = tmp_path / "vv_sub.jsonl"
    assert main(["subsample", str(src), "--ratio", "1.5", "--output", str(target)]) == 0
    sub = parse_account_file(target)
    assert (sub.bot_count, sub.human_count) == (217, 325)
    assert main(["subsample", str(src), "--ratio", "0.5", "--output", str(target)]) == 1
