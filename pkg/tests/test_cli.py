import json
import logging
from pathlib import Path

import pytest

import main
from config import Approach, load_run_config
from controller import run_pipeline
from graph.io import load_graph, load_sgi_set

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def benchmark_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench")
    assert main.main(["generate", "--config", str(DATA / "bench.json"), "--out", str(out)]) == 0
    return out


def detect_args(bench: Path, out: Path, *extra: str):
    return [
        "detect",
        "--config", str(DATA / "run_second.json"),
        "--graph", str(bench / "graph.json"),
        "--samples", str(bench / "samples.json"),
        "--out", str(out),
        *extra,
    ]


def test_generate_writes_the_benchmark(benchmark_dir):
    g = load_graph(benchmark_dir / "graph.json")
    truth = load_sgi_set(benchmark_dir / "truth.json", g)
    samples = load_sgi_set(benchmark_dir / "samples.json", g)
    assert len(truth) == 20
    assert len(samples) == 3
    assert all(4 <= m.node_count <= 8 for m in truth)


def test_second_approach_is_perfect_on_separable_benchmark(benchmark_dir, tmp_path):
    pred = tmp_path / "pred.json"
    code = main.main(
        detect_args(benchmark_dir, pred, "--strategy", "majority", "--truth", str(benchmark_dir / "truth.json"))
    )
    assert code == 0
    report = json.loads((tmp_path / "pred.report.json").read_text())
    assert report["precision"] == 1.0
    assert report["recall"] == 1.0

    out = tmp_path / "eval.json"
    code = main.main(
        ["evaluate", "--pred", str(pred), "--truth", str(benchmark_dir / "truth.json"), "--out", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert (report["precision"], report["recall"], report["f_score"]) == (1.0, 1.0, 1.0)


def test_detection_is_byte_identical_across_runs(benchmark_dir, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main.main(detect_args(benchmark_dir, first, "--seed", "5")) == 0
    assert main.main(detect_args(benchmark_dir, second, "--seed", "5")) == 0
    assert first.read_bytes() == second.read_bytes()


def test_generation_is_byte_identical_across_runs(tmp_path):
    config = tmp_path / "small.json"
    config.write_text(json.dumps({"background_nodes": 50, "groups": 3, "seed": 2}))
    for name in ("x", "y"):
        assert main.main(["generate", "--config", str(config), "--out", str(tmp_path / name)]) == 0
    for file in ("graph.json", "truth.json", "samples.json"):
        assert (tmp_path / "x" / file).read_bytes() == (tmp_path / "y" / file).read_bytes()


def test_emit_bad_sets(benchmark_dir, tmp_path):
    pred = tmp_path / "pred.json"
    assert main.main(detect_args(benchmark_dir, pred, "--emit-bad-sets")) == 0
    bad = json.loads((tmp_path / "pred.bad_sets.json").read_text())
    assert bad["v_bad"] and all(str(n).startswith("b") for n in bad["v_bad"])


def test_empty_samples_exit_one(tmp_path, caplog):
    graph = DATA / "reference_graph.json"
    samples = tmp_path / "samples.json"
    samples.write_text(json.dumps({"type": "ring", "groups": []}))
    args = [
        "detect",
        "--graph", str(graph),
        "--samples", str(samples),
        "--out", str(tmp_path / "pred.json"),
    ]
    with caplog.at_level(logging.ERROR):
        assert main.main(args) == 1
    assert "samples nonempty required" in caplog.text


def test_missing_input_file_exit_one(tmp_path, caplog):
    args = [
        "detect",
        "--graph", str(tmp_path / "absent.json"),
        "--samples", str(tmp_path / "absent_samples.json"),
        "--out", str(tmp_path / "pred.json"),
    ]
    with caplog.at_level(logging.ERROR):
        assert main.main(args) == 1
    assert "absent.json" in caplog.text


def test_runtime_failure_exit_two(tmp_path):
    samples = tmp_path / "samples.json"
    samples.write_text(json.dumps({"type": "ring", "groups": [{"nodes": ["n1", "n20"], "edges": []}]}))
    args = [
        "detect",
        "--approach", "first",
        "--generator", "mcs-query",
        "--graph", str(DATA / "reference_graph.json"),
        "--samples", str(samples),
        "--out", str(tmp_path / "pred.json"),
    ]
    assert main.main(args) == 2


def test_evaluate_identical_files(capsys):
    truth = str(DATA / "reference_truth.json")
    assert main.main(["evaluate", "--pred", truth, "--truth", truth]) == 0
    out = capsys.readouterr().out
    assert "precision" in out and "1.0000" in out


def test_reference_run_config(tmp_path, monkeypatch):
    monkeypatch.chdir(DATA.parent)
    cfg = load_run_config(DATA / "reference_run.json", {"out": str(tmp_path / "pred.json")})
    assert cfg.approach is Approach.SECOND
    assert run_pipeline(cfg) == 0
    g = load_graph(DATA / "reference_graph.json")
    found = load_sgi_set(tmp_path / "pred.json", g)
    truth = load_sgi_set(DATA / "reference_truth.json", g)
    assert set(found.node_sets()) == set(truth.node_sets())
    report = json.loads((tmp_path / "pred.report.json").read_text())
    assert report["precision"] == 1.0 and report["recall"] == 1.0


def test_first_approach_with_mcs_query(tmp_path):
    pred = tmp_path / "pred.json"
    args = [
        "detect",
        "--approach", "first",
        "--generator", "mcs-query",
        "--graph", str(DATA / "reference_graph.json"),
        "--samples", str(DATA / "reference_samples.json"),
        "--out", str(pred),
    ]
    assert main.main(args) == 0
    doc = json.loads(pred.read_text())
    assert [sorted(group["nodes"]) for group in doc["groups"]] == [["n2", "n5", "n6", "n7"]]


def test_features_subcommand(tmp_path):
    out = tmp_path / "edges.csv"
    args = ["features", "--graph", str(DATA / "reference_graph.json"), "--level", "edge", "--out", str(out)]
    assert main.main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("element,multiplicity")
    assert len(lines) == 1 + 48


def test_subgraph_features_need_samples(tmp_path):
    args = [
        "features",
        "--graph", str(DATA / "reference_graph.json"),
        "--level", "subgraph",
        "--out", str(tmp_path / "s.csv"),
    ]
    assert main.main(args) == 1


def test_flags_override_config_values():
    cfg = load_run_config(
        DATA / "run_second.json",
        {"graph": "g.json", "samples": "s.json", "gamma_node": 0.4, "strategy": "edge"},
    )
    assert cfg.pruning.gamma_node == 0.4
    assert cfg.pruning.strategy.value == "edge"
    assert cfg.pruning.gamma_edge == 0.1
    assert cfg.selection is None


def test_seed_flag_reaches_label_propagation():
    cfg = load_run_config(
        DATA / "run_first.json", {"graph": "g.json", "samples": "s.json", "seed": 9}
    )
    assert cfg.selection.lpa.seed == 9


@pytest.mark.parametrize("seed", range(5))
def test_first_approach_recall_on_regenerated_benchmarks(tmp_path, seed):
    config = tmp_path / "bench.json"
    config.write_text(json.dumps({**json.loads((DATA / "bench.json").read_text()), "seed": seed}))
    bench = tmp_path / "bench"
    assert main.main(["generate", "--config", str(config), "--out", str(bench)]) == 0

    pred = tmp_path / "pred.json"
    args = [
        "detect",
        "--config", str(DATA / "run_first.json"),
        "--graph", str(bench / "graph.json"),
        "--samples", str(bench / "samples.json"),
        "--truth", str(bench / "truth.json"),
        "--out", str(pred),
    ]
    assert main.main(args) == 0
    report = json.loads((tmp_path / "pred.report.json").read_text())
    assert report["recall"] >= 0.9
    assert json.loads(pred.read_text())["groups"]
