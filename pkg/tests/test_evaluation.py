import json
import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from builders import group_nodes
from errors import EvaluationError
from evaluation.metrics import (
    MatchThresholds,
    Role,
    f_score,
    match_subgraphs,
    phi_extra,
    phi_missing,
    phi_size,
    precision,
    recall,
    relevant,
)
from evaluation.report import evaluate
from graph.core import SgiSet, Subgraph, induced_subgraph

UNIVERSE = range(10)


def oracle_match(pred, truth, t):
    n = len(truth)
    ratios = (
        (Fraction(len(pred - truth), n), t.gamma_extra),
        (Fraction(len(truth - pred), n), t.gamma_missing),
        (Fraction(abs(len(pred) - len(truth)), n), t.gamma_size),
    )
    return all(gamma == math.inf or ratio < Fraction(gamma) for ratio, gamma in ratios)


def oracle_scores(preds, truth, t):
    hits = sum(1 for p in preds if any(oracle_match(p, s, t) for s in truth))
    share = Fraction(hits, len(preds)) if preds else Fraction(0)
    found = sum(1 for s in truth if any(oracle_match(p, s, t) for p in preds))
    return share, Fraction(found, len(truth))


def random_node_set(rng):
    size = int(rng.integers(1, 7))
    return frozenset(int(x) for x in rng.choice(len(UNIVERSE), size=size, replace=False))


def random_pool(rng, allow_empty=True):
    low = 0 if allow_empty else 1
    return [random_node_set(rng) for _ in range(int(rng.integers(low, 6)))]


def random_thresholds(rng):
    return MatchThresholds(*(float(x) for x in rng.uniform(0.01, 1.5, size=3)))


# ---------------------------------------------------------------------- #
# Predicates
# ---------------------------------------------------------------------- #
def test_predicates_are_strict_and_normalized_by_truth():
    truth = set(range(10))
    pred = truth | {10, 11, 12}
    assert not phi_extra(pred, truth, 0.3)
    assert phi_extra(pred, truth, 0.31)
    assert phi_missing(pred, truth, 0.01)
    assert not phi_size(pred, truth, 0.3)
    assert phi_size(truth - {0, 1}, truth, 0.21)


def test_match_ignores_edges(reference_graph):
    induced = induced_subgraph(reference_graph, group_nodes("ABCD"))
    bare = Subgraph(reference_graph, induced.nodes, frozenset())
    assert match_subgraphs(bare, induced, MatchThresholds(0.01, 0.01, 0.01))


def test_empty_truth_subgraph_raises():
    with pytest.raises(EvaluationError):
        phi_size({1}, set(), 0.3)


def test_role_decides_which_side_normalizes():
    t = MatchThresholds(0.4, 0.4, 0.4)
    small, large = frozenset(range(4)), frozenset(range(6))
    assert relevant(small, [large], t, Role.PREDICTION)
    assert not relevant(small, [large], t, Role.TRUTH)
    assert relevant(small, [large], t, "candidate-is-prediction")


@pytest.mark.parametrize(
    "values",
    [(-0.1, 0.3, 0.3), (0.3, float("nan"), 0.3)],
)
def test_invalid_thresholds(values):
    with pytest.raises(EvaluationError):
        MatchThresholds(*values)


def test_infinite_thresholds_always_pass():
    t = MatchThresholds(math.inf, math.inf, math.inf)
    assert match_subgraphs({1, 2, 3}, {7}, t)


# ---------------------------------------------------------------------- #
# Scores against a brute-force evaluator
# ---------------------------------------------------------------------- #
def test_exhaustive_small_universe_matches_oracle():
    universe = range(4)
    subsets = [frozenset(c) for k in range(1, 5) for c in combinations(universe, k)]
    for t in (MatchThresholds(0.25, 0.5, 0.75), MatchThresholds(0.6, 0.6, 0.6)):
        for pred in subsets:
            for truth in subsets:
                expected_p, expected_r = oracle_scores([pred], [truth], t)
                assert precision([pred], [truth], t) == float(expected_p)
                assert recall([pred], [truth], t) == float(expected_r)


def test_random_cases_match_oracle():
    rng = np.random.default_rng(31)
    for _ in range(10_000):
        preds, truth = random_pool(rng), random_pool(rng, allow_empty=False)
        t = random_thresholds(rng)
        expected_p, expected_r = oracle_scores(preds, truth, t)
        assert precision(preds, truth, t) == float(expected_p)
        assert recall(preds, truth, t) == float(expected_r)


def test_scores_are_monotone_in_thresholds():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        preds, truth = random_pool(rng), random_pool(rng, allow_empty=False)
        low = rng.uniform(0.01, 1.0, size=3)
        high = low + rng.uniform(0.0, 0.5, size=3)
        t_low = MatchThresholds(*(float(x) for x in low))
        t_high = MatchThresholds(*(float(x) for x in high))
        assert precision(preds, truth, t_low) <= precision(preds, truth, t_high)
        assert recall(preds, truth, t_low) <= recall(preds, truth, t_high)


# ---------------------------------------------------------------------- #
# Identities and degenerate inputs
# ---------------------------------------------------------------------- #
def test_perfect_prediction_scores_one():
    rng = np.random.default_rng(4)
    for _ in range(200):
        truth = random_pool(rng, allow_empty=False)
        report = evaluate(truth, truth, random_thresholds(rng))
        assert (report.precision, report.recall, report.f_score) == (1.0, 1.0, 1.0)
        assert all(report.prediction_matches) and all(report.truth_matches)


def test_empty_predictions_score_zero_and_are_flagged():
    report = evaluate([], [frozenset({1, 2})], MatchThresholds())
    assert (report.precision, report.recall, report.f_score) == (0.0, 0.0, 0.0)
    assert report.empty_predictions and not report.empty_truth


def test_empty_truth():
    with pytest.raises(EvaluationError):
        recall([frozenset({1})], [], MatchThresholds())
    report = evaluate([frozenset({1})], [], MatchThresholds())
    assert report.empty_truth
    assert report.recall == 0.0 and report.precision == 0.0


def test_f_score():
    assert f_score(1.0, 0.5) == pytest.approx(2 / 3)
    assert f_score(1.0, 0.5, beta=2.0) == pytest.approx(5 * 0.5 / (4 + 0.5))
    assert f_score(0.0, 0.0) == 0.0
    with pytest.raises(EvaluationError):
        f_score(0.5, 0.5, beta=0.0)


# ---------------------------------------------------------------------- #
# Reports
# ---------------------------------------------------------------------- #
def test_report_with_subgraph_sets(tmp_path, reference_graph):
    truth = SgiSet(
        tuple(induced_subgraph(reference_graph, group_nodes(k)) for k in ("ABCD", "EFGHI", "JKLM"))
    )
    preds = SgiSet(
        (
            induced_subgraph(reference_graph, group_nodes("ABCD")),
            induced_subgraph(reference_graph, group_nodes("ABCD") + group_nodes("EFGHI")),
        )
    )
    report = evaluate(preds, truth, MatchThresholds())
    assert report.precision == 0.5
    assert report.recall == pytest.approx(1 / 3)
    assert report.prediction_matches == (True, False)

    path = tmp_path / "report.json"
    report.save(path)
    doc = json.loads(path.read_text())
    assert doc["precision"] == 0.5
    assert doc["thresholds"] == {"gamma_extra": 0.3, "gamma_missing": 0.3, "gamma_size": 0.3}

    text = report.to_text()
    assert "precision" in text and "0.5000" in text
