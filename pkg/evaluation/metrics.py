import math
from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Any, Mapping, Sequence, Union

from errors import EvaluationError
from graph.core import NodeId, SgiSet, Subgraph

NodeSetLike = Union[Subgraph, AbstractSet[NodeId]]
Pool = Union[SgiSet, Sequence[NodeSetLike]]


class Role(str, Enum):
    PREDICTION = "candidate-is-prediction"
    TRUTH = "candidate-is-truth"


@dataclass(frozen=True)
class MatchThresholds:
    gamma_extra: float = 0.3
    gamma_missing: float = 0.3
    gamma_size: float = 0.3

    def __post_init__(self) -> None:
        for name in ("gamma_extra", "gamma_missing", "gamma_size"):
            value = getattr(self, name)
            # +inf is accepted as "always passes".
            if math.isnan(value) or value < 0:
                raise EvaluationError(f"{name} must be >= 0, got {value}")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "MatchThresholds":
        return cls(
            gamma_extra=float(doc.get("gamma_extra", 0.3)),
            gamma_missing=float(doc.get("gamma_missing", 0.3)),
            gamma_size=float(doc.get("gamma_size", 0.3)),
        )


def _nodes(s: NodeSetLike) -> AbstractSet[NodeId]:
    return s.nodes if isinstance(s, Subgraph) else s


# ---------------------------------------------------------------------- #
# Predicates (all ratios are normalized by the truth side)
# ---------------------------------------------------------------------- #
def phi_extra(pred: NodeSetLike, truth: NodeSetLike, gamma: float) -> bool:
    p, t = _nodes(pred), _nodes(truth)
    return len(p - t) / _size(t) < gamma


def phi_missing(pred: NodeSetLike, truth: NodeSetLike, gamma: float) -> bool:
    p, t = _nodes(pred), _nodes(truth)
    return len(t - p) / _size(t) < gamma


def phi_size(pred: NodeSetLike, truth: NodeSetLike, gamma: float) -> bool:
    p, t = _nodes(pred), _nodes(truth)
    return abs(len(p) - len(t)) / _size(t) < gamma


def match_subgraphs(pred: NodeSetLike, truth: NodeSetLike, t: MatchThresholds) -> bool:
    """Node-set match; edges are not compared."""
    return (
        phi_extra(pred, truth, t.gamma_extra)
        and phi_missing(pred, truth, t.gamma_missing)
        and phi_size(pred, truth, t.gamma_size)
    )


def relevant(
    candidate: NodeSetLike,
    pool: Pool,
    t: MatchThresholds,
    role: Role = Role.PREDICTION,
) -> bool:
    """
    True iff the candidate matches at least one pool member.

    `role` says which side is ground truth so the match is always normalized
    by the truth subgraph.
    """
    role = Role(role)
    for member in pool:
        if role is Role.PREDICTION:
            hit = match_subgraphs(candidate, member, t)
        else:
            hit = match_subgraphs(member, candidate, t)
        if hit:
            return True
    return False


def precision(preds: Pool, truth: Pool, t: MatchThresholds) -> float:
    """Share of predictions matching some truth member; 0 when there are none."""
    if len(preds) == 0:
        return 0.0
    hits = sum(1 for p in preds if relevant(p, truth, t, Role.PREDICTION))
    return hits / len(preds)


def recall(preds: Pool, truth: Pool, t: MatchThresholds) -> float:
    if len(truth) == 0:
        raise EvaluationError("recall is undefined for an empty truth set")
    hits = sum(1 for s in truth if relevant(s, preds, t, Role.TRUTH))
    return hits / len(truth)


def f_score(precision: float, recall: float, beta: float = 1.0) -> float:
    if beta <= 0:
        raise EvaluationError(f"beta must be > 0, got {beta}")
    if precision == 0 and recall == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * precision * recall / (b2 * precision + recall)


def _size(truth: AbstractSet[NodeId]) -> int:
    if not truth:
        raise EvaluationError("cannot match against an empty truth subgraph")
    return len(truth)
