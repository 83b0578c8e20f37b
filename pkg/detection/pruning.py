import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Tuple

from errors import ConfigError
from features.extractor import edge_features, node_features
from features.sample_index import SampleIndex
from features.schema import FeatureSchema, Level
from graph.core import (
    EdgeId,
    Multigraph,
    NodeId,
    SgiSet,
    connected_components,
    induced_subgraph,
    sorted_ids,
)
from .pool import parallel_map

# Nodes whose share of good incident edges reaches this value are spared.
SPARE_THRESHOLD = 0.5


class PruneStrategy(str, Enum):
    SIMPLE = "simple"
    NODE = "node"
    EDGE = "edge"
    MAJORITY = "majority"


@dataclass(frozen=True)
class BadSets:
    v_bad: FrozenSet[NodeId] = frozenset()
    e_bad: FrozenSet[EdgeId] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "v_bad", frozenset(self.v_bad))
        object.__setattr__(self, "e_bad", frozenset(self.e_bad))

    def to_dict(self) -> Dict[str, Any]:
        return {"v_bad": sorted_ids(self.v_bad), "e_bad": sorted_ids(self.e_bad)}


@dataclass(frozen=True)
class PruneConfig:
    node_schema: FeatureSchema = field(default_factory=lambda: FeatureSchema(Level.NODE))
    edge_schema: FeatureSchema = field(default_factory=lambda: FeatureSchema(Level.EDGE))
    gamma_node: float = 0.1
    gamma_edge: float = 0.1
    strategy: PruneStrategy = PruneStrategy.MAJORITY
    min_component_size: int = 2
    workers: int = 1

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "strategy", PruneStrategy(self.strategy))
        except ValueError:
            raise ConfigError(f"unknown pruning strategy {self.strategy!r}") from None
        if not (self.gamma_node > 0 and self.gamma_edge > 0):
            raise ConfigError("gamma_node and gamma_edge must be > 0")
        if self.min_component_size < 2:
            raise ConfigError("min_component_size must be >= 2")
        if self.node_schema.level is not Level.NODE or self.edge_schema.level is not Level.EDGE:
            raise ConfigError("pruning needs node-level and edge-level schemas")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "PruneConfig":
        return cls(
            node_schema=FeatureSchema.from_dict(doc.get("node_schema", {}), level=Level.NODE.value),
            edge_schema=FeatureSchema.from_dict(doc.get("edge_schema", {}), level=Level.EDGE.value),
            gamma_node=float(doc.get("gamma_node", 0.1)),
            gamma_edge=float(doc.get("gamma_edge", 0.1)),
            strategy=doc.get("strategy", PruneStrategy.MAJORITY.value),
            min_component_size=int(doc.get("min_component_size", 2)),
            workers=int(doc.get("workers", 1)),
        )


# ---------------------------------------------------------------------- #
# Bad sets
# ---------------------------------------------------------------------- #
def compute_bad_sets(g: Multigraph, samples: SgiSet, cfg: PruneConfig) -> BadSets:
    """
    Start from every node and edge; clear those within gamma of some sample
    element. Sample elements are characterized in the context of g.
    """
    log = logging.getLogger("detection.pruning")
    if len(samples) == 0:
        raise ConfigError("samples nonempty required")
    samples = samples.rebind(g)

    sample_nodes = sorted_ids({n for s in samples for n in s.nodes})
    sample_edges = sorted_ids({e for s in samples for e in s.edges})

    node_schema = cfg.node_schema.freeze(g)
    raw = [node_features(g, n, node_schema) for n in sample_nodes]
    node_schema = node_schema.fit_standardization(raw)
    node_index = SampleIndex([node_schema.apply(v) for v in raw])

    edge_schema = cfg.edge_schema.freeze(g)
    raw = [edge_features(g, e, edge_schema) for e in sample_edges]
    edge_schema = edge_schema.fit_standardization(raw)
    edge_index = SampleIndex([edge_schema.apply(v) for v in raw])

    node_ok = parallel_map(
        lambda n: node_index.within(node_features(g, n, node_schema), cfg.gamma_node),
        list(g.nodes),
        cfg.workers,
    )
    edge_ok = parallel_map(
        lambda e: edge_index.within(edge_features(g, e, edge_schema), cfg.gamma_edge),
        list(g.edge_ids),
        cfg.workers,
    )
    bad = BadSets(
        frozenset(n for n, ok in zip(g.nodes, node_ok) if not ok),
        frozenset(e for e, ok in zip(g.edge_ids, edge_ok) if not ok),
    )
    log.info(
        "Bad sets: %d/%d nodes, %d/%d edges",
        len(bad.v_bad),
        g.number_of_nodes(),
        len(bad.e_bad),
        g.number_of_edges(),
    )
    return bad


def edge_majority(g: Multigraph, v: NodeId, e_bad: Iterable[EdgeId]) -> float:
    """Share of v's incident edges (parallel copies counted) not in e_bad."""
    incident = g.incident_edges(v)
    if not incident:
        return 0.0
    e_bad = e_bad if isinstance(e_bad, (set, frozenset)) else set(e_bad)
    good = sum(1 for e in incident if e.id not in e_bad)
    return good / len(incident)


# ---------------------------------------------------------------------- #
# Pruning
# ---------------------------------------------------------------------- #
def prune(g: Multigraph, bad: BadSets, strategy: PruneStrategy) -> Multigraph:
    """Remove bad elements; edges losing an endpoint always go with it."""
    strategy = PruneStrategy(strategy)
    all_nodes = set(g.nodes)
    all_edges = set(g.edge_ids)

    if strategy is PruneStrategy.SIMPLE:
        nodes, edges = all_nodes - bad.v_bad, all_edges - bad.e_bad
    elif strategy is PruneStrategy.NODE:
        nodes, edges = all_nodes - bad.v_bad, all_edges
    elif strategy is PruneStrategy.EDGE:
        nodes, edges = all_nodes, all_edges - bad.e_bad
    else:
        spared = {
            v for v in bad.v_bad if edge_majority(g, v, bad.e_bad) >= SPARE_THRESHOLD
        }
        nodes, edges = all_nodes - (bad.v_bad - spared), all_edges - bad.e_bad

    return g.restrict(nodes, edges)


def run_second_approach(
    g: Multigraph, samples: SgiSet, cfg: PruneConfig
) -> Tuple[SgiSet, BadSets]:
    log = logging.getLogger("detection.pruning")
    started = time.perf_counter()

    bad = compute_bad_sets(g, samples, cfg)
    pruned = prune(g, bad, cfg.strategy)
    components = connected_components(pruned)
    kept = [c for c in components if c.node_count >= cfg.min_component_size]
    # Components come back with every original edge among their nodes.
    members = tuple(induced_subgraph(g, c.nodes) for c in kept)

    log.info(
        "Pruned (%s) to %d nodes, %d edges; %d of %d components kept in %.2fs",
        cfg.strategy.value,
        pruned.number_of_nodes(),
        pruned.number_of_edges(),
        len(kept),
        len(components),
        time.perf_counter() - started,
    )
    return SgiSet(members, samples.goi_type), bad


def second_approach(g: Multigraph, samples: SgiSet, cfg: PruneConfig) -> SgiSet:
    """Predict non-SGI elements, prune them, return the surviving components."""
    return run_second_approach(g, samples, cfg)[0]
