import csv
import io
import logging
import warnings
from typing import Callable, Dict, Iterable, List, Union

import networkx as nx
import numpy as np

from errors import FeatureError
from graph.core import Edge, EdgeId, Multigraph, NodeId, Subgraph, sort_key
from graph.io import write_text_atomic
from .schema import FeatureSchema, FeatureVector, Level

log = logging.getLogger("features.extractor")


def subgraph_features(g: Multigraph, s: Subgraph, schema: FeatureSchema) -> FeatureVector:
    """
    Structural metrics of s followed by mean-aggregated node attributes.

    Degrees count parallel edges inside s; clustering, transitivity and
    path lengths use the simple projection of s.
    """
    schema = _bind(schema, g, Level.SUBGRAPH)
    if s.parent is not g:
        s = s.rebind(g)

    metrics = _LazyMetrics(_subgraph_metric_groups(s))
    values = [metrics[name] for name in schema.metrics]

    if schema.attribute_keys:
        rows = [schema.encode_attributes(g.node_attrs(n)) for n in s.sorted_nodes()]
        if rows:
            values.extend(np.mean(np.asarray(rows, dtype=float), axis=0).tolist())
        else:
            values.extend([0.0] * (schema.dimension - len(schema.metrics)))

    return schema.apply(FeatureVector(tuple(values), schema.schema_id))


def node_features(g: Multigraph, v: NodeId, schema: FeatureSchema) -> FeatureVector:
    """Metrics of v in the context of the whole graph, then v's attributes."""
    schema = _bind(schema, g, Level.NODE)
    neighbors = g.neighbors(v)
    degree = g.degree(v)
    neighbor_degrees = [g.degree(n) for n in neighbors]

    def clustering() -> float:
        return float(nx.clustering(g.simple_projection, v))

    groups: Dict[str, Callable[[], float]] = {
        "degree": lambda: float(degree),
        "neighbor_count": lambda: float(len(neighbors)),
        "neighbor_degree_mean": lambda: _mean(neighbor_degrees),
        "neighbor_degree_max": lambda: float(max(neighbor_degrees, default=0)),
        "clustering": clustering,
        "edge_multiplicity_mean": lambda: degree / len(neighbors) if neighbors else 0.0,
    }
    values = [groups[name]() for name in schema.metrics]
    values.extend(schema.encode_attributes(g.node_attrs(v)))
    return schema.apply(FeatureVector(tuple(values), schema.schema_id))


def edge_features(
    g: Multigraph, e: Union[Edge, EdgeId], schema: FeatureSchema
) -> FeatureVector:
    """Endpoint-pair metrics of e in the whole graph, then e's attributes."""
    schema = _bind(schema, g, Level.EDGE)
    edge = g.edge(e.id if isinstance(e, Edge) else e)
    du, dv = g.degree(edge.u), g.degree(edge.v)

    def common_neighbors() -> float:
        if edge.u == edge.v:
            return 0.0
        return float(len(list(nx.common_neighbors(g.simple_projection, edge.u, edge.v))))

    groups: Dict[str, Callable[[], float]] = {
        "multiplicity": lambda: float(g.multiplicity(edge.u, edge.v)),
        "endpoint_degree_min": lambda: float(min(du, dv)),
        "endpoint_degree_max": lambda: float(max(du, dv)),
        "common_neighbors": common_neighbors,
    }
    values = [groups[name]() for name in schema.metrics]
    values.extend(schema.encode_attributes(edge.attrs))
    return schema.apply(FeatureVector(tuple(values), schema.schema_id))


# ---------------------------------------------------------------------- #
# Helpers
# ---------------------------------------------------------------------- #
def _bind(schema: FeatureSchema, g: Multigraph, level: Level) -> FeatureSchema:
    if schema.level is not level:
        raise FeatureError(
            f"schema level {schema.level.value!r} used for {level.value} features"
        )
    return schema.freeze(g)


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return float(np.mean(values)) if values else 0.0


def _stats(values: List[float]) -> Dict[str, float]:
    if not values:
        return {"min": 0.0, "max": 0.0, "mean": 0.0}
    return {"min": float(min(values)), "max": float(max(values)), "mean": _mean(values)}


class _LazyMetrics:
    """Evaluates each metric group once, on first access to one of its names."""

    def __init__(self, groups: Dict[str, Callable[[], Dict[str, float]]]) -> None:
        self._groups = groups
        self._values: Dict[str, float] = {}

    def __getitem__(self, name: str) -> float:
        if name not in self._values:
            group = name.split("_")[0] if name not in self._groups else name
            self._values.update(self._groups[group]())
        return self._values[name]


def _subgraph_metric_groups(s: Subgraph) -> Dict[str, Callable[[], Dict[str, float]]]:
    multi = s.graph
    simple = s.simple_projection

    def sizes() -> Dict[str, float]:
        return {"node_count": float(s.node_count), "edge_count": float(s.edge_count)}

    def degree() -> Dict[str, float]:
        stats = _stats([float(d) for _, d in multi.degree()])
        return {f"degree_{k}": v for k, v in stats.items()}

    def clustering() -> Dict[str, float]:
        stats = _stats([float(c) for c in nx.clustering(simple).values()])
        return {f"clustering_{k}": v for k, v in stats.items()}

    def path() -> Dict[str, float]:
        lengths: List[float] = []
        for source, targets in nx.all_pairs_shortest_path_length(simple):
            for target, hops in targets.items():
                if sort_key(target) > sort_key(source):
                    lengths.append(float(hops))
        stats = _stats(lengths)
        return {f"path_{k}": v for k, v in stats.items()}

    def transitivity() -> Dict[str, float]:
        return {"transitivity": float(nx.transitivity(simple))}

    def assortativity() -> Dict[str, float]:
        return {"assortativity": _degree_assortativity(multi)}

    return {
        "node_count": sizes,
        "edge_count": sizes,
        "degree": degree,
        "clustering": clustering,
        "path": path,
        "transitivity": transitivity,
        "assortativity": assortativity,
    }


def _degree_assortativity(multi: nx.MultiGraph) -> float:
    # Zero degree variance (regular graphs, single edges) is defined as 0.
    if multi.number_of_edges() == 0:
        return 0.0
    degrees = dict(multi.degree())
    if len(set(degrees[n] for n in multi.nodes if multi.degree(n) > 0)) < 2:
        return 0.0
    with warnings.catch_warnings(), np.errstate(divide="ignore", invalid="ignore"):
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            value = nx.degree_assortativity_coefficient(multi)
        except (ValueError, ZeroDivisionError, IndexError):
            log.debug("Assortativity undefined for %r", multi)
            return 0.0
    value = float(value)
    return value if np.isfinite(value) else 0.0


def write_vectors_csv(
    path, labels: List[str], vectors: List[FeatureVector], schema: FeatureSchema
) -> None:
    """One row per element: its label followed by the schema's columns."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["element"] + schema.column_names)
    for label, vector in zip(labels, vectors):
        writer.writerow([label] + [repr(x) for x in vector.values])
    write_text_atomic(path, buffer.getvalue())
    log.info("Wrote %d feature vectors to %s", len(vectors), path)
