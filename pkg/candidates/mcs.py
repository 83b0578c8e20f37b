import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set

import networkx as nx

from errors import MatchingError
from graph.core import NodeId, SgiSet, sorted_ids
from .matching import QueryGraph

log = logging.getLogger("candidates.mcs")

# Exact search is exponential; samples above this size are rejected.
MAX_SAMPLE_NODES = 12


def maximum_common_subgraph(samples: SgiSet) -> QueryGraph:
    """
    Fold the samples into one connected query, left to right.

    Each step keeps the largest connected node-induced structure shared by
    the accumulated query and the next sample; the query edge bound becomes
    the smaller of the two multiplicities. The fold is not associative, so
    sample order matters.
    """
    if len(samples) == 0:
        raise MatchingError("cannot build a query from an empty sample set")
    for sample in samples:
        if sample.node_count > MAX_SAMPLE_NODES:
            raise MatchingError(
                f"sample with {sample.node_count} nodes exceeds the exact MCS "
                f"bound of {MAX_SAMPLE_NODES}"
            )

    if len(samples) == 1:
        only = samples[0]
        if only.edge_count == 0 or not only.is_connected():
            raise MatchingError("samples share no structure")
        query = QueryGraph.from_subgraph(only)
    else:
        patterns = [_pattern(sample.simple_projection) for sample in samples]
        accumulated = patterns[0]
        for pattern in patterns[1:]:
            accumulated = common_subgraph(accumulated, pattern)
        query = QueryGraph.from_simple(accumulated)

    log.info(
        "MCS of %d samples: %d nodes, %d edges",
        len(samples),
        query.node_count,
        query.edge_count,
    )
    return query


def common_subgraph(left: nx.Graph, right: nx.Graph) -> nx.Graph:
    """
    Maximum common connected node-induced subgraph of two simple graphs.

    Both inputs carry a `min_multiplicity` edge attribute. The result uses
    left's node ids; each edge is bounded by the smaller multiplicity of the
    two images. Among solutions of equal size the one whose smallest left
    node (and then its image) sorts first wins. Raises MatchingError when no
    edge is shared.
    """
    mapping = _McSplit(left, right).run()

    result = nx.Graph()
    result.add_nodes_from(sorted_ids(mapping))
    for a in mapping:
        for b in mapping:
            if a == b or not left.has_edge(a, b):
                continue
            bound = min(
                left[a][b]["min_multiplicity"],
                right[mapping[a]][mapping[b]]["min_multiplicity"],
            )
            result.add_edge(a, b, min_multiplicity=bound)
    if result.number_of_edges() == 0:
        raise MatchingError("samples share no structure")
    return result


def _pattern(simple: nx.Graph) -> nx.Graph:
    pattern = nx.Graph()
    pattern.add_nodes_from(sorted_ids(simple.nodes))
    for u, v, data in simple.edges(data=True):
        pattern.add_edge(u, v, min_multiplicity=data.get("multiplicity", 1))
    return pattern


@dataclass
class _LabelClass:
    """Left and right vertices that share adjacency to every mapped pair."""

    left: List[int]
    right: List[int]
    adjacent: bool

    @property
    def bound(self) -> int:
        return min(len(self.left), len(self.right))


class _McSplit:
    """
    Branch and bound over label classes.

    Unmapped vertices are partitioned by their adjacency to the mapped
    vertices; a left vertex may only map into its own class, so the induced
    edges agree by construction, and the sum of per-class minima bounds what
    is still attainable. Only classes adjacent to the mapping are branched
    on, which keeps every partial solution connected. Roots are tried in
    ascending (left, right) order and only strict improvements replace the
    incumbent.
    """

    def __init__(self, left: nx.Graph, right: nx.Graph) -> None:
        self.left_ids = sorted_ids(left.nodes)
        self.right_ids = sorted_ids(right.nodes)
        self.adj_left = _adjacency(left, self.left_ids)
        self.adj_right = _adjacency(right, self.right_ids)
        self.best: Dict[int, int] = {}

    def run(self) -> Dict[NodeId, NodeId]:
        n, m = len(self.left_ids), len(self.right_ids)
        for root in range(n):
            if len(self.best) >= min(n - root, m):
                break
            for target in range(m):
                start = _LabelClass(
                    list(range(root + 1, n)),
                    [j for j in range(m) if j != target],
                    False,
                )
                self._search(self._refine([start], root, target), {root: target})
        return {self.left_ids[i]: self.right_ids[j] for i, j in self.best.items()}

    def _search(self, classes: List[_LabelClass], mapping: Dict[int, int]) -> None:
        if len(mapping) > len(self.best):
            self.best = dict(mapping)
        if len(mapping) + sum(c.bound for c in classes) <= len(self.best):
            return
        chosen = _select(classes)
        if chosen is None:
            return

        vertex = min(chosen.left)
        others = [c for c in classes if c is not chosen]
        remaining_left = [u for u in chosen.left if u != vertex]
        for target in chosen.right:
            rest = _LabelClass(remaining_left, [w for w in chosen.right if w != target], True)
            mapping[vertex] = target
            self._search(self._refine(others + [rest], vertex, target), mapping)
            del mapping[vertex]

        # vertex stays unmapped in this subtree
        if remaining_left:
            others = others + [_LabelClass(remaining_left, chosen.right, True)]
        self._search(others, mapping)

    def _refine(self, classes: Sequence[_LabelClass], vertex: int, target: int) -> List[_LabelClass]:
        near_left, near_right = self.adj_left[vertex], self.adj_right[target]
        refined: List[_LabelClass] = []
        for c in classes:
            far = _LabelClass([], [], c.adjacent)
            near = _LabelClass([], [], True)
            for u in c.left:
                (near if u in near_left else far).left.append(u)
            for w in c.right:
                (near if w in near_right else far).right.append(w)
            refined.extend(part for part in (far, near) if part.left and part.right)
        return refined


def _adjacency(graph: nx.Graph, ids: List[NodeId]) -> List[Set[int]]:
    index = {n: i for i, n in enumerate(ids)}
    return [{index[m] for m in graph.neighbors(n) if m != n} for n in ids]


def _select(classes: Sequence[_LabelClass]) -> Optional[_LabelClass]:
    adjacent = [c for c in classes if c.adjacent]
    if not adjacent:
        return None
    return min(adjacent, key=lambda c: (max(len(c.left), len(c.right)), min(c.left)))
