import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Mapping, Set, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from errors import MatchingError
from graph.core import (
    Multigraph,
    NodeId,
    Subgraph,
    build_graph,
    induced_subgraph,
    pair_key,
    sort_key,
    sorted_ids,
)

log = logging.getLogger("candidates.matching")

Pair = Tuple[NodeId, NodeId]


@dataclass(frozen=True, eq=False)
class QueryGraph:
    """
    Connected pattern with one edge per adjacent pair.

    `min_multiplicity[pair]` is the fewest parallel edges a host pair needs
    to stand in for that pattern edge (1 means "1..*").
    """

    pattern: Multigraph
    min_multiplicity: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.pattern.number_of_nodes() < 1:
            raise MatchingError("query graph needs at least one node")
        if not nx.is_connected(self.pattern.graph):
            raise MatchingError("query graph must be connected")
        bounds: Dict[Pair, int] = {}
        for edge in self.pattern.edges:
            pair = edge.endpoints
            if pair in bounds:
                raise MatchingError(f"query graph has parallel edges on {pair}")
            bounds[pair] = int(self.min_multiplicity.get(pair, 1))
            if bounds[pair] < 1:
                raise MatchingError(f"minimum multiplicity on {pair} must be >= 1")
        object.__setattr__(self, "min_multiplicity", bounds)

    @classmethod
    def from_simple(cls, simple: nx.Graph, weight: str = "min_multiplicity") -> "QueryGraph":
        nodes = [(n, {}) for n in sorted_ids(simple.nodes)]
        pairs = sorted((pair_key(u, v) for u, v in simple.edges), key=_pair_sort_key)
        pattern = build_graph(nodes, [(u, v, {}) for u, v in pairs])
        bounds = {pair: int(simple[pair[0]][pair[1]].get(weight, 1)) for pair in pairs}
        return cls(pattern, bounds)

    @classmethod
    def from_subgraph(cls, s: Subgraph) -> "QueryGraph":
        """The subgraph's simple projection, bounded by its own multiplicities."""
        return cls.from_simple(s.simple_projection, weight="multiplicity")

    @cached_property
    def simple(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.pattern.nodes)
        for (u, v), bound in self.min_multiplicity.items():
            g.add_edge(u, v, min_multiplicity=bound)
        return nx.freeze(g)

    @property
    def node_count(self) -> int:
        return self.pattern.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.pattern.number_of_edges()

    # ------------------------------------------------------------------ #
    # Serialization: graph format plus "min_multiplicity" per edge
    # ------------------------------------------------------------------ #
    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": [{"id": n, "attrs": {}} for n in self.pattern.nodes],
            "edges": [
                {
                    "id": e.id,
                    "src": e.u,
                    "dst": e.v,
                    "attrs": {},
                    "min_multiplicity": self.min_multiplicity[e.endpoints],
                }
                for e in self.pattern.edges
            ],
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "QueryGraph":
        simple = nx.Graph()
        try:
            simple.add_nodes_from(n["id"] for n in doc["nodes"])
            for e in doc.get("edges", []):
                simple.add_edge(e["src"], e["dst"], min_multiplicity=int(e.get("min_multiplicity", 1)))
        except (KeyError, TypeError) as exc:
            raise MatchingError(f"malformed query document: missing {exc}") from None
        return cls.from_simple(simple)


def match_query(g: Multigraph, q: QueryGraph) -> List[Subgraph]:
    """
    Every node set of g hosting an occurrence of q.

    An occurrence maps query nodes injectively onto host nodes so that each
    query edge lands on a host pair with at least its minimum multiplicity
    (extra host edges are allowed). Occurrences are deduplicated by node set
    and returned as induced subgraphs in sorted order.
    """
    if q.node_count > g.number_of_nodes():
        return []

    matcher = isomorphism.GraphMatcher(
        g.simple_projection,
        q.simple,
        edge_match=lambda host, query: host["multiplicity"] >= query["min_multiplicity"],
    )
    found: Set[FrozenSet[NodeId]] = set()
    for mapping in matcher.subgraph_monomorphisms_iter():
        found.add(frozenset(mapping))

    ordered = sorted(found, key=lambda nodes: [sort_key(n) for n in sorted_ids(nodes)])
    log.info("Query (%d nodes) matched %d node sets", q.node_count, len(ordered))
    return [induced_subgraph(g, nodes) for nodes in ordered]


def _pair_sort_key(pair: Pair) -> Tuple[Any, Any]:
    return (sort_key(pair[0]), sort_key(pair[1]))
