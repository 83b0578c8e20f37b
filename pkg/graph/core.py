import logging
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx

from errors import GraphError

NodeId = Union[int, str]
EdgeId = Union[int, str]
Scalar = Union[int, float, str, bool, None]

NodeRecord = Tuple[NodeId, Mapping[str, Scalar]]
EdgeRecord = Tuple[NodeId, NodeId, Mapping[str, Scalar]]


def sort_key(item: Any) -> Tuple[int, Any]:
    """Total order over mixed int/str ids: numbers first, then strings."""
    if isinstance(item, (int, float)) and not isinstance(item, bool):
        return (0, item)
    return (1, str(item))


def sorted_ids(items: Iterable[Any]) -> List[Any]:
    return sorted(items, key=sort_key)


def pair_key(u: NodeId, v: NodeId) -> Tuple[NodeId, NodeId]:
    """Canonical unordered endpoint pair."""
    return (u, v) if sort_key(u) <= sort_key(v) else (v, u)


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    u: NodeId
    v: NodeId
    # Source/target order is kept as given; topology ignores it.
    attrs: Mapping[str, Scalar] = field(default_factory=dict, compare=False)

    @property
    def endpoints(self) -> Tuple[NodeId, NodeId]:
        return pair_key(self.u, self.v)

    def other(self, node: NodeId) -> NodeId:
        return self.v if node == self.u else self.u


class Multigraph:
    """
    Immutable undirected multigraph with attributed nodes and parallel edges.

    Backed by a frozen networkx MultiGraph whose edge keys are the edge ids.
    Build instances with `build_graph`; derive new graphs with `restrict`.
    """

    def __init__(
        self,
        nodes: Mapping[NodeId, Mapping[str, Scalar]],
        edges: Sequence[Edge],
    ) -> None:
        g = nx.MultiGraph()
        for node_id in sorted_ids(nodes):
            g.add_node(node_id, **dict(nodes[node_id]))
        for edge in edges:
            g.add_edge(edge.u, edge.v, key=edge.id)
        self._g = nx.freeze(g)
        self._node_attrs: Dict[NodeId, Mapping[str, Scalar]] = {
            n: MappingProxyType(dict(nodes[n])) for n in nodes
        }
        self._edges: Dict[EdgeId, Edge] = {e.id: e for e in edges}
        self._nodes: Tuple[NodeId, ...] = tuple(sorted_ids(nodes))

    # ------------------------------------------------------------------ #
    # Element access
    # ------------------------------------------------------------------ #
    @property
    def nodes(self) -> Tuple[NodeId, ...]:
        return self._nodes

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self._edges.values())

    @property
    def edge_ids(self) -> Tuple[EdgeId, ...]:
        return tuple(self._edges)

    @property
    def graph(self) -> nx.MultiGraph:
        """Read-only networkx view; edge keys are edge ids."""
        return self._g

    def number_of_nodes(self) -> int:
        return len(self._nodes)

    def number_of_edges(self) -> int:
        return len(self._edges)

    def has_node(self, node: NodeId) -> bool:
        return node in self._node_attrs

    def has_edge(self, edge_id: EdgeId) -> bool:
        return edge_id in self._edges

    def node_attrs(self, node: NodeId) -> Mapping[str, Scalar]:
        self._require_node(node)
        return self._node_attrs[node]

    def edge(self, edge_id: EdgeId) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id!r}") from None

    @cached_property
    def node_attribute_keys(self) -> Tuple[str, ...]:
        keys = set()
        for attrs in self._node_attrs.values():
            keys.update(attrs)
        return tuple(sorted(keys))

    @cached_property
    def edge_attribute_keys(self) -> Tuple[str, ...]:
        keys = set()
        for edge in self._edges.values():
            keys.update(edge.attrs)
        return tuple(sorted(keys))

    # ------------------------------------------------------------------ #
    # Topology
    # ------------------------------------------------------------------ #
    def degree(self, node: NodeId) -> int:
        """Degree counting every parallel edge."""
        self._require_node(node)
        return int(self._g.degree(node))

    def neighbors(self, node: NodeId) -> List[NodeId]:
        self._require_node(node)
        return sorted_ids(n for n in self._g.neighbors(node) if n != node)

    def incident_edges(self, node: NodeId) -> List[Edge]:
        self._require_node(node)
        return [self._edges[key] for _, _, key in self._g.edges(node, keys=True)]

    def edges_between(self, u: NodeId, v: NodeId) -> List[Edge]:
        self._require_node(u)
        self._require_node(v)
        if not self._g.has_edge(u, v):
            return []
        return [self._edges[key] for key in self._g[u][v]]

    def multiplicity(self, u: NodeId, v: NodeId) -> int:
        return len(self.edges_between(u, v))

    @cached_property
    def simple_projection(self) -> nx.Graph:
        """Parallel edges collapsed; each edge carries a `multiplicity`."""
        return simple_projection(self._g)

    def restrict(
        self, nodes: Iterable[NodeId], edge_ids: Iterable[EdgeId]
    ) -> "Multigraph":
        """
        New graph keeping only the given nodes and edges.

        Edges with a dropped endpoint are dropped too.
        """
        keep_nodes = set(nodes)
        for node in keep_nodes:
            self._require_node(node)
        kept_edges = []
        wanted = set(edge_ids)
        for edge in self._edges.values():
            if edge.id not in wanted:
                continue
            if edge.u in keep_nodes and edge.v in keep_nodes:
                kept_edges.append(edge)
        return Multigraph({n: self._node_attrs[n] for n in keep_nodes}, kept_edges)

    def _require_node(self, node: NodeId) -> None:
        if node not in self._node_attrs:
            raise GraphError(f"unknown node id {node!r}")

    def __repr__(self) -> str:
        return (
            f"Multigraph(nodes={self.number_of_nodes()}, "
            f"edges={self.number_of_edges()})"
        )


def simple_projection(g: nx.MultiGraph) -> nx.Graph:
    simple = nx.Graph()
    simple.add_nodes_from(g.nodes)
    for u, v in g.edges():
        if simple.has_edge(u, v):
            simple[u][v]["multiplicity"] += 1
        else:
            simple.add_edge(u, v, multiplicity=1)
    return nx.freeze(simple)


@dataclass(frozen=True)
class Subgraph:
    """A node set plus an edge subset of a parent Multigraph."""

    parent: Multigraph = field(repr=False)
    nodes: FrozenSet[NodeId]
    edges: FrozenSet[EdgeId]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for node in self.nodes:
            if not self.parent.has_node(node):
                raise GraphError(f"subgraph node {node!r} not in parent graph")
        for edge_id in self.edges:
            edge = self.parent.edge(edge_id)
            if edge.u not in self.nodes or edge.v not in self.nodes:
                raise GraphError(
                    f"subgraph edge {edge_id!r} has an endpoint outside the node set"
                )

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_nodes(self) -> List[NodeId]:
        return sorted_ids(self.nodes)

    def sorted_edges(self) -> List[EdgeId]:
        return sorted_ids(self.edges)

    @cached_property
    def graph(self) -> nx.MultiGraph:
        """The subgraph as its own frozen networkx MultiGraph."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.sorted_nodes())
        for edge_id in self.sorted_edges():
            edge = self.parent.edge(edge_id)
            g.add_edge(edge.u, edge.v, key=edge_id)
        return nx.freeze(g)

    @cached_property
    def simple_projection(self) -> nx.Graph:
        return simple_projection(self.graph)

    def degree(self, node: NodeId) -> int:
        return int(self.graph.degree(node))

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        return nx.is_connected(self.graph)

    def rebind(self, g: Multigraph) -> "Subgraph":
        """Same node/edge ids on another graph; fails if g lacks any of them."""
        if g is self.parent:
            return self
        for edge_id in self.edges:
            if not g.has_edge(edge_id):
                raise GraphError(f"edge {edge_id!r} is not part of the graph")
        return Subgraph(g, self.nodes, self.edges)


@dataclass(frozen=True)
class SgiSet:
    """Possibly overlapping subgraphs of one GoI type."""

    members: Tuple[Subgraph, ...] = ()
    goi_type: str = "sgi"

    def __post_init__(self) -> None:
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if members:
            parent = members[0].parent
            if any(m.parent is not parent for m in members):
                raise GraphError("SgiSet members must share one parent graph")

    @property
    def parent(self) -> Optional[Multigraph]:
        return self.members[0].parent if self.members else None

    def node_sets(self) -> List[FrozenSet[NodeId]]:
        return [m.nodes for m in self.members]

    def rebind(self, g: Multigraph) -> "SgiSet":
        return SgiSet(tuple(m.rebind(g) for m in self.members), self.goi_type)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subgraph]:
        return iter(self.members)

    def __getitem__(self, index: int) -> Subgraph:
        return self.members[index]


# ---------------------------------------------------------------------- #
# Operations
# ---------------------------------------------------------------------- #
def build_graph(
    node_records: Sequence[NodeRecord],
    edge_records: Sequence[EdgeRecord],
    edge_ids: Optional[Sequence[EdgeId]] = None,
) -> Multigraph:
    """
    Build a Multigraph from node and edge records.

    Edge ids default to the record position. Attribute keys missing on some
    node (or edge) are filled with None so every element carries the same keys.
    """
    log = logging.getLogger("graph.core")

    nodes: Dict[NodeId, Dict[str, Scalar]] = {}
    for node_id, attrs in node_records:
        if node_id in nodes:
            raise GraphError(f"duplicate node id {node_id!r}")
        nodes[node_id] = dict(attrs or {})

    if edge_ids is not None and len(edge_ids) != len(edge_records):
        raise GraphError("edge_ids must match edge_records in length")

    node_keys = set()
    for attrs in nodes.values():
        node_keys.update(attrs)
    for attrs in nodes.values():
        for key in node_keys:
            attrs.setdefault(key, None)

    edge_keys = set()
    for _, _, attrs in edge_records:
        edge_keys.update(attrs or {})

    edges: List[Edge] = []
    seen_ids = set()
    for index, (u, v, attrs) in enumerate(edge_records):
        for endpoint in (u, v):
            if endpoint not in nodes:
                raise GraphError(
                    f"edge record {index} ({u!r}, {v!r}) references "
                    f"unknown node {endpoint!r}"
                )
        edge_id = edge_ids[index] if edge_ids is not None else index
        if edge_id in seen_ids:
            raise GraphError(f"duplicate edge id {edge_id!r}")
        seen_ids.add(edge_id)
        full_attrs = {key: None for key in edge_keys}
        full_attrs.update(attrs or {})
        edges.append(Edge(edge_id, u, v, MappingProxyType(full_attrs)))

    g = Multigraph(nodes, edges)
    log.debug("Built %r", g)
    return g


def induced_subgraph(g: Multigraph, nodes: Iterable[NodeId]) -> Subgraph:
    """All edges of g (every parallel copy) with both endpoints in nodes."""
    node_set = frozenset(nodes)
    for node in node_set:
        if not g.has_node(node):
            raise GraphError(f"unknown node id {node!r}")
    edge_ids = frozenset(
        key for _, _, key in g.graph.subgraph(node_set).edges(keys=True)
    )
    return Subgraph(g, node_set, edge_ids)


def connected_components(g: Multigraph) -> List[Subgraph]:
    """Node-induced components ordered by their smallest node id."""
    components = [
        sorted_ids(component) for component in nx.connected_components(g.graph)
    ]
    components.sort(key=lambda nodes: sort_key(nodes[0]))
    return [induced_subgraph(g, nodes) for nodes in components]
