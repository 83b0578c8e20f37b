from itertools import combinations
from typing import Dict, List, Sequence, Tuple

import numpy as np

from graph.core import Multigraph, Subgraph, build_graph

# Reference transaction graph: three groups (ABCD, EFGHI, JKLM) embedded in
# background nodes. ABCD and EFGHI are joined by two parallel C-E edges.
LETTERS = {
    2: "A", 5: "B", 6: "C", 7: "D",
    8: "E", 9: "F", 10: "I", 11: "G", 12: "H",
    16: "J", 17: "K", 18: "L", 19: "M",
}
GROUPS = {
    "ABCD": (2, 5, 6, 7),
    "EFGHI": (8, 9, 10, 11, 12),
    "JKLM": (16, 17, 18, 19),
}
BLACK = (22, 25, 30, 31)
GROUP_EDGES: List[Tuple[int, int]] = [
    (2, 5), (5, 6), (5, 7), (6, 7), (6, 7),
    (8, 9), (8, 11), (8, 11), (9, 10), (9, 12), (10, 12),
    (16, 17), (16, 18), (17, 18), (18, 19),
]
C_E_EDGES: List[Tuple[int, int]] = [(6, 8), (6, 8)]
BACKGROUND_EDGES: List[Tuple[int, int]] = [
    (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
    (11, 13), (12, 14), (12, 14), (12, 14),
    (13, 14), (13, 15), (13, 16), (14, 15), (14, 16), (15, 16),
    (17, 23), (20, 23), (21, 23), (22, 23), (23, 24), (3, 28),
    (22, 31), (22, 25), (25, 31), (25, 27), (26, 27), (27, 28),
    (27, 29), (30, 31), (13, 23),
]


def node_id(i: int) -> str:
    return f"n{i}"


def group_nodes(name: str) -> List[str]:
    return [node_id(i) for i in GROUPS[name]]


def member_nodes() -> List[str]:
    return [node_id(i) for group in GROUPS.values() for i in group]


def build_reference_graph() -> Multigraph:
    members = {i for group in GROUPS.values() for i in group}
    nodes = []
    for i in range(1, 32):
        if i in members:
            shade = "green"
        else:
            shade = "black" if i in BLACK else "white"
        attrs: Dict[str, object] = {
            "kind": "member" if i in members else "background",
            "shade": shade,
        }
        if i in LETTERS:
            attrs["label"] = LETTERS[i]
        nodes.append((node_id(i), attrs))

    edges = []
    for u, v in GROUP_EDGES:
        edges.append((node_id(u), node_id(v), {"channel": "group"}))
    for u, v in C_E_EDGES + BACKGROUND_EDGES:
        edges.append((node_id(u), node_id(v), {"channel": "background"}))
    return build_graph(nodes, edges)


def graph_from_pairs(
    pairs: Sequence[Tuple[object, object]], nodes: Sequence[object] = ()
) -> Multigraph:
    """Attribute-free multigraph; every listed pair is one edge."""
    ids = list(dict.fromkeys(list(nodes) + [x for pair in pairs for x in pair]))
    return build_graph([(n, {}) for n in ids], [(u, v, {}) for u, v in pairs])


def disjoint_cliques(sizes: Sequence[int]) -> Multigraph:
    pairs = []
    offset = 0
    for size in sizes:
        pairs.extend(combinations(range(offset, offset + size), 2))
        offset += size
    return graph_from_pairs(pairs)


def random_multigraph(
    rng: np.random.Generator, max_nodes: int = 30, max_edges: int = 60
) -> Multigraph:
    n = int(rng.integers(1, max_nodes + 1))
    m = int(rng.integers(0, max_edges + 1)) if n > 1 else 0
    pairs = []
    for _ in range(m):
        u, v = rng.choice(n, size=2, replace=False)
        pairs.append((int(u), int(v)))
    return graph_from_pairs(pairs, nodes=range(n))


def whole(g: Multigraph) -> Subgraph:
    return Subgraph(g, g.nodes, g.edge_ids)
