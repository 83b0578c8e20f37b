"""
Multigraph data model shared by every other subsystem.

- `core.py`: Multigraph, Subgraph, SgiSet and the topology operations
- `io.py`: the JSON graph and SgiSet file formats
"""

from .core import (
    Edge,
    Multigraph,
    SgiSet,
    Subgraph,
    build_graph,
    connected_components,
    induced_subgraph,
    pair_key,
    sort_key,
    sorted_ids,
)

__all__ = [
    "Edge",
    "Multigraph",
    "SgiSet",
    "Subgraph",
    "build_graph",
    "connected_components",
    "induced_subgraph",
    "pair_key",
    "sort_key",
    "sorted_ids",
]
