from typing import List

import pytest

from builders import build_reference_graph, group_nodes, node_id
from graph.core import Multigraph, SgiSet, induced_subgraph


@pytest.fixture
def reference_graph() -> Multigraph:
    return build_reference_graph()


@pytest.fixture
def reference_samples(reference_graph: Multigraph) -> SgiSet:
    return SgiSet((induced_subgraph(reference_graph, group_nodes("ABCD")),), "ring")


@pytest.fixture
def c_e_edge_ids(reference_graph: Multigraph) -> List[int]:
    return [e.id for e in reference_graph.edges_between(node_id(6), node_id(8))]
