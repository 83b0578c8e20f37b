import logging
from enum import Enum
from typing import Callable, List

from graph.core import Multigraph, SgiSet, Subgraph
from .label_propagation import LpaParams, overlapping_label_propagation
from .matching import match_query
from .mcs import maximum_common_subgraph

Generator = Callable[[Multigraph], List[Subgraph]]


class GeneratorKind(str, Enum):
    LABEL_PROPAGATION = "label_propagation"
    MCS_QUERY = "mcs_query"

    @classmethod
    def parse(cls, value: str) -> "GeneratorKind":
        aliases = {"lpa": cls.LABEL_PROPAGATION, "mcs-query": cls.MCS_QUERY}
        if value in aliases:
            return aliases[value]
        return cls(value)


def make_generator(kind: GeneratorKind, samples: SgiSet, lpa: LpaParams) -> Generator:
    """The SUBGRAPHS step: a callable producing candidate clusters of g."""
    log = logging.getLogger("candidates.generators")

    if kind is GeneratorKind.LABEL_PROPAGATION:
        return lambda g: overlapping_label_propagation(g, lpa)

    # Larger samples first keeps the fold stable under input reordering.
    ordered = sorted(samples, key=lambda s: (-s.node_count, -s.edge_count))

    def mcs_query(g: Multigraph) -> List[Subgraph]:
        query = maximum_common_subgraph(SgiSet(tuple(ordered), samples.goi_type))
        log.info("Matching MCS query with %d nodes", query.node_count)
        return match_query(g, query)

    return mcs_query
