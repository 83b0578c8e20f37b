import bisect
import itertools
import logging
from collections import Counter, deque
from dataclasses import dataclass
from typing import Any, Deque, Dict, FrozenSet, List, Set, Tuple

import networkx as nx
import numpy as np

from errors import ConfigError
from graph.core import Multigraph, NodeId, Subgraph, induced_subgraph, sort_key, sorted_ids

log = logging.getLogger("candidates.label_propagation")


@dataclass(frozen=True)
class LpaParams:
    iterations: int = 20
    threshold: float = 0.3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ConfigError(f"LPA iterations must be >= 1, got {self.iterations}")
        if not 0.0 < self.threshold <= 1.0:
            raise ConfigError(f"LPA threshold must be in (0, 1], got {self.threshold}")


def overlapping_label_propagation(g: Multigraph, params: LpaParams) -> List[Subgraph]:
    """
    Speaker-listener label propagation with label memories.

    Every node starts with its own id in memory. Each round visits the nodes in
    a seeded random order; the listener hears one label per incident edge
    (so parallel edges speak more often), each drawn from the speaker's memory
    in proportion to label frequency, and stores the most frequent label heard.
    Afterwards a node joins every label holding at least `threshold` of its
    memory (or its most frequent label if none does).

    Communities are split into connected pieces. Pieces that are one
    community seen through two labels are merged (see `_merge_aliases`);
    singletons and duplicates are dropped.
    """
    rng = np.random.default_rng(params.seed)
    nodes = list(g.nodes)
    memory: Dict[NodeId, Counter] = {n: Counter({n: 1}) for n in nodes}
    speakers: Dict[NodeId, List[NodeId]] = {
        n: sorted_ids(e.other(n) for e in g.incident_edges(n) if e.u != e.v)
        for n in nodes
    }

    for _ in range(params.iterations):
        for index in rng.permutation(len(nodes)):
            listener = nodes[index]
            heard: Counter = Counter()
            for speaker in speakers[listener]:
                heard[_speak(memory[speaker], rng)] += 1
            if not heard:
                continue
            top = max(heard.values())
            winners = sorted_ids(label for label, count in heard.items() if count == top)
            chosen = winners[0] if len(winners) == 1 else winners[rng.integers(len(winners))]
            memory[listener][chosen] += 1

    communities: Dict[NodeId, Set[NodeId]] = {}
    for node in nodes:
        for label in _memberships(memory[node], params.threshold):
            communities.setdefault(label, set()).add(node)

    pieces: Set[FrozenSet[NodeId]] = set()
    for members in communities.values():
        pieces.update(frozenset(c) for c in nx.connected_components(g.graph.subgraph(members)))

    merged = _merge_aliases(g.simple_projection, sorted(pieces, key=_order))
    kept = sorted({p for p in merged if len(p) >= 2}, key=_order)
    log.info(
        "Label propagation found %d communities (%d rounds, r=%.2f)",
        len(kept),
        params.iterations,
        params.threshold,
    )
    return [induced_subgraph(g, p) for p in kept]


def _speak(memory: Counter, rng: np.random.Generator) -> NodeId:
    labels = sorted_ids(memory)
    cumulative = list(itertools.accumulate(memory[label] for label in labels))
    draw = rng.random() * cumulative[-1]
    return labels[bisect.bisect_right(cumulative, draw)]


def _memberships(memory: Counter, threshold: float) -> List[NodeId]:
    total = sum(memory.values())
    labels = [label for label, count in memory.items() if count / total >= threshold]
    if labels:
        return labels
    top = max(memory.values())
    return sorted_ids(label for label, count in memory.items() if count == top)[:1]


def _order(piece: FrozenSet[NodeId]) -> List[Tuple[int, Any]]:
    return [sort_key(n) for n in sorted_ids(piece)]


def _merge_aliases(simple: nx.Graph, pieces: List[FrozenSet[NodeId]]) -> List[FrozenSet[NodeId]]:
    """
    Merge pieces that belong to the same community until none qualify.

    A label that has not fully taken over its community after the last round
    leaves the community split across several labels. Two pieces are merged
    when they share at least half of the smaller one, or when at least half
    of the node pairs between their private parts are edges. Pieces joined
    by a few bridges, or overlapping on a few nodes, stay apart.
    """
    live: Dict[int, FrozenSet[NodeId]] = {}
    holders: Dict[NodeId, Set[int]] = {}
    queue: Deque[int] = deque()
    keys = itertools.count()

    def add(piece: FrozenSet[NodeId]) -> None:
        key = next(keys)
        live[key] = piece
        for n in piece:
            holders.setdefault(n, set()).add(key)
        queue.append(key)

    def drop(key: int) -> FrozenSet[NodeId]:
        piece = live.pop(key)
        for n in piece:
            holders[n].discard(key)
        return piece

    for piece in pieces:
        add(piece)
    while queue:
        key = queue.popleft()
        if key not in live:
            continue
        piece = live[key]
        reach = set(piece)
        for n in piece:
            reach.update(simple[n])
        partners = sorted({other for n in reach for other in holders.get(n, ()) if other != key})
        for other in partners:
            if _same_community(simple, piece, live[other]):
                add(drop(key) | drop(other))
                break
    return list(live.values())


def _same_community(simple: nx.Graph, a: FrozenSet[NodeId], b: FrozenSet[NodeId]) -> bool:
    shared = len(a & b)
    if 2 * shared >= min(len(a), len(b)):
        return True
    only_a, only_b = a - b, b - a
    links = sum(1 for u in only_a for v in simple[u] if v in only_b)
    return 2 * links >= len(only_a) * len(only_b)
