import logging
from collections import Counter
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from errors import BenchmarkError
from graph.core import Multigraph, NodeId, SgiSet, Subgraph, build_graph
from graph.io import PathLike, save_graph, save_sgi_set


class Motif(str, Enum):
    HUB = "hub"
    CLIQUE = "clique"
    PATH = "path"


class ContextType(str, Enum):
    NONE = "none"
    A = "A"  # two 4-cliques hanging off the group
    B = "B"  # two triangles hanging off the group


class Separability(str, Enum):
    SEPARABLE = "separable"
    NOISY = "noisy"


@dataclass(frozen=True)
class BenchmarkConfig:
    background_nodes: int = 200
    background_density: float = 0.01
    groups: int = 5
    group_size_min: int = 4
    group_size_max: int = 8
    motif: Motif = Motif.HUB
    context: ContextType = ContextType.NONE
    overlap: float = 0.0
    multiplicity_min: int = 1
    multiplicity_max: int = 3
    attachment_edges: int = 0
    separability: Separability = Separability.SEPARABLE
    sigma: float = 0.0
    samples: int = 3
    seed: int = 0
    node_budget: Optional[int] = None
    goi_type: str = "sgi"

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "motif", Motif(self.motif))
            object.__setattr__(self, "context", ContextType(self.context))
            object.__setattr__(self, "separability", Separability(self.separability))
        except ValueError as exc:
            raise BenchmarkError(str(exc)) from None
        if self.group_size_min < 2:
            raise BenchmarkError("group_size_min must be >= 2")
        if self.group_size_max < self.group_size_min:
            raise BenchmarkError("group_size_max must be >= group_size_min")
        if not 0.0 <= self.overlap < 1.0:
            raise BenchmarkError("overlap must be in [0, 1)")
        if not 0.0 <= self.background_density <= 1.0:
            raise BenchmarkError("background_density must be in [0, 1]")
        if not 1 <= self.multiplicity_min <= self.multiplicity_max:
            raise BenchmarkError("need 1 <= multiplicity_min <= multiplicity_max")
        for name in ("background_nodes", "groups", "attachment_edges", "samples"):
            if getattr(self, name) < 0:
                raise BenchmarkError(f"{name} must be >= 0")
        if self.sigma < 0:
            raise BenchmarkError("sigma must be >= 0")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "BenchmarkConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise BenchmarkError(f"unknown benchmark config keys: {unknown}")
        return cls(**dict(doc))


@dataclass(frozen=True)
class Benchmark:
    graph: Multigraph
    truth: SgiSet
    samples: SgiSet
    config: BenchmarkConfig

    @property
    def overlap_fraction(self) -> float:
        """Share of group nodes that belong to two or more groups."""
        counts = Counter(n for member in self.truth for n in member.nodes)
        if not counts:
            return 0.0
        return sum(1 for c in counts.values() if c >= 2) / len(counts)

    def save(self, out_dir: PathLike) -> Dict[str, Path]:
        out = Path(out_dir)
        return {
            "graph": save_graph(self.graph, out / "graph.json"),
            "truth": save_sgi_set(self.truth, out / "truth.json"),
            "samples": save_sgi_set(self.samples, out / "samples.json"),
        }


class _Builder:
    """Accumulates node and edge records while planting structure."""

    def __init__(self, cfg: BenchmarkConfig, rng: np.random.Generator) -> None:
        self.cfg = cfg
        self.rng = rng
        self.nodes: List[Tuple[NodeId, Dict[str, Any]]] = []
        self.edges: List[Tuple[NodeId, NodeId, Dict[str, Any]]] = []

    def _profile(self, member: bool) -> Tuple[float, float]:
        base = (1.0, 0.0) if member else (0.0, 1.0)
        if self.cfg.separability is Separability.SEPARABLE:
            return base
        noise = self.rng.normal(0.0, self.cfg.sigma, size=2)
        return (base[0] + float(noise[0]), base[1] + float(noise[1]))

    def add_node(self, node: NodeId, kind: str) -> None:
        p0, p1 = self._profile(kind == "member")
        label = kind if self.cfg.separability is Separability.SEPARABLE else None
        self.nodes.append((node, {"kind": label, "p0": p0, "p1": p1}))

    def add_edge(self, u: NodeId, v: NodeId, channel: str) -> int:
        q0, q1 = self._profile(channel == "group")
        label = channel if self.cfg.separability is Separability.SEPARABLE else None
        self.edges.append((u, v, {"channel": label, "q0": q0, "q1": q1}))
        return len(self.edges) - 1

    def add_transactions(self, u: NodeId, v: NodeId, channel: str) -> List[int]:
        count = int(self.rng.integers(self.cfg.multiplicity_min, self.cfg.multiplicity_max + 1))
        return [self.add_edge(u, v, channel) for _ in range(count)]


def _motif_pairs(members: List[NodeId], motif: Motif) -> List[Tuple[NodeId, NodeId]]:
    if motif is Motif.HUB:
        return [(members[0], m) for m in members[1:]]
    if motif is Motif.PATH:
        return list(zip(members, members[1:]))
    return [(a, b) for i, a in enumerate(members) for b in members[i + 1:]]


def _plan_reuse(sizes: List[int], overlap: float) -> List[int]:
    """
    How many earlier group nodes each group reuses.

    Every reused node ends up in exactly two groups, so with S reused nodes
    and M memberships the overlap fraction is S / (M - S); S is rounded from
    the configured fraction. Reuse is spread evenly over groups
    after the first, never takes a group's last fresh node, and only draws
    on nodes that are still in a single group.
    """
    plan = [0] * len(sizes)
    if overlap <= 0 or not sizes:
        return plan
    memberships = sum(sizes)
    wanted = int(round(overlap * memberships / (1.0 + overlap)))
    remaining = wanted
    single = sizes[0]
    for index in range(1, len(sizes)):
        share = -(-remaining // (len(sizes) - index))
        plan[index] = min(share, sizes[index] - 1, single)
        remaining -= plan[index]
        single += sizes[index] - 2 * plan[index]
    if remaining:
        raise BenchmarkError(
            f"overlap {overlap} is not reachable with {len(sizes)} groups of sizes {sizes}"
        )
    return plan


def generate_benchmark(cfg: BenchmarkConfig) -> Benchmark:
    """
    Plant groups in a random background graph; fully determined by cfg.seed.

    Group edges use channel "group"; background, attachment and context
    edges do not. In separable mode members carry kind "member" and a profile
    orthogonal to every other node; in noisy mode the profiles get Gaussian
    noise and no kind label.
    """
    log = logging.getLogger("synthesis.generator")
    rng = np.random.default_rng(cfg.seed)
    builder = _Builder(cfg, rng)

    sizes = [
        int(rng.integers(cfg.group_size_min, cfg.group_size_max + 1))
        for _ in range(cfg.groups)
    ]
    context_per_group = {ContextType.NONE: 0, ContextType.A: 8, ContextType.B: 6}[cfg.context]
    planned = cfg.background_nodes + sum(sizes) + context_per_group * cfg.groups
    if cfg.node_budget is not None and planned > cfg.node_budget:
        raise BenchmarkError(
            f"configuration needs up to {planned} nodes, budget is {cfg.node_budget}"
        )

    background = [f"b{i:05d}" for i in range(cfg.background_nodes)]
    for node in background:
        builder.add_node(node, "background")

    # Background transactions: uniform random pairs at the stated density.
    n = len(background)
    target = int(round(cfg.background_density * n * (n - 1) / 2)) if n > 1 else 0
    for _ in range(target):
        u, v = rng.choice(n, size=2, replace=False)
        builder.add_edge(background[int(u)], background[int(v)], "background")

    planted: List[Tuple[List[NodeId], List[int]]] = []
    reuse = _plan_reuse(sizes, cfg.overlap)
    single: List[NodeId] = []  # group nodes in exactly one group so far
    for index, size in enumerate(sizes):
        shared: List[NodeId] = []
        if reuse[index]:
            picks = {int(i) for i in rng.choice(len(single), size=reuse[index], replace=False)}
            shared = [n for i, n in enumerate(single) if i in picks]
            single = [n for i, n in enumerate(single) if i not in picks]
        fresh = [f"g{index:03d}_{k:02d}" for k in range(size - len(shared))]
        for node in fresh:
            builder.add_node(node, "member")
        members = fresh + shared
        single.extend(fresh)

        edge_ids: List[int] = []
        for u, v in _motif_pairs(members, cfg.motif):
            edge_ids.extend(builder.add_transactions(u, v, "group"))
        planted.append((members, edge_ids))

        if context_per_group:
            _decorate(builder, index, members, cfg.context)
        if background:
            for _ in range(cfg.attachment_edges):
                member = members[int(rng.integers(len(members)))]
                anchor = background[int(rng.integers(len(background)))]
                builder.add_edge(member, anchor, "background")

    g = build_graph(builder.nodes, builder.edges)
    truth = SgiSet(
        tuple(Subgraph(g, members, edge_ids) for members, edge_ids in planted),
        cfg.goi_type,
    )
    n_samples = min(cfg.samples, len(truth))
    samples = (
        sample_training_set(truth, n_samples, cfg.seed)
        if n_samples
        else SgiSet((), cfg.goi_type)
    )
    log.info(
        "Generated benchmark: %d nodes, %d edges, %d groups, %d samples",
        g.number_of_nodes(),
        g.number_of_edges(),
        len(truth),
        len(samples),
    )
    return Benchmark(g, truth, samples, cfg)


def _decorate(builder: _Builder, index: int, members: List[NodeId], context: ContextType) -> None:
    ring = 4 if context is ContextType.A else 3
    anchors = [members[0], members[1]]
    for block, anchor in enumerate(anchors):
        ctx = [f"c{index:03d}_{block}{k}" for k in range(ring)]
        for node in ctx:
            builder.add_node(node, "context")
        for i, a in enumerate(ctx):
            for b in ctx[i + 1:]:
                builder.add_edge(a, b, "context")
        # First block hangs by one edge, the second by two.
        builder.add_edge(anchor, ctx[0], "context")
        if block == 1:
            builder.add_edge(anchor, ctx[1], "context")


def sample_training_set(truth: SgiSet, n: int, seed: int) -> SgiSet:
    """Uniform sample of n members without replacement, kept in truth order."""
    if not 1 <= n <= len(truth):
        raise BenchmarkError(f"sample size {n} outside [1, {len(truth)}]")
    rng = np.random.default_rng(seed)
    picks = sorted(int(i) for i in rng.choice(len(truth), size=n, replace=False))
    return SgiSet(tuple(truth[i] for i in picks), truth.goi_type)
