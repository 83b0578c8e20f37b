import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Optional, TypeVar

from candidates.generators import Generator, GeneratorKind, make_generator
from candidates.label_propagation import LpaParams
from errors import ConfigError
from features.distance import cosine_distance
from features.extractor import subgraph_features
from features.sample_index import SampleIndex
from features.schema import FeatureSchema, FeatureVector, Level
from graph.core import Multigraph, SgiSet
from .pool import parallel_map

T = TypeVar("T")


@dataclass(frozen=True)
class SelectionConfig:
    generator: GeneratorKind = GeneratorKind.LABEL_PROPAGATION
    lpa: LpaParams = field(default_factory=LpaParams)
    schema: FeatureSchema = field(default_factory=lambda: FeatureSchema(Level.SUBGRAPH))
    gamma: float = 0.05
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "generator", GeneratorKind.parse(self.generator))
        if not self.gamma > 0:
            raise ConfigError(f"selection gamma must be > 0, got {self.gamma}")
        if self.schema.level is not Level.SUBGRAPH:
            raise ConfigError("selection needs a subgraph-level feature schema")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any], seed: int = 0) -> "SelectionConfig":
        lpa = doc.get("lpa", {})
        return cls(
            generator=doc.get("generator", GeneratorKind.LABEL_PROPAGATION.value),
            lpa=LpaParams(
                iterations=int(lpa.get("iterations", 20)),
                threshold=float(lpa.get("threshold", 0.3)),
                seed=int(lpa.get("seed", seed)),
            ),
            schema=FeatureSchema.from_dict(doc.get("schema", {}), level=Level.SUBGRAPH.value),
            gamma=float(doc.get("gamma", 0.05)),
            workers=int(doc.get("workers", 1)),
        )


def check(
    candidate_features: FeatureVector,
    samples: Iterable[T],
    gamma: float,
    extractor: Callable[[T], FeatureVector],
) -> bool:
    """True iff some sample's features lie strictly closer than gamma."""
    for sample in samples:
        if cosine_distance(candidate_features, extractor(sample)) < gamma:
            return True
    return False


def first_approach(
    g: Multigraph,
    samples: SgiSet,
    cfg: SelectionConfig,
    generator: Optional[Generator] = None,
) -> SgiSet:
    """
    Keep every generated candidate whose feature vector is within gamma of
    at least one sample's vector.

    Sample vectors are computed once up front. Rediscovered samples are kept.
    """
    log = logging.getLogger("detection.selection")
    if len(samples) == 0:
        raise ConfigError("samples nonempty required")
    samples = samples.rebind(g)
    started = time.perf_counter()

    schema = cfg.schema.freeze(g)
    raw = [subgraph_features(g, s, schema) for s in samples]
    schema = schema.fit_standardization(raw)
    index = SampleIndex([schema.apply(v) for v in raw])

    generate = generator or make_generator(cfg.generator, samples, cfg.lpa)
    candidates = generate(g)
    log.info("Generator %s produced %d candidates", cfg.generator.value, len(candidates))

    def accepted(candidate) -> bool:
        return index.within(subgraph_features(g, candidate, schema), cfg.gamma)

    flags = parallel_map(accepted, candidates, cfg.workers)
    selected = tuple(c for c, ok in zip(candidates, flags) if ok)
    log.info(
        "Selected %d of %d candidates at gamma=%g in %.2fs",
        len(selected),
        len(candidates),
        cfg.gamma,
        time.perf_counter() - started,
    )
    return SgiSet(selected, samples.goi_type)
