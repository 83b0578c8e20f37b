import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from errors import FeatureError
from graph.core import Multigraph, Scalar

log = logging.getLogger("features.schema")


class Level(str, Enum):
    SUBGRAPH = "subgraph"
    NODE = "node"
    EDGE = "edge"


SUBGRAPH_METRICS: Tuple[str, ...] = (
    "node_count",
    "edge_count",
    "degree_min",
    "degree_max",
    "degree_mean",
    "clustering_min",
    "clustering_max",
    "clustering_mean",
    "path_min",
    "path_max",
    "path_mean",
    "transitivity",
    "assortativity",
)

NODE_METRICS: Tuple[str, ...] = (
    "degree",
    "neighbor_count",
    "neighbor_degree_mean",
    "neighbor_degree_max",
    "clustering",
    "edge_multiplicity_mean",
)

EDGE_METRICS: Tuple[str, ...] = (
    "multiplicity",
    "endpoint_degree_min",
    "endpoint_degree_max",
    "common_neighbors",
)

METRICS_BY_LEVEL: Dict[Level, Tuple[str, ...]] = {
    Level.SUBGRAPH: SUBGRAPH_METRICS,
    Level.NODE: NODE_METRICS,
    Level.EDGE: EDGE_METRICS,
}


@dataclass(frozen=True)
class FeatureVector:
    values: Tuple[float, ...]
    schema_id: str

    def __post_init__(self) -> None:
        values = tuple(float(x) for x in self.values)
        if not all(math.isfinite(x) for x in values):
            raise FeatureError(f"non-finite feature value in {values}")
        object.__setattr__(self, "values", values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class FeatureSchema:
    """
    Ordered metric list plus attribute encodings for one element level.

    Attribute keys are read from node attributes (subgraph and node levels) or
    edge attributes (edge level). A key listed in `vocabularies` is categorical
    and one-hot encoded; any other key is numeric. `vocabularies` is None until
    the schema is frozen against a graph.
    """

    level: Level
    metrics: Optional[Tuple[str, ...]] = None
    attribute_keys: Tuple[str, ...] = ()
    standardize: bool = False
    vocabularies: Optional[Mapping[str, Tuple[str, ...]]] = None
    mean: Optional[Tuple[float, ...]] = field(default=None, repr=False)
    std: Optional[Tuple[float, ...]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        try:
            level = Level(self.level)
        except ValueError:
            raise FeatureError(f"unknown feature level {self.level!r}") from None
        object.__setattr__(self, "level", level)

        known = METRICS_BY_LEVEL[level]
        metrics = known if self.metrics is None else tuple(self.metrics)
        unknown = [m for m in metrics if m not in known]
        if unknown:
            raise FeatureError(f"metrics {unknown} are not {level.value}-level metrics")
        object.__setattr__(self, "metrics", metrics)
        object.__setattr__(self, "attribute_keys", tuple(self.attribute_keys))
        if self.vocabularies is not None:
            object.__setattr__(
                self,
                "vocabularies",
                {k: tuple(str(c) for c in v) for k, v in self.vocabularies.items()},
            )

    # ------------------------------------------------------------------ #
    # Shape
    # ------------------------------------------------------------------ #
    @property
    def is_frozen(self) -> bool:
        return self.vocabularies is not None

    @property
    def column_names(self) -> List[str]:
        names = list(self.metrics)
        vocab = self.vocabularies or {}
        for key in self.attribute_keys:
            if key in vocab:
                names.extend(f"{key}={category}" for category in vocab[key])
            else:
                names.append(key)
        return names

    @property
    def dimension(self) -> int:
        return len(self.column_names)

    @property
    def schema_id(self) -> str:
        return f"{self.level.value}:" + ",".join(self.column_names)

    # ------------------------------------------------------------------ #
    # Binding to a graph
    # ------------------------------------------------------------------ #
    def freeze(self, g: Multigraph) -> "FeatureSchema":
        """
        Fix categorical vocabularies from the values present in g.

        A key is numeric when every non-null value is an int or float;
        otherwise it is categorical. Already frozen schemas are returned as is.
        """
        if self.is_frozen:
            return self
        if self.level is Level.EDGE:
            present = g.edge_attribute_keys
            records: Iterable[Mapping[str, Scalar]] = [e.attrs for e in g.edges]
        else:
            present = g.node_attribute_keys
            records = [g.node_attrs(n) for n in g.nodes]
        records = list(records)
        absent = [key for key in self.attribute_keys if key not in present]
        if absent:
            log.warning("Attribute keys %s are not in the graph; they encode as 0", absent)

        vocabularies: Dict[str, Tuple[str, ...]] = {}
        for key in self.attribute_keys:
            values = [r.get(key) for r in records if r.get(key) is not None]
            if values and not all(_is_number(v) for v in values):
                vocabularies[key] = tuple(sorted({str(v) for v in values}))
        return replace(self, vocabularies=vocabularies)

    def encode_attributes(self, attrs: Mapping[str, Scalar]) -> List[float]:
        vocab = self.vocabularies or {}
        encoded: List[float] = []
        for key in self.attribute_keys:
            value = attrs.get(key)
            if key in vocab:
                block = [0.0] * len(vocab[key])
                if value is not None and str(value) in vocab[key]:
                    block[vocab[key].index(str(value))] = 1.0
                encoded.extend(block)
            elif _is_number(value) and math.isfinite(float(value)):
                encoded.append(float(value))
            else:
                encoded.append(0.0)
        return encoded

    # ------------------------------------------------------------------ #
    # Standardization
    # ------------------------------------------------------------------ #
    def fit_standardization(self, vectors: Sequence[FeatureVector]) -> "FeatureSchema":
        """Per-dimension mean/std from training vectors; zero std maps to 1."""
        if not self.standardize or not vectors:
            return self
        matrix = np.vstack([v.array for v in vectors])
        mean = matrix.mean(axis=0)
        std = matrix.std(axis=0)
        std[std == 0] = 1.0
        return replace(self, mean=tuple(mean.tolist()), std=tuple(std.tolist()))

    def apply(self, vector: FeatureVector) -> FeatureVector:
        if not self.standardize or self.mean is None:
            return vector
        values = (vector.array - np.asarray(self.mean)) / np.asarray(self.std)
        return FeatureVector(tuple(values.tolist()), vector.schema_id)

    # ------------------------------------------------------------------ #
    # Serialization
    # ------------------------------------------------------------------ #
    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "level": self.level.value,
            "metrics": list(self.metrics),
            "attribute_keys": list(self.attribute_keys),
            "standardize": self.standardize,
        }
        if self.vocabularies is not None:
            doc["vocabularies"] = {k: list(v) for k, v in self.vocabularies.items()}
        if self.mean is not None:
            doc["mean"] = list(self.mean)
            doc["std"] = list(self.std or ())
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any], level: Optional[str] = None) -> "FeatureSchema":
        try:
            return cls(
                level=Level(doc.get("level", level)),
                metrics=tuple(doc["metrics"]) if doc.get("metrics") is not None else None,
                attribute_keys=tuple(doc.get("attribute_keys", ())),
                standardize=bool(doc.get("standardize", False)),
                vocabularies=doc.get("vocabularies"),
                mean=tuple(doc["mean"]) if doc.get("mean") is not None else None,
                std=tuple(doc["std"]) if doc.get("std") is not None else None,
            )
        except ValueError as exc:
            raise FeatureError(f"invalid feature schema: {exc}") from None


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)
