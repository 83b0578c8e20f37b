import copy
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from detection.pruning import PruneConfig
from detection.selection import SelectionConfig
from errors import ConfigError, SgiError
from evaluation.metrics import MatchThresholds
from graph.io import PathLike, read_json

log = logging.getLogger("config")


class Approach(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class RunConfig:
    """
    One detection run.

    Exactly one of `selection` (first approach) or `pruning` (second approach)
    is set, matching `approach`.
    """

    graph_path: Path
    samples_path: Path
    approach: Approach = Approach.SECOND
    selection: Optional[SelectionConfig] = None
    pruning: Optional[PruneConfig] = None
    thresholds: MatchThresholds = field(default_factory=MatchThresholds)
    beta: float = 1.0
    truth_path: Optional[Path] = None
    out_path: Path = Path("pred.json")
    report_path: Optional[Path] = None
    emit_bad_sets: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "approach", Approach(self.approach))
        except ValueError:
            raise ConfigError(f"unknown approach {self.approach!r}") from None
        if self.approach is Approach.FIRST:
            if self.selection is None or self.pruning is not None:
                raise ConfigError("first approach needs a selection config and no pruning config")
        elif self.pruning is None or self.selection is not None:
            raise ConfigError("second approach needs a pruning config and no selection config")
        if self.beta <= 0:
            raise ConfigError(f"beta must be > 0, got {self.beta}")

    @property
    def bad_sets_path(self) -> Path:
        return self.out_path.with_name(f"{self.out_path.stem}.bad_sets.json")

    @property
    def resolved_report_path(self) -> Path:
        if self.report_path is not None:
            return self.report_path
        return self.out_path.with_name(f"{self.out_path.stem}.report.json")


# Flag name -> (section, key); a section of None means the top level.
_OVERRIDES = {
    "graph": (None, "graph"),
    "samples": (None, "samples"),
    "truth": (None, "truth"),
    "approach": (None, "approach"),
    "seed": (None, "seed"),
    "out": (None, "out"),
    "report": (None, "report"),
    "emit_bad_sets": (None, "emit_bad_sets"),
    "generator": ("selection", "generator"),
    "gamma": ("selection", "gamma"),
    "strategy": ("pruning", "strategy"),
    "gamma_node": ("pruning", "gamma_node"),
    "gamma_edge": ("pruning", "gamma_edge"),
    "min_component_size": ("pruning", "min_component_size"),
    "gamma_extra": ("evaluation", "gamma_extra"),
    "gamma_missing": ("evaluation", "gamma_missing"),
    "gamma_size": ("evaluation", "gamma_size"),
    "beta": ("evaluation", "beta"),
    "workers": (None, "workers"),
}


def merge_overrides(doc: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Return a copy of doc with every non-None override written into place."""
    merged = copy.deepcopy(dict(doc))
    for name, value in overrides.items():
        if value is None or name not in _OVERRIDES:
            continue
        section, key = _OVERRIDES[name]
        target = merged if section is None else merged.setdefault(section, {})
        target[key] = value
    if overrides.get("seed") is not None:
        # An explicit seed flag also replaces a pinned LPA seed.
        merged.get("selection", {}).get("lpa", {}).pop("seed", None)
    return merged


def run_config_from_dict(doc: Mapping[str, Any]) -> RunConfig:
    for key in ("graph", "samples"):
        if not doc.get(key):
            raise ConfigError(f"run config is missing {key!r}")
    seed = int(doc.get("seed", 0))
    workers = doc.get("workers")
    approach = doc.get("approach", Approach.SECOND.value)
    evaluation = dict(doc.get("evaluation", {}))

    try:
        selection = pruning = None
        if Approach(approach) is Approach.FIRST:
            section = dict(doc.get("selection", {}))
            if workers is not None:
                section["workers"] = workers
            selection = SelectionConfig.from_dict(section, seed=seed)
        else:
            section = dict(doc.get("pruning", {}))
            if workers is not None:
                section["workers"] = workers
            pruning = PruneConfig.from_dict(section)
        return RunConfig(
            graph_path=Path(doc["graph"]),
            samples_path=Path(doc["samples"]),
            approach=approach,
            selection=selection,
            pruning=pruning,
            thresholds=MatchThresholds.from_dict(evaluation),
            beta=float(evaluation.get("beta", 1.0)),
            truth_path=Path(doc["truth"]) if doc.get("truth") else None,
            out_path=Path(doc.get("out", "pred.json")),
            report_path=Path(doc["report"]) if doc.get("report") else None,
            emit_bad_sets=bool(doc.get("emit_bad_sets", False)),
            seed=seed,
        )
    except ConfigError:
        raise
    except (SgiError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid run config: {exc}") from None


def load_run_config(
    path: Optional[PathLike] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Read the JSON run config (if any) and apply command-line overrides."""
    doc: Dict[str, Any] = {}
    if path is not None:
        doc = read_json(path)
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: run config must be a JSON object")
        log.info("Loaded run config from %s", path)
    return run_config_from_dict(merge_overrides(doc, overrides or {}))
