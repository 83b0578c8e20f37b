import logging
import sys
import time
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Callable, Dict, Mapping

from config import Approach, RunConfig, load_run_config, merge_overrides
from detection.pruning import run_second_approach
from detection.selection import first_approach
from errors import BenchmarkError, ConfigError, FeatureError, SgiError
from evaluation.metrics import MatchThresholds
from evaluation.report import evaluate
from features.extractor import edge_features, node_features, subgraph_features, write_vectors_csv
from features.schema import FeatureSchema, Level
from graph.io import load_graph, load_node_sets, load_sgi_set, read_json, save_sgi_set, write_json_atomic
from synthesis.generator import BenchmarkConfig, generate_benchmark


class CommandType(Enum):
    GENERATE = auto()
    DETECT = auto()
    EVALUATE = auto()
    FEATURES = auto()


@dataclass
class Command:
    command_type: CommandType
    options: Dict[str, Any] = field(default_factory=dict)


class Controller:
    """
    Central coordinator.

    - handle() dispatches one Command and turns its outcome into an exit code.
    - Configuration problems (bad flags, missing or unparseable files) give 1.
    - Anything else that goes wrong at run time gives 2.
    """

    def __init__(self) -> None:
        self.log = logging.getLogger("controller")

    # -------------------------------------------------
    # Command entry point
    # -------------------------------------------------
    def handle(self, command: Command) -> int:
        handlers: Dict[CommandType, Callable[[Mapping[str, Any]], None]] = {
            CommandType.GENERATE: self._handle_generate,
            CommandType.DETECT: self._handle_detect,
            CommandType.EVALUATE: self._handle_evaluate,
            CommandType.FEATURES: self._handle_features,
        }
        name = command.command_type.name.lower()
        started = time.perf_counter()
        code = self._guarded(lambda: handlers[command.command_type](command.options))
        self.log.info(
            "Command %s finished with exit code %d in %.2fs",
            name,
            code,
            time.perf_counter() - started,
        )
        return code

    def run_pipeline(self, cfg: RunConfig) -> int:
        return self._guarded(lambda: self._detect(cfg))

    def _guarded(self, action: Callable[[], None]) -> int:
        try:
            action()
            return 0
        except (ConfigError, BenchmarkError) as e:
            self.log.error("%s", e)
            return 1
        except Exception as e:
            self.log.exception("Command failed: %s", e)
            return 2

    # -------------------------------------------------
    # generate
    # -------------------------------------------------
    def _handle_generate(self, options: Mapping[str, Any]) -> None:
        doc: Dict[str, Any] = dict(read_json(options["config"])) if options.get("config") else {}
        if options.get("seed") is not None:
            doc["seed"] = options["seed"]
        if not options.get("out"):
            raise ConfigError("generate needs --out")
        bench = generate_benchmark(BenchmarkConfig.from_dict(doc))
        paths = bench.save(options["out"])
        self.log.info(
            "Benchmark written to %s (overlap fraction %.3f)",
            paths["graph"].parent,
            bench.overlap_fraction,
        )

    # -------------------------------------------------
    # detect
    # -------------------------------------------------
    def _handle_detect(self, options: Mapping[str, Any]) -> None:
        self._detect(load_run_config(options.get("config"), options))

    def _detect(self, cfg: RunConfig) -> None:
        self.log.info("Detection run: approach=%s, seed=%d", cfg.approach.value, cfg.seed)
        g = load_graph(cfg.graph_path)
        samples = load_sgi_set(cfg.samples_path, g)

        if cfg.approach is Approach.FIRST:
            preds = first_approach(g, samples, cfg.selection)
            bad = None
        else:
            preds, bad = run_second_approach(g, samples, cfg.pruning)

        save_sgi_set(preds, cfg.out_path)
        self.log.info("Wrote %d predicted groups to %s", len(preds), cfg.out_path)

        if cfg.emit_bad_sets:
            if bad is None:
                self.log.warning("--emit-bad-sets only applies to the second approach.")
            else:
                write_json_atomic(cfg.bad_sets_path, bad.to_dict())
                self.log.info("Wrote bad sets to %s", cfg.bad_sets_path)

        if cfg.truth_path is not None:
            truth = load_sgi_set(cfg.truth_path, g)
            report = evaluate(preds, truth, cfg.thresholds, cfg.beta)
            report.save(cfg.resolved_report_path)
            sys.stdout.write(report.to_text())

    # -------------------------------------------------
    # evaluate
    # -------------------------------------------------
    def _handle_evaluate(self, options: Mapping[str, Any]) -> None:
        for key in ("pred", "truth"):
            if not options.get(key):
                raise ConfigError(f"evaluate needs --{key}")
        doc = read_json(options["config"]) if options.get("config") else {}
        section = merge_overrides(doc, options).get("evaluation", {})
        try:
            thresholds = MatchThresholds.from_dict(section)
            beta = float(section.get("beta", 1.0))
            if beta <= 0:
                raise ValueError(f"beta must be > 0, got {beta}")
        except (SgiError, ValueError) as e:
            raise ConfigError(f"invalid evaluation thresholds: {e}") from None

        preds = load_node_sets(options["pred"])
        truth = load_node_sets(options["truth"])
        report = evaluate(preds, truth, thresholds, beta)
        if options.get("out"):
            report.save(options["out"])
            self.log.info("Wrote evaluation report to %s", options["out"])
        sys.stdout.write(report.to_text())

    # -------------------------------------------------
    # features
    # -------------------------------------------------
    def _handle_features(self, options: Mapping[str, Any]) -> None:
        if not options.get("graph") or not options.get("out"):
            raise ConfigError("features needs --graph and --out")
        g = load_graph(options["graph"])
        doc = read_json(options["schema"]) if options.get("schema") else {}
        try:
            schema = FeatureSchema.from_dict(doc, level=options.get("level") or Level.NODE.value)
        except FeatureError as e:
            raise ConfigError(str(e)) from None
        schema = schema.freeze(g)

        if schema.level is Level.NODE:
            labels = [str(n) for n in g.nodes]
            vectors = [node_features(g, n, schema) for n in g.nodes]
        elif schema.level is Level.EDGE:
            labels = [str(e) for e in g.edge_ids]
            vectors = [edge_features(g, e, schema) for e in g.edge_ids]
        else:
            if not options.get("samples"):
                raise ConfigError("subgraph-level features need --samples")
            samples = load_sgi_set(options["samples"], g)
            labels = [f"{samples.goi_type}-{i}" for i in range(len(samples))]
            vectors = [subgraph_features(g, s, schema) for s in samples]

        write_vectors_csv(options["out"], labels, vectors, schema)


def run_pipeline(cfg: RunConfig) -> int:
    """Run one detection (and optional evaluation); returns the exit code."""
    return Controller().run_pipeline(cfg)
