import argparse
import logging
import os
from typing import List, Optional

from controller import Command, CommandType, Controller

LOG_LEVEL_ENV = "SGI_LOG_LEVEL"


def setup_logging() -> None:
    name = os.environ.get(LOG_LEVEL_ENV, "INFO").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgi",
        description="Detect subgraphs of interest in transactional multigraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic benchmark")
    gen.add_argument("--config", help="benchmark config JSON")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--seed", type=int)

    det = sub.add_parser("detect", help="run a detection approach")
    det.add_argument("--config", help="run config JSON; flags override it")
    det.add_argument("--graph")
    det.add_argument("--samples")
    det.add_argument("--truth", help="ground truth; also writes an evaluation report")
    det.add_argument("--out", help="predicted SgiSet JSON")
    det.add_argument("--report", help="evaluation report JSON")
    det.add_argument("--approach", choices=["first", "second"])
    det.add_argument("--generator", choices=["lpa", "mcs-query"])
    det.add_argument("--strategy", choices=["simple", "node", "edge", "majority"])
    det.add_argument("--gamma", type=float)
    det.add_argument("--gamma-node", type=float)
    det.add_argument("--gamma-edge", type=float)
    det.add_argument("--min-component-size", type=int)
    det.add_argument("--workers", type=int)
    det.add_argument("--seed", type=int)
    det.add_argument("--emit-bad-sets", action="store_true", default=None)
    _add_threshold_flags(det)

    ev = sub.add_parser("evaluate", help="score predictions against ground truth")
    ev.add_argument("--config", help="run config JSON; its evaluation section is used")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--out", help="evaluation report JSON")
    _add_threshold_flags(ev)

    feat = sub.add_parser("features", help="dump feature vectors as CSV")
    feat.add_argument("--graph", required=True)
    feat.add_argument("--level", choices=["subgraph", "node", "edge"])
    feat.add_argument("--schema", help="feature schema JSON")
    feat.add_argument("--samples", help="SgiSet JSON (subgraph level)")
    feat.add_argument("--out", required=True, help="CSV path")
    return parser


def _add_threshold_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma-extra", type=float)
    parser.add_argument("--gamma-missing", type=float)
    parser.add_argument("--gamma-size", type=float)
    parser.add_argument("--beta", type=float)


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    log = logging.getLogger("main")

    args = build_parser().parse_args(argv)
    options = vars(args)
    command = Command(CommandType[options.pop("command").upper()], options)

    try:
        return Controller().handle(command)
    except KeyboardInterrupt:
        log.info("Shutting down (KeyboardInterrupt).")
        return 130


if __name__ == "__main__":
    raise SystemExit(main())
