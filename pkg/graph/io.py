import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Union

from errors import ConfigError, GraphError
from .core import Multigraph, NodeId, SgiSet, Subgraph, build_graph, induced_subgraph

PathLike = Union[str, Path]

log = logging.getLogger("graph.io")


# ---------------------------------------------------------------------- #
# Raw JSON helpers
# ---------------------------------------------------------------------- #
def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}") from None
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def write_json_atomic(path: PathLike, payload: Any) -> Path:
    """
    Write JSON through a temp file in the target directory, then rename.

    Keys are sorted so identical payloads give identical bytes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    tmp = tempfile.NamedTemporaryFile(
        "w",
        encoding="utf-8",
        dir=path.parent,
        prefix=f".{path.name}.",
        suffix=".tmp",
        delete=False,
    )
    try:
        with tmp:
            tmp.write(text)
        os.replace(tmp.name, path)
    except Exception:
        Path(tmp.name).unlink(missing_ok=True)
        raise
    log.debug("Wrote %s", path)
    return path


def write_text_atomic(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except Exception:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


# ---------------------------------------------------------------------- #
# Graph documents
# ---------------------------------------------------------------------- #
def graph_to_dict(g: Multigraph) -> Dict[str, Any]:
    return {
        "nodes": [{"id": n, "attrs": dict(g.node_attrs(n))} for n in g.nodes],
        "edges": [
            {"id": e.id, "src": e.u, "dst": e.v, "attrs": dict(e.attrs)}
            for e in g.edges
        ],
    }


def graph_from_dict(doc: Dict[str, Any]) -> Multigraph:
    try:
        node_records = [(n["id"], n.get("attrs") or {}) for n in doc["nodes"]]
        edge_docs = doc.get("edges", [])
        edge_records = [(e["src"], e["dst"], e.get("attrs") or {}) for e in edge_docs]
        edge_ids = [e.get("id", index) for index, e in enumerate(edge_docs)]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph document: missing {exc}") from None
    return build_graph(node_records, edge_records, edge_ids=edge_ids)


def load_graph(path: PathLike) -> Multigraph:
    try:
        g = graph_from_dict(read_json(path))
    except GraphError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    log.info("Loaded graph %s: %d nodes, %d edges", path, g.number_of_nodes(), g.number_of_edges())
    return g


def save_graph(g: Multigraph, path: PathLike) -> Path:
    return write_json_atomic(path, graph_to_dict(g))


# ---------------------------------------------------------------------- #
# SgiSet documents
# ---------------------------------------------------------------------- #
def sgi_set_to_dict(sgis: SgiSet) -> Dict[str, Any]:
    groups: List[Dict[str, Any]] = []
    for member in sgis:
        groups.append(
            {"nodes": member.sorted_nodes(), "edges": member.sorted_edges()}
        )
    return {"type": sgis.goi_type, "groups": groups}


def sgi_set_from_dict(doc: Dict[str, Any], g: Multigraph) -> SgiSet:
    """Groups without an "edges" list are taken as node-induced."""
    members: List[Subgraph] = []
    try:
        for group in doc["groups"]:
            if group.get("edges") is None:
                members.append(induced_subgraph(g, group["nodes"]))
            else:
                members.append(Subgraph(g, group["nodes"], group["edges"]))
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed SgiSet document: missing {exc}") from None
    return SgiSet(tuple(members), str(doc.get("type", "sgi")))


def load_sgi_set(path: PathLike, g: Multigraph) -> SgiSet:
    try:
        sgis = sgi_set_from_dict(read_json(path), g)
    except GraphError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    log.info("Loaded %d %s groups from %s", len(sgis), sgis.goi_type, path)
    return sgis


def save_sgi_set(sgis: SgiSet, path: PathLike) -> Path:
    return write_json_atomic(path, sgi_set_to_dict(sgis))


def load_node_sets(path: PathLike) -> List[FrozenSet[NodeId]]:
    """Node sets of an SgiSet document, read without its parent graph."""
    doc = read_json(path)
    try:
        return [frozenset(group["nodes"]) for group in doc["groups"]]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: malformed SgiSet document: missing {exc}") from None
