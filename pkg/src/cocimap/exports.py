"""Deterministic artifact serialization: GraphML, edge CSV, JSON reports.

Every writer is byte-stable for identical inputs: nodes are ordered by id,
edges by canonical (source, target) pair, JSON keys are sorted and floats
carry 12 significant digits.
"""

from __future__ import annotations

import csv
import json
import math
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .cocitation import CoCitationGraph
from .errors import IoFailure
from .pathfinder import PFNetwork

TOOL_NAME = "cocimap"
TOOL_VERSION = "0.1.0"


# --- JSON ---------------------------------------------------------------

def _fmt_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite numbers are not serializable")
    return format(x, ".12g")


def json_dumps_stable(obj, indent: int = 0) -> str:
    """JSON with sorted keys and floats at 12 significant digits.

    Re-serializing a parsed document is byte-identical.
    """
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (bool, int, float, np.bool_, np.integer,
                        np.floating)):
        return _fmt_number(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [json_dumps_stable(v, indent + 2) for v in obj]
        if not items:
            return "[]"
        inner = (",\n" + pad + "  ").join(items)
        return "[\n" + pad + "  " + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise ValueError(f"JSON keys must be strings, got {key!r}")
            items.append(json.dumps(key, ensure_ascii=False) + ": "
                         + json_dumps_stable(obj[key], indent + 2))
        if not items:
            return "{}"
        inner = (",\n" + pad + "  ").join(items)
        return "{\n" + pad + "  " + inner + "\n" + pad + "}"
    if hasattr(obj, "to_dict"):
        return json_dumps_stable(obj.to_dict(), indent)
    raise ValueError(f"cannot serialize {type(obj).__name__}")


def export_report(payload, path, config: dict | None = None) -> None:
    """Write a JSON report wrapped with tool version and the effective config."""
    document = {
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "config": config or {},
        "report": payload,
    }
    _write_text(path, json_dumps_stable(document) + "\n")


# --- CSV ----------------------------------------------------------------

def _csv_cell(value) -> str:
    if isinstance(value, (bool, int, float, np.bool_, np.integer,
                          np.floating)):
        return _fmt_number(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    """CSV with '\\n' line endings and 12-significant-digit floats."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_csv_cell(v) for v in row])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _canonical_edges(graph: CoCitationGraph, extra=None):
    """Edges as (source_id, target_id, weight[, extra]) sorted by id pair."""
    rows = []
    for k in range(graph.n_edges):
        a = graph.node_ids[int(graph.edge_u[k])]
        b = graph.node_ids[int(graph.edge_v[k])]
        if b < a:
            a, b = b, a
        row = [a, b, int(graph.edge_w[k])]
        if extra is not None:
            row.append(extra[k])
        rows.append(row)
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def write_edge_csv(graph: CoCitationGraph, path) -> None:
    write_csv(path, ["source", "target", "weight"], _canonical_edges(graph))


# --- GraphML -------------------------------------------------------------

_GRAPHML_OPEN = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n'
)

_NODE_KEYS = (
    ("label", "string"),
    ("citations", "long"),
    ("area", "string"),
)


def _graphml_text(graph: CoCitationGraph, retained=None) -> str:
    lines = [_GRAPHML_OPEN]
    for name, typ in _NODE_KEYS:
        lines.append(f'  <key attr.name="{name}" attr.type="{typ}" '
                     f'for="node" id="{name}"/>\n')
    lines.append('  <key attr.name="weight" attr.type="long" '
                 'for="edge" id="weight"/>\n')
    if retained is not None:
        lines.append('  <key attr.name="pfnet_retained" attr.type="boolean" '
                     'for="edge" id="pfnet_retained"/>\n')
    lines.append('  <graph edgedefault="undirected">\n')

    node_order = sorted(range(graph.n_nodes), key=lambda i: graph.node_ids[i])
    for i in node_order:
        lines.append(f"    <node id={quoteattr(graph.node_ids[i])}>\n")
        lines.append(f"      <data key=\"label\">{escape(graph.labels[i])}</data>\n")
        lines.append(f"      <data key=\"citations\">{int(graph.citations[i])}</data>\n")
        lines.append(f"      <data key=\"area\">{escape(graph.area_label(i))}</data>\n")
        lines.append("    </node>\n")

    if retained is not None:
        rows = _canonical_edges(graph, extra=["true" if r else "false"
                                              for r in retained])
    else:
        rows = _canonical_edges(graph)
    for row in rows:
        lines.append(f"    <edge source={quoteattr(row[0])} "
                     f"target={quoteattr(row[1])}>\n")
        lines.append(f"      <data key=\"weight\">{row[2]}</data>\n")
        if retained is not None:
            lines.append(f"      <data key=\"pfnet_retained\">{row[3]}</data>\n")
        lines.append("    </edge>\n")
    lines.append("  </graph>\n</graphml>\n")
    return "".join(lines)


def write_graphml(graph: CoCitationGraph, path) -> None:
    _write_text(path, _graphml_text(graph))


def export_network(obj, fmt: str, path, alongside_source: bool = False) -> None:
    """Serialize a co-citation graph or Pathfinder network.

    ``fmt`` is 'graphml' or 'edge_csv'.  For a Pathfinder network,
    ``alongside_source`` exports the full source graph with a boolean
    ``pfnet_retained`` edge attribute instead of the pruned subgraph.
    """
    retained = None
    if isinstance(obj, PFNetwork):
        if alongside_source:
            graph = obj.dgraph.source
            retained = obj.retained
        else:
            graph = obj.to_graph()
    else:
        graph = obj
    if fmt == "graphml":
        _write_text(path, _graphml_text(graph, retained=retained))
    elif fmt == "edge_csv":
        if retained is not None:
            write_csv(path, ["source", "target", "weight", "pfnet_retained"],
                      _canonical_edges(graph, extra=["true" if r else "false"
                                                     for r in retained]))
        else:
            write_edge_csv(graph, path)
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
