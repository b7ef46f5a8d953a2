"""Discovery-set comparisons across treatments and graph exports.

Two views over a family of screen results: the directed set-inclusion
graph (which treatment subsets discover subsets of each other's
variables) and the persistent-edge subnetwork (variable pairs whose
correlation survives every treatment), together with deterministic CSV
and DOT serializations for external layout tools.
"""

import csv
import json
import math
from dataclasses import dataclass

from .screen import ScreenResult, persistent_screen

__all__ = [
    "InclusionGraph",
    "SubnetworkResult",
    "inclusion_graph",
    "persistent_subnetwork",
    "export",
    "subnetwork_summary",
    "write_subnetwork_json",
]


@dataclass(frozen=True)
class InclusionGraph:
    """Directed graph over screened subsets.

    ``nodes`` maps subset label -> discovery count.  An edge (i, j)
    carries the inclusion fraction |D_i intersect D_j| / |D_i| and is
    present only when that fraction reaches the cutoff; a fraction of
    exactly 1 (D_i entirely contained in D_j) is flagged so renderers
    can draw it heavier.  Self-edges are excluded.
    """

    nodes: dict
    edges: tuple
    cutoff: float


@dataclass(frozen=True)
class SubnetworkResult:
    """Edges persisting across all treatments, with connected components."""

    edges: tuple
    components: tuple
    giant_size: int
    variable_ids: tuple = None


def _discovery_set(result):
    if isinstance(result, ScreenResult):
        if result.variable_ids is not None:
            return {result.variable_ids[i] for i in result.discoveries}
        return set(result.discoveries)
    return set(result)


def inclusion_graph(results, cutoff=0.9) -> InclusionGraph:
    """Directed set-inclusion graph over a map of subset -> result.

    Parameters
    ----------
    results : mapping
        Subset label -> ScreenResult (or any iterable of discovered
        variable identifiers).  At least two subsets.
    cutoff : float
        Minimum inclusion fraction for an edge; default 0.9.

    Notes
    -----
    Subsets with empty discovery sets contribute nodes but no outgoing
    edges (the inclusion fraction is undefined at |D_i| = 0).
    """
    if not results:
        raise ValueError("no screen results to compare")
    if len(results) < 2:
        raise ValueError("inclusion graph needs at least two subsets")
    if not 0.0 < cutoff <= 1.0:
        raise ValueError(f"cutoff must lie in (0, 1], got {cutoff}")
    sets = {label: _discovery_set(res) for label, res in results.items()}
    nodes = {label: len(s) for label, s in sets.items()}
    edges = []
    for src, d_src in sets.items():
        if not d_src:
            continue
        for dst, d_dst in sets.items():
            if src == dst:
                continue
            fraction = len(d_src & d_dst) / len(d_src)
            if fraction >= cutoff:
                edges.append((src, dst, fraction, fraction == 1.0))
    return InclusionGraph(nodes=dict(sorted(nodes.items())), edges=tuple(sorted(edges)), cutoff=cutoff)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def persistent_subnetwork(results) -> SubnetworkResult:
    """Edges present in every treatment, with connected components.

    Parameters
    ----------
    results : sequence of ScreenResult
        Per-treatment auto results (>= 2) with materialized edges.

    Returns
    -------
    SubnetworkResult
        The intersected edge set (annotated with the smallest
        per-treatment |r|) and its connected components, sorted by
        descending size; ``giant_size`` is the largest component's
        vertex count (0 when no edges persist).
    """
    joint = persistent_screen(results)
    uf = _UnionFind()
    for i, j, _ in joint.edges:
        uf.union(i, j)
    groups = {}
    for i, j, _ in joint.edges:
        groups.setdefault(uf.find(i), set()).update((i, j))
    components = tuple(
        tuple(sorted(member)) for member in sorted(groups.values(), key=lambda s: (-len(s), min(s)))
    )
    return SubnetworkResult(
        edges=joint.edges,
        components=components,
        giant_size=len(components[0]) if components else 0,
        variable_ids=joint.variable_ids,
    )


def _node_width(count):
    # Node size grows with the log of the discovery count; floor keeps
    # empty subsets visible.
    return 0.3 + 0.25 * math.log10(count + 1)


def _subnet_name(subnet, index):
    if subnet.variable_ids is not None:
        return subnet.variable_ids[index]
    return str(index)


def export(graph, format, path):
    """Serialize an InclusionGraph or SubnetworkResult deterministically.

    ``format`` is "edge-csv" or "dot".  Output ordering is sorted, so a
    rerun over the same inputs is byte-identical.  DOT node sizes are
    proportional to the log of the discovery count (inclusion graphs);
    100%-inclusion edges get a heavier pen width.
    """
    if format not in ("edge-csv", "dot"):
        raise ValueError(f"format must be 'edge-csv' or 'dot', got {format!r}")
    if isinstance(graph, InclusionGraph):
        if format == "edge-csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["src", "dst", "fraction", "full_inclusion"])
                for src, dst, fraction, full in graph.edges:
                    writer.writerow([src, dst, f"{fraction:.17g}", int(full)])
        else:
            lines = ["digraph inclusion {", "  node [shape=circle, fixedsize=true];"]
            for label, count in sorted(graph.nodes.items()):
                width = _node_width(count)
                lines.append(
                    f'  "{label}" [label="{label}\\n{count}", width={width:.4f}, height={width:.4f}];'
                )
            for src, dst, fraction, full in graph.edges:
                pen = 3.0 if full else 1.0
                lines.append(f'  "{src}" -> "{dst}" [penwidth={pen:.1f}, label="{fraction:.2f}"];')
            lines.append("}")
            with open(path, "w") as fh:
                fh.write("\n".join(lines) + "\n")
    elif isinstance(graph, SubnetworkResult):
        if format == "edge-csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["var_i", "var_j", "r"])
                for i, j, r in graph.edges:
                    writer.writerow([_subnet_name(graph, i), _subnet_name(graph, j), f"{r:.17g}"])
        else:
            lines = ["graph persistent {", "  node [shape=point];"]
            for i, j, _ in graph.edges:
                lines.append(f'  "{_subnet_name(graph, i)}" -- "{_subnet_name(graph, j)}";')
            lines.append("}")
            with open(path, "w") as fh:
                fh.write("\n".join(lines) + "\n")
    else:
        raise TypeError(f"cannot export {type(graph).__name__}")


def subnetwork_summary(subnet: SubnetworkResult):
    """JSON-ready summary with a component size histogram."""
    sizes = [len(c) for c in subnet.components]
    histogram = {}
    for s in sizes:
        histogram[str(s)] = histogram.get(str(s), 0) + 1
    return {
        "n_edges": len(subnet.edges),
        "n_components": len(subnet.components),
        "giant_size": subnet.giant_size,
        "component_sizes": sizes,
        "component_size_histogram": dict(sorted(histogram.items(), key=lambda kv: int(kv[0]))),
    }


def write_subnetwork_json(subnet: SubnetworkResult, path, provenance=None):
    payload = subnetwork_summary(subnet)
    if provenance is not None:
        payload["provenance"] = provenance
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return payload
