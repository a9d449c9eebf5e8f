"""Bipartite link graphs at two granularities: mention-file and page-package.

Both levels resolve a link the same way -- to an indexed file entity, via the
target's qualified name with file/line tie-breakers, else via the recorded
file path -- so the package view is exactly the file view collapsed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scisoftx.code_model import CodeEntity, CodeIndex
from scisoftx.links import Link, LinkSet

GRAPH_LEVELS = ("file", "package")


@dataclass(frozen=True)
class GraphNode:
    node_id: str
    kind: str  # mention | file | page | package
    label: str


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    weight: int


@dataclass
class LinkGraph:
    level: str
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)
    #: links whose target could not be located in the index, with reasons
    unresolved: list[tuple[Link, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "nodes": [
                {"node_id": n.node_id, "kind": n.kind, "label": n.label} for n in self.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "weight": e.weight}
                for e in self.edges
            ],
        }


def resolve_link_file(link: Link, index: CodeIndex) -> CodeEntity | None:
    """The indexed file entity a link lands in, or None if unresolvable."""
    ids = index.qname_map.get(link.target_qname)
    if ids:
        def preference(eid: str) -> tuple:
            e = index.entities[eid]
            return (
                0 if e.file_path == link.target_file else 1,
                abs(e.line_start - link.target_line),
                index.sort_key(eid),
            )
        entity = index.entities[min(ids, key=preference)]
        if entity.file_path:
            return index.file_entity(entity.file_path)
    return index.file_entity(link.target_file)


def build_file_graph(link_set: LinkSet, index: CodeIndex) -> LinkGraph:
    """Mention nodes against file nodes; one edge per (mention, file) pair."""
    graph = LinkGraph(level="file")
    nodes: dict[str, GraphNode] = {}
    weights: dict[tuple[str, str], int] = {}
    for link in link_set.links:
        file_entity = resolve_link_file(link, index)
        if file_entity is None:
            graph.unresolved.append((link, f"no entity for {link.target_qname!r}"))
            continue
        mention_id = f"m:{link.page}:{link.line}:{link.char_start}"
        file_id = f"f:{file_entity.file_path}"
        nodes.setdefault(
            mention_id,
            GraphNode(mention_id, "mention", f"p{link.page}:l{link.line} {link.snippet}"),
        )
        nodes.setdefault(file_id, GraphNode(file_id, "file", file_entity.file_path))
        weights[(mention_id, file_id)] = weights.get((mention_id, file_id), 0) + 1
    _finish(graph, nodes, weights)
    return graph


def build_package_graph(link_set: LinkSet, index: CodeIndex) -> LinkGraph:
    """Page nodes against innermost-package nodes, weights aggregated."""
    graph = LinkGraph(level="package")
    nodes: dict[str, GraphNode] = {}
    weights: dict[tuple[str, str], int] = {}
    for link in link_set.links:
        file_entity = resolve_link_file(link, index)
        if file_entity is None:
            graph.unresolved.append((link, f"no entity for {link.target_qname!r}"))
            continue
        package = index.package_of(file_entity.entity_id)
        page_id = f"p:{link.page}"
        package_id = f"pkg:{package.qualified_name}"
        nodes.setdefault(page_id, GraphNode(page_id, "page", f"page {link.page}"))
        nodes.setdefault(package_id, GraphNode(package_id, "package", package.qualified_name))
        weights[(page_id, package_id)] = weights.get((page_id, package_id), 0) + 1
    _finish(graph, nodes, weights)
    return graph


def build_graph(link_set: LinkSet, index: CodeIndex, level: str) -> LinkGraph:
    if level == "file":
        return build_file_graph(link_set, index)
    if level == "package":
        return build_package_graph(link_set, index)
    raise ValueError(f"level must be one of {GRAPH_LEVELS}")


def _finish(graph: LinkGraph, nodes: dict[str, GraphNode], weights: dict) -> None:
    graph.nodes = [nodes[k] for k in sorted(nodes)]
    graph.edges = [
        GraphEdge(source, target, weight)
        for (source, target), weight in sorted(weights.items())
    ]


def collapse_file_graph(file_graph: LinkGraph, index: CodeIndex) -> LinkGraph:
    """Map mentions to their pages and files to their packages, summing weights."""
    file_package: dict[str, str] = {}
    for node in file_graph.nodes:
        if node.kind != "file":
            continue
        entity = index.file_entity(node.label)
        if entity is None:
            continue
        package = index.package_of(entity.entity_id)
        file_package[node.node_id] = package.qualified_name
    nodes: dict[str, GraphNode] = {}
    weights: dict[tuple[str, str], int] = {}
    for edge in file_graph.edges:
        page_no = int(edge.source.split(":")[1])
        page_id = f"p:{page_no}"
        package_qname = file_package[edge.target]
        package_id = f"pkg:{package_qname}"
        nodes.setdefault(page_id, GraphNode(page_id, "page", f"page {page_no}"))
        nodes.setdefault(package_id, GraphNode(package_id, "package", package_qname))
        weights[(page_id, package_id)] = weights.get((page_id, package_id), 0) + edge.weight
    collapsed = LinkGraph(level="package")
    _finish(collapsed, nodes, weights)
    return collapsed
