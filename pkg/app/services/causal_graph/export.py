"""
DOT and JSON rendering of causal graphs and traversal results.

DOT nodes show the surface text, the attributes as parenthesized labels and
the entity type; modifier edges can be drawn without a label. Output is
bit-stable for a given input and flags.
"""

import json
import logging
from typing import Literal, Union

import graphviz
from pydantic import ValidationError as PydanticValidationError

from app.core.constants import MODIFIER_RELATION
from app.schemas.causal_graph import GlobalGraph, GraphNode, TraversalResult
from app.utils.exceptions import ConfigError, ParseError

logger = logging.getLogger(__name__)

ExportFormat = Literal["dot", "json"]
Exportable = Union[GlobalGraph, TraversalResult]

EXPORT_FORMATS = ("dot", "json")


def attribute_label(attribute: str) -> str:
    """"causation" -> "(Causation)"."""
    return f"({attribute[:1].upper()}{attribute[1:]})"


def node_label(node: GraphNode) -> str:
    headline = " ".join([node.surface, *(attribute_label(a) for a in node.attributes)])
    # "\n" here is the DOT line-break escape, not a Python newline
    return f"{headline}\\n{node.entity_type}"


def to_dot(graph: GlobalGraph, draw_modifiers_unlabeled: bool = True, name: str = "causal_graph") -> str:
    """
    DOT source with one cluster per sentence.

    Node names are positional (n0, n1, ...) in canonical node order so that
    sentence ids never need escaping.
    """
    dot = graphviz.Digraph(name, graph_attr={"rankdir": "LR"}, node_attr={"shape": "box"})
    names = {node.id: f"n{index}" for index, node in enumerate(graph.nodes)}

    for index, sentence_id in enumerate(sorted(graph.sentences)):
        with dot.subgraph(name=f"cluster_{index}") as cluster:
            cluster.attr(label=sentence_id)
            for node in graph.nodes:
                if node.sentence_id == sentence_id:
                    cluster.node(names[node.id], node_label(node))

    for edge in graph.edges:
        if draw_modifiers_unlabeled and edge.relation_type == MODIFIER_RELATION:
            dot.edge(names[edge.head], names[edge.tail])
        else:
            dot.edge(names[edge.head], names[edge.tail], label=edge.relation_type)
    return dot.source


def export_graph(target: Exportable, fmt: str = "dot", draw_modifiers_unlabeled: bool = True) -> str:
    """
    Render a global graph or a traversal result.

    A traversal result renders its pruned graph in DOT; its JSON keeps the
    paths (with orientation and trivial flags) as well.

    Raises:
        ConfigError: If the format is not "dot" or "json"
    """
    if fmt not in EXPORT_FORMATS:
        raise ConfigError(f"Unknown export format '{fmt}', expected one of {', '.join(EXPORT_FORMATS)}")

    if fmt == "json":
        return json.dumps(target.model_dump(mode="json"), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    graph = target.graph if isinstance(target, TraversalResult) else target
    return to_dot(graph, draw_modifiers_unlabeled=draw_modifiers_unlabeled)


def _import(text: str, model):
    try:
        return model.model_validate_json(text)
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"Invalid {model.__name__} JSON at '{location}': {first['msg']}") from e


def import_graph(text: str) -> GlobalGraph:
    """Parse JSON written by export_graph(graph, "json")."""
    return _import(text, GlobalGraph)


def import_traversal(text: str) -> TraversalResult:
    """Parse JSON written by export_graph(result, "json")."""
    return _import(text, TraversalResult)
