"""
Global causal graph types.

A GlobalGraph is the disjoint union of per-sentence knowledge graphs. Nodes are
entity occurrences keyed by sentence id, span and type; edges never cross
sentence boundaries.
"""

from typing import Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from app.core.constants import DEFAULT_VECTOR_THRESHOLD


def node_id(sentence_id: str, start: int, end: int, entity_type: str) -> str:
    return f"{sentence_id}/{start}-{end}/{entity_type}"


class GraphNode(BaseModel):
    """Entity occurrence with its sentence provenance."""

    model_config = ConfigDict(frozen=True)

    sentence_id: str
    start: int = Field(ge=0)
    end: int = Field(ge=0)
    entity_type: str
    attributes: Tuple[str, ...] = ()
    surface: str

    @computed_field
    @property
    def id(self) -> str:
        return node_id(self.sentence_id, self.start, self.end, self.entity_type)

    def sort_key(self) -> Tuple[str, int, int, str]:
        return (self.sentence_id, self.start, self.end, self.entity_type)


class GraphEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    sentence_id: str
    head: str
    tail: str
    relation_type: str

    @computed_field
    @property
    def id(self) -> str:
        return f"{self.head}|{self.relation_type}|{self.tail}"

    def sort_key(self) -> Tuple[str, str, str, str]:
        return (self.sentence_id, self.head, self.tail, self.relation_type)


class GlobalGraph(BaseModel):
    """
    Merged causal graph over many sentences.

    `sentences` keeps the token sequence of every merged sentence in merge
    order; nodes and edges are held in canonical sorted order.
    """

    model_config = ConfigDict(frozen=True)

    sentences: Dict[str, Tuple[str, ...]] = Field(default_factory=dict)
    nodes: Tuple[GraphNode, ...] = ()
    edges: Tuple[GraphEdge, ...] = ()

    @model_validator(mode="after")
    def canonical_order(self) -> "GlobalGraph":
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=GraphNode.sort_key)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=GraphEdge.sort_key)))
        return self

    def node(self, identifier: str) -> Optional[GraphNode]:
        for candidate in self.nodes:
            if candidate.id == identifier:
                return candidate
        return None

    @property
    def attribute_count(self) -> int:
        return sum(len(n.attributes) for n in self.nodes)


class ConceptQuery(BaseModel):
    """User concept to locate in the graph, e.g. "pray"."""

    model_config = ConfigDict(frozen=True)

    text: str
    matcher: Literal["lemma", "vector"] = "lemma"
    threshold: float = Field(default=DEFAULT_VECTOR_THRESHOLD, ge=-1.0, le=1.0)

    @field_validator("text")
    @classmethod
    def validate_text(cls, v: str) -> str:
        v = v.strip()
        if not v:
            raise ValueError("Query text cannot be empty")
        return v


class PathStep(BaseModel):
    """One hop; forward is False when the edge was walked from tail to head."""

    model_config = ConfigDict(frozen=True)

    edge: GraphEdge
    forward: bool


class TraversalPath(BaseModel):
    """Alternating node/edge sequence from a source match to a destination match."""

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[str, ...]
    steps: Tuple[PathStep, ...] = ()

    @model_validator(mode="after")
    def validate_path(self) -> "TraversalPath":
        if len(self.nodes) != len(self.steps) + 1:
            raise ValueError("A path has exactly one more node than it has steps")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("A path cannot visit a node twice")
        for position, step in enumerate(self.steps):
            here, there = self.nodes[position], self.nodes[position + 1]
            expected = (step.edge.head, step.edge.tail) if step.forward else (step.edge.tail, step.edge.head)
            if expected != (here, there):
                raise ValueError(f"Step {position} does not connect {here} to {there}")
        return self

    @computed_field
    @property
    def trivial(self) -> bool:
        """True for the zero-hop path of a node matching both queries."""
        return not self.steps

    @property
    def hops(self) -> int:
        return len(self.steps)

    def sort_key(self) -> Tuple:
        return (len(self.steps), self.nodes, tuple((s.edge.id, s.forward) for s in self.steps))


class TraversalResult(BaseModel):
    """Paths of one query together with the graph pruned to those paths."""

    model_config = ConfigDict(frozen=True)

    source: str
    destination: str
    paths: Tuple[TraversalPath, ...] = ()
    graph: GlobalGraph = Field(default_factory=GlobalGraph)
