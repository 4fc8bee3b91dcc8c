"""
Knowledge-graph data model.

A sentence graph is a directed multi-graph without self-cycles whose nodes are
typed token spans. Nodes carry zero or more Boolean attribute labels; edges are
typed relations between two distinct spans.
"""

from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


class SchemaDef(BaseModel):
    """Legal entity, attribute and relation vocabulary of a graph schema."""

    model_config = ConfigDict(frozen=True)

    name: str
    entity_types: FrozenSet[str]
    attribute_types: FrozenSet[str]
    relation_types: FrozenSet[str]
    attribute_scope: Dict[str, FrozenSet[str]] = Field(default_factory=dict)
    # Open schemata tolerate extra labels in loaded data (reported as warnings)
    open: bool = False

    @field_validator("entity_types", "attribute_types", "relation_types")
    @classmethod
    def validate_non_empty(cls, v: FrozenSet[str]) -> FrozenSet[str]:
        if not v:
            raise ValueError("Label set cannot be empty")
        return v

    @model_validator(mode="after")
    def validate_vocabulary(self) -> "SchemaDef":
        pairs = [
            ("entity_types", "attribute_types"),
            ("entity_types", "relation_types"),
            ("attribute_types", "relation_types"),
        ]
        for left, right in pairs:
            shared = getattr(self, left) & getattr(self, right)
            if shared:
                raise ValueError(f"{left} and {right} share labels: {sorted(shared)}")

        for attribute, scope in self.attribute_scope.items():
            if attribute not in self.attribute_types:
                raise ValueError(f"attribute_scope names unknown attribute '{attribute}'")
            unknown = scope - self.entity_types
            if unknown:
                raise ValueError(f"attribute_scope['{attribute}'] names unknown entity types {sorted(unknown)}")
        return self

    @field_serializer("entity_types", "attribute_types", "relation_types")
    def serialize_labels(self, labels: FrozenSet[str]) -> List[str]:
        return sorted(labels)

    @field_serializer("attribute_scope")
    def serialize_scope(self, scope: Dict[str, FrozenSet[str]]) -> Dict[str, List[str]]:
        return {attribute: sorted(scope[attribute]) for attribute in sorted(scope)}

    def __hash__(self) -> int:
        return hash((self.name, self.entity_types, self.attribute_types, self.relation_types))

    @property
    def entity_labels(self) -> List[str]:
        """Entity types in the fixed order used for classifier logits."""
        return sorted(self.entity_types)

    @property
    def attribute_labels(self) -> List[str]:
        """Attribute types in the fixed order used for classifier logits."""
        return sorted(self.attribute_types)

    @property
    def relation_labels(self) -> List[str]:
        """Relation types in the fixed order used for classifier logits."""
        return sorted(self.relation_types)


class EntitySpan(BaseModel):
    """Typed token span; start and end are inclusive 0-based word indices."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(ge=0)
    end: int = Field(ge=0)
    entity_type: str

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start, self.end)

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def sort_key(self) -> Tuple[int, int, str]:
        return (self.start, self.end, self.entity_type)


class AttributeLabel(BaseModel):
    model_config = ConfigDict(frozen=True)

    entity: EntitySpan
    attribute_type: str

    def sort_key(self) -> Tuple[int, int, str, str]:
        return (*self.entity.sort_key(), self.attribute_type)


class RelationEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    head: EntitySpan
    tail: EntitySpan
    relation_type: str

    def sort_key(self) -> Tuple:
        return (*self.head.sort_key(), *self.tail.sort_key(), self.relation_type)


class KnowledgeGraph(BaseModel):
    """
    Graph extracted from (or annotated on) one sentence.

    Element collections are kept in canonical sorted order, so two graphs with
    the same elements compare equal regardless of construction order.
    Structural problems are not rejected here; validate_graph reports them.
    """

    model_config = ConfigDict(frozen=True)

    tokens: Tuple[str, ...]
    entities: Tuple[EntitySpan, ...] = ()
    attributes: Tuple[AttributeLabel, ...] = ()
    relations: Tuple[RelationEdge, ...] = ()

    @model_validator(mode="after")
    def canonical_order(self) -> "KnowledgeGraph":
        object.__setattr__(self, "entities", tuple(sorted(self.entities, key=EntitySpan.sort_key)))
        object.__setattr__(self, "attributes", tuple(sorted(self.attributes, key=AttributeLabel.sort_key)))
        object.__setattr__(self, "relations", tuple(sorted(self.relations, key=RelationEdge.sort_key)))
        return self

    def attributes_of(self, entity: EntitySpan) -> List[str]:
        """Attribute types carried by an entity, sorted."""
        return sorted(a.attribute_type for a in self.attributes if a.entity == entity)

    def surface(self, entity: EntitySpan) -> str:
        """Text covered by an entity span."""
        return " ".join(self.tokens[entity.start:entity.end + 1])


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: str
    severity: Severity
    message: str


class ValidationReport(BaseModel):
    """Violations found in a graph; empty iff the graph is valid."""

    violations: List[Violation] = Field(default_factory=list)

    @property
    def errors(self) -> List[Violation]:
        return [v for v in self.violations if v.severity == Severity.ERROR]

    @property
    def warnings(self) -> List[Violation]:
        return [v for v in self.violations if v.severity == Severity.WARNING]

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def first_error(self) -> Optional[Violation]:
        errors = self.errors
        return errors[0] if errors else None
