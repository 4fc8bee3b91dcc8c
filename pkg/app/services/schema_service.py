"""
Graph schema registry and structural validation.

This module provides the builtin schemata (scientific claims and ethnographic
mental models), loading of custom schemata from JSON, and validation of sentence
graphs against a schema.
"""

import hashlib
import json
import logging
from collections import Counter
from typing import IO, List, Union

from pydantic import ValidationError as PydanticValidationError

from app.core.constants import BUILTIN_SCHEMA_NAMES, ETHNOGRAPHIC_SCHEMA, SCIENTIFIC_CLAIMS_SCHEMA
from app.schemas.graph import KnowledgeGraph, SchemaDef, Severity, ValidationReport, Violation
from app.utils.exceptions import ConfigError, NotFoundError, ParseError

logger = logging.getLogger(__name__)

_CLAIM_ATTRIBUTES = frozenset({
    "causation", "comparison", "indicates", "increases", "decreases", "correlation", "test",
})

_BUILTIN_SCHEMATA = {
    SCIENTIFIC_CLAIMS_SCHEMA: SchemaDef(
        name=SCIENTIFIC_CLAIMS_SCHEMA,
        entity_types=frozenset({"factor", "association", "magnitude", "evidence", "epistemic", "qualifier"}),
        attribute_types=_CLAIM_ATTRIBUTES,
        relation_types=frozenset({"arg0", "arg1", "comp_to", "modifier", "q+", "q-", "subtype"}),
        attribute_scope={attribute: frozenset({"association"}) for attribute in _CLAIM_ATTRIBUTES},
    ),
    # Only part of the ethnographic vocabulary is published, hence open=True
    ETHNOGRAPHIC_SCHEMA: SchemaDef(
        name=ETHNOGRAPHIC_SCHEMA,
        entity_types=frozenset({"actor", "concept", "qualifier"}),
        attribute_types=frozenset({"spirituality", "action/event", "influence", "gender"}),
        relation_types=frozenset({
            "agent/poss", "t+", "forPurpose", "hasFunction", "arg0", "arg1", "modifier", "q+", "q-",
        }),
        open=True,
    ),
}


class SchemaService:
    """
    Lookup, persistence and validation of graph schemata.
    """

    @staticmethod
    def builtin_schema(name: str) -> SchemaDef:
        """
        Return one of the builtin schemata.

        Args:
            name: "scientific-claims" or "ethnographic"

        Returns:
            The SchemaDef registered under that name

        Raises:
            NotFoundError: If no builtin schema has that name
        """
        schema = _BUILTIN_SCHEMATA.get(name)
        if schema is None:
            logger.warning(f"Unknown builtin schema requested: {name}")
            raise NotFoundError(
                "Schema", name, detail=f"Schema '{name}' not found; builtin schemata: {', '.join(BUILTIN_SCHEMA_NAMES)}"
            )
        return schema

    @staticmethod
    def load_schema(source: Union[bytes, str, IO]) -> SchemaDef:
        """
        Parse a schema from its JSON form (as written by dump_schema).

        Raises:
            ParseError: If the JSON is malformed
            ConfigError: If the schema violates its invariants
        """
        if hasattr(source, "read"):
            source = source.read()
        try:
            raw = json.loads(source)
        except json.JSONDecodeError as e:
            raise ParseError(f"Malformed schema JSON: {e.msg}", line=e.lineno, column=e.colno) from e
        try:
            return SchemaDef.model_validate(raw)
        except PydanticValidationError as e:
            raise ConfigError(f"Invalid schema: {e.errors()[0]['msg']}") from e

    @staticmethod
    def resolve_schema(name_or_path: str) -> SchemaDef:
        """Builtin schema by name, otherwise a schema JSON file path."""
        if name_or_path in _BUILTIN_SCHEMATA:
            return _BUILTIN_SCHEMATA[name_or_path]
        try:
            with open(name_or_path, "rb") as handle:
                return SchemaService.load_schema(handle)
        except FileNotFoundError:
            raise NotFoundError(
                "Schema",
                name_or_path,
                detail=f"Schema '{name_or_path}' is neither a builtin ({', '.join(BUILTIN_SCHEMA_NAMES)}) nor a readable file",
            )

    @staticmethod
    def dump_schema(schema: SchemaDef) -> str:
        """Canonical JSON text of a schema (sorted labels and keys)."""
        return json.dumps(schema.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def schema_fingerprint(schema: SchemaDef) -> str:
        """SHA-256 of the canonical JSON form."""
        return hashlib.sha256(SchemaService.dump_schema(schema).encode("utf-8")).hexdigest()

    @staticmethod
    def validate_graph(graph: KnowledgeGraph, schema: SchemaDef) -> ValidationReport:
        """
        Check a sentence graph against the structural invariants and a schema.

        Out-of-scope attributes, and unknown labels under an open schema, are
        warnings; every other problem is an error. The report is sorted, so it
        does not depend on the order elements were added in.

        Args:
            graph: Graph to validate
            schema: Vocabulary the labels must come from

        Returns:
            ValidationReport listing every violation (empty for valid graphs)
        """
        violations: List[Violation] = []
        n = len(graph.tokens)
        label_severity = Severity.WARNING if schema.open else Severity.ERROR

        def report(code: str, message: str, severity: Severity = Severity.ERROR) -> None:
            violations.append(Violation(code=code, severity=severity, message=message))

        known_entities = set(graph.entities)
        for entity in graph.entities:
            if entity.end < entity.start or entity.end >= n:
                report("span_out_of_range", f"Entity [{entity.start}, {entity.end}] outside sentence of {n} tokens")
            if entity.entity_type not in schema.entity_types:
                report("unknown_entity_type", f"Entity [{entity.start}, {entity.end}] has unknown type '{entity.entity_type}'", label_severity)

        span_counts = Counter(entity.span for entity in graph.entities)
        for (start, end), count in span_counts.items():
            if count > 1:
                types = sorted(e.entity_type for e in graph.entities if e.span == (start, end))
                report("duplicate_span", f"Span [{start}, {end}] labeled {count} times: {types}")

        for attribute, count in Counter(graph.attributes).items():
            entity = attribute.entity
            where = f"[{entity.start}, {entity.end}] {entity.entity_type}"
            if count > 1:
                report("duplicate_attribute", f"Attribute '{attribute.attribute_type}' repeated on {where}")
            if entity not in known_entities:
                report("dangling_attribute", f"Attribute '{attribute.attribute_type}' references missing entity {where}")
            if attribute.attribute_type not in schema.attribute_types:
                report("unknown_attribute_type", f"Unknown attribute '{attribute.attribute_type}' on {where}", label_severity)
            scope = schema.attribute_scope.get(attribute.attribute_type)
            if scope is not None and entity.entity_type not in scope:
                report(
                    "attribute_out_of_scope",
                    f"Attribute '{attribute.attribute_type}' on {where} outside scope {sorted(scope)}",
                    Severity.WARNING,
                )

        for relation, count in Counter(graph.relations).items():
            head, tail = relation.head, relation.tail
            where = f"[{head.start}, {head.end}] -{relation.relation_type}-> [{tail.start}, {tail.end}]"
            if count > 1:
                report("duplicate_relation", f"Relation {where} repeated")
            if head == tail:
                report("self_cycle", f"Relation {where} is a self-cycle")
            if head not in known_entities or tail not in known_entities:
                report("dangling_relation", f"Relation {where} references a missing entity")
            if relation.relation_type not in schema.relation_types:
                report("unknown_relation_type", f"Unknown relation type in {where}", label_severity)

        violations.sort(key=lambda v: (v.severity.value, v.code, v.message))
        return ValidationReport(violations=violations)
