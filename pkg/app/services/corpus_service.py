"""
Annotated corpus loading, writing, splitting and negative sampling.

The corpus file is JSON: either a bare list of sentence records or a versioned
object {"format_version": 1, "sentences": [...]}. Each record holds the tokens,
the entities (inclusive word spans), attributes and relations, where
attributes and relations point into the entity list by index.
"""

import json
import logging
import re
from collections import Counter
from decimal import ROUND_HALF_DOWN, Decimal
from typing import IO, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from app.core.constants import CORPUS_FORMAT_VERSION
from app.schemas.corpus import (
    AnnotatedSentence,
    AttributeRecord,
    CorpusFile,
    EntityRecord,
    LabelStatistics,
    NegativeSamples,
    RelationRecord,
    SentenceRecord,
)
from app.schemas.graph import AttributeLabel, EntitySpan, KnowledgeGraph, RelationEdge, SchemaDef
from app.services.schema_service import SchemaService
from app.utils.exceptions import DegenerateSplitError, ParseError, ValidationError
from app.utils.spans import Span, sample_negative_entities, sample_negative_relations

logger = logging.getLogger(__name__)

_TOKEN_PATTERN = re.compile(r"\w+(?:[-'’]\w+)*|[^\w\s]")

# Open placeholder vocabulary: unknown labels only warn, structure still errors
_STRUCTURAL_SCHEMA = SchemaDef(
    name="structural",
    entity_types=frozenset({"<entity>"}),
    attribute_types=frozenset({"<attribute>"}),
    relation_types=frozenset({"<relation>"}),
    open=True,
)


class CorpusService:
    """
    Conversion between corpus files and AnnotatedSentence lists.
    """

    @staticmethod
    def tokenize_sentence(text: str) -> List[str]:
        """
        Split raw text into word and punctuation tokens.

        Example:
            >>> CorpusService.tokenize_sentence("Movement restriction greatly reduced infections.")
            ['Movement', 'restriction', 'greatly', 'reduced', 'infections', '.']
        """
        return _TOKEN_PATTERN.findall(text)

    @staticmethod
    def record_to_graph(record: SentenceRecord, sentence_index: int) -> KnowledgeGraph:
        """
        Resolve index references of a sentence record into a graph.

        Raises:
            ValidationError: If an attribute or relation references a missing entity index
        """
        entities = [EntitySpan(start=e.start, end=e.end, entity_type=e.type) for e in record.entities]

        def entity_at(index: int, field: str) -> EntitySpan:
            if not 0 <= index < len(entities):
                raise ValidationError(
                    f"entity index {index} out of range (sentence has {len(entities)} entities)",
                    sentence_index=sentence_index,
                    field=field,
                )
            return entities[index]

        attributes = [
            AttributeLabel(entity=entity_at(a.entity, "attributes"), attribute_type=label)
            for a in record.attributes
            for label in a.types
        ]
        relations = [
            RelationEdge(
                head=entity_at(r.head, "relations"),
                tail=entity_at(r.tail, "relations"),
                relation_type=r.type,
            )
            for r in record.relations
        ]
        return KnowledgeGraph(
            tokens=tuple(record.tokens),
            entities=tuple(entities),
            attributes=tuple(attributes),
            relations=tuple(relations),
        )

    @staticmethod
    def graph_to_record(graph: KnowledgeGraph, sentence_id: Optional[str] = None) -> SentenceRecord:
        """Inverse of record_to_graph; entities keep the graph's canonical order."""
        index = {entity: i for i, entity in enumerate(graph.entities)}
        attributes = [
            AttributeRecord(entity=index[entity], types=graph.attributes_of(entity))
            for entity in graph.entities
            if graph.attributes_of(entity)
        ]
        return SentenceRecord(
            id=sentence_id,
            tokens=list(graph.tokens),
            entities=[EntityRecord(start=e.start, end=e.end, type=e.entity_type) for e in graph.entities],
            attributes=attributes,
            relations=[
                RelationRecord(head=index[r.head], tail=index[r.tail], type=r.relation_type)
                for r in graph.relations
            ],
        )

    @staticmethod
    def decode_text(raw: bytes) -> str:
        """
        Decode an input file as UTF-8.

        Raises:
            ParseError: If the bytes are not valid UTF-8 (names the byte offset)
        """
        try:
            return bytes(raw).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"Input is not valid UTF-8: invalid byte at offset {e.start}") from e

    @staticmethod
    def load_corpus(
        source: Union[bytes, str, IO],
        schema: Optional[SchemaDef] = None,
    ) -> List[AnnotatedSentence]:
        """
        Parse and validate a corpus file.

        Args:
            source: JSON bytes/text or a readable stream
            schema: Vocabulary to validate labels against; structure only when None

        Returns:
            One AnnotatedSentence per record, in file order

        Raises:
            ParseError: If the JSON is malformed or the format version is unsupported
            ValidationError: If a sentence violates an invariant (names the sentence index)
        """
        if hasattr(source, "read"):
            source = source.read()
        if isinstance(source, (bytes, bytearray)):
            source = CorpusService.decode_text(source)
        try:
            raw = json.loads(source)
        except json.JSONDecodeError as e:
            raise ParseError(f"Malformed corpus JSON: {e.msg}", line=e.lineno, column=e.colno) from e

        if isinstance(raw, dict):
            version = raw.get("format_version", CORPUS_FORMAT_VERSION)
            if version != CORPUS_FORMAT_VERSION:
                raise ParseError(f"Unsupported corpus format_version {version!r}")
            items = raw.get("sentences", [])
        else:
            items = raw
        if not isinstance(items, list):
            raise ParseError("Corpus must be a list of sentence records")

        validation_schema = schema or _STRUCTURAL_SCHEMA
        corpus: List[AnnotatedSentence] = []
        seen_ids: Set[str] = set()
        for index, item in enumerate(items):
            try:
                record = SentenceRecord.model_validate(item)
            except PydanticValidationError as e:
                first = e.errors()[0]
                field = ".".join(str(part) for part in first["loc"]) or None
                raise ValidationError(first["msg"], sentence_index=index, field=field) from e

            try:
                graph = CorpusService.record_to_graph(record, index)
            except PydanticValidationError as e:
                raise ValidationError(e.errors()[0]["msg"], sentence_index=index, field="entities") from e
            report = SchemaService.validate_graph(graph, validation_schema)
            if not report.is_valid:
                raise ValidationError(report.first_error().message, sentence_index=index)

            sentence_id = record.id if record.id is not None else str(index)
            if sentence_id in seen_ids:
                raise ValidationError(f"duplicate sentence id '{sentence_id}'", sentence_index=index, field="id")
            seen_ids.add(sentence_id)
            corpus.append(AnnotatedSentence(sentence_id=sentence_id, gold=graph))

        logger.info(f"Loaded corpus with {len(corpus)} sentences")
        return corpus

    @staticmethod
    def write_corpus(corpus: Sequence[AnnotatedSentence]) -> bytes:
        """Serialize sentences in the versioned corpus format (byte-stable)."""
        document = CorpusFile(
            format_version=CORPUS_FORMAT_VERSION,
            sentences=[CorpusService.graph_to_record(s.gold, s.sentence_id) for s in corpus],
        )
        text = json.dumps(document.model_dump(mode="json"), ensure_ascii=False, indent=2)
        return (text + "\n").encode("utf-8")

    @staticmethod
    def split_corpus(
        corpus: Sequence[AnnotatedSentence],
        test_fraction: float,
        seed: int,
    ) -> Tuple[List[AnnotatedSentence], List[AnnotatedSentence]]:
        """
        Randomized train/test partition.

        The test size is n * test_fraction rounded half-down (515 * 0.1 -> 51),
        clamped so both parts are non-empty.

        Raises:
            ValueError: If test_fraction is outside (0, 1)
            DegenerateSplitError: If the corpus has fewer than 2 sentences
        """
        if not 0.0 < test_fraction < 1.0:
            raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
        n = len(corpus)
        if n < 2:
            raise DegenerateSplitError(f"Cannot split a corpus of {n} sentence(s)")

        test_size = int((Decimal(n) * Decimal(str(test_fraction))).to_integral_value(rounding=ROUND_HALF_DOWN))
        test_size = min(max(test_size, 1), n - 1)

        order = np.random.default_rng(seed).permutation(n)
        test_indices = set(order[:test_size].tolist())
        train = [s for i, s in enumerate(corpus) if i not in test_indices]
        test = [s for i, s in enumerate(corpus) if i in test_indices]
        logger.debug(f"Split {n} sentences into {len(train)} train / {len(test)} test (seed={seed})")
        return train, test

    @staticmethod
    def sample_negative_entities(
        sentence: AnnotatedSentence,
        count: int,
        max_len: int,
        seed: int,
    ) -> Set[Span]:
        """Up to count non-gold spans of the sentence."""
        gold_spans = [entity.span for entity in sentence.gold.entities]
        return sample_negative_entities(len(sentence.tokens), gold_spans, count, max_len, seed)

    @staticmethod
    def sample_negative_relations(
        gold_entities: Iterable[EntitySpan],
        gold_relations: Iterable[RelationEdge],
        count: int,
        seed: int,
    ) -> Set[Tuple[EntitySpan, EntitySpan]]:
        """Up to count ordered gold-entity pairs carrying no gold relation."""
        return sample_negative_relations(gold_entities, gold_relations, count, seed)

    @staticmethod
    def negative_samples(
        sentence: AnnotatedSentence,
        entity_count: int,
        relation_count: int,
        max_len: int,
        seed: int,
    ) -> NegativeSamples:
        """Entity and relation negatives of one sentence for one training epoch."""
        return NegativeSamples(
            entity_negatives=frozenset(
                CorpusService.sample_negative_entities(sentence, entity_count, max_len, seed)
            ),
            relation_negatives=frozenset(
                sample_negative_relations(sentence.gold.entities, sentence.gold.relations, relation_count, seed)
            ),
        )

    @staticmethod
    def label_statistics(corpus: Iterable[AnnotatedSentence]) -> LabelStatistics:
        """Support of every label over a corpus."""
        entities: Counter = Counter()
        attributes: Counter = Counter()
        relations: Counter = Counter()
        sentences = 0
        for sentence in corpus:
            sentences += 1
            entities.update(e.entity_type for e in sentence.gold.entities)
            attributes.update(a.attribute_type for a in sentence.gold.attributes)
            relations.update(r.relation_type for r in sentence.gold.relations)
        return LabelStatistics(
            sentences=sentences,
            entities=dict(sorted(entities.items())),
            attributes=dict(sorted(attributes.items())),
            relations=dict(sorted(relations.items())),
        )
