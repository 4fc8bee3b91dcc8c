"""
Sentence-to-graph inference.

Pipeline: enumerate spans -> span representations -> entity typing ->
discard spans typed "none" -> attributes on the surviving spans ->
relations on every ordered pair of surviving spans -> KnowledgeGraph.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import torch

from app.schemas.graph import AttributeLabel, EntitySpan, KnowledgeGraph, RelationEdge
from app.schemas.model_config import ModelConfig
from app.services.extractor.classifiers import (
    classify_attributes,
    classify_entities,
    classify_relations,
    labels_above,
)
from app.services.extractor.model import SpearModel
from app.utils.exceptions import ConfigError, ContractViolation
from app.utils.spans import enumerate_spans

logger = logging.getLogger(__name__)


def extract(sentence: Sequence[str], model: SpearModel, config: Optional[ModelConfig] = None) -> KnowledgeGraph:
    """
    Extract the knowledge graph of one tokenized sentence.

    Args:
        sentence: Word tokens
        model: Trained model in evaluation mode; only read
        config: Thresholds and span cap; defaults to the model's own config

    Returns:
        KnowledgeGraph that passes validate_graph without errors

    Raises:
        InputTooLongError: If the encoder cannot take the sentence
        ConfigError: If config.max_span_len exceeds the model's width table
        ContractViolation: If the model is still in training mode
    """
    config = config or model.config
    if config.max_span_len > model.widths.max_len:
        raise ConfigError(
            f"max_span_len {config.max_span_len} exceeds the model's width table ({model.widths.max_len})"
        )
    if model.training:
        raise ContractViolation("extract needs a model in evaluation mode; call model.eval() first")

    tokens = tuple(sentence)
    with torch.no_grad():
        emb = model.encoder.encode(tokens)
        spans = enumerate_spans(len(tokens), config.max_span_len)
        representations = model.span_representations(emb, spans)
        predicted = classify_entities(representations, model).argmax(dim=-1).tolist()

        survivors = [(rep, label) for rep, label in zip(representations, predicted) if label != 0]
        entities = [
            EntitySpan(start=rep.span[0], end=rep.span[1], entity_type=model.entity_labels[label])
            for rep, label in survivors
        ]

        attributes: List[AttributeLabel] = []
        if entities:
            attribute_probabilities = classify_attributes([rep for rep, _ in survivors], model)
            for entity, row in zip(entities, attribute_probabilities):
                for label in labels_above(row, model.attribute_labels, config.attribute_threshold):
                    attributes.append(AttributeLabel(entity=entity, attribute_type=label))

        ordered_pairs = [(head, tail) for head in entities for tail in entities if head != tail]
        relations: List[RelationEdge] = []
        if ordered_pairs:
            pairs = [model.pair_representation(emb, head, tail) for head, tail in ordered_pairs]
            relation_probabilities = classify_relations(pairs, model)
            for (head, tail), row in zip(ordered_pairs, relation_probabilities):
                for label in labels_above(row, model.relation_labels, config.relation_threshold):
                    relations.append(RelationEdge(head=head, tail=tail, relation_type=label))

    logger.debug(
        f"Extracted {len(entities)} entities, {len(attributes)} attributes, "
        f"{len(relations)} relations from {len(tokens)} tokens"
    )
    return KnowledgeGraph(
        tokens=tokens,
        entities=tuple(entities),
        attributes=tuple(attributes),
        relations=tuple(relations),
    )


def extract_many(
    sentences: Sequence[Sequence[str]],
    model: SpearModel,
    config: Optional[ModelConfig] = None,
    workers: int = 1,
) -> List[KnowledgeGraph]:
    """
    Extract graphs for many sentences; results keep the input order.

    Inference only reads the model, so sentences may run on a thread pool.
    """
    if model.training:
        raise ContractViolation("extract_many needs a model in evaluation mode; call model.eval() first")
    if workers <= 1 or len(sentences) <= 1:
        return [extract(tokens, model, config) for tokens in sentences]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="extract_worker") as executor:
        return list(executor.map(lambda tokens: extract(tokens, model, config), sentences))
