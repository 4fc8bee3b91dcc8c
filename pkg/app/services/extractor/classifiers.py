"""
Probability outputs of the three heads.

Entity typing is a softmax over |entity types| + 1 classes (index 0 = none).
Attributes and relations are multi-label: one independent sigmoid per label,
and a label is predicted when its probability is >= the configured threshold.
"""

from typing import List, Sequence

import torch

from app.services.encoder import SpanRepresentation
from app.services.extractor.model import PairRepresentation, SpearModel
from app.utils.exceptions import ContractViolation


def _stack(vectors: List[torch.Tensor], width: int, like: torch.nn.Linear) -> torch.Tensor:
    if not vectors:
        return like.weight.new_zeros((0, width))
    return torch.stack(vectors)


def classify_entities(spans: Sequence[SpanRepresentation], model: SpearModel) -> torch.Tensor:
    """
    Per-span distribution over the entity classes.

    Returns:
        (k, |entity types| + 1) tensor whose rows sum to 1; column 0 is "none"

    Raises:
        ConfigError: If the span vectors do not match the classifier input size
    """
    vectors = _stack([s.vector for s in spans], model.entity_classifier.in_features, model.entity_classifier)
    return torch.softmax(model.entity_logits(vectors), dim=-1)


def classify_attributes(entity_spans: Sequence[SpanRepresentation], model: SpearModel) -> torch.Tensor:
    """
    Independent probability of every attribute type for each entity span.

    Returns:
        (k, |attribute types|) tensor, columns in model.attribute_labels order
    """
    vectors = _stack(
        [s.vector for s in entity_spans], model.attribute_classifier.in_features, model.attribute_classifier
    )
    return torch.sigmoid(model.attribute_logits(vectors))


def classify_relations(pairs: Sequence[PairRepresentation], model: SpearModel) -> torch.Tensor:
    """
    Independent probability of every relation type for each ordered pair.

    Returns:
        (k, |relation types|) tensor, columns in model.relation_labels order

    Raises:
        ContractViolation: If a pair relates a span to itself
    """
    for pair in pairs:
        if pair.head == pair.tail:
            raise ContractViolation(f"Relation pair {pair.head} -> {pair.tail} is a self-pair")
    vectors = _stack([p.vector for p in pairs], model.relation_classifier.in_features, model.relation_classifier)
    return torch.sigmoid(model.relation_logits(vectors))


def labels_above(probabilities: torch.Tensor, labels: Sequence[str], threshold: float) -> List[str]:
    """Labels whose probability reaches the threshold (p == threshold counts)."""
    return [label for label, p in zip(labels, probabilities.tolist()) if p >= threshold]
