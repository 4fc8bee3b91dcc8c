"""
Span-based joint entity, attribute and relation model.

Three linear heads sit on top of shared span representations:
  - entity head: mutually exclusive softmax over the entity types plus "none"
  - attribute head: independent sigmoid per attribute type
  - relation head: independent sigmoid per relation type, over span pairs
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import torch
from torch import nn

from app.schemas.model_config import ModelConfig
from app.services.encoder import (
    SpanRepresentation,
    TextEncoder,
    TokenEmbeddings,
    WidthEmbeddingTable,
    between_context,
    span_representation,
)
from app.services.encoder.pooling import SpanLike, span_bounds
from app.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairRepresentation:
    """
    Ordered (head, tail) pair vector.

    Layout: pooled-head ⊕ between ⊕ width-head ⊕ pooled-tail ⊕ between ⊕ width-tail,
    i.e. both span representations with e0 replaced by the between-context.
    """

    vector: torch.Tensor
    head: Tuple[int, int]
    tail: Tuple[int, int]


class SpearModel(nn.Module):
    """Encoder, width table and the three classification heads."""

    def __init__(self, config: ModelConfig, encoder: TextEncoder) -> None:
        super().__init__()
        self.config = config
        self.encoder = encoder
        self.widths = WidthEmbeddingTable(config.max_span_len, config.width_dim)

        schema = config.graph_schema
        self.entity_labels: List[str] = config.entity_labels
        self.attribute_labels: List[str] = schema.attribute_labels
        self.relation_labels: List[str] = schema.relation_labels

        self.entity_classifier = nn.Linear(self.span_dim, len(self.entity_labels))
        self.attribute_classifier = nn.Linear(self.span_dim, len(self.attribute_labels))
        self.relation_classifier = nn.Linear(self.pair_dim, len(self.relation_labels))
        self.dropout = nn.Dropout(config.dropout)

        logger.debug(
            f"Built model: d={encoder.hidden_size}, span_dim={self.span_dim}, pair_dim={self.pair_dim}, "
            f"{len(self.entity_labels)} entity classes, {len(self.attribute_labels)} attributes, "
            f"{len(self.relation_labels)} relations"
        )

    @property
    def span_dim(self) -> int:
        return 2 * self.encoder.hidden_size + self.config.width_dim

    @property
    def pair_dim(self) -> int:
        return 2 * self.span_dim

    def span_representations(
        self,
        emb: TokenEmbeddings,
        spans: Sequence[SpanLike],
    ) -> List[SpanRepresentation]:
        return [span_representation(emb, span, self.widths) for span in spans]

    def pair_representation(self, emb: TokenEmbeddings, head: SpanLike, tail: SpanLike) -> PairRepresentation:
        head_bounds, tail_bounds = span_bounds(head), span_bounds(tail)
        context = between_context(emb, head_bounds, tail_bounds)
        d = self.encoder.hidden_size

        def with_context(span: Tuple[int, int]) -> torch.Tensor:
            vector = span_representation(emb, span, self.widths).vector
            return torch.cat([vector[:d], context, vector[2 * d:]])

        vector = torch.cat([with_context(head_bounds), with_context(tail_bounds)])
        return PairRepresentation(vector=vector, head=head_bounds, tail=tail_bounds)

    # ---- logits; dropout is active in training mode only ----

    def _checked(self, vectors: torch.Tensor, classifier: nn.Linear, head: str) -> torch.Tensor:
        if vectors.shape[-1] != classifier.in_features:
            raise ConfigError(
                f"{head} classifier expects {classifier.in_features}-dimensional input, "
                f"got {vectors.shape[-1]}"
            )
        return classifier(self.dropout(vectors))

    def entity_logits(self, vectors: torch.Tensor) -> torch.Tensor:
        return self._checked(vectors, self.entity_classifier, "Entity")

    def attribute_logits(self, vectors: torch.Tensor) -> torch.Tensor:
        return self._checked(vectors, self.attribute_classifier, "Attribute")

    def relation_logits(self, vectors: torch.Tensor) -> torch.Tensor:
        return self._checked(vectors, self.relation_classifier, "Relation")
