"""
End-to-end training of the extraction model.

The joint loss of a sentence is the sum of
  - entity cross-entropy over gold spans and sampled non-entity spans,
  - attribute binary cross-entropy over gold entities (full 0/1 targets),
  - relation binary cross-entropy over gold-related pairs and sampled
    unrelated pairs of gold entities.
Attribute and relation heads only ever see gold entities while training.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch
import torch.nn.functional as F
from transformers import get_linear_schedule_with_warmup

from app.core.logging import log_event
from app.schemas.corpus import AnnotatedSentence, NegativeSamples
from app.schemas.graph import EntitySpan
from app.schemas.model_config import EpochLoss, ModelConfig, TrainingLog
from app.services.corpus_service import CorpusService
from app.services.encoder import TextEncoder, build_encoder
from app.services.extractor.model import SpearModel
from app.services.schema_service import SchemaService
from app.utils.exceptions import EmptyCorpusError, ValidationError

logger = logging.getLogger(__name__)

# Keeps per-sentence negative seeds distinct across epochs
_EPOCH_SEED_STRIDE = 1_000_003


@dataclass
class LossBreakdown:
    entity: torch.Tensor
    attribute: torch.Tensor
    relation: torch.Tensor

    @property
    def total(self) -> torch.Tensor:
        return self.entity + self.attribute + self.relation


def sentence_loss(model: SpearModel, sentence: AnnotatedSentence, negatives: NegativeSamples) -> LossBreakdown:
    """
    Joint loss of one sentence given its sampled negatives.

    Gold entities longer than the model's span cap cannot be represented and
    are left out, together with the relations touching them.
    """
    emb = model.encoder.encode(sentence.tokens)
    zero = emb.vectors.new_zeros(())
    max_len = model.config.max_span_len

    entity_index = {label: i for i, label in enumerate(model.entity_labels)}
    # Open schemata may carry entity types the model has no class for
    gold = [e for e in sentence.gold.entities if e.length <= max_len and e.entity_type in entity_index]
    if len(gold) < len(sentence.gold.entities):
        logger.debug(f"Sentence {sentence.sentence_id}: skipped entities longer than {max_len} tokens or of unknown type")

    # Entities
    spans: List[Tuple[int, int]] = [e.span for e in gold]
    targets: List[int] = [entity_index[e.entity_type] for e in gold]
    for span in sorted(negatives.entity_negatives):
        spans.append(span)
        targets.append(0)
    if spans:
        vectors = torch.stack([r.vector for r in model.span_representations(emb, spans)])
        entity_loss = F.cross_entropy(
            model.entity_logits(vectors),
            torch.tensor(targets, dtype=torch.long, device=vectors.device),
        )
    else:
        entity_loss = zero

    # Attributes, on gold entities only
    if gold:
        vectors = torch.stack([r.vector for r in model.span_representations(emb, gold)])
        attribute_targets = vectors.new_zeros((len(gold), len(model.attribute_labels)))
        attribute_index = {label: i for i, label in enumerate(model.attribute_labels)}
        row_of = {entity: row for row, entity in enumerate(gold)}
        for attribute in sentence.gold.attributes:
            if attribute.entity in row_of and attribute.attribute_type in attribute_index:
                attribute_targets[row_of[attribute.entity], attribute_index[attribute.attribute_type]] = 1.0
        attribute_loss = F.binary_cross_entropy_with_logits(model.attribute_logits(vectors), attribute_targets)
    else:
        attribute_loss = zero

    # Relations over gold-entity pairs
    relation_index = {label: i for i, label in enumerate(model.relation_labels)}
    kept = set(gold)
    positive: Dict[Tuple[EntitySpan, EntitySpan], List[int]] = {}
    for relation in sentence.gold.relations:
        if relation.head in kept and relation.tail in kept and relation.relation_type in relation_index:
            positive.setdefault((relation.head, relation.tail), []).append(relation_index[relation.relation_type])
    pairs = sorted(positive, key=lambda p: (p[0].sort_key(), p[1].sort_key()))
    pairs += sorted(
        (p for p in negatives.relation_negatives if p[0] in kept and p[1] in kept and p not in positive),
        key=lambda p: (p[0].sort_key(), p[1].sort_key()),
    )
    if pairs:
        vectors = torch.stack([model.pair_representation(emb, head, tail).vector for head, tail in pairs])
        relation_targets = vectors.new_zeros((len(pairs), len(model.relation_labels)))
        for row, pair in enumerate(pairs):
            for column in positive.get(pair, []):
                relation_targets[row, column] = 1.0
        relation_loss = F.binary_cross_entropy_with_logits(model.relation_logits(vectors), relation_targets)
    else:
        relation_loss = zero

    return LossBreakdown(entity=entity_loss, attribute=attribute_loss, relation=relation_loss)


def negatives_for(sentence: AnnotatedSentence, config: ModelConfig, epoch: int, index: int) -> NegativeSamples:
    """Negatives of one sentence for one epoch, seeded from the config seed."""
    seed = config.seed + epoch * _EPOCH_SEED_STRIDE + index
    return CorpusService.negative_samples(
        sentence,
        entity_count=config.neg_entity_count,
        relation_count=config.neg_relation_count,
        max_len=config.max_span_len,
        seed=seed,
    )


def train(
    corpus: Sequence[AnnotatedSentence],
    config: ModelConfig,
    encoder: Optional[TextEncoder] = None,
) -> Tuple[SpearModel, TrainingLog]:
    """
    Train a model from scratch.

    Args:
        corpus: Schema-valid annotated sentences
        config: Model and optimisation settings
        encoder: Encoder to fine-tune; built from config.encoder_name when omitted

    Returns:
        Tuple of (trained model in evaluation mode, one loss entry per epoch)

    Raises:
        EmptyCorpusError: If the corpus is empty
        ValidationError: If a sentence is not valid under config.graph_schema
    """
    if not corpus:
        raise EmptyCorpusError("Cannot train on an empty corpus")
    for index, sentence in enumerate(corpus):
        report = SchemaService.validate_graph(sentence.gold, config.graph_schema)
        if not report.is_valid:
            raise ValidationError(report.first_error().message, sentence_index=index)

    torch.manual_seed(config.seed)
    if encoder is None:
        encoder = build_encoder(config.encoder_name)
    model = SpearModel(config, encoder)

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay)
    steps_per_epoch = math.ceil(len(corpus) / config.batch_size)
    total_steps = steps_per_epoch * config.epochs
    scheduler = get_linear_schedule_with_warmup(
        optimizer,
        num_warmup_steps=int(config.warmup_proportion * total_steps),
        num_training_steps=total_steps,
    )
    order_rng = np.random.default_rng(config.seed)

    log_event(logger, "training_started", sentences=len(corpus), epochs=config.epochs, encoder=encoder.name)
    training_log = TrainingLog()
    for epoch in range(1, config.epochs + 1):
        model.train()
        order = order_rng.permutation(len(corpus)).tolist()
        sums = {"loss": 0.0, "entity": 0.0, "attribute": 0.0, "relation": 0.0}

        for batch_start in range(0, len(order), config.batch_size):
            batch = order[batch_start:batch_start + config.batch_size]
            optimizer.zero_grad()
            breakdowns = [
                sentence_loss(model, corpus[i], negatives_for(corpus[i], config, epoch, i)) for i in batch
            ]
            loss = torch.stack([b.total for b in breakdowns]).mean()
            # A batch with nothing to classify has a constant loss
            if loss.requires_grad:
                loss.backward()
                torch.nn.utils.clip_grad_norm_(model.parameters(), config.max_grad_norm)
                optimizer.step()
            scheduler.step()

            for b in breakdowns:
                sums["loss"] += float(b.total.detach())
                sums["entity"] += float(b.entity.detach())
                sums["attribute"] += float(b.attribute.detach())
                sums["relation"] += float(b.relation.detach())

        n = len(corpus)
        entry = EpochLoss(
            epoch=epoch,
            loss=sums["loss"] / n,
            entity_loss=sums["entity"] / n,
            attribute_loss=sums["attribute"] / n,
            relation_loss=sums["relation"] / n,
        )
        training_log.epochs.append(entry)
        log_event(logger, "epoch_completed", **entry.model_dump())

    model.eval()
    log_event(logger, "training_completed", final_loss=training_log.losses[-1])
    return model, training_log
