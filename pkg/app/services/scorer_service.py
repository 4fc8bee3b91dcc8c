"""
Entity-constrained precision/recall/F1 scoring.

Entities match on exact (start, end, type). A relation only counts as correct
when its type matches and both endpoints match a gold entity exactly (span and
type); an attribute only when its entity matches exactly and carries the same
attribute type. Micro averages pool the counts of every label in a section.
"""

import logging
from typing import Iterable, Optional, Sequence, Set, Tuple, Union

from app.core.logging import log_event
from app.schemas.evaluation import ClassCounts, EvalReport, LabelCounts, LabelScore, Scores, SectionReport
from app.schemas.graph import KnowledgeGraph, SchemaDef
from app.utils.exceptions import AlignmentError

logger = logging.getLogger(__name__)


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    return 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0


def precision_recall_f1(tp: int, fp: int, fn: int) -> Tuple[float, float, float]:
    """P, R and F1 as fractions; each is 0 when its denominator is 0."""
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    return precision, recall, f1_score(precision, recall)


def _count(gold: Set, pred: Set, label_of) -> ClassCounts:
    counts = ClassCounts()
    for element in pred:
        if element in gold:
            counts.add(label_of(element), tp=1)
        else:
            counts.add(label_of(element), fp=1)
    for element in gold - pred:
        counts.add(label_of(element), fn=1)
    return counts


class ScorerService:
    """
    Matching and aggregation of gold vs. predicted graphs.
    """

    @staticmethod
    def match_entities(gold: KnowledgeGraph, pred: KnowledgeGraph) -> ClassCounts:
        """Per entity type counts under exact span-and-type matching."""
        return _count(set(gold.entities), set(pred.entities), lambda e: e.entity_type)

    @staticmethod
    def match_relations(gold: KnowledgeGraph, pred: KnowledgeGraph) -> ClassCounts:
        """Per relation type counts; both endpoints must match exactly."""
        return _count(set(gold.relations), set(pred.relations), lambda r: r.relation_type)

    @staticmethod
    def match_attributes(gold: KnowledgeGraph, pred: KnowledgeGraph) -> ClassCounts:
        """Per attribute type counts; the entity must match exactly."""
        return _count(set(gold.attributes), set(pred.attributes), lambda a: a.attribute_type)

    @staticmethod
    def micro_average(counts: Union[ClassCounts, Iterable[Union[ClassCounts, LabelCounts]]]) -> Scores:
        """
        Micro-averaged P/R/F1 from pooled counts.

        Accepts one ClassCounts, or any mix of ClassCounts and LabelCounts.
        """
        if isinstance(counts, ClassCounts):
            counts = [counts]
        tp = fp = fn = 0
        for item in counts:
            for label_counts in item.values() if isinstance(item, ClassCounts) else [item]:
                tp += label_counts.tp
                fp += label_counts.fp
                fn += label_counts.fn
        precision, recall, f1 = precision_recall_f1(tp, fp, fn)
        return Scores(precision=precision, recall=recall, f1=f1)

    @staticmethod
    def section_report(counts: ClassCounts, labels: Optional[Iterable[str]] = None) -> SectionReport:
        """Rows for every label in counts (plus any extra labels given), sorted."""
        all_labels = sorted(set(counts.labels()) | set(labels or ()))
        rows = []
        for label in all_labels:
            c = counts[label]
            precision, recall, f1 = precision_recall_f1(c.tp, c.fp, c.fn)
            rows.append(LabelScore(
                label=label, precision=precision, recall=recall, f1=f1,
                support=c.support, tp=c.tp, fp=c.fp, fn=c.fn,
            ))
        return SectionReport(rows=rows, micro=ScorerService.micro_average(counts))

    @staticmethod
    def evaluate(
        gold_corpus: Sequence[KnowledgeGraph],
        pred_corpus: Sequence[KnowledgeGraph],
        schema: Optional[SchemaDef] = None,
    ) -> EvalReport:
        """
        Aggregate the three matchers over aligned corpora.

        Args:
            gold_corpus: Gold graphs
            pred_corpus: Predicted graphs, same order and length
            schema: When given, every schema label gets a row even if unseen

        Raises:
            AlignmentError: If the corpora differ in length or a pair covers different tokens
        """
        if len(gold_corpus) != len(pred_corpus):
            raise AlignmentError(
                f"Gold corpus has {len(gold_corpus)} sentences, predictions have {len(pred_corpus)}"
            )

        entities, attributes, relations = ClassCounts(), ClassCounts(), ClassCounts()
        for index, (gold, pred) in enumerate(zip(gold_corpus, pred_corpus)):
            if gold.tokens != pred.tokens:
                raise AlignmentError(f"Sentence {index}: gold and predicted tokens differ")
            entities = entities.merge(ScorerService.match_entities(gold, pred))
            attributes = attributes.merge(ScorerService.match_attributes(gold, pred))
            relations = relations.merge(ScorerService.match_relations(gold, pred))

        report = EvalReport(
            sentences=len(gold_corpus),
            entities=ScorerService.section_report(entities, schema.entity_types if schema else None),
            attributes=ScorerService.section_report(attributes, schema.attribute_types if schema else None),
            relations=ScorerService.section_report(relations, schema.relation_types if schema else None),
        )
        log_event(
            logger,
            "evaluation_completed",
            sentences=report.sentences,
            entity_f1=round(report.entities.micro.f1, 4),
            attribute_f1=round(report.attributes.micro.f1, 4),
            relation_f1=round(report.relations.micro.f1, 4),
        )
        return report
