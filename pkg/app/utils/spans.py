"""
Span enumeration and negative sampling.

All samplers draw uniformly without replacement with a numpy Generator seeded
from the caller, so a fixed seed always yields the same sample.
"""

from typing import Iterable, List, Set, Tuple

import numpy as np

from app.schemas.graph import EntitySpan, RelationEdge

Span = Tuple[int, int]


def enumerate_spans(n: int, max_len: int) -> List[Span]:
    """
    All spans of a sentence up to a length cap.

    Ordered by start, then by length.

    Args:
        n: Sentence length in tokens
        max_len: Longest span in tokens

    Returns:
        Inclusive (start, end) pairs; sum over l of (n - l + 1) of them
    """
    limit = min(max_len, n)
    return [
        (start, start + length - 1)
        for start in range(n)
        for length in range(1, limit + 1)
        if start + length - 1 < n
    ]


def _draw(pool: List, count: int, seed: int) -> List:
    if count <= 0 or not pool:
        return []
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(pool), size=min(count, len(pool)), replace=False)
    return [pool[i] for i in sorted(picked.tolist())]


def sample_negative_entities(
    n: int,
    gold_spans: Iterable[Span],
    count: int,
    max_len: int,
    seed: int,
) -> Set[Span]:
    """
    Draw spans that are not gold entities.

    Args:
        n: Sentence length in tokens
        gold_spans: (start, end) pairs of the gold entities
        count: Number of negatives wanted; fewer come back when the pool is smaller
        max_len: Longest span in tokens
        seed: Sampling seed

    Returns:
        Set of at most count distinct non-gold spans
    """
    gold = set(gold_spans)
    pool = [span for span in enumerate_spans(n, max_len) if span not in gold]
    return set(_draw(pool, count, seed))


def sample_negative_relations(
    gold_entities: Iterable[EntitySpan],
    gold_relations: Iterable[RelationEdge],
    count: int,
    seed: int,
) -> Set[Tuple[EntitySpan, EntitySpan]]:
    """
    Draw ordered pairs of gold entities with no gold relation between them.

    Args:
        gold_entities: Gold entities of the sentence
        gold_relations: Gold relations of the sentence
        count: Number of pairs wanted
        seed: Sampling seed

    Returns:
        Set of (head, tail) pairs with head != tail and no gold edge head -> tail
    """
    entities = sorted(set(gold_entities), key=EntitySpan.sort_key)
    related = {(relation.head, relation.tail) for relation in gold_relations}
    pool = [
        (head, tail)
        for head in entities
        for tail in entities
        if head != tail and (head, tail) not in related
    ]
    return set(_draw(pool, count, seed))
