"""
Span pooling operators.

A span is represented by the element-wise maximum of its word vectors,
concatenated with a context vector and a learned width embedding.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import torch
from torch import nn

from app.schemas.graph import EntitySpan
from app.services.encoder.base import TokenEmbeddings
from app.utils.exceptions import ContractViolation, EmptyPoolError

SpanLike = Union[EntitySpan, Tuple[int, int]]


def span_bounds(span: SpanLike) -> Tuple[int, int]:
    if isinstance(span, EntitySpan):
        return span.start, span.end
    return int(span[0]), int(span[1])


def maxpool(vectors: Union[torch.Tensor, Sequence[torch.Tensor]]) -> torch.Tensor:
    """
    Element-wise maximum over a non-empty list of equal-sized vectors.

    Raises:
        EmptyPoolError: If there is nothing to pool
        ContractViolation: If the vectors differ in dimension
    """
    if isinstance(vectors, torch.Tensor):
        stacked = vectors
    else:
        if len(vectors) == 0:
            raise EmptyPoolError("Cannot max-pool an empty list of vectors")
        if len({tuple(v.shape) for v in vectors}) > 1:
            raise ContractViolation("Cannot max-pool vectors of different dimensions")
        stacked = torch.stack(list(vectors))
    if stacked.shape[0] == 0:
        raise EmptyPoolError("Cannot max-pool an empty list of vectors")
    return stacked.max(dim=0).values


class WidthEmbeddingTable(nn.Module):
    """One learned vector per span length 1..max_len."""

    def __init__(self, max_len: int, dim: int) -> None:
        super().__init__()
        self.max_len = max_len
        self.dim = dim
        self.embedding = nn.Embedding(max_len, dim)

    def lookup(self, length: int) -> torch.Tensor:
        if not 1 <= length <= self.max_len:
            raise IndexError(f"Span length {length} outside 1..{self.max_len}")
        return self.embedding.weight[length - 1]


@dataclass(frozen=True)
class SpanRepresentation:
    """x(span) = pooled span ⊕ context ⊕ width, with the span it came from."""

    vector: torch.Tensor
    span: Tuple[int, int]


def _check_span(emb: TokenEmbeddings, start: int, end: int) -> None:
    if not 0 <= start <= end < len(emb):
        raise IndexError(f"Span ({start}, {end}) invalid for a sentence of {len(emb)} tokens")


def span_representation(
    emb: TokenEmbeddings,
    span: SpanLike,
    widths: WidthEmbeddingTable,
) -> SpanRepresentation:
    """
    Build x(span) = maxpool(e_start..e_end) ⊕ e0 ⊕ w_length.

    Raises:
        IndexError: If the span is reversed, outside the sentence, or longer than the width table
    """
    start, end = span_bounds(span)
    _check_span(emb, start, end)
    pooled = maxpool(emb.vectors[start:end + 1])
    vector = torch.cat([pooled, emb.sequence_vector, widths.lookup(end - start + 1)])
    return SpanRepresentation(vector=vector, span=(start, end))


def between_context(emb: TokenEmbeddings, a: SpanLike, b: SpanLike) -> torch.Tensor:
    """
    Max-pool of the tokens strictly between two spans.

    Symmetric in its arguments. Adjacent or overlapping spans have no tokens in
    between and give the all-zeros vector.
    """
    a_start, a_end = span_bounds(a)
    b_start, b_end = span_bounds(b)
    _check_span(emb, a_start, a_end)
    _check_span(emb, b_start, b_end)
    lo = min(a_end, b_end) + 1
    hi = max(a_start, b_start)
    if lo >= hi:
        return torch.zeros(emb.dim, dtype=emb.vectors.dtype, device=emb.vectors.device)
    return maxpool(emb.vectors[lo:hi])
