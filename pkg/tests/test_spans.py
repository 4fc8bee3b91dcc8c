"""
Pruebas para la enumeración de spans, el max-pooling y el muestreo de negativos.
"""

import numpy as np
import pytest
import torch

from app.schemas.graph import EntitySpan, RelationEdge
from app.services.encoder import HashingEncoder, WidthEmbeddingTable, between_context, maxpool, span_representation
from app.utils.exceptions import ContractViolation, EmptyPoolError
from app.utils.spans import enumerate_spans, sample_negative_entities, sample_negative_relations


# ============================================================================
# ✅ CASOS EXITOSOS
# ============================================================================

def test_enumerate_spans_count():
    """
    ID: SPN-001
    Nombre: Número de spans para todo n <= 30 y L <= 12
    """
    for n in range(0, 31):
        for max_len in range(1, 13):
            expected = sum(n - length + 1 for length in range(1, min(max_len, n) + 1))
            spans = enumerate_spans(n, max_len)
            assert len(spans) == expected
            assert len(set(spans)) == expected


def test_enumerate_spans_order_and_bounds():
    """
    ID: SPN-002
    Nombre: Spans ordenados por inicio y longitud, dentro de la oración
    """
    spans = enumerate_spans(4, 2)

    assert spans == [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3)]
    assert enumerate_spans(1, 10) == [(0, 0)]


def test_maxpool_properties():
    """
    ID: SPN-003
    Nombre: Max-pool invariante a permutaciones e identidad en un vector
    """
    rng = np.random.default_rng(0)
    for _ in range(1000):
        k = int(rng.integers(1, 6))
        dim = int(rng.integers(1, 9))
        vectors = [torch.tensor(rng.standard_normal(dim)) for _ in range(k)]
        pooled = maxpool(vectors)
        permuted = [vectors[i] for i in rng.permutation(k)]

        assert torch.equal(pooled, maxpool(permuted))
        assert torch.equal(maxpool(vectors[:1]), vectors[0])
        assert all(bool((pooled >= v).all()) for v in vectors)


def test_span_representation_layout():
    """
    ID: SPN-004
    Nombre: x(span) = maxpool ⊕ contexto ⊕ ancho
    """
    encoder = HashingEncoder(dim=6)
    emb = encoder.encode(["the", "women", "prayed"])
    widths = WidthEmbeddingTable(max_len=3, dim=2)

    representation = span_representation(emb, (1, 2), widths)

    assert representation.vector.shape == (6 + 6 + 2,)
    assert torch.equal(representation.vector[:6], emb.vectors[1:3].max(dim=0).values)
    assert torch.equal(representation.vector[6:12], emb.sequence_vector)
    assert torch.equal(representation.vector[12:], widths.lookup(2))
    assert representation.span == (1, 2)


def test_between_context():
    """
    ID: SPN-005
    Nombre: Contexto entre spans simétrico y cero si son adyacentes
    """
    emb = HashingEncoder(dim=4).encode(["a", "b", "c", "d", "e"])

    assert torch.equal(between_context(emb, (0, 0), (3, 4)), emb.vectors[1:3].max(dim=0).values)
    assert torch.equal(between_context(emb, (3, 4), (0, 0)), between_context(emb, (0, 0), (3, 4)))
    assert torch.equal(between_context(emb, (0, 1), (2, 2)), torch.zeros(4, dtype=emb.vectors.dtype))
    assert torch.equal(between_context(emb, (0, 3), (1, 2)), torch.zeros(4, dtype=emb.vectors.dtype))


def test_maxpool_is_monotone():
    """
    ID: SPN-008
    Nombre: Subir una coordenada de una entrada nunca baja ninguna salida
    """
    rng = np.random.default_rng(1)
    for _ in range(500):
        k = int(rng.integers(1, 5))
        dim = int(rng.integers(1, 7))
        vectors = [torch.tensor(rng.standard_normal(dim)) for _ in range(k)]
        before = maxpool(vectors)
        raised = [v.clone() for v in vectors]
        raised[int(rng.integers(k))][int(rng.integers(dim))] += float(rng.uniform(0.01, 3.0))

        assert bool((maxpool(raised) >= before).all())


def test_negative_entities_examples():
    """
    ID: SPN-009
    Nombre: Negativos de entidad: pool cubierto por el gold y muestra de 3 sobre 9 spans
    """
    assert sample_negative_entities(3, [(0, 0), (1, 1), (2, 2)], count=5, max_len=1, seed=0) == set()

    pool = set(enumerate_spans(5, 2))
    for seed in range(20):
        sample = sample_negative_entities(5, [], count=3, max_len=2, seed=seed)
        assert len(pool) == 9
        assert len(sample) == 3
        assert sample <= pool
    assert sample_negative_entities(5, [], count=3, max_len=2, seed=4) == sample_negative_entities(
        5, [], count=3, max_len=2, seed=4
    )


def test_negative_relations_examples():
    """
    ID: SPN-010
    Nombre: Negativos de relación: una entidad, tres entidades con una relación
    """
    a = EntitySpan(start=0, end=0, entity_type="factor")
    b = EntitySpan(start=1, end=1, entity_type="association")
    c = EntitySpan(start=2, end=2, entity_type="factor")
    edge = RelationEdge(head=b, tail=a, relation_type="arg0")

    assert sample_negative_relations([a], [], count=10, seed=0) == set()

    sample = sample_negative_relations([a, b, c], [edge], count=5, seed=0)
    assert sample == {(a, b), (a, c), (b, c), (c, a), (c, b)}


def test_negative_relations_avoid_gold_edges(claims_corpus):
    """
    ID: SPN-011
    Nombre: Los pares negativos de la oración de tabaquismo nunca son aristas gold
    """
    smoking = next(s for s in claims_corpus if s.sentence_id == "smoking-rate")
    gold_edges = {(r.head, r.tail) for r in smoking.gold.relations}

    for seed in range(10):
        sample = sample_negative_relations(smoking.gold.entities, smoking.gold.relations, count=20, seed=seed)
        assert len(sample) == 20
        assert not sample & gold_edges
        assert all(head != tail for head, tail in sample)

    everything = sample_negative_relations(smoking.gold.entities, smoking.gold.relations, count=1000, seed=0)
    assert len(everything) == 9 * 8 - len(gold_edges)


# ============================================================================
# ❌ CASOS DE ERROR
# ============================================================================

def test_maxpool_errors():
    """
    ID: SPN-006
    Nombre: Max-pool vacío o con dimensiones distintas
    """
    with pytest.raises(EmptyPoolError):
        maxpool([])
    with pytest.raises(ContractViolation):
        maxpool([torch.zeros(2), torch.zeros(3)])


def test_span_representation_invalid_span():
    """
    ID: SPN-007
    Nombre: Span invertido, fuera de rango o demasiado largo
    """
    emb = HashingEncoder(dim=4).encode(["a", "b", "c"])
    widths = WidthEmbeddingTable(max_len=2, dim=2)

    for span in [(2, 1), (0, 3), (0, 2)]:
        with pytest.raises(IndexError):
            span_representation(emb, span, widths)
