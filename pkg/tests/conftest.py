from pathlib import Path

import pytest
import torch

from app.schemas.corpus import AnnotatedSentence
from app.schemas.graph import AttributeLabel, EntitySpan, KnowledgeGraph, RelationEdge
from app.schemas.model_config import ModelConfig
from app.services.corpus_service import CorpusService
from app.services.encoder import HashingEncoder
from app.services.schema_service import SchemaService

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "data" / "fixtures"


# ✅ Rutas de los datos de prueba
@pytest.fixture
def claims_corpus_path() -> Path:
    return FIXTURES_DIR / "claims_corpus.json"


@pytest.fixture
def ethnographic_corpus_path() -> Path:
    return FIXTURES_DIR / "ethnographic_corpus.json"


# ✅ Esquemas integrados
@pytest.fixture
def claims_schema():
    return SchemaService.builtin_schema("scientific-claims")


@pytest.fixture
def ethnographic_schema():
    return SchemaService.builtin_schema("ethnographic")


# ✅ Corpus cargados desde los fixtures
@pytest.fixture
def claims_corpus(claims_corpus_path, claims_schema):
    return CorpusService.load_corpus(claims_corpus_path.read_bytes(), claims_schema)


@pytest.fixture
def ethnographic_corpus(ethnographic_corpus_path, ethnographic_schema):
    return CorpusService.load_corpus(ethnographic_corpus_path.read_bytes(), ethnographic_schema)


@pytest.fixture
def movement_sentence(claims_corpus) -> AnnotatedSentence:
    return next(s for s in claims_corpus if s.sentence_id == "movement-restriction")


# ✅ Grafo a mano: "Movement restriction greatly reduced the number of infections ..."
@pytest.fixture
def movement_graph() -> KnowledgeGraph:
    tokens = (
        "Movement", "restriction", "greatly", "reduced", "the", "number", "of",
        "infections", "from", "5", "February", "onwards", ".",
    )
    factor = EntitySpan(start=0, end=1, entity_type="factor")
    magnitude = EntitySpan(start=2, end=2, entity_type="magnitude")
    reduced = EntitySpan(start=3, end=3, entity_type="association")
    infections = EntitySpan(start=4, end=7, entity_type="factor")
    temporal = EntitySpan(start=8, end=11, entity_type="qualifier")
    return KnowledgeGraph(
        tokens=tokens,
        entities=(factor, magnitude, reduced, infections, temporal),
        attributes=(
            AttributeLabel(entity=reduced, attribute_type="causation"),
            AttributeLabel(entity=reduced, attribute_type="decreases"),
        ),
        relations=(
            RelationEdge(head=reduced, tail=factor, relation_type="arg0"),
            RelationEdge(head=reduced, tail=infections, relation_type="arg1"),
            RelationEdge(head=reduced, tail=magnitude, relation_type="modifier"),
            RelationEdge(head=reduced, tail=temporal, relation_type="modifier"),
            RelationEdge(head=factor, tail=infections, relation_type="q-"),
        ),
    )


# ✅ Configuraciones de modelo pequeñas con el codificador de hashing
@pytest.fixture
def tiny_config(claims_schema) -> ModelConfig:
    return ModelConfig(
        graph_schema=claims_schema,
        encoder_name="fake:8",
        max_span_len=3,
        width_dim=4,
        epochs=2,
        seed=7,
        neg_entity_count=10,
        neg_relation_count=10,
        learning_rate=0.01,
        batch_size=1,
        warmup_proportion=0.0,
        dropout=0.0,
    )


@pytest.fixture
def fake_encoder() -> HashingEncoder:
    return HashingEncoder(dim=8)


@pytest.fixture(autouse=True)
def fixed_torch_seed():
    torch.manual_seed(0)
    yield
