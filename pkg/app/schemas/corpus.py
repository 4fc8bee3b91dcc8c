from typing import FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.constants import CORPUS_FORMAT_VERSION
from app.schemas.graph import EntitySpan, KnowledgeGraph


class EntityRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: int
    end: int
    type: str


class AttributeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    entity: int
    types: List[str]


class RelationRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    head: int
    tail: int
    type: str


class SentenceRecord(BaseModel):
    """One sentence in the corpus file; attribute and relation indices point into entities."""

    model_config = ConfigDict(extra="forbid")

    id: Optional[str] = None
    tokens: List[str]
    entities: List[EntityRecord] = Field(default_factory=list)
    attributes: List[AttributeRecord] = Field(default_factory=list)
    relations: List[RelationRecord] = Field(default_factory=list)

    @field_validator("tokens")
    @classmethod
    def validate_tokens(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("Sentence must contain at least one token")
        return v


class CorpusFile(BaseModel):
    format_version: int = CORPUS_FORMAT_VERSION
    sentences: List[SentenceRecord] = Field(default_factory=list)


class AnnotatedSentence(BaseModel):
    """A tokenized sentence with its gold graph."""

    model_config = ConfigDict(frozen=True)

    sentence_id: str
    gold: KnowledgeGraph

    @property
    def tokens(self) -> Tuple[str, ...]:
        return self.gold.tokens


class NegativeSamples(BaseModel):
    """
    Training negatives of one sentence.

    Attribute negatives are implicit: every gold entity gets a full 0/1 target
    vector over the attribute types.
    """

    model_config = ConfigDict(frozen=True)

    entity_negatives: FrozenSet[Tuple[int, int]] = frozenset()
    relation_negatives: FrozenSet[Tuple[EntitySpan, EntitySpan]] = frozenset()


class LabelStatistics(BaseModel):
    """Occurrences of each label over a corpus."""

    sentences: int = 0
    entities: dict[str, int] = Field(default_factory=dict)
    attributes: dict[str, int] = Field(default_factory=dict)
    relations: dict[str, int] = Field(default_factory=dict)
