from typing import List

from pydantic import BaseModel, ConfigDict, Field

from app.core import constants
from app.core.config import Settings
from app.schemas.graph import SchemaDef


class ModelConfig(BaseModel):
    """Hyper-parameters of one extraction model; stored with every checkpoint."""

    model_config = ConfigDict(frozen=True)

    graph_schema: SchemaDef
    encoder_name: str = constants.DEFAULT_ENCODER_NAME
    max_span_len: int = Field(default=constants.DEFAULT_MAX_SPAN_LEN, ge=1)
    width_dim: int = Field(default=constants.DEFAULT_WIDTH_EMBEDDING_DIM, ge=1)
    relation_threshold: float = Field(default=constants.DEFAULT_RELATION_THRESHOLD, gt=0.0, lt=1.0)
    attribute_threshold: float = Field(default=constants.DEFAULT_ATTRIBUTE_THRESHOLD, gt=0.0, lt=1.0)
    epochs: int = Field(default=constants.DEFAULT_EPOCHS, ge=1)
    seed: int = constants.DEFAULT_SEED
    neg_entity_count: int = Field(default=constants.DEFAULT_NEG_ENTITY_COUNT, ge=0)
    neg_relation_count: int = Field(default=constants.DEFAULT_NEG_RELATION_COUNT, ge=0)
    learning_rate: float = Field(default=constants.DEFAULT_LEARNING_RATE, gt=0.0)
    weight_decay: float = Field(default=constants.DEFAULT_WEIGHT_DECAY, ge=0.0)
    batch_size: int = Field(default=constants.DEFAULT_BATCH_SIZE, ge=1)
    warmup_proportion: float = Field(default=constants.DEFAULT_WARMUP_PROPORTION, ge=0.0, le=1.0)
    max_grad_norm: float = Field(default=constants.DEFAULT_MAX_GRAD_NORM, gt=0.0)
    dropout: float = Field(default=constants.DEFAULT_DROPOUT, ge=0.0, lt=1.0)

    @classmethod
    def from_settings(cls, settings: Settings, schema: SchemaDef) -> "ModelConfig":
        return cls(
            graph_schema=schema,
            encoder_name=settings.ENCODER_NAME,
            max_span_len=settings.MAX_SPAN_LEN,
            width_dim=settings.WIDTH_EMBEDDING_DIM,
            relation_threshold=settings.RELATION_THRESHOLD,
            attribute_threshold=settings.ATTRIBUTE_THRESHOLD,
            epochs=settings.EPOCHS,
            seed=settings.SEED,
            neg_entity_count=settings.NEG_ENTITY_COUNT,
            neg_relation_count=settings.NEG_RELATION_COUNT,
            learning_rate=settings.LEARNING_RATE,
            weight_decay=settings.WEIGHT_DECAY,
            batch_size=settings.BATCH_SIZE,
            warmup_proportion=settings.WARMUP_PROPORTION,
            max_grad_norm=settings.MAX_GRAD_NORM,
            dropout=settings.DROPOUT,
        )

    @property
    def entity_labels(self) -> List[str]:
        """Entity classifier classes; index 0 is the rejection class."""
        return [constants.NONE_ENTITY_LABEL] + self.graph_schema.entity_labels


class EpochLoss(BaseModel):
    epoch: int
    loss: float
    entity_loss: float
    attribute_loss: float
    relation_loss: float


class TrainingLog(BaseModel):
    epochs: List[EpochLoss] = Field(default_factory=list)

    @property
    def losses(self) -> List[float]:
        return [entry.loss for entry in self.epochs]
