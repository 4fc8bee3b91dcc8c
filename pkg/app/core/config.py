"""
Application configuration settings.

This module defines all toolkit settings using Pydantic BaseSettings,
which automatically loads values from environment variables or .env files.
Command-line flags and an optional JSON config file are layered on top by
load_settings.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional

from pydantic import Field
from pydantic import ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.core import constants
from app.utils.exceptions import ConfigError


class Settings(BaseSettings):
    """
    Toolkit Configuration Settings.

    Every value has a documented default; environment variables use the
    SPEAR_ prefix (e.g. SPEAR_EPOCHS=30).
    """

    # ==================== SCHEMA & ENCODER ====================
    SCHEMA_NAME: str = Field(
        default=constants.SCIENTIFIC_CLAIMS_SCHEMA,
        description="Builtin schema name or path to a schema JSON file",
    )
    ENCODER_NAME: str = Field(
        default=constants.DEFAULT_ENCODER_NAME,
        description="Pretrained encoder name/checkpoint directory, or 'fake:<dim>' for the hashing encoder",
    )

    # ==================== SPAN MODEL ====================
    MAX_SPAN_LEN: int = Field(default=constants.DEFAULT_MAX_SPAN_LEN, ge=1, description="Longest span in tokens")
    WIDTH_EMBEDDING_DIM: int = Field(
        default=constants.DEFAULT_WIDTH_EMBEDDING_DIM,
        ge=1,
        description="Size of the learned width embedding",
    )
    RELATION_THRESHOLD: float = Field(default=constants.DEFAULT_RELATION_THRESHOLD, gt=0.0, lt=1.0)
    ATTRIBUTE_THRESHOLD: float = Field(default=constants.DEFAULT_ATTRIBUTE_THRESHOLD, gt=0.0, lt=1.0)
    DROPOUT: float = Field(default=constants.DEFAULT_DROPOUT, ge=0.0, lt=1.0)

    # ==================== TRAINING ====================
    EPOCHS: int = Field(default=constants.DEFAULT_EPOCHS, ge=1)
    SEED: int = Field(default=constants.DEFAULT_SEED)
    NEG_ENTITY_COUNT: int = Field(default=constants.DEFAULT_NEG_ENTITY_COUNT, ge=0)
    NEG_RELATION_COUNT: int = Field(default=constants.DEFAULT_NEG_RELATION_COUNT, ge=0)
    LEARNING_RATE: float = Field(default=constants.DEFAULT_LEARNING_RATE, gt=0.0)
    WEIGHT_DECAY: float = Field(default=constants.DEFAULT_WEIGHT_DECAY, ge=0.0)
    BATCH_SIZE: int = Field(default=constants.DEFAULT_BATCH_SIZE, ge=1)
    WARMUP_PROPORTION: float = Field(default=constants.DEFAULT_WARMUP_PROPORTION, ge=0.0, le=1.0)
    MAX_GRAD_NORM: float = Field(default=constants.DEFAULT_MAX_GRAD_NORM, gt=0.0)
    TEST_FRACTION: float = Field(default=constants.DEFAULT_TEST_FRACTION, gt=0.0, lt=1.0)

    # ==================== EXTRACTION ====================
    EXTRACT_WORKERS: int = Field(default=1, ge=1, description="Threads used for sentence-level extraction")

    # ==================== TRAVERSAL ====================
    MATCHER: Literal["lemma", "vector"] = Field(default="lemma")
    VECTOR_THRESHOLD: float = Field(default=constants.DEFAULT_VECTOR_THRESHOLD, ge=-1.0, le=1.0)
    MAX_HOPS: int = Field(default=constants.DEFAULT_MAX_HOPS, ge=1)
    DRAW_MODIFIERS_UNLABELED: bool = Field(
        default=True,
        description="Render modifier edges without a label, as in the published figures",
    )

    # ==================== LOGGING ====================
    LOG_LEVEL: str = Field(default="INFO")

    model_config = SettingsConfigDict(
        env_prefix="SPEAR_",
        env_file=os.getenv("ENV_FILE", ".env" if os.path.exists(".env") else None),
        case_sensitive=True,
        extra="ignore",
    )


def _read_config_file(config_file: Path) -> Dict[str, Any]:
    try:
        raw = json.loads(Path(config_file).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigError(f"Config file '{config_file}' does not exist") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file '{config_file}' is not valid JSON: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config file '{config_file}' must contain a JSON object")
    return {str(key).upper(): value for key, value in raw.items()}


def load_settings(
    config_file: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Settings:
    """
    Build settings with precedence flags > config file > environment > defaults.

    Args:
        config_file: Optional JSON file with setting names as keys (case-insensitive)
        overrides: Values given on the command line; None entries are ignored

    Returns:
        Validated Settings instance

    Raises:
        ConfigError: If the config file is unreadable or a value is invalid
    """
    values: Dict[str, Any] = {}
    if config_file is not None:
        values.update(_read_config_file(config_file))
    if overrides:
        values.update({key.upper(): value for key, value in overrides.items() if value is not None})

    try:
        return Settings(**values)
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"Invalid setting {location}: {first['msg']}") from e
