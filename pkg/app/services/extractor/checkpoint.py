"""
Model checkpoint directories.

A checkpoint holds the state dict (model.pt) and config.json with the
ModelConfig (schema included), the format version and the schema fingerprint.
"""

import json
import logging
from pathlib import Path
from typing import Optional, Union

import torch
from pydantic import ValidationError as PydanticValidationError

from app.core.constants import CHECKPOINT_CONFIG_FILE, CHECKPOINT_FORMAT_VERSION, CHECKPOINT_WEIGHTS_FILE
from app.schemas.graph import SchemaDef
from app.schemas.model_config import ModelConfig
from app.services.encoder import TextEncoder, build_encoder
from app.services.extractor.model import SpearModel
from app.services.schema_service import SchemaService
from app.utils.exceptions import ConfigError, NotFoundError

logger = logging.getLogger(__name__)


def save_checkpoint(model: SpearModel, directory: Union[str, Path]) -> Path:
    """Write model weights and configuration into a directory (created if missing)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), directory / CHECKPOINT_WEIGHTS_FILE)

    metadata = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "schema_fingerprint": SchemaService.schema_fingerprint(model.config.graph_schema),
        "model_config": model.config.model_dump(mode="json"),
    }
    (directory / CHECKPOINT_CONFIG_FILE).write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Saved checkpoint to {directory}")
    return directory


def load_checkpoint(
    directory: Union[str, Path],
    expected_schema: Optional[SchemaDef] = None,
    encoder: Optional[TextEncoder] = None,
) -> SpearModel:
    """
    Rebuild a model from a checkpoint directory.

    Args:
        directory: Directory written by save_checkpoint
        expected_schema: When given, the checkpoint must have been trained on it
        encoder: Encoder instance to load weights into; rebuilt by name when omitted

    Returns:
        SpearModel in evaluation mode

    Raises:
        NotFoundError: If the directory or its files are missing
        ConfigError: If the checkpoint is unreadable or its schema fingerprint does not match
    """
    directory = Path(directory)
    config_path = directory / CHECKPOINT_CONFIG_FILE
    weights_path = directory / CHECKPOINT_WEIGHTS_FILE
    if not config_path.is_file() or not weights_path.is_file():
        raise NotFoundError("Checkpoint", str(directory))

    try:
        metadata = json.loads(config_path.read_text(encoding="utf-8"))
        version = metadata.get("format_version")
        if version != CHECKPOINT_FORMAT_VERSION:
            raise ConfigError(f"Unsupported checkpoint format_version {version!r}")
        config = ModelConfig.model_validate(metadata["model_config"])
    except (json.JSONDecodeError, KeyError, PydanticValidationError) as e:
        raise ConfigError(f"Unreadable checkpoint config in {directory}: {e}") from e

    fingerprint = SchemaService.schema_fingerprint(config.graph_schema)
    if fingerprint != metadata.get("schema_fingerprint"):
        raise ConfigError(f"Checkpoint {directory} schema does not match its recorded fingerprint")
    if expected_schema is not None and SchemaService.schema_fingerprint(expected_schema) != fingerprint:
        raise ConfigError(
            f"Checkpoint was trained on schema '{config.graph_schema.name}', "
            f"which differs from the requested schema '{expected_schema.name}'"
        )

    model = SpearModel(config, encoder if encoder is not None else build_encoder(config.encoder_name))
    state = torch.load(weights_path, map_location="cpu", weights_only=True)
    model.load_state_dict(state)
    model.eval()
    logger.info(f"Loaded checkpoint from {directory} (schema '{config.graph_schema.name}')")
    return model
