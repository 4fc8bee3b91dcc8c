"""
Application-wide constants for the causal knowledge-graph toolkit.

This module centralizes all constant values used throughout the application
to ensure consistency and easy maintenance.
"""

from typing import Final

# ============================================================================
# Schema Constants
# ============================================================================

SCIENTIFIC_CLAIMS_SCHEMA: Final[str] = "scientific-claims"
ETHNOGRAPHIC_SCHEMA: Final[str] = "ethnographic"
BUILTIN_SCHEMA_NAMES: Final[tuple[str, ...]] = (SCIENTIFIC_CLAIMS_SCHEMA, ETHNOGRAPHIC_SCHEMA)

# Label of the rejection class of the entity classifier (logit index 0)
NONE_ENTITY_LABEL: Final[str] = "none"

# ============================================================================
# File Format Constants
# ============================================================================

CORPUS_FORMAT_VERSION: Final[int] = 1
CHECKPOINT_FORMAT_VERSION: Final[int] = 1
CHECKPOINT_WEIGHTS_FILE: Final[str] = "model.pt"
CHECKPOINT_CONFIG_FILE: Final[str] = "config.json"
LOSS_LOG_FILE: Final[str] = "loss_log.json"

# ============================================================================
# Model Defaults
# ============================================================================

DEFAULT_ENCODER_NAME: Final[str] = "allenai/scibert_scivocab_uncased"
FAKE_ENCODER_PREFIX: Final[str] = "fake:"
DEFAULT_MAX_SPAN_LEN: Final[int] = 10
DEFAULT_WIDTH_EMBEDDING_DIM: Final[int] = 25
DEFAULT_RELATION_THRESHOLD: Final[float] = 0.4
DEFAULT_ATTRIBUTE_THRESHOLD: Final[float] = 0.5
DEFAULT_EPOCHS: Final[int] = 20
DEFAULT_SEED: Final[int] = 42
DEFAULT_NEG_ENTITY_COUNT: Final[int] = 100
DEFAULT_NEG_RELATION_COUNT: Final[int] = 100
DEFAULT_LEARNING_RATE: Final[float] = 5e-5
DEFAULT_WEIGHT_DECAY: Final[float] = 0.01
DEFAULT_BATCH_SIZE: Final[int] = 2
DEFAULT_WARMUP_PROPORTION: Final[float] = 0.1
DEFAULT_MAX_GRAD_NORM: Final[float] = 1.0
DEFAULT_DROPOUT: Final[float] = 0.1
DEFAULT_TEST_FRACTION: Final[float] = 0.1

# ============================================================================
# Traversal Defaults
# ============================================================================

DEFAULT_MAX_HOPS: Final[int] = 6
DEFAULT_VECTOR_THRESHOLD: Final[float] = 0.8
MODIFIER_RELATION: Final[str] = "modifier"

# ============================================================================
# Exit Codes
# ============================================================================

EXIT_OK: Final[int] = 0
EXIT_USAGE_ERROR: Final[int] = 1
EXIT_DATA_ERROR: Final[int] = 2
EXIT_RUNTIME_ERROR: Final[int] = 3
