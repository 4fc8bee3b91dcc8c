from app.core.constants import FAKE_ENCODER_PREFIX
from app.utils.exceptions import ConfigError

from .base import TextEncoder, TokenEmbeddings
from .hashing import HashingEncoder
from .pooling import SpanRepresentation, WidthEmbeddingTable, between_context, maxpool, span_representation


def build_encoder(name: str) -> TextEncoder:
    """
    Create an encoder from its configured name.

    "fake:<dim>" selects the hashing encoder; anything else is a pretrained
    checkpoint name or directory.
    """
    if name.startswith(FAKE_ENCODER_PREFIX):
        try:
            dim = int(name[len(FAKE_ENCODER_PREFIX):])
            if dim <= 0:
                raise ValueError(dim)
        except ValueError as e:
            raise ConfigError(f"Invalid fake encoder name '{name}', expected 'fake:<dim>'") from e
        return HashingEncoder(dim=dim)

    from .transformer import TransformerEncoder

    return TransformerEncoder(name)


__all__ = [
    "HashingEncoder",
    "SpanRepresentation",
    "TextEncoder",
    "TokenEmbeddings",
    "WidthEmbeddingTable",
    "between_context",
    "build_encoder",
    "maxpool",
    "span_representation",
]
