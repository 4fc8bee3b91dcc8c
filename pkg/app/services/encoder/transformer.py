"""
Pretrained transformer encoder adapter.

Wraps a Hugging Face checkpoint (e.g. SciBERT) and converts its sub-word output
into one vector per word token by max-pooling each word's pieces. The [CLS]
output is the sentence vector e0.
"""

import logging
from typing import Sequence

import torch
from transformers import AutoModel, AutoTokenizer

from app.services.encoder.base import TextEncoder, TokenEmbeddings
from app.services.encoder.pooling import maxpool
from app.utils.exceptions import ConfigError, InputTooLongError

logger = logging.getLogger(__name__)


class TransformerEncoder(TextEncoder):
    """
    Adapter around `AutoModel` + fast `AutoTokenizer`.

    The wrapped model stays a submodule, so its weights are fine-tuned by the
    extractor's training loop and saved with its checkpoints.
    """

    def __init__(self, name_or_path: str) -> None:
        super().__init__()
        self.name = name_or_path
        try:
            logger.info(f"Initializing transformer encoder: {name_or_path}")
            self.tokenizer = AutoTokenizer.from_pretrained(name_or_path, use_fast=True)
            self.model = AutoModel.from_pretrained(name_or_path)
        except (OSError, ValueError) as e:
            logger.error(f"Failed to initialize transformer encoder: {e}", exc_info=True)
            raise ConfigError(f"Failed to load encoder '{name_or_path}': {e}") from e

        if not getattr(self.tokenizer, "is_fast", False):
            raise ConfigError(f"Encoder '{name_or_path}' has no fast tokenizer; word alignment needs one")
        logger.info("Transformer encoder initialized successfully")

    @property
    def hidden_size(self) -> int:
        return int(self.model.config.hidden_size)

    @property
    def max_length(self) -> int:
        limit = getattr(self.model.config, "max_position_embeddings", None) or 512
        model_max = getattr(self.tokenizer, "model_max_length", limit) or limit
        return int(min(limit, model_max))

    def encode(self, tokens: Sequence[str]) -> TokenEmbeddings:
        if len(tokens) == 0:
            raise ValueError("Cannot encode an empty sentence")

        batch = self.tokenizer(list(tokens), is_split_into_words=True, return_tensors="pt", truncation=False)
        piece_count = int(batch["input_ids"].shape[1])
        if piece_count > self.max_length:
            raise InputTooLongError(piece_count, self.max_length)

        device = next(self.model.parameters()).device
        inputs = {key: value.to(device) for key, value in batch.items()}
        hidden = self.model(**inputs).last_hidden_state[0]

        word_ids = batch.word_ids(0)
        pieces_of = [[] for _ in tokens]
        for position, word_id in enumerate(word_ids):
            if word_id is not None:
                pieces_of[word_id].append(position)

        vectors = []
        for word_index, positions in enumerate(pieces_of):
            if positions:
                vectors.append(maxpool(hidden[positions]))
            else:
                # Words the tokenizer drops entirely (e.g. control characters)
                logger.debug(f"Token {tokens[word_index]!r} produced no sub-word pieces")
                vectors.append(torch.zeros(hidden.shape[-1], dtype=hidden.dtype, device=hidden.device))

        return TokenEmbeddings(vectors=torch.stack(vectors), sequence_vector=hidden[0])
