"""
Deterministic hashing encoder.

Stands in for the pretrained transformer where downloads are not possible
(tests, smoke runs). Each word gets a fixed pseudo-random vector derived from
its SHA-256 digest; a share of the sentence mean is added so the same word
embeds differently in different sentences.
"""

import hashlib
import logging
from functools import lru_cache
from typing import Sequence

import numpy as np
import torch

from app.core.constants import FAKE_ENCODER_PREFIX
from app.services.encoder.base import TextEncoder, TokenEmbeddings
from app.utils.exceptions import InputTooLongError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=65536)
def _word_vector(word: str, dim: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(word.encode("utf-8")).digest()[:8], "little")
    return np.random.default_rng(seed).standard_normal(dim)


class HashingEncoder(TextEncoder):
    """Parameter-free encoder with hash-derived, context-mixed word vectors."""

    def __init__(self, dim: int = 32, context_weight: float = 0.25, max_length: int = 512) -> None:
        super().__init__()
        if dim <= 0:
            raise ValueError(f"Encoder dimension must be positive, got {dim}")
        self.name = f"{FAKE_ENCODER_PREFIX}{dim}"
        self._dim = dim
        self._max_length = max_length
        self.context_weight = context_weight
        # Carries dtype/device so .double() and .to(device) apply to the outputs
        self.register_buffer("_anchor", torch.zeros(()), persistent=False)

    @property
    def hidden_size(self) -> int:
        return self._dim

    @property
    def max_length(self) -> int:
        return self._max_length

    def encode(self, tokens: Sequence[str]) -> TokenEmbeddings:
        if len(tokens) == 0:
            raise ValueError("Cannot encode an empty sentence")
        if len(tokens) > self._max_length:
            raise InputTooLongError(len(tokens), self._max_length)

        base = np.stack([_word_vector(token, self._dim) for token in tokens])
        context = base.mean(axis=0)
        vectors = base + self.context_weight * context
        return TokenEmbeddings(vectors=self._as_tensor(vectors), sequence_vector=self._as_tensor(context))

    def _as_tensor(self, array: np.ndarray) -> torch.Tensor:
        return torch.as_tensor(array, dtype=self._anchor.dtype, device=self._anchor.device)
