"""
Encoder adapter interface.

Every encoder maps a list of word tokens to one contextual vector per word plus
a whole-sentence vector. Encoders are torch modules so that their parameters
(if any) are fine-tuned together with the classifiers.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import torch
from torch import nn


@dataclass(frozen=True)
class TokenEmbeddings:
    """Contextual word vectors e1..en (rows of `vectors`) and the sentence vector e0."""

    vectors: torch.Tensor
    sequence_vector: torch.Tensor

    def __post_init__(self) -> None:
        if self.vectors.dim() != 2 or self.vectors.shape[0] == 0:
            raise ValueError(f"Expected a non-empty (n, d) tensor, got shape {tuple(self.vectors.shape)}")
        if self.sequence_vector.shape != (self.vectors.shape[1],):
            raise ValueError(
                f"Sequence vector shape {tuple(self.sequence_vector.shape)} does not match "
                f"token dimension {self.vectors.shape[1]}"
            )

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return int(self.vectors.shape[0])


class TextEncoder(nn.Module, ABC):
    """Adapter around a contextual text encoder."""

    #: Name used to rebuild the encoder from a checkpoint
    name: str

    @property
    @abstractmethod
    def hidden_size(self) -> int:
        """Dimension d of every produced vector."""

    @property
    @abstractmethod
    def max_length(self) -> int:
        """Maximum number of (sub-word) positions accepted per sentence."""

    @abstractmethod
    def encode(self, tokens: Sequence[str]) -> TokenEmbeddings:
        """
        Embed one tokenized sentence.

        Raises:
            InputTooLongError: If the sentence exceeds max_length after sub-word expansion
        """

    def forward(self, tokens: Sequence[str]) -> TokenEmbeddings:
        return self.encode(tokens)
