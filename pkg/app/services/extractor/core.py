"""
Extraction service combining training, checkpoints and inference.

This module provides the high-level API the command line works with: fit a
model and write its checkpoint directory, reload a checkpoint, and turn
sentences into predicted graphs.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

from app.core.constants import LOSS_LOG_FILE
from app.schemas.corpus import AnnotatedSentence
from app.schemas.graph import KnowledgeGraph, SchemaDef
from app.schemas.model_config import ModelConfig, TrainingLog
from app.services.encoder import TextEncoder
from app.services.extractor.checkpoint import load_checkpoint, save_checkpoint
from app.services.extractor.inference import extract, extract_many
from app.services.extractor.model import SpearModel
from app.services.extractor.training import train

logger = logging.getLogger(__name__)


class ExtractorService:
    """
    Main service for extraction workflows.

    Every model handed out by this service is in evaluation mode and may be
    shared between threads for inference.
    """

    @staticmethod
    def train_to_directory(
        corpus: Sequence[AnnotatedSentence],
        config: ModelConfig,
        directory: Union[str, Path],
        encoder: Optional[TextEncoder] = None,
    ) -> SpearModel:
        """
        Train a model and write model.pt, config.json and loss_log.json.

        Args:
            corpus: Schema-valid annotated sentences
            config: Model and optimisation settings
            directory: Checkpoint directory (created if missing)
            encoder: Encoder to fine-tune; built from config.encoder_name when omitted

        Returns:
            The trained model in evaluation mode

        Raises:
            EmptyCorpusError: If the corpus is empty
            ValidationError: If a sentence is not valid under config.graph_schema
        """
        model, training_log = train(corpus, config, encoder)
        directory = save_checkpoint(model, directory)
        ExtractorService.write_loss_log(training_log, directory)
        return model

    @staticmethod
    def write_loss_log(training_log: TrainingLog, directory: Union[str, Path]) -> Path:
        path = Path(directory) / LOSS_LOG_FILE
        path.write_text(json.dumps(training_log.model_dump(mode="json"), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.debug(f"Wrote {len(training_log.epochs)} epoch losses to {path}")
        return path

    @staticmethod
    def load_model(directory: Union[str, Path], expected_schema: Optional[SchemaDef] = None) -> SpearModel:
        """Checkpoint directory to model; see load_checkpoint for the errors raised."""
        return load_checkpoint(directory, expected_schema=expected_schema)

    @staticmethod
    def extract_graph(tokens: Sequence[str], model: SpearModel, config: Optional[ModelConfig] = None) -> KnowledgeGraph:
        return extract(tokens, model, config)

    @staticmethod
    def predict_sentences(
        sentences: Sequence[AnnotatedSentence],
        model: SpearModel,
        config: Optional[ModelConfig] = None,
        workers: int = 1,
    ) -> List[AnnotatedSentence]:
        """
        Predict a graph per sentence, keeping sentence ids and order.

        Args:
            sentences: Sentences whose tokens are read; their annotations are ignored
            model: Model in evaluation mode
            config: Thresholds and span length; the model's own config when omitted
            workers: Thread pool size for inference

        Returns:
            One AnnotatedSentence per input with the predicted graph
        """
        graphs = extract_many([sentence.tokens for sentence in sentences], model, config, workers=workers)
        return [AnnotatedSentence(sentence_id=s.sentence_id, gold=graph) for s, graph in zip(sentences, graphs)]
