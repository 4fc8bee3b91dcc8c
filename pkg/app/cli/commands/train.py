"""
train: fit an extraction model on an annotated corpus.

Writes the checkpoint (model.pt + config.json) and loss_log.json into
--model-dir. With --holdout the corpus is split first and the held-out part is
written next to the checkpoint as test_split.json.
"""

import argparse
import logging
from pathlib import Path
from typing import List

from app.cli.dependencies import RunConfig, read_corpus
from app.core.constants import EXIT_OK
from app.core.logging import log_event
from app.schemas.model_config import ModelConfig
from app.services.corpus_service import CorpusService
from app.services.extractor import ExtractorService

logger = logging.getLogger(__name__)

TEST_SPLIT_FILE = "test_split.json"


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("train", parents=parents, help="Train a model on an annotated corpus")
    parser.add_argument("--corpus", type=Path, help="Annotated corpus JSON")
    parser.add_argument("--model-dir", type=Path, help="Checkpoint directory to write")
    parser.add_argument("--encoder", default=None, help="Pretrained encoder name/path or fake:<dim>")
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--max-span-len", type=int, default=None)
    parser.add_argument("--holdout", action="store_true", help="Hold out a test split before training")
    parser.add_argument("--test-fraction", type=float, default=None)


def run(config: RunConfig) -> int:
    settings = config.settings
    corpus = read_corpus(config.corpus, config.graph_schema)

    if config.holdout:
        corpus, test = CorpusService.split_corpus(corpus, settings.TEST_FRACTION, settings.SEED)
        config.model_dir.mkdir(parents=True, exist_ok=True)
        (config.model_dir / TEST_SPLIT_FILE).write_bytes(CorpusService.write_corpus(test))
        log_event(logger, "holdout_written", train=len(corpus), test=len(test))

    model_config = ModelConfig.from_settings(settings, config.graph_schema)
    ExtractorService.train_to_directory(corpus, model_config, config.model_dir)
    return EXIT_OK
